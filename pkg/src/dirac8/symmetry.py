"""Search for discrete symmetries among the 128 gamma monomials.

A symmetry is specified operationally by how it conjugates the Hamiltonian,

    W X(p) W^-1 = s H(R p),   X = H or conj(H) for antilinear W,

and by the permutation of representation labels it should induce.  Every
monomial is tested; hits are then classified by the label permutation they
actually induce.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import GammaSet, monomial, monomial_subsets
from .poincare import hamiltonian_matrix
from .spectral import DM_0S, DM_S0, DP_0S, DP_S0, LABELS, SECTORS, classify_modes, rep_label, sector_projector


class NotSectorCovariant(ValueError):
    pass


def _swap(*pairs) -> dict[str, str]:
    out = {l: l for l in LABELS}
    for a, b in pairs:
        out[a], out[b] = b, a
    return out


VERTICAL = _swap((DP_S0, DM_S0), (DP_0S, DM_0S))
HORIZONTAL = _swap((DP_S0, DP_0S), (DM_S0, DM_0S))
IDENTITY = _swap()


@dataclass(frozen=True)
class SymmetryContract:
    name: str
    antilinear: bool
    momentum_map: tuple[int, int, int]
    target_sign: int
    expected_label_action: dict = field(hash=False)


PARITY = SymmetryContract("P", False, (-1, -1, -1), 1, HORIZONTAL)
CHARGE = SymmetryContract("C", True, (1, 1, 1), -1, VERTICAL)
PAULI_T = SymmetryContract("Tp", False, (-1, -1, -1), -1, VERTICAL)
TRIVIAL = SymmetryContract("I", False, (1, 1, 1), 1, IDENTITY)
CONTRACTS = (PARITY, CHARGE, PAULI_T)


@dataclass
class IntertwinerResult:
    contract: str
    index: int
    subset: tuple[int, ...]
    matrix: np.ndarray
    residual: float
    label_map: dict | None
    holdout_residual: float = float("nan")

    def matches(self, contract: SymmetryContract) -> bool:
        return self.label_map == contract.expected_label_action


def canonical_phase(w: np.ndarray) -> np.ndarray:
    """Rotate the overall phase so the first nonzero entry is real positive."""
    flat = w.ravel()
    nz = np.flatnonzero(np.abs(flat) > 1e-12)
    if not len(nz):
        return w
    z = flat[nz[0]]
    return w * (abs(z) / z)


def conjugation_residual(w: np.ndarray, contract: SymmetryContract, gs: GammaSet, momenta, m: float) -> float:
    winv = np.linalg.inv(w)
    rmap = np.asarray(contract.momentum_map, dtype=float)
    worst = 0.0
    for p in momenta:
        p = np.asarray(p, dtype=float)
        h = hamiltonian_matrix(gs, p, m)
        x = h.conj() if contract.antilinear else h
        lhs = w @ x @ winv
        rhs = contract.target_sign * hamiltonian_matrix(gs, rmap * p, m)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def induced_label_map(w, antilinear: bool, momentum_map, gs: GammaSet, m: float, p_samples,
                      tol: float = 1e-10) -> dict[str, str]:
    """Sector-to-sector permutation induced by v -> W v (or W conj(v))."""
    if callable(w) or np.ndim(w) != 2 or np.shape(w) != (8, 8):
        raise ValueError("intertwiner must be a single momentum-independent 8x8 matrix")
    w = np.asarray(w, dtype=complex)
    rmap = np.asarray(momentum_map, dtype=float)
    result: dict[str, str] = {}
    for p in p_samples:
        p = np.asarray(p, dtype=float)
        q = rmap * p
        projs = {rep_label(e, s): sector_projector(gs, q, m, e, s) for e, s in SECTORS}
        for mode in classify_modes(gs, p, m):
            for v in mode.basis.T:
                img = w @ (v.conj() if antilinear else v)
                n2 = np.vdot(img, img).real
                weights = {l: np.vdot(img, pr @ img).real / n2 for l, pr in projs.items()}
                target = max(weights, key=weights.get)
                if 1.0 - weights[target] > tol:
                    raise NotSectorCovariant(f"image of {mode.rep_label} straddles sectors: {weights}")
                if result.setdefault(mode.rep_label, target) != target:
                    raise NotSectorCovariant(f"{mode.rep_label} maps inconsistently across momenta")
    return result


def is_involution(action: dict) -> bool:
    return all(action[action[l]] == l for l in action)


def compose(a: dict, b: dict) -> dict:
    """Label action of applying b first, then a."""
    return {l: a[b[l]] for l in b}


def monomial_filter(rule) -> callable:
    """Subset predicate for restricted searches: 'all', 'even', 'odd' or a max length."""
    if rule in (None, "all"):
        return lambda s: True
    if rule == "even":
        return lambda s: len(s) % 2 == 0
    if rule == "odd":
        return lambda s: len(s) % 2 == 1
    n = int(rule)
    return lambda s: len(s) <= n


def find_intertwiners(contract: SymmetryContract, gs: GammaSet, sample_momenta, m: float,
                      tol: float = 1e-12, restrict=None) -> list[IntertwinerResult]:
    if len(sample_momenta) < 8:
        raise ValueError("need at least 8 sample momenta")
    keep = monomial_filter(restrict)
    hits = []
    for i, subset in enumerate(monomial_subsets()):
        if not keep(subset):
            continue
        w = monomial(gs, subset)
        res = conjugation_residual(w, contract, gs, sample_momenta, m)
        if res > tol:
            continue
        try:
            lm = induced_label_map(w, contract.antilinear, contract.momentum_map, gs, m, sample_momenta)
        except NotSectorCovariant:
            lm = None
        hits.append(IntertwinerResult(contract.name, i, subset, canonical_phase(w), res, lm))
    return hits


def near_misses(contract: SymmetryContract, gs: GammaSet, sample_momenta, m: float, count: int = 5) -> list[dict]:
    scored = []
    for i, subset in enumerate(monomial_subsets()):
        res = conjugation_residual(monomial(gs, subset), contract, gs, sample_momenta, m)
        scored.append({"index": i, "subset": list(subset), "residual": res})
    scored.sort(key=lambda d: (d["residual"], d["index"]))
    return scored[:count]


def _label_key(action: dict | None) -> str:
    if action is None:
        return "not-covariant"
    return ", ".join(f"{k}->{action[k]}" for k in LABELS)


def check_coupling_scheme(gs: GammaSet, m: float, p_samples, holdout, tol: float = 1e-12,
                          restrict=None) -> dict:
    """Run the P, C and Tp contracts and compare induced label actions with the diagram."""
    report = {"contracts": {}, "missing": [], "passed": True}
    chosen = {}
    for c in CONTRACTS:
        hits = find_intertwiners(c, gs, p_samples, m, tol, restrict)
        for h in hits:
            h.holdout_residual = conjugation_residual(h.matrix, c, gs, holdout, m)
        matching = [h for h in hits if h.matches(c) and h.holdout_residual <= tol]
        actions = sorted({_label_key(h.label_map) for h in hits})
        entry = {
            "antilinear": c.antilinear,
            "momentum_map": list(c.momentum_map),
            "target_sign": c.target_sign,
            "expected_label_action": _label_key(c.expected_label_action),
            "n_hits": len(hits),
            "n_matching": len(matching),
            "distinct_label_actions": actions,
            "ambiguous": len(actions) > 1,
            "all_involutions": all(h.label_map is not None and is_involution(h.label_map) for h in hits),
            "max_holdout_residual": max((h.holdout_residual for h in hits), default=None),
            "hits": [
                {
                    "index": h.index,
                    "subset": list(h.subset),
                    "residual": h.residual,
                    "holdout_residual": h.holdout_residual,
                    "label_action": _label_key(h.label_map),
                    "matches_diagram": h in matching,
                }
                for h in hits
            ],
        }
        if not matching:
            entry["near_misses"] = near_misses(c, gs, p_samples, m)
        if matching:
            chosen[c.name] = matching[0].label_map
        else:
            report["missing"].append(c.name)
            report["passed"] = False
        report["contracts"][c.name] = entry

    if len(chosen) == 3:
        pct = compose(chosen["P"], compose(chosen["C"], chosen["Tp"]))
        report["composition_P_C_Tp"] = _label_key(pct)
        report["composition_is_involution"] = is_involution(pct)
        report["C_equals_Tp_on_labels"] = chosen["C"] == chosen["Tp"]
        report["P_twice_is_identity"] = compose(chosen["P"], chosen["P"]) == IDENTITY
        if not report["composition_is_involution"]:
            report["passed"] = False
    return report
