"""Unitary-equivalence decisions for the three operator families.

The criteria are exact equalities in the theory; numerically, equality is
declared below ``tol`` and denied above ``GRAY_FACTOR * tol``.  Differences
in between yield an ``indeterminate-tolerance`` verdict instead of a silent
boolean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import operators as ops
from .models import CanonicalInvariant

GRAY_FACTOR = 1e3  # gray zone is (tol, GRAY_FACTOR * tol]


class ZeroWeightError(ValueError):
    """Shift-sum comparison requires injective shifts (no zero weights)."""


class NotEquivalentError(ValueError):
    """Intertwiner requested for a non-equivalent pair."""


class VerificationFailure(ValueError):
    """Spec failed the verification required for a classification claim."""


@dataclass
class EquivalenceVerdict:
    equivalent: bool | None  # None = indeterminate-tolerance
    reason: str
    witness: Any = None

    def to_json(self) -> dict:
        witness = self.witness
        if isinstance(witness, np.ndarray):
            witness = witness.tolist()
        return {"equivalent": self.equivalent, "reason": self.reason, "witness": witness}


def _compare(a: float, b: float, tol: float) -> str:
    d = abs(a - b)
    if d <= tol:
        return "equal"
    if d <= GRAY_FACTOR * tol:
        return "gray"
    return "different"


def equiv_tree_shifts(
    a: CanonicalInvariant, b: CanonicalInvariant, tol: float = 1e-9
) -> EquivalenceVerdict:
    """Decide equivalence from the invariants: for x > 1 both x and the whole
    j sequence must match; for isometries only the sum of j matters."""
    x_cmp = _compare(a.x, b.x, tol)
    iso_a = _compare(a.x, 1.0, tol)
    iso_b = _compare(b.x, 1.0, tol)
    if "gray" in (x_cmp, iso_a, iso_b):
        return EquivalenceVerdict(None, "indeterminate-tolerance")
    if iso_a == "equal" and iso_b == "equal":
        if a.j.total() == b.j.total():
            return EquivalenceVerdict(True, "match-case-ii")
        return EquivalenceVerdict(False, "j-sum-mismatch")
    if x_cmp != "equal":
        return EquivalenceVerdict(False, "x-mismatch")
    if (iso_a == "equal") != (iso_b == "equal"):
        return EquivalenceVerdict(False, "x-mismatch")
    if a.j.entries != b.j.entries:
        return EquivalenceVerdict(False, "j-sequence-mismatch")
    return EquivalenceVerdict(True, "match-case-i")


def _weight_prefix(shift, prefix_len: int, tol: float) -> tuple[float, ...]:
    if isinstance(shift, ops.ScalarShift):
        ws = [shift.weight(n) for n in range(prefix_len)]
    else:
        ws = list(shift)[:prefix_len]
        if len(ws) < prefix_len:
            raise ValueError(f"weight sequence shorter than prefix_len {prefix_len}")
    moduli = tuple(abs(complex(w)) for w in ws)
    if any(m <= tol for m in moduli):
        raise ZeroWeightError("zero weight encountered; shifts must be injective")
    return moduli


def equiv_shift_sums(
    a: Sequence, b: Sequence, prefix_len: int = 1, tol: float = 1e-9
) -> EquivalenceVerdict:
    """Perfect matching of weight sequences (as moduli) on a finite prefix.

    Complete for the xi family with prefix_len = 1, since the first weight
    determines the whole sequence through the recurrence.  Witness is the
    index matching a -> b.
    """
    pa = [_weight_prefix(s, prefix_len, tol) for s in a]
    pb = [_weight_prefix(s, prefix_len, tol) for s in b]
    if len(pa) != len(pb):
        return EquivalenceVerdict(False, "no-permutation")
    order_a = sorted(range(len(pa)), key=lambda i: pa[i])
    order_b = sorted(range(len(pb)), key=lambda i: pb[i])
    matching = [0] * len(pa)
    for ia, ib in zip(order_a, order_b):
        if any(abs(u - v) > tol for u, v in zip(pa[ia], pb[ib])):
            return EquivalenceVerdict(False, "no-permutation")
        matching[ia] = ib
    return EquivalenceVerdict(True, "permutation-found", witness=matching)


def equiv_diagonal_opshifts(
    a: ops.SpectralData, b: ops.SpectralData, tol: float = 1e-9
) -> EquivalenceVerdict:
    """Atom multisets must agree: lambda within tol, multiplicities exactly."""
    ea, eb = sorted(a.expanded()), sorted(b.expanded())
    if len(ea) != len(eb) or any(abs(u - v) > tol for u, v in zip(ea, eb)):
        return EquivalenceVerdict(False, "atom-multiset-mismatch")
    return EquivalenceVerdict(True, "atom-multiset-match")


def construct_intertwiner(
    a: ops.DiagonalOpShift, b: ops.DiagonalOpShift, depth: int, tol: float = 1e-9
) -> np.ndarray:
    """Block-diagonal unitary (one atom-matching permutation per level)
    intertwining the two truncations."""
    if not equiv_diagonal_opshifts(a.spectral, b.spectral, tol).equivalent:
        raise NotEquivalentError("spectral data are not equivalent")
    ea = a.spectral.expanded()
    eb = b.spectral.expanded()
    m = len(ea)
    used = [False] * m
    u0 = np.zeros((m, m))
    for j, lam in enumerate(ea):
        for i, mu in enumerate(eb):
            if not used[i] and abs(lam - mu) <= tol:
                u0[i, j] = 1.0
                used[i] = True
                break
    return np.kron(np.eye(depth), u0)


def multicyclicity_order(spec: ops.ShiftSpec, depth: int = 10, tol: float = ops.DEFAULT_TOL) -> int:
    """dim ker T*, which equals the order of multicyclicity for completely
    non-unitary 2-isometries.  Cross-checks the SVD count against the
    closed form where one exists."""
    report = ops.property_report(spec, depth, tol=tol)
    if report.defect_2iso > tol:
        raise VerificationFailure(f"not a 2-isometry (defect {report.defect_2iso:.3e})")
    closed = ops.closed_form_kernel_dim(spec, depth)
    if closed is not None and closed != report.dim_ker_adjoint:
        raise VerificationFailure(
            f"kernel dimension mismatch: SVD {report.dim_ker_adjoint}, closed form {closed}"
        )
    return report.dim_ker_adjoint
