"""Construction and canonical decomposition of 2-isometric tree shifts.

``build_weights_uwrem`` realizes the weight-splitting construction: the
squared weights under each vertex of generation n sum to xi_n(x)^2, which
forces the 2-isometry identity and the kernel condition.  ``decompose``
extracts the complete invariant (x, {j_k}) and ``synthesize_from_invariant``
inverts it with a canonical tree choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import operators as ops
from .trees import BranchingDegrees, TreeSkeleton, branching_degrees
from .xi import check_unit_lower_bound, xi_eval

TOL_X = 1e-9


class VerificationError(ValueError):
    """Spec failed the property battery required before decomposition."""


@dataclass(frozen=True)
class CanonicalInvariant:
    """Complete unitary invariant (x, j) of a tree shift in the studied class."""

    x: float
    j: BranchingDegrees
    is_isometric: bool

    def to_json(self) -> dict:
        return {"x": self.x, "j": self.j.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "CanonicalInvariant":
        x = float(data["x"])
        j = BranchingDegrees.from_json(data["j"])
        return cls(x=x, j=j, is_isometric=abs(x - 1.0) <= TOL_X)


def build_weights_uwrem(
    tree: TreeSkeleton,
    x: float,
    strategy: str = "equal",
    seed: int | None = None,
) -> ops.TreeShift:
    """Positive weights with sum-of-squares xi_n(x)^2 under each generation-n vertex.

    ``strategy="equal"`` splits each sibling budget evenly; ``"random"``
    draws a seeded positive split (the invariant does not depend on it).
    """
    x = check_unit_lower_bound(x)
    if strategy not in ("equal", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = np.random.default_rng(seed)
    weights: dict[str, float] = {}
    for u in sorted(tree.vertices, key=lambda v: (tree.depth[v], v)):
        kids = tree.children[u]
        if not kids:
            continue
        target = xi_eval(tree.depth[u], x)
        if strategy == "equal" or len(kids) == 1:
            split = np.full(len(kids), target / math.sqrt(len(kids)))
        else:
            p = rng.uniform(0.2, 1.0, size=len(kids))
            split = target * np.sqrt(p / p.sum())
        for v, w in zip(kids, split):
            weights[v] = float(w)
    return ops.TreeShift(tree=tree, weights=weights, ray_x=x)


def root_norm(spec: ops.TreeShift) -> float:
    """||S e_root||, the x of the canonical invariant."""
    et = spec.tree.expand(2)
    kids = et.children[spec.tree.root]
    return math.sqrt(sum(abs(spec.weight(et, v)) ** 2 for v in kids))


def decompose(spec: ops.TreeShift, depth: int | None = None, tol: float = ops.DEFAULT_TOL) -> CanonicalInvariant:
    """Invariant (x, j) of a verified 2-isometric tree shift.

    The decomposition statement is S ~ S_[x] (+) sum over k of j_k copies
    of S_[xi_k(x)]; only the invariant is returned, the equivalence itself
    is checked through the power Gram spectra.
    """
    if depth is None:
        depth = max(8, spec.tree.skeleton_depth + 4)
    report = ops.property_report(spec, depth, tol=tol)
    failures = []
    if report.defect_2iso > tol:
        failures.append(f"2-isometry defect {report.defect_2iso:.3e}")
    if not report.hypo_plus:
        failures.append(f"hypo+ deviation {report.hypo_plus_deviation:.3e}")
    if not report.kernel_condition:
        failures.append(f"kernel condition residual {report.kernel_residual:.3e}")
    if failures:
        raise VerificationError("; ".join(failures))
    x = root_norm(spec)
    j = branching_degrees(spec.tree)
    return CanonicalInvariant(x=x, j=j, is_isometric=abs(x - 1.0) <= TOL_X)


def synthesize_from_invariant(
    x: float, j: BranchingDegrees | tuple[int, ...]
) -> tuple[TreeSkeleton, ops.TreeShift]:
    """Canonical tree with branching degrees j plus uwrem weights at norm x.

    The single branching vertex of each supported generation sits on the
    leftmost path; side branches are padded with chains down to the deepest
    supported generation so every skeleton leaf starts a ray there.
    ``decompose`` is a left inverse of this map.
    """
    x = check_unit_lower_bound(x)
    if not isinstance(j, BranchingDegrees):
        j = BranchingDegrees(tuple(j))
    top = len(j.entries)
    edges: list[tuple[str, str]] = []
    prev = "p0"
    for g in range(1, top + 1):
        cur = f"p{g}"
        edges.append((prev, cur))
        for i in range(j[g]):
            branch = f"b{g}.{i}"
            edges.append((prev, branch))
            # chain the side branch down to generation `top`
            node = branch
            for h in range(g + 1, top + 1):
                child = f"{branch}.c{h}"
                edges.append((node, child))
                node = child
        prev = cur
    tree = TreeSkeleton.from_edges("p0", edges, skeleton_depth=top)
    return tree, build_weights_uwrem(tree, x)


def spectral_to_opshift(spectral: ops.SpectralData) -> ops.DiagonalOpShift:
    """Diagonal operator valued shift with weights W_n = diag(xi_n(lambda_j))."""
    return ops.DiagonalOpShift(spectral=spectral)


def opshift_to_shift_sum(spec: ops.DiagonalOpShift) -> list[ops.ScalarShift]:
    """Orthogonal-sum model: one scalar shift S_[lambda_j] per atom copy.

    The list length equals dim ker W*.
    """
    return [ops.ScalarShift.xi(lam) for lam in spec.spectral.expanded()]


def model_atoms(spec: ops.ShiftSpec) -> list[float]:
    """Atoms lambda of the scalar-shift decomposition, with multiplicity.

    Tree shifts contribute x once and xi_k(x) with multiplicity j_k; the
    power Gram spectrum at exponent i is {1 + i(lambda^2 - 1)} over these.
    """
    if isinstance(spec, ops.ScalarShift):
        if spec.x is None:
            raise ops.SpecError("explicit-weight scalar shifts have no xi-family atom")
        return [spec.x]
    if isinstance(spec, ops.DiagonalOpShift):
        return sorted(spec.spectral.expanded())
    if isinstance(spec, ops.TreeShift):
        x = root_norm(spec)
        atoms = [x]
        j = branching_degrees(spec.tree)
        for k in j.support():
            atoms.extend([xi_eval(k, x)] * j[k])
        return sorted(atoms)
    raise ops.SpecError(f"no scalar-shift model for {type(spec).__name__}")
