"""Finite truncations of shift operators and the numerical verification battery.

Every operator class is truncated to a finite matrix whose basis vectors
carry generation tags.  Operator identities only hold away from the cut
edge of the matrix, so each check is restricted to the *interior*: for an
expression whose highest power of the operator is p, the columns of
generations <= depth - 1 - p are truncation-exact and only those are used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .trees import TreeSkeleton, branching_degrees
from .xi import check_unit_lower_bound, xi_eval

DEFAULT_TOL = 1e-9
_KERNEL_SVD_CUTOFF = 1e-10


class SpecError(ValueError):
    """Invalid operator specification."""


class TruncationError(ValueError):
    """Depth too small for the requested computation."""


class NearSingularError(ValueError):
    """T*T is numerically singular on the truncation interior."""


class CommutationError(ValueError):
    """Moduli commutation precondition violated."""


# ---------------------------------------------------------------------------
# operator specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralData:
    """Finite multiset of spectral atoms (lambda, multiplicity), lambda >= 1."""

    atoms: tuple[tuple[float, int], ...]

    def __post_init__(self):
        atoms = []
        for lam, mult in self.atoms:
            lam = check_unit_lower_bound(float(lam), "atom")
            mult = int(mult)
            if mult < 1:
                raise SpecError(f"atom multiplicity must be >= 1, got {mult}")
            atoms.append((lam, mult))
        if not atoms:
            raise SpecError("spectral data needs at least one atom")
        object.__setattr__(self, "atoms", tuple(atoms))

    @property
    def dim(self) -> int:
        return sum(m for _, m in self.atoms)

    def expanded(self) -> tuple[float, ...]:
        """Atoms repeated by multiplicity, in declaration order."""
        return tuple(lam for lam, mult in self.atoms for _ in range(mult))

    def to_json(self) -> dict:
        return {"atoms": [[lam, mult] for lam, mult in self.atoms]}

    @classmethod
    def from_json(cls, data: dict) -> "SpectralData":
        return cls(tuple((float(l), int(m)) for l, m in data["atoms"]))


@dataclass(frozen=True)
class ScalarShift:
    """Unilateral weighted shift; weights from the xi family or an explicit list."""

    x: float | None = None
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if (self.x is None) == (self.weights is None):
            raise SpecError("give exactly one of x (xi rule) or an explicit weight list")
        if self.x is not None:
            object.__setattr__(self, "x", check_unit_lower_bound(self.x))
        else:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    @classmethod
    def xi(cls, x: float) -> "ScalarShift":
        return cls(x=x)

    def weight(self, n: int) -> float:
        if self.x is not None:
            return xi_eval(n, self.x)
        if n >= len(self.weights):
            raise SpecError(f"explicit weight list exhausted at index {n}")
        return self.weights[n]


@dataclass(frozen=True)
class TreeShift:
    """Weighted shift on a rooted directed tree.

    ``weights`` covers the skeleton's non-root vertices; vertices on the
    infinite rays take weight xi_{g-1}(ray_x) at generation g, matching the
    uwrem continuation rule.
    """

    tree: TreeSkeleton
    weights: Mapping[str, complex]
    ray_x: float

    def __post_init__(self):
        object.__setattr__(self, "ray_x", check_unit_lower_bound(self.ray_x, "ray_x"))
        missing = [v for v in self.tree.parent if v not in self.weights]
        if missing:
            raise SpecError(f"weights missing for skeleton vertices: {sorted(missing)}")
        object.__setattr__(self, "weights", dict(self.weights))

    def weight(self, expanded, v: str) -> complex:
        if v in self.weights:
            return complex(self.weights[v])
        if v in expanded.ray_origin:
            g = expanded.generation_of[v]
            return complex(xi_eval(g - 1, self.ray_x))
        raise SpecError(f"no weight for vertex {v!r}")


@dataclass(frozen=True)
class DiagonalOpShift:
    """Operator valued unilateral weighted shift with diagonal weights
    W_n = diag(xi_n(lambda_j)) over the spectral atoms."""

    spectral: SpectralData


@dataclass(frozen=True)
class BrownianShift:
    """Quasi-Brownian isometry on l2 (+) C:  h (+) c  ->  (Sh + sigma*c*e0) (+) c."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise SpecError(f"sigma must be > 0, got {self.sigma}")


ShiftSpec = Union[ScalarShift, TreeShift, DiagonalOpShift, BrownianShift]


# ---------------------------------------------------------------------------
# truncation
# ---------------------------------------------------------------------------


@dataclass
class TruncatedOperator:
    """Finite matrix with generation-tagged basis labels.

    Columns of generations <= interior_depth - 1 reproduce the action of
    the infinite operator exactly.
    """

    matrix: np.ndarray
    basis_labels: list[tuple[str, int]]
    interior_depth: int
    depth: int

    def __post_init__(self):
        self.generations = np.array([g for _, g in self.basis_labels])

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def exact_columns(self, power: int = 1) -> np.ndarray:
        """Indices whose image under T^power stays inside the truncation."""
        return np.flatnonzero(self.generations <= self.depth - 1 - power)


def truncate(spec: ShiftSpec, depth: int) -> TruncatedOperator:
    """Finite matrix for the first ``depth`` generations of the operator."""
    if depth < 2:
        raise TruncationError(f"depth must be >= 2, got {depth}")

    if isinstance(spec, ScalarShift):
        m = np.zeros((depth, depth), dtype=complex)
        for n in range(depth - 1):
            m[n + 1, n] = spec.weight(n)
        labels = [(str(n), n) for n in range(depth)]
        return TruncatedOperator(m, labels, depth - 1, depth)

    if isinstance(spec, TreeShift):
        et = spec.tree.expand(depth)
        n = len(et.labels)
        m = np.zeros((n, n), dtype=complex)
        for v, u in et.parent.items():
            m[et.index[v], et.index[u]] = spec.weight(et, v)
        labels = [(v, et.generation_of[v]) for v in et.labels]
        return TruncatedOperator(m, labels, depth - 1, depth)

    if isinstance(spec, DiagonalOpShift):
        lams = spec.spectral.expanded()
        mdim = len(lams)
        n = mdim * depth
        m = np.zeros((n, n), dtype=complex)
        for lvl in range(depth - 1):
            for j, lam in enumerate(lams):
                m[(lvl + 1) * mdim + j, lvl * mdim + j] = xi_eval(lvl, lam)
        labels = [(f"{j}@{lvl}", lvl) for lvl in range(depth) for j in range(mdim)]
        return TruncatedOperator(m, labels, depth - 1, depth)

    if isinstance(spec, BrownianShift):
        n = depth + 1  # l2 levels plus the scalar summand
        m = np.zeros((n, n), dtype=complex)
        for k in range(depth - 1):
            m[k + 1, k] = 1.0
        m[0, depth] = spec.sigma
        m[depth, depth] = 1.0
        labels = [(str(k), k) for k in range(depth)] + [("scalar", 0)]
        return TruncatedOperator(m, labels, depth - 1, depth)

    raise SpecError(f"unknown spec type {type(spec).__name__}")


def cauchy_dual(trunc: TruncatedOperator, tol: float = _KERNEL_SVD_CUTOFF) -> TruncatedOperator:
    """T' = T (T*T)^(-1) on the truncation.

    T*T is block diagonal over generations for shift-type operators, so
    inverting it on the exact columns and leaving the cut columns at zero
    reproduces the infinite Cauchy dual there.
    """
    m = trunc.matrix
    cols = trunc.exact_columns(1)
    gram = m.conj().T @ m
    block = gram[np.ix_(cols, cols)]
    eigs = np.linalg.eigvalsh(block)
    if eigs.min() <= tol:
        raise NearSingularError(f"smallest eigenvalue of T*T is {eigs.min():.3e}")
    dual = np.zeros_like(m)
    dual[:, cols] = m[:, cols] @ np.linalg.inv(block)
    return TruncatedOperator(dual, trunc.basis_labels, trunc.interior_depth, trunc.depth)


# ---------------------------------------------------------------------------
# verification battery
# ---------------------------------------------------------------------------


@dataclass
class PropertyReport:
    defect_2iso: float
    is_2hyperexpansive: bool
    hyperexpansive_margin: float
    kernel_condition: bool
    kernel_residual: float
    dim_ker_adjoint: int
    hypo_plus: bool
    hypo_plus_deviation: float
    alpha: dict[str, float] = field(default_factory=dict)
    quasi_brownian: bool = False
    quasi_brownian_residual: float = float("nan")
    norm_sq: float = float("nan")

    def to_json(self) -> dict:
        return {
            "defect_2iso": self.defect_2iso,
            "is_2hyperexpansive": self.is_2hyperexpansive,
            "hyperexpansive_margin": self.hyperexpansive_margin,
            "kernel_condition": self.kernel_condition,
            "kernel_residual": self.kernel_residual,
            "dim_ker_adjoint": self.dim_ker_adjoint,
            "hypo_plus": self.hypo_plus,
            "hypo_plus_deviation": self.hypo_plus_deviation,
            "alpha": self.alpha,
            "quasi_brownian": self.quasi_brownian,
            "quasi_brownian_residual": self.quasi_brownian_residual,
            "norm_sq": self.norm_sq,
        }


def _spectral_norm(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def adjoint_kernel_basis(trunc: TruncatedOperator, cutoff: float = _KERNEL_SVD_CUTOFF) -> np.ndarray:
    """Orthonormal basis (columns) of ker T* supported on exact generations.

    Restricting to generations <= depth - 2 keeps T*T on the kernel
    truncation-exact; kernel vectors there belong to the infinite kernel.
    """
    cols = trunc.exact_columns(1)
    sub = trunc.matrix.conj().T[:, cols]
    _, s, vh = np.linalg.svd(sub)
    s = np.concatenate([s, np.zeros(len(cols) - len(s))])
    null = vh[s <= cutoff].conj().T  # |cols| x k
    basis = np.zeros((trunc.dim, null.shape[1]), dtype=complex)
    basis[cols, :] = null
    return basis


def tree_adjoint_kernel_basis(spec: TreeShift, trunc: TruncatedOperator) -> np.ndarray:
    """Closed-form ker T* for tree shifts: e_root plus, for every parent with
    several children, the orthocomplement of the weight vector among them."""
    et = spec.tree.expand(trunc.depth)
    vecs = [np.eye(trunc.dim, dtype=complex)[:, et.index[spec.tree.root]]]
    for u in et.labels:
        kids = et.children.get(u, ())
        if len(kids) < 2 or et.generation_of[u] > trunc.depth - 3:
            continue
        lam = np.array([spec.weight(et, v) for v in kids])
        # orthonormal complement of lam inside span of the sibling block
        q, _ = np.linalg.qr(np.column_stack([lam, np.eye(len(kids))]))
        for col in range(1, len(kids)):
            vec = np.zeros(trunc.dim, dtype=complex)
            for row, v in enumerate(kids):
                vec[et.index[v]] = q[row, col]
            vecs.append(vec)
    return np.column_stack(vecs)


def kernel_basis(spec: ShiftSpec, trunc: TruncatedOperator) -> np.ndarray:
    """ker T* basis: closed form where one exists, SVD otherwise."""
    if isinstance(spec, ScalarShift):
        basis = np.zeros((trunc.dim, 1), dtype=complex)
        basis[0, 0] = 1.0
        return basis
    if isinstance(spec, DiagonalOpShift):
        mdim = spec.spectral.dim
        basis = np.zeros((trunc.dim, mdim), dtype=complex)
        basis[:mdim, :] = np.eye(mdim)
        return basis
    if isinstance(spec, TreeShift):
        return tree_adjoint_kernel_basis(spec, trunc)
    return adjoint_kernel_basis(trunc)


def closed_form_kernel_dim(spec: ShiftSpec, depth: int) -> int | None:
    """dim ker T* from the structure of the spec, None if no closed form."""
    if isinstance(spec, ScalarShift):
        return 1
    if isinstance(spec, DiagonalOpShift):
        return spec.spectral.dim
    if isinstance(spec, TreeShift):
        # sibling groups whose parent sits at generation <= depth - 3 are the
        # ones fully visible to the truncated kernel computation
        j = branching_degrees(spec.tree, up_to=depth - 2)
        return 1 + j.total()
    return None


def property_report(spec: ShiftSpec, depth: int, tol: float = DEFAULT_TOL) -> PropertyReport:
    """Run the whole identity battery on the truncation interior."""
    if depth < 4:
        raise TruncationError(f"depth must be >= 4 for a property report, got {depth}")
    trunc = truncate(spec, depth)
    m = trunc.matrix
    gram = m.conj().T @ m
    cols1 = trunc.exact_columns(1)
    cols2 = trunc.exact_columns(2)

    # 2-isometry defect: I - 2 T*T + T*^2 T^2 on columns exact for T^2
    m2 = m @ m
    defect_full = np.eye(trunc.dim) - 2.0 * gram + m2.conj().T @ m2
    defect_block = defect_full[np.ix_(cols2, cols2)]
    defect = _spectral_norm(defect_block)
    herm = 0.5 * (defect_block + defect_block.conj().T)
    max_eig = float(np.linalg.eigvalsh(herm).max()) if herm.size else 0.0
    hyperexpansive = max_eig <= tol

    # kernel condition: T*T maps ker T* into itself
    kernel = adjoint_kernel_basis(trunc)
    dim_ker = kernel.shape[1]
    if dim_ker:
        image = gram @ kernel
        kernel_residual = _spectral_norm(image - kernel @ (kernel.conj().T @ image))
    else:
        kernel_residual = 0.0
    scale = max(1.0, _spectral_norm(gram[np.ix_(cols1, cols1)]))
    kernel_ok = kernel_residual <= tol * scale

    # hypo+: ||T e_u|| constant over each sibling set
    col_norms = np.linalg.norm(m, axis=0)
    alpha: dict[str, float] = {}
    deviation = 0.0
    for u in trunc.exact_columns(2):
        child_rows = np.flatnonzero(np.abs(m[:, u]) > 0)
        child_norms = col_norms[child_rows]
        if child_norms.size == 0:
            continue
        alpha[trunc.basis_labels[u][0]] = float(child_norms.mean())
        deviation = max(deviation, float(child_norms.max() - child_norms.min()))
    hypo_plus = deviation <= tol

    # quasi-Brownian identity on the exact subspace
    sub = np.ix_(cols1, cols1)
    a_sub = gram[sub]
    delta = a_sub - np.eye(len(cols1))
    w, v = np.linalg.eigh(0.5 * (delta + delta.conj().T))
    sqrt_delta = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    m_sub = m[sub]
    qb_full = delta @ m_sub - sqrt_delta @ m_sub @ sqrt_delta
    inner = np.flatnonzero(trunc.generations[cols1] <= depth - 3)
    qb_residual = _spectral_norm(qb_full[:, inner])
    quasi_brownian = qb_residual <= 10 * tol * scale

    norm_sq = float(np.max(col_norms[cols1] ** 2)) if len(cols1) else 0.0

    return PropertyReport(
        defect_2iso=defect,
        is_2hyperexpansive=hyperexpansive,
        hyperexpansive_margin=-max_eig,
        kernel_condition=kernel_ok,
        kernel_residual=kernel_residual,
        dim_ker_adjoint=dim_ker,
        hypo_plus=hypo_plus,
        hypo_plus_deviation=deviation,
        alpha=alpha,
        quasi_brownian=quasi_brownian,
        quasi_brownian_residual=qb_residual,
        norm_sq=norm_sq,
    )


# ---------------------------------------------------------------------------
# moduli, intertwiners, Gram spectra
# ---------------------------------------------------------------------------


def operator_modulus(a: np.ndarray) -> np.ndarray:
    """|A| = (A*A)^(1/2) via Hermitian eigendecomposition."""
    w, v = np.linalg.eigh(a.conj().T @ a)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def moduli_product_residual(a_list: Sequence[np.ndarray], tol: float = 1e-10) -> float:
    """|| |A_1...A_n| - |A_1|...|A_n| ||, after checking |A_i| commutes with
    A_j for i < j."""
    mats = [np.asarray(a, dtype=complex) for a in a_list]
    if not mats:
        raise ValueError("need at least one matrix")
    moduli = [operator_modulus(a) for a in mats]
    scale = max(1.0, max(_spectral_norm(a) for a in mats))
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            comm = _spectral_norm(moduli[i] @ mats[j] - mats[j] @ moduli[i])
            if comm > tol * scale * scale:
                raise CommutationError(f"|A_{i}| does not commute with A_{j} (defect {comm:.3e})")
    product = mats[0]
    moduli_product = moduli[0]
    for a, pa in zip(mats[1:], moduli[1:]):
        product = product @ a
        moduli_product = moduli_product @ pa
    return _spectral_norm(operator_modulus(product) - moduli_product)


def intertwine_residual(a: np.ndarray, t1: TruncatedOperator, t2: TruncatedOperator) -> float:
    """|| A T1 - T2 A || over the truncation-exact columns of T1."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (t2.dim, t1.dim):
        raise ValueError(f"intertwiner shape {a.shape} incompatible with {t2.dim} x {t1.dim}")
    diff = a @ t1.matrix - t2.matrix @ a
    return _spectral_norm(diff[:, t1.exact_columns(1)])


def generation_triangular_defect(a: np.ndarray, t1: TruncatedOperator, t2: TruncatedOperator) -> float:
    """Largest entry of A above the block diagonal of generation tags."""
    a = np.asarray(a, dtype=complex)
    above = t2.generations[:, None] < t1.generations[None, :]
    return float(np.abs(a[above]).max()) if above.any() else 0.0


def is_generation_lower_triangular(
    a: np.ndarray, t1: TruncatedOperator, t2: TruncatedOperator, tol: float = 1e-10
) -> bool:
    return generation_triangular_defect(a, t1, t2) <= tol


def power_gram_spectrum(spec: ShiftSpec, i: int, depth: int) -> np.ndarray:
    """Sorted squared singular values of T^i restricted to ker T*.

    This is the eigenvalue multiset of |T_[i]|^2 on the model space, the
    quantity that decides unitary equivalence of the weighted shifts here.
    """
    if i < 1:
        raise ValueError("power index i must be >= 1")
    skeleton = spec.tree.skeleton_depth if isinstance(spec, TreeShift) else 0
    if depth < i + skeleton + 2:
        raise TruncationError(f"need depth >= {i + skeleton + 2} for i = {i}")
    trunc = truncate(spec, depth)
    q = kernel_basis(spec, trunc)
    power = np.linalg.matrix_power(trunc.matrix, i) @ q
    eigs = np.linalg.eigvalsh(power.conj().T @ power)
    return np.sort(np.real(eigs))
