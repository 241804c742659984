"""Cauchy-dual asymptotics: the limit of T'*^n T'^n, contraction classes,
and the sharp lower bounds c_n for ||T'^n f||^2.

Strong-operator limits are replaced by truncation-exact computation: for
shift-type operators T'^n acts exactly on basis vectors whose generation g
satisfies g + n < depth, and only those coordinates are compared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operators as ops
from .models import model_atoms
from .xi import xi_eval

EIGENVALUE_ONE_TOL = 1e-9


class ClassDetectionError(ValueError):
    """Spec is neither a kernel-condition 2-isometry nor quasi-Brownian."""


class IsometricInputError(ValueError):
    """c_n limit is trivially 1 for isometric input; flagged separately."""


KERNEL_CLASS = "kernel-condition"
QUASI_BROWNIAN_CLASS = "quasi-brownian"


def detect_class(spec: ops.ShiftSpec, tol: float = ops.DEFAULT_TOL) -> str:
    """Re-verify the hypothesis class instead of trusting caller tags; the
    two closed forms disagree off their hypotheses."""
    depth = max(8, spec.tree.skeleton_depth + 4) if isinstance(spec, ops.TreeShift) else 8
    report = ops.property_report(spec, depth, tol=tol)
    if report.defect_2iso > tol:
        raise ClassDetectionError(f"not a 2-isometry (defect {report.defect_2iso:.3e})")
    if report.kernel_condition:
        return KERNEL_CLASS
    if report.quasi_brownian:
        return QUASI_BROWNIAN_CLASS
    raise ClassDetectionError("neither kernel condition nor quasi-Brownian identity holds")


def norm_sq(spec: ops.ShiftSpec) -> float:
    """||T||^2 from the spec structure (exact, no truncation)."""
    if isinstance(spec, ops.BrownianShift):
        return 1.0 + spec.sigma**2
    if isinstance(spec, ops.ScalarShift) and spec.x is None:
        return float(max(w * w for w in spec.weights))
    return float(max(model_atoms(spec)) ** 2)


def gram_diagonal(spec: ops.ShiftSpec, depth: int) -> np.ndarray:
    """Exact diagonal of T*T on the truncation basis.

    T*T is diagonal for every operator class here; computing it one depth
    deeper removes the cut-column artifact.
    """
    wide = ops.truncate(spec, depth + 1)
    diag = np.real(np.sum(np.abs(wide.matrix) ** 2, axis=0))
    keep = ops.truncate(spec, depth)
    index = {label: i for i, label in enumerate(wide.basis_labels)}
    return np.array([diag[index[label]] for label in keep.basis_labels])


def asymptotic_closed_form(spec: ops.ShiftSpec, depth: int, tol: float = ops.DEFAULT_TOL) -> np.ndarray:
    """Closed form of the limit of T'*^n T'^n on the truncation basis.

    Kernel-condition class: the spectral projection of T*T onto eigenvalue
    1.  Quasi-Brownian class: half that projection plus (I + T*T)^(-1).
    """
    cls = detect_class(spec, tol=tol)
    d = gram_diagonal(spec, depth)
    one = (np.abs(d - 1.0) <= EIGENVALUE_ONE_TOL * np.maximum(1.0, d)).astype(float)
    if cls == KERNEL_CLASS:
        return np.diag(one)
    return np.diag(0.5 * one + 1.0 / (1.0 + d))


@dataclass
class AsymptoticIterate:
    """T'*^n T'^n restricted to the truncation-exact coordinates."""

    matrix: np.ndarray
    indices: np.ndarray
    basis_labels: list[tuple[str, int]]


def asymptotic_iterative(spec: ops.ShiftSpec, n: int, depth: int) -> AsymptoticIterate:
    if n < 1:
        raise ValueError("n must be >= 1")
    if depth < n + 2:
        raise ops.TruncationError(f"need depth >= {n + 2} for n = {n}")
    trunc = ops.truncate(spec, depth)
    dual = ops.cauchy_dual(trunc)
    power = np.linalg.matrix_power(dual.matrix, n)
    idx = trunc.exact_columns(n)
    sub = power[:, idx]
    return AsymptoticIterate(
        matrix=sub.conj().T @ sub,
        indices=idx,
        basis_labels=[trunc.basis_labels[i] for i in idx],
    )


@dataclass
class DualReport:
    c_dot0: bool
    c_0dot: bool
    c_00: bool
    operator_class: str
    a_closed: np.ndarray
    a_iterative: AsymptoticIterate
    c_n_values: list[tuple[int, float]]
    norm_sq: float

    def to_json(self) -> dict:
        return {
            "c_dot0": self.c_dot0,
            "c_0dot": self.c_0dot,
            "c_00": self.c_00,
            "operator_class": self.operator_class,
            "a_closed": np.real(self.a_closed).tolist(),
            "a_iterative": np.real(self.a_iterative.matrix).tolist(),
            "a_iterative_labels": [list(l) for l in self.a_iterative.basis_labels],
            "c_n_values": [[n, c] for n, c in self.c_n_values],
            "norm_sq": self.norm_sq,
        }


def closed_form_cn(spec: ops.ShiftSpec, n: int) -> float:
    """Largest c with ||T'^n f||^2 >= c ||f||^2, from the detected class."""
    if n < 0:
        raise ValueError("n must be >= 0")
    t2 = norm_sq(spec)
    if isinstance(spec, ops.BrownianShift):
        return (1.0 + t2 ** (1 - 2 * n)) / (1.0 + t2)
    return 1.0 / (1.0 + n * (t2 - 1.0))


def classify_c_classes(spec: ops.ShiftSpec, depth: int = 10, iter_n: int = 20,
                       tol: float = ops.DEFAULT_TOL) -> DualReport:
    """Contraction classes of T' plus both asymptotic-limit computations.

    C.0 holds for every in-scope spec (all are completely non-unitary:
    rooted tree shifts and the diagonal model by the classification, the
    Brownian construction by inspection).  C0. fails exactly when T*T has
    eigenvalue 1, i.e. when some model atom equals 1; for the non-isometric
    quasi-Brownian class it always fails.
    """
    cls = detect_class(spec, tol=tol)
    c_dot0 = True
    if isinstance(spec, ops.BrownianShift):
        c_0dot = False
    else:
        c_0dot = all(abs(lam - 1.0) > EIGENVALUE_ONE_TOL for lam in model_atoms(spec))
    iterate_depth = max(depth, iter_n + 2)
    return DualReport(
        c_dot0=c_dot0,
        c_0dot=c_0dot,
        c_00=c_dot0 and c_0dot,
        operator_class=cls,
        a_closed=asymptotic_closed_form(spec, depth, tol=tol),
        a_iterative=asymptotic_iterative(spec, iter_n, iterate_depth),
        c_n_values=[(n, closed_form_cn(spec, n)) for n in range(7)],
        norm_sq=norm_sq(spec),
    )


def cn_bound(spec: ops.ShiftSpec, n: int, depth: int,
             tol: float = ops.DEFAULT_TOL) -> tuple[float, float]:
    """(closed-form c_n, smallest squared singular value of the truncated T'^n).

    The second component is >= c_n - 1e-8 and approaches c_n as the depth
    grows; it is computed on the truncation-exact columns only.
    """
    detect_class(spec, tol=tol)
    cn = closed_form_cn(spec, n)
    if n == 0:
        return cn, 1.0
    if depth < n + 2:
        raise ops.TruncationError(f"need depth >= {n + 2} for n = {n}")
    trunc = ops.truncate(spec, depth)
    dual = ops.cauchy_dual(trunc)
    power = np.linalg.matrix_power(dual.matrix, n)
    sub = power[:, trunc.exact_columns(n)]
    smin = float(np.linalg.svd(sub, compute_uv=False).min())
    return cn, smin * smin


def cn_limit(spec: ops.ShiftSpec, tol: float = ops.DEFAULT_TOL) -> float:
    """Limit of c_n: 0 for the kernel-condition class, 1/(1 + ||T||^2) for
    the quasi-Brownian class; isometric input is flagged instead."""
    t2 = norm_sq(spec)
    if t2 <= 1.0 + tol:
        raise IsometricInputError("||T|| = 1: the limit is trivially 1")
    cls = detect_class(spec, tol=tol)
    if cls == KERNEL_CLASS:
        return 0.0
    return 1.0 / (1.0 + t2)
