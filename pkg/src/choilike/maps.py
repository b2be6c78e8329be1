"""Choi-like maps built from nonnegative coefficient matrices.

A coefficient matrix A of side n defines the map

    Phi_A(X) = Delta_A(X) - X,

where Delta_A(X) is the diagonal matrix with entries
sum_j (a_ij + delta_ij) x_jj.  Every map handled by this package is of
this shape: the off-diagonal of the image is always -x_ij, and only the
diagonal depends on A.

For n = 3 the entries carry conventional names:

    A = [[a1, b1, c1],
         [c2, a2, b2],
         [b3, c3, a3]]

so the b's sit on the cyclic superdiagonal (1,2), (2,3), (3,1) and the
c's on the cyclic subdiagonal (1,3), (2,1), (3,2).  All n = 3 criteria
read entries through these accessors, never through raw indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import require_hermitian

PATTERN_ATOL = 1e-12
NEGATIVE_CLAMP = 1e-12


@dataclass(frozen=True)
class CoefficientMatrix:
    """Validated nonnegative n x n coefficient matrix (n >= 2)."""

    n: int
    a: np.ndarray

    def entry(self, i: int, j: int) -> float:
        """1-based entry access, matching the formula indexing."""
        return float(self.a[i - 1, j - 1])

    @property
    def a_diag(self) -> np.ndarray:
        """Diagonal entries (a_1, ..., a_n)."""
        return np.diag(self.a).copy()

    @property
    def b_cyclic(self) -> np.ndarray:
        """(b_1, b_2, b_3) from the cyclic superdiagonal; n = 3 only."""
        self._require_n3()
        return np.array([self.a[0, 1], self.a[1, 2], self.a[2, 0]])

    @property
    def c_cyclic(self) -> np.ndarray:
        """(c_1, c_2, c_3) from the cyclic subdiagonal; n = 3 only."""
        self._require_n3()
        return np.array([self.a[0, 2], self.a[1, 0], self.a[2, 1]])

    def _require_n3(self) -> None:
        if self.n != 3:
            raise ValueError(f"named cyclic entries are defined for n = 3 only, got n = {self.n}")


@dataclass(frozen=True)
class CklParams:
    """Constant cyclic coefficients (a, b, c), all nonnegative."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0:
            raise ValueError("constant cyclic coefficients must be nonnegative")


@dataclass(frozen=True)
class KyeParams:
    """Coefficients (a; c1, c2, c3) of the zero-b family, all nonnegative."""

    a: float
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        if min(self.a, self.c1, self.c2, self.c3) < 0:
            raise ValueError("coefficients must be nonnegative")


@dataclass(frozen=True)
class ScalingVector:
    """Three strictly positive diagonal scaling weights."""

    p: tuple[float, float, float]

    def __post_init__(self):
        if len(self.p) != 3 or min(self.p) <= 0:
            raise ValueError("scaling vector needs three strictly positive entries")

    def as_matrix(self) -> np.ndarray:
        return np.diag(np.asarray(self.p, dtype=float))


@dataclass(frozen=True)
class FormClass:
    """Detected coefficient pattern with its extracted named parameters."""

    tag: str  # one of: general, constant_ckl, kye_form, cyclic_bc, b_only
    parameters: dict = field(default_factory=dict)


def validate_coefficients(raw) -> CoefficientMatrix:
    """Validate a square nonnegative array into a CoefficientMatrix.

    Entries in (-1e-12, 0) are treated as round-off and clamped to zero;
    anything more negative is rejected.
    """
    a = np.asarray(raw, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"coefficient matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if n < 2:
        raise ValueError("coefficient matrix needs n >= 2")
    if not np.all(np.isfinite(a)):
        raise ValueError("coefficient matrix entries must be finite")
    if np.min(a) < -NEGATIVE_CLAMP:
        i, j = np.unravel_index(int(np.argmin(a)), a.shape)
        raise ValueError(f"negative coefficient a[{i + 1}][{j + 1}] = {a[i, j]}")
    a = np.where(a < 0.0, 0.0, a)
    a.setflags(write=False)
    return CoefficientMatrix(n=n, a=a)


def apply_map(A: CoefficientMatrix, X) -> np.ndarray:
    """Evaluate Phi_A(X) = Delta_A(X) - X for Hermitian X.

    The x_ii contributions of Delta and of -X cancel exactly, so the
    image has diagonal sum_j a_ij x_jj and off-diagonal -x_ij.
    """
    x = require_hermitian(X)
    if x.shape[0] != A.n:
        raise ValueError(f"input dimension {x.shape[0]} does not match coefficient side {A.n}")
    out = -x.copy()
    np.fill_diagonal(out, A.a @ np.real(np.diag(x)))
    return out


def choi_matrix(A: CoefficientMatrix) -> np.ndarray:
    """Block matrix (Phi_A(E_ij))_{ij} over the matrix units E_ij.

    Block row/column are indexed by the unit indices, so block (i, i)
    carries column i of A on its diagonal and block (i, j), i != j,
    carries a single -1 at inner position (i, j).  The trace collects
    every coefficient of A exactly once.
    """
    n = A.n
    c = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for k in range(n):
            c[i * n + k, i * n + k] = A.a[k, i]
        for j in range(n):
            if i != j:
                c[i * n + i, j * n + j] = -1.0
    return c


def cp_check(A: CoefficientMatrix, tol: float = 1e-9) -> tuple[bool, float]:
    """Complete-positivity test via the coupled n x n submatrix.

    The block matrix of Phi_A is positive semidefinite exactly when the
    reduced matrix with the a_ii on the diagonal and -1 elsewhere is:
    every remaining diagonal entry of the block matrix is a nonnegative
    coefficient sitting in a decoupled row.
    """
    from .linalg import is_psd

    reduced = np.full((A.n, A.n), -1.0) + np.diag(A.a_diag + 1.0)
    return is_psd(reduced, tol=tol)


def averaged_params(A: CoefficientMatrix) -> CklParams:
    """Arithmetic means (a-bar, b-bar, c-bar) of the named n = 3 entries."""
    A._require_n3()
    return CklParams(
        a=float(np.mean(A.a_diag)),
        b=float(np.mean(A.b_cyclic)),
        c=float(np.mean(A.c_cyclic)),
    )


def geometric_means(A: CoefficientMatrix) -> CklParams:
    """Geometric means (a*, b*, c*) of the named n = 3 entries."""
    A._require_n3()
    return CklParams(
        a=float(np.prod(A.a_diag) ** (1.0 / 3.0)),
        b=float(np.prod(A.b_cyclic) ** (1.0 / 3.0)),
        c=float(np.prod(A.c_cyclic) ** (1.0 / 3.0)),
    )


_SHIFT = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=float)  # S e_i = e_{i+1} cyclically


def shift_average(A: CoefficientMatrix, X) -> np.ndarray:
    """Average Phi_A over conjugation by the cyclic shift.

    The result equals Phi of the constant cyclic matrix built from
    averaged_params(A), applied to the same X.
    """
    A._require_n3()
    x = require_hermitian(X)
    if x.shape[0] != 3:
        raise ValueError("shift averaging is defined for 3 x 3 inputs")
    s = _SHIFT
    term1 = apply_map(A, x)
    term2 = s @ apply_map(A, s.T @ x @ s) @ s.T
    term3 = s.T @ apply_map(A, s @ x @ s.T) @ s
    return (term1 + term2 + term3) / 3.0


def constant_ckl_matrix(params: CklParams) -> CoefficientMatrix:
    """The constant cyclic coefficient matrix [[a,b,c],[c,a,b],[b,c,a]]."""
    a, b, c = params.a, params.b, params.c
    return validate_coefficients([[a, b, c], [c, a, b], [b, c, a]])


def kye_matrix(params: KyeParams) -> CoefficientMatrix:
    """Coefficient matrix of the zero-b family (a; c1, c2, c3)."""
    a = params.a
    return validate_coefficients(
        [[a, 0.0, params.c1], [params.c2, a, 0.0], [0.0, params.c3, a]]
    )


def scaled_ckl_matrix(params: CklParams, scaling: ScalingVector) -> CoefficientMatrix:
    """Diagonal rescaling of a constant cyclic matrix.

    With weights p the entries become a_i = a, b_i = (p_{i+1}/p_i) b and
    c_i = (p_{i+2}/p_i) c (cyclic indices), which preserves the geometric
    means b* = b, c* = c and the products b_i c_{i+1} = b c.  The
    resulting map is Phi_A(X) = V^{-1/2} Phi_[a,b,c](V^{1/2} X V^{1/2}) V^{-1/2}
    for V = diag(p).
    """
    p = np.asarray(scaling.p, dtype=float)
    a, b, c = params.a, params.b, params.c
    out = np.empty((3, 3))
    for i in range(3):
        out[i, i] = a
    # b slots (i, i+1), c slots (i, i+2), cyclic
    for i in range(3):
        out[i, (i + 1) % 3] = p[(i + 1) % 3] / p[i] * b
        out[i, (i + 2) % 3] = p[(i + 2) % 3] / p[i] * c
    return validate_coefficients(out)


def _all_close(values, atol: float = PATTERN_ATOL) -> bool:
    v = np.asarray(values, dtype=float)
    return bool(np.max(v) - np.min(v) <= atol)


def matches_constant_ckl(A: CoefficientMatrix) -> bool:
    """True when all a_i, all b_i and all c_i are separately equal."""
    if A.n != 3:
        return False
    return _all_close(A.a_diag) and _all_close(A.b_cyclic) and _all_close(A.c_cyclic)


def matches_kye_form(A: CoefficientMatrix) -> bool:
    """True when all a_i are equal and every b slot is zero."""
    if A.n != 3:
        return False
    return _all_close(A.a_diag) and bool(np.max(A.b_cyclic) <= PATTERN_ATOL)


def matches_cyclic_bc(A: CoefficientMatrix) -> bool:
    """True when the b slots share one value and the c slots another."""
    if A.n != 3:
        return False
    return _all_close(A.b_cyclic) and _all_close(A.c_cyclic)


def matches_b_only(A: CoefficientMatrix) -> bool:
    """True when every c slot is zero and every b slot is positive."""
    if A.n != 3:
        return False
    return bool(np.max(A.c_cyclic) <= PATTERN_ATOL) and bool(np.min(A.b_cyclic) > PATTERN_ATOL)


def classify_form(A: CoefficientMatrix) -> FormClass:
    """Most specific matching pattern, in the fixed specificity order
    constant_ckl > kye_form > b_only > cyclic_bc > general.
    """
    if A.n != 3:
        return FormClass(tag="general")
    if matches_constant_ckl(A):
        return FormClass(
            tag="constant_ckl",
            parameters={
                "a": float(A.a_diag[0]),
                "b": float(A.b_cyclic[0]),
                "c": float(A.c_cyclic[0]),
            },
        )
    if matches_kye_form(A):
        c = A.c_cyclic
        return FormClass(
            tag="kye_form",
            parameters={
                "a": float(A.a_diag[0]),
                "c1": float(c[0]),
                "c2": float(c[1]),
                "c3": float(c[2]),
            },
        )
    if matches_b_only(A):
        a, b = A.a_diag, A.b_cyclic
        return FormClass(
            tag="b_only",
            parameters={
                "a1": float(a[0]), "a2": float(a[1]), "a3": float(a[2]),
                "b1": float(b[0]), "b2": float(b[1]), "b3": float(b[2]),
            },
        )
    if matches_cyclic_bc(A):
        a = A.a_diag
        return FormClass(
            tag="cyclic_bc",
            parameters={
                "a1": float(a[0]), "a2": float(a[1]), "a3": float(a[2]),
                "b": float(A.b_cyclic[0]), "c": float(A.c_cyclic[0]),
            },
        )
    return FormClass(tag="general")
