"""Dense complex linear algebra primitives.

Matrices are numpy ``complex128`` arrays in row-major layout; zero-width
shapes like (n, 0) are first-class so that empty blocks never need special
casing at call sites.  The heavy lifting (LU, balanced Hessenberg/QR
eigensolver) is delegated to LAPACK through numpy.
"""

from __future__ import annotations

import numpy as np

from .errors import EigensolverError, ShapeError

__all__ = [
    "as_complex_matrix",
    "matmul",
    "kron",
    "det",
    "eigenvalues",
]


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a 2-D complex128 array with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"{name}: expected a 2-D matrix, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m.real)) or m.size and not np.all(np.isfinite(m.imag)):
        raise ShapeError(f"{name}: entries must be finite (no NaN/Inf)")
    return m


def matmul(a, b) -> np.ndarray:
    """Matrix product a·b with an explicit inner-dimension check."""
    a = as_complex_matrix(a, "a")
    b = as_complex_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: inner dimensions differ ({a.shape} vs {b.shape})")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product with block (i, j) equal to a[i, j]·b."""
    a = as_complex_matrix(a, "a")
    b = as_complex_matrix(b, "b")
    return np.kron(a, b)


def det(a) -> complex:
    """Determinant via LU with partial pivoting.  det of the 0×0 matrix is 1."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"det: matrix must be square, got {a.shape}")
    if a.shape[0] == 0:
        return complex(1.0)
    return complex(np.linalg.det(a))


def eigenvalues(a) -> np.ndarray:
    """All eigenvalues of a square matrix, with multiplicity.

    Uses the balanced Hessenberg + implicitly-shifted QR path of LAPACK
    (zgeev).  The returned order is whatever the iteration produces; callers
    needing a canonical order should sort.
    """
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"eigenvalues: matrix must be square, got {a.shape}")
    if a.shape[0] == 0:
        return np.zeros(0, dtype=np.complex128)
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # non-converged QR block
        raise EigensolverError(f"QR iteration did not converge: {exc}") from exc
