"""Dense complex linear algebra kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; vectors are 1-d
arrays. Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import RankError, ShapeError, SizeError

DEFAULT_MAX_VECTOR_DIM = 3**12
DEFAULT_MAX_OPERATOR_DIM = 3**6
MAX_DIM_ENV = "QUDIT_GROVER_MAX_DIM"

# Tolerance ladder.
TOL_ALGEBRAIC = 1e-12
TOL_UNITARY = 1e-10
TOL_EIGEN = 1e-8

MAT_EXP_NORM_GUARD = 100.0


def max_vector_dim() -> int:
    """Largest allowed vector length; ``QUDIT_GROVER_MAX_DIM`` overrides it."""
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_VECTOR_DIM
    try:
        value = int(raw)
    except ValueError as exc:
        raise SizeError(f"{MAX_DIM_ENV}={raw!r} is not an integer") from exc
    if value < 1:
        raise SizeError(f"{MAX_DIM_ENV} must be positive, got {value}")
    return value


def max_operator_dim() -> int:
    """Largest allowed side length of a dense full-space operator."""
    return min(DEFAULT_MAX_OPERATOR_DIM, max_vector_dim())


def check_vector_dim(n: int) -> None:
    cap = max_vector_dim()
    if n > cap:
        raise SizeError(f"vector dimension {n} exceeds cap {cap}")


def check_operator_dim(n: int) -> None:
    cap = max_operator_dim()
    if n > cap:
        raise SizeError(f"operator dimension {n} exceeds cap {cap}")


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _as_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def is_unitary(a, tol: float = TOL_UNITARY) -> bool:
    m = _as_square(a)
    return unitarity_defect(m) <= tol


def unitarity_defect(a) -> float:
    """``max |A†A - I|`` entrywise."""
    m = _as_square(a)
    return float(np.max(np.abs(dagger(m) @ m - np.eye(m.shape[0]))))


def max_abs_diff(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def kron(a, b) -> np.ndarray:
    """Kronecker product with the dimension cap enforced before allocation.

    Column vectors (one column) are held to the vector cap, genuine operators
    to the operator cap.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows == 1 or cols == 1:
        check_vector_dim(max(rows, cols))
    else:
        check_operator_dim(max(rows, cols))
    return np.kron(a, b)


def kron_all(factors: Sequence) -> np.ndarray:
    if not factors:
        raise ShapeError("kron_all needs at least one factor")
    return reduce(kron, factors)


def kron_power(a, n: int) -> np.ndarray:
    if n < 1:
        raise ShapeError(f"tensor power needs n >= 1, got {n}")
    return kron_all([a] * n)


def matmul_chain(layers: Sequence) -> np.ndarray:
    """Product ``L[0] @ L[1] @ ... @ L[-1]``."""
    if not layers:
        raise ShapeError("empty product")
    return reduce(np.matmul, (as_matrix(m) for m in layers))


def mat_exp(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring a truncated Taylor series.

    The series is cut once a term falls below machine precision relative to
    the partial sum, so the only error source is the squaring phase.
    """
    m = _as_square(a)
    norm = float(np.linalg.norm(m, 1))
    if norm > MAT_EXP_NORM_GUARD:
        raise ValueError(f"mat_exp guard: norm {norm:.3g} > {MAT_EXP_NORM_GUARD}")
    n = m.shape[0]
    squarings = 0
    if norm > 0.5:
        squarings = int(math.ceil(math.log2(norm / 0.5)))
    scaled = m / (2.0**squarings)

    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    eps = np.finfo(float).eps
    for k in range(1, 64):
        term = term @ scaled / k
        result = result + term
        if np.max(np.abs(term)) <= eps * max(1.0, float(np.max(np.abs(result)))):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def lu_decompose(a) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """LU factorisation with partial pivoting, ``P @ A = L @ U``.

    Returns ``(P, L, U, swaps)`` where ``swaps`` counts row interchanges.
    """
    u = _as_square(a).copy()
    n = u.shape[0]
    lower = np.eye(n, dtype=complex)
    perm = np.arange(n)
    swaps = 0
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(u[col:, col])))
        if pivot != col:
            u[[col, pivot], :] = u[[pivot, col], :]
            lower[[col, pivot], :col] = lower[[pivot, col], :col]
            perm[[col, pivot]] = perm[[pivot, col]]
            swaps += 1
        if u[col, col] == 0:
            continue
        factors = u[col + 1 :, col] / u[col, col]
        lower[col + 1 :, col] = factors
        u[col + 1 :, :] -= np.outer(factors, u[col, :])
    p = np.eye(n)[perm]
    return p, lower, u, swaps


def det(a) -> complex:
    """Determinant via LU with partial pivoting."""
    _, _, u, swaps = lu_decompose(a)
    sign = -1.0 if swaps % 2 else 1.0
    return complex(sign * np.prod(np.diag(u)))


@dataclass(frozen=True)
class GramSolution:
    coefficients: np.ndarray
    residual: float
    in_span: bool


SPAN_TOL = 1e-8
GRAM_COND_LIMIT = 1e12


def basis_matrix(basis) -> np.ndarray:
    """Stack a list of vectors as columns; a 2-d array is taken as-is."""
    if isinstance(basis, np.ndarray) and basis.ndim == 2:
        return basis.astype(complex, copy=False)
    cols = [np.asarray(v, dtype=complex).ravel() for v in basis]
    if not cols:
        raise ShapeError("empty basis")
    dims = {c.shape[0] for c in cols}
    if len(dims) != 1:
        raise ShapeError(f"basis vectors have differing dimensions {sorted(dims)}")
    return np.column_stack(cols)


def gram_coordinates(b: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``B†B C = B†V`` for one or many right-hand sides.

    Returns ``(C, residual)`` where residual is ``|BC - V|_2`` per column.
    """
    gram = dagger(b) @ b
    if np.linalg.cond(gram) > GRAM_COND_LIMIT:
        raise RankError("Gram matrix is singular: basis is linearly dependent")
    coeffs = np.linalg.solve(gram, dagger(b) @ v)
    resid = np.linalg.norm(b @ coeffs - v, axis=0)
    return coeffs, resid


def gram_solve(basis, v) -> GramSolution:
    """Least-squares coordinates of ``v`` in ``span(basis)``.

    ``in_span`` is false when the residual exceeds ``1e-8``.
    """
    b = basis_matrix(basis)
    vec = np.asarray(v, dtype=complex).ravel()
    if vec.shape[0] != b.shape[0]:
        raise ShapeError(f"vector dim {vec.shape[0]} != basis dim {b.shape[0]}")
    coeffs, resid = gram_coordinates(b, vec[:, None])
    r = float(resid[0])
    return GramSolution(coeffs[:, 0], r, r <= SPAN_TOL)
