"""Elementary d-ary gates and the multi-qudit controlled increment."""

from __future__ import annotations

import cmath
import enum
import math

import numpy as np

from .errors import ArityError, SizeError
from .tensor import check_operator_dim

MAX_ARITY = 16


class GateKind(enum.Enum):
    X = "X"
    Z = "Z"
    F = "F"
    X_INVERSE = "X_inverse"
    F_INVERSE = "F_inverse"
    H = "H"


def check_arity(d: int) -> int:
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise ArityError(f"arity must be an integer, got {d!r}")
    if d < 2 or d > MAX_ARITY:
        raise ArityError(f"arity must lie in [2, {MAX_ARITY}], got {d}")
    return int(d)


def root_of_unity(d: int, p: int) -> complex:
    """``exp(2*pi*i*p/d)``, computed from ``p mod d`` so it is exactly cyclic."""
    d = check_arity(d)
    p = p % d
    # Exact values on the axes keep the binary and quaternary gates clean.
    if 4 * p % d == 0:
        return (1, 1j, -1, -1j)[4 * p // d]
    return cmath.exp(2j * math.pi * p / d)


def omega_powers(d: int) -> np.ndarray:
    """``[w^0, w^1, ..., w^(d-1)]`` for ``w = exp(2*pi*i/d)``."""
    return np.array([root_of_unity(d, p) for p in range(d)], dtype=complex)


def increment(d: int) -> np.ndarray:
    """``X_d|j> = |j+1 mod d>``."""
    d = check_arity(d)
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock(d: int) -> np.ndarray:
    return np.diag(omega_powers(d))


def fourier(d: int) -> np.ndarray:
    """Unitary QFT with entries ``w^(ij) / sqrt(d)``."""
    d = check_arity(d)
    idx = np.arange(d)
    w = omega_powers(d)
    return w[np.outer(idx, idx) % d] / math.sqrt(d)


def elementary_gate(kind: GateKind | str, d: int) -> np.ndarray:
    """The ``d x d`` matrix of one of the elementary gates."""
    kind = GateKind(kind) if not isinstance(kind, GateKind) else kind
    d = check_arity(d)
    if kind is GateKind.X:
        return increment(d)
    if kind is GateKind.X_INVERSE:
        return increment(d).T.copy()
    if kind is GateKind.Z:
        return clock(d)
    if kind is GateKind.F:
        return fourier(d)
    if kind is GateKind.F_INVERSE:
        return np.conj(fourier(d)).T
    if d != 2:
        raise ArityError(f"the Hadamard gate only exists for d = 2, got d = {d}")
    return fourier(2)


def controlled_inc(d: int, n: int) -> np.ndarray:
    """``d^n x d^n`` gate incrementing the last qudit iff all others are ``|1>``.

    The leftmost qudit is the most significant digit, so the matrix has the
    recursive block form ``diag(I, C^(n-1), I, ..., I)`` with ``C^1 = X_d``.
    """
    d = check_arity(d)
    if n < 1:
        raise SizeError(f"register width must be >= 1, got {n}")
    size = d**n
    check_operator_dim(size)
    gate = np.eye(size, dtype=complex)
    # Basis index of digits (1, ..., 1, 0).
    start = sum(d**p for p in range(1, n))
    gate[start : start + d, start : start + d] = increment(d)
    return gate
