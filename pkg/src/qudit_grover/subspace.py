"""The invariant Grover subspace and conversions to and from it.

Slot order of every subspace matrix is ``(|tau>, |s_2>, ..., |s_{d-1}>, |s_0>)``.
With that order the diffusion operator restricted to the subspace has
diagonal ``1, w, w^2, ..., w^(d-1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diffusion import lambda_matrix
from .errors import DomainError, InvarianceError, ShapeError, SizeError
from .gates import check_arity, fourier, root_of_unity
from .tensor import (
    SPAN_TOL,
    check_operator_dim,
    check_vector_dim,
    dagger,
    gram_coordinates,
)

ACTION_TOL = 1e-9


@dataclass(frozen=True)
class GroverConfig:
    """Search problem over ``N = d^n`` items with marked index ``tau``.

    ``tau`` defaults to ``N - 1``, which makes the phase index ``k = d - 1``.
    """

    d: int
    n: int
    tau: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "d", check_arity(self.d))
        if self.n < 1:
            raise SizeError(f"register width must be >= 1, got {self.n}")
        if self.tau is None:
            object.__setattr__(self, "tau", self.N - 1)
        if not 0 <= self.tau < self.N:
            raise DomainError(f"tau={self.tau} outside [0, {self.N})")

    @property
    def N(self) -> int:
        return self.d**self.n

    @property
    def k(self) -> int:
        return self.tau % self.d

    @property
    def sqrt_n(self) -> float:
        return math.sqrt(self.N)


def slot_indices(d: int) -> list[int]:
    """QFT column index ``i`` carried by each non-``tau`` slot: ``[2, ..., d-1, 0]``."""
    return list(range(2, d)) + [0]


def slot_of(d: int, i: int) -> int:
    """Subspace slot holding ``|s_i>``."""
    if i == 1 or not 0 <= i < d:
        raise DomainError(f"|s_{i}> is not a basis vector of the subspace (d={d})")
    return d - 1 if i == 0 else i - 1


def slot_labels(d: int) -> list[str]:
    return ["tau"] + [f"s{i}" for i in slot_indices(d)]


def tau_overlaps(config: GroverConfig) -> np.ndarray:
    """Row ``<tau|b_j>`` over the subspace slots: ``1`` then ``w^(k i)/sqrt(N)``."""
    d, k = config.d, config.k
    row = [1.0 + 0j] + [root_of_unity(d, k * i) / config.sqrt_n for i in slot_indices(d)]
    return np.array(row, dtype=complex)


def gram_matrix(config: GroverConfig) -> np.ndarray:
    """``B†B`` of the subspace basis, built from the overlaps alone."""
    row = tau_overlaps(config)
    g = np.eye(config.d, dtype=complex)
    g[0, 1:] = row[1:]
    g[1:, 0] = np.conj(row[1:])
    return g


@dataclass(frozen=True)
class SubspaceBasis:
    config: GroverConfig
    vectors: np.ndarray = field(repr=False)  # N x d, columns in slot order

    @property
    def labels(self) -> list[str]:
        return slot_labels(self.config.d)

    def vector(self, label: str) -> np.ndarray:
        return self.vectors[:, self.labels.index(label)]

    def s(self, i: int) -> np.ndarray:
        return self.vectors[:, slot_of(self.config.d, i)]

    @property
    def tau(self) -> np.ndarray:
        return self.vectors[:, 0]

    def gram(self) -> np.ndarray:
        return dagger(self.vectors) @ self.vectors

    def reconstruct(self, coords) -> np.ndarray:
        return self.vectors @ np.asarray(coords, dtype=complex)


def stacked_state(d: int, n: int, i: int) -> np.ndarray:
    """``|s_i>``: the QFT column ``f_i`` repeated ``d^(n-1)`` times, normalised."""
    copies = d ** (n - 1)
    return np.tile(fourier(d)[:, i], copies) / math.sqrt(copies)


def make_basis(config: GroverConfig) -> SubspaceBasis:
    d, n, N = config.d, config.n, config.N
    check_vector_dim(N)
    cols = np.zeros((N, d), dtype=complex)
    cols[config.tau, 0] = 1.0
    for slot, i in enumerate(slot_indices(d), start=1):
        cols[:, slot] = stacked_state(d, n, i)
    return SubspaceBasis(config, cols)


def coeff_matrix(d: int) -> np.ndarray:
    """``M = F^-1 L``; entry ``[i, j] = w^(-ij) (w^(i-1) - 1) / sqrt(d)``.

    Column ``j`` expands ``L e_j`` in the QFT columns; row 1 vanishes.
    """
    d = check_arity(d)
    m = np.empty((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            m[i, j] = root_of_unity(d, -i * j) * (root_of_unity(d, i - 1) - 1)
    return m / math.sqrt(d)


def coeff_matrix_by_product(d: int) -> np.ndarray:
    return dagger(fourier(d)) @ lambda_matrix(d)


@dataclass(frozen=True)
class ActionReport:
    residuals: dict[str, float]
    tol: float = ACTION_TOL

    @property
    def worst(self) -> float:
        return max(self.residuals.values())

    @property
    def passed(self) -> bool:
        return self.worst <= self.tol


def _check_delta_shape(config: GroverConfig, full_delta: np.ndarray) -> np.ndarray:
    m = np.asarray(full_delta, dtype=complex)
    if m.shape != (config.N, config.N):
        raise ShapeError(f"operator shape {m.shape} does not match N={config.N}")
    return m


def check_s_action(config: GroverConfig, full_delta, basis: SubspaceBasis | None = None) -> ActionReport:
    """Residuals of ``D|s_i> = w^(i-1)|s_i>`` for every ``i != 1``."""
    delta = _check_delta_shape(config, full_delta)
    basis = basis or make_basis(config)
    res = {}
    for i in slot_indices(config.d):
        s = basis.s(i)
        lam = root_of_unity(config.d, i - 1)
        res[f"s{i}"] = float(np.linalg.norm(delta @ s - lam * s))
    return ActionReport(res)


def tau_image_coefficients(config: GroverConfig) -> np.ndarray:
    """Coefficients of ``D|tau>`` in slot order: ``1`` then ``w^(-ik)(w^(i-1)-1)/sqrt(N)``."""
    d, k = config.d, config.k
    coeffs = [1.0 + 0j]
    for i in slot_indices(d):
        coeffs.append(root_of_unity(d, -i * k) * (root_of_unity(d, i - 1) - 1) / config.sqrt_n)
    return np.array(coeffs, dtype=complex)


def check_tau_action(config: GroverConfig, full_delta, basis: SubspaceBasis | None = None) -> ActionReport:
    delta = _check_delta_shape(config, full_delta)
    basis = basis or make_basis(config)
    expected = basis.reconstruct(tau_image_coefficients(config))
    return ActionReport({"tau": float(np.linalg.norm(delta @ basis.tau - expected))})


def restrict(full_op, basis: SubspaceBasis, tol: float = SPAN_TOL) -> np.ndarray:
    """Matrix ``R`` with ``op b_j = sum_i R[i, j] b_i``.

    Raises ``InvarianceError`` when some image leaves the span by more than ``tol``.
    """
    op = np.asarray(full_op, dtype=complex)
    b = basis.vectors
    if op.shape != (b.shape[0], b.shape[0]):
        raise ShapeError(f"operator shape {op.shape} does not match basis dim {b.shape[0]}")
    coords, resid = gram_coordinates(b, op @ b)
    worst = float(np.max(resid))
    if worst > tol:
        raise InvarianceError(f"subspace not invariant: off-span residual {worst:.3e}", worst)
    return coords


def off_span_residual(full_op, basis: SubspaceBasis) -> float:
    op = np.asarray(full_op, dtype=complex)
    _, resid = gram_coordinates(basis.vectors, op @ basis.vectors)
    return float(np.max(resid))


def embed(sub_op, basis: SubspaceBasis) -> np.ndarray:
    """Full-space operator acting as ``sub_op`` on the span and as identity off it."""
    s = np.asarray(sub_op, dtype=complex)
    d = basis.config.d
    if s.shape != (d, d):
        raise ShapeError(f"sub-operator must be {d}x{d}, got {s.shape}")
    N = basis.config.N
    check_operator_dim(N)
    b = basis.vectors
    # B G^-1 B† projects orthogonally onto the span.
    dual = np.linalg.solve(basis.gram(), dagger(b))
    proj = b @ dual
    return b @ s @ dual + (np.eye(N, dtype=complex) - proj)
