"""Behaviour of the Grover iteration inside the d-dimensional subspace.

Covers the binary closed forms, the exact ternary eigensystem, and the
general-arity approximation ``Gamma^r ~ exp(rho Phi)`` with ``r = rho sqrt(N)``,
together with success probabilities and expected oracle-call counts.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError
from .gates import check_arity, root_of_unity
from .subspace import GroverConfig, slot_indices, tau_overlaps
from .tensor import det, mat_exp

log = logging.getLogger(__name__)

CLAMP_ANOMALY = 1e-9
BISECTION_TOL = 1e-12


def clamp_probability(p: float) -> float:
    if p < -CLAMP_ANOMALY or p > 1 + CLAMP_ANOMALY:
        log.warning("probability %.3e clamped into [0, 1]", p)
    return min(1.0, max(0.0, float(p)))


@dataclass(frozen=True)
class SubspaceOperators:
    config: GroverConfig
    delta: np.ndarray
    upsilon: np.ndarray
    gamma: np.ndarray


@dataclass(frozen=True)
class PhiPsiSplit:
    phi: np.ndarray
    psi: np.ndarray


@dataclass(frozen=True)
class ComplexityReport:
    N: int
    r_opt: int
    r_analytic: float
    p_at_r_opt: float
    model: Literal["binary", "ternary_exact", "general_synthetic"]


def subspace_delta(config: GroverConfig) -> np.ndarray:
    d, k, sq = config.d, config.k, config.sqrt_n
    m = np.zeros((d, d), dtype=complex)
    m[0, 0] = 1.0
    for slot, i in enumerate(slot_indices(d), start=1):
        m[slot, slot] = root_of_unity(d, i - 1)
        m[slot, 0] = root_of_unity(d, -i * k) * (root_of_unity(d, i - 1) - 1) / sq
    return m


def subspace_upsilon(config: GroverConfig) -> np.ndarray:
    """Black-box operator in slot coordinates, the near-inverse of the diffusion."""
    d, k, sq = config.d, config.k, config.sqrt_n
    m = np.zeros((d, d), dtype=complex)
    m[0, 0] = 1.0
    for slot, i in enumerate(slot_indices(d), start=1):
        m[slot, slot] = root_of_unity(d, 1 - i)
        m[0, slot] = root_of_unity(d, i * k) * (1 - root_of_unity(d, 1 - i)) / sq
    return m


def subspace_operators(config: GroverConfig) -> SubspaceOperators:
    delta = subspace_delta(config)
    upsilon = subspace_upsilon(config)
    return SubspaceOperators(config, delta, upsilon, delta @ upsilon)


def char_poly(d: int, N: int, lam: complex) -> complex:
    """``(1 - l)^(d-2) (l^2 - 2(1 - d/N) l + 1)``."""
    return (1 - lam) ** (d - 2) * (lam * lam - 2 * (1 - d / N) * lam + 1)


def char_poly_residual(config: GroverConfig, samples: int = 20, seed: int = 0) -> float:
    """Worst ``|det(Gamma - l I) - p_d(l)|`` over ``l`` drawn uniformly from ``|l| <= 1.5``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    radius = 1.5 * np.sqrt(rng.random(samples))
    angle = 2 * np.pi * rng.random(samples)
    gamma = subspace_operators(config).gamma
    eye = np.eye(config.d)
    worst = 0.0
    for lam in radius * np.exp(1j * angle):
        worst = max(worst, abs(det(gamma - lam * eye) - char_poly(config.d, config.N, lam)))
    return worst


def rotation_angle(d: int, N: int) -> float:
    """``T`` with ``cos T = 1 - d/N``."""
    c = 1 - d / N
    if not -1 <= c <= 1:
        raise DomainError(f"1 - d/N = {c} outside [-1, 1]")
    return math.acos(c)


def analytic_r(d: int, N: int) -> float:
    """``pi / (2 arccos(1 - d/N))``."""
    return math.pi / (2 * rotation_angle(d, N))


def ternary_r(N: int) -> float:
    if N < 3:
        raise DomainError(f"ternary iteration count needs N >= 3, got {N}")
    return analytic_r(3, N)


@dataclass(frozen=True)
class TernaryEigensystem:
    q: np.ndarray
    eigenvalues: np.ndarray
    q_inv: np.ndarray
    gamma: np.ndarray

    @property
    def eigen_residual(self) -> float:
        return float(np.max(np.abs(self.gamma @ self.q - self.q @ np.diag(self.eigenvalues))))

    @property
    def inverse_residual(self) -> float:
        return float(np.max(np.abs(self.q @ self.q_inv - np.eye(3))))

    def power(self, r: int) -> np.ndarray:
        return self.q @ np.diag(self.eigenvalues**r) @ self.q_inv


def _ternary_size(N: int) -> int:
    n = round(math.log(N, 3)) if N >= 1 else 0
    if N < 3 or 3**n != N:
        raise DomainError(f"ternary eigensystem needs N = 3^n with n >= 1, got {N}")
    return n


def ternary_eigensystem(N: int, k: int) -> TernaryEigensystem:
    """Closed-form diagonalisation ``Gamma = Q_k D Q_k^-1`` for ``d = 3``."""
    n = _ternary_size(N)
    if not 0 <= k < 3:
        raise DomainError(f"phase index must lie in [0, 3), got {k}")
    w = root_of_unity(3, 1)
    w2 = root_of_unity(3, 2)
    sin_t = 1 / math.sqrt(N)
    T = rotation_angle(3, N)
    ep = cmath.exp(1j * T)
    em = cmath.exp(-1j * T)

    q = np.array(
        [
            [0, 1, 1],
            [w2, (1 - ep) / (2 * (w2 - 1) * sin_t), (1 - em) / (2 * (w2 - 1) * sin_t)],
            [w, (1 - ep) / (2 * (w - 1) * sin_t), (1 - em) / (2 * (w - 1) * sin_t)],
        ],
        dtype=complex,
    )
    gap = em - ep
    q_inv = np.array(
        [
            [0, w / 2, w2 / 2],
            [-(1 - em) / gap, (w2 - 1) * sin_t / gap, (w - 1) * sin_t / gap],
            [(1 - ep) / gap, (1 - w2) * sin_t / gap, (1 - w) * sin_t / gap],
        ],
        dtype=complex,
    )
    sigma = np.diag([1, root_of_unity(3, k), 1])
    sigma_inv = np.diag([1, root_of_unity(3, -k), 1])
    gamma = subspace_operators(GroverConfig(3, n, tau=k)).gamma
    return TernaryEigensystem(sigma @ q, np.array([1, ep, em]), q_inv @ sigma_inv, gamma)


def ternary_scalar_identity_residual(N: int) -> float:
    """``|6 e^(iT) sin^2 t + (1 - e^(iT)) - e^(iT)(1 - e^(iT))|``."""
    ep = cmath.exp(1j * rotation_angle(3, N))
    sin2 = 1 / N
    return abs(6 * ep * sin2 + (1 - ep) - ep * (1 - ep))


def tau_probability_curve(config: GroverConfig, r_max: int) -> np.ndarray:
    """``|<tau| Gamma^r |s_0>|^2`` for ``r = 0..r_max`` by iterating the d-dim state."""
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    gamma = subspace_operators(config).gamma
    overlaps = tau_overlaps(config)
    state = np.zeros(config.d, dtype=complex)
    state[-1] = 1.0
    out = np.empty(r_max + 1)
    for r in range(r_max + 1):
        out[r] = abs(overlaps @ state) ** 2
        state = gamma @ state
    return out


def _model_for(d: int) -> str:
    return {2: "binary", 3: "ternary_exact"}.get(d, "general_synthetic")


def r_opt_exact(config: GroverConfig, r_max: int | None = None) -> ComplexityReport:
    """Best iteration count from exact subspace evolution.

    The probability oscillates with period ``pi / T``; later peaks can edge
    out the first by rounding, so the argmax is taken over the first
    oscillation ``r <= ceil(pi / T)`` (further capped by ``r_max``).
    """
    r_analytic = analytic_r(config.d, config.N)
    first_period = max(1, math.ceil(2 * r_analytic))
    if r_max is None:
        r_max = first_period
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    curve = tau_probability_curve(config, min(r_max, first_period))
    r_opt = int(np.argmax(curve))
    return ComplexityReport(config.N, r_opt, r_analytic, clamp_probability(curve[r_opt]), _model_for(config.d))


def binary_probability(N: int, r: int | np.ndarray):
    t = math.asin(1 / math.sqrt(N))
    return np.sin((2 * np.asarray(r) + 1) * t) ** 2


def binary_analysis(N: int) -> ComplexityReport:
    """``sin^2((2r+1)t)`` with ``sin t = 1/sqrt(N)``, maximised over integer ``r``."""
    if N < 2:
        raise DomainError(f"binary analysis needs N >= 2, got {N}")
    t = math.asin(1 / math.sqrt(N))
    rs = np.arange(0, math.ceil(math.pi / (2 * t)) + 1)
    probs = binary_probability(N, rs)
    r_opt = int(rs[np.argmax(probs)])
    return ComplexityReport(N, r_opt, math.pi / (4 * t), clamp_probability(probs[r_opt - rs[0]]), "binary")


def phi_matrix(config: GroverConfig) -> np.ndarray:
    d, k = config.d, config.k
    m = np.zeros((d, d), dtype=complex)
    for slot, i in enumerate(slot_indices(d), start=1):
        m[0, slot] = root_of_unity(d, i * k) * (1 - root_of_unity(d, 1 - i))
        m[slot, 0] = root_of_unity(d, -i * k) * (root_of_unity(d, i - 1) - 1)
    return m


def phi_psi(config: GroverConfig) -> PhiPsiSplit:
    """Split ``Gamma = I + Phi/sqrt(N) + Psi/N``."""
    gamma = subspace_operators(config).gamma
    phi = phi_matrix(config)
    psi = config.N * (gamma - np.eye(config.d) - phi / config.sqrt_n)
    return PhiPsiSplit(phi, psi)


def xi(config: GroverConfig, rho: float) -> np.ndarray:
    """``exp(rho Phi)``."""
    if not math.isfinite(rho):
        raise DomainError("rho must be finite")
    return mat_exp(rho * phi_matrix(config))


def xi_corner(d: int, rho: float) -> complex:
    """Closed form of ``exp(rho Phi)[0, d-1]``: ``(1 - w) sin(rho sqrt(2d)) / sqrt(2d)``."""
    s = math.sqrt(2 * d)
    return (1 - root_of_unity(d, 1)) * math.sin(rho * s) / s


def peak_probability(d: int) -> float:
    """``(1 - cos(2 pi/d)) / d``."""
    d = check_arity(d)
    return (1 - math.cos(2 * math.pi / d)) / d


def success_probability(d: int, rho: float) -> float:
    """``P_d(rho) = (1/d)(1 - cos(2 pi/d)) sin^2(rho sqrt(2d))``."""
    if rho < 0:
        raise DomainError("rho must be >= 0")
    return clamp_probability(peak_probability(d) * math.sin(rho * math.sqrt(2 * d)) ** 2)


def expected_calls(d: int, rho: float) -> float:
    """Expected oracle calls per ``sqrt(N)``: ``4d/|1-w|^2 * rho / sin^2(rho sqrt(2d))``."""
    d = check_arity(d)
    s2 = math.sin(rho * math.sqrt(2 * d)) ** 2
    if s2 < 1e-300:
        raise DomainError(f"sin(rho sqrt(2d)) vanishes at rho={rho}")
    return 4 * d / abs(1 - root_of_unity(d, 1)) ** 2 * rho / s2


def half_tan_root(tol: float = BISECTION_TOL) -> float:
    """Root of ``x = tan(x)/2`` in ``(pi/4, pi/2)`` by bisection."""
    lo, hi = math.pi / 4, math.pi / 2 - 1e-9
    g = lambda x: 2 * x - math.tan(x)  # noqa: E731
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def calls_constant() -> float:
    """``x / sin^2 x`` at the root of ``x = tan(x)/2`` (about 1.380)."""
    x = half_tan_root()
    return x / math.sin(x) ** 2


def rho_hat(d: int) -> float:
    return math.pi / (2 * math.sqrt(2 * check_arity(d)))


def rho_star(d: int) -> float:
    return half_tan_root() / math.sqrt(2 * check_arity(d))


def optimal_rho(d: int, criterion: Literal["peak", "expected_calls"] = "peak") -> tuple[float, float]:
    """``(rho, value)``: the probability peak, or the minimiser of expected calls."""
    if criterion == "peak":
        rho = rho_hat(d)
        return rho, success_probability(d, rho)
    if criterion == "expected_calls":
        rho = rho_star(d)
        return rho, expected_calls(d, rho)
    raise ValueError(f"unknown criterion {criterion!r}")


def iterations_for(rho: float, N: int) -> int:
    """``round(rho sqrt(N))``, halves rounded up and floored at 1."""
    return max(1, math.floor(rho * math.sqrt(N) + 0.5))
