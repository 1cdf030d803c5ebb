"""Grover runs, measurement, and the repeat-until-collision protocol.

Two state representations are supported. ``full`` keeps the whole ``N``-dim
vector and applies the diffusion operator and the embedded black-box
alternately. ``subspace`` keeps ``d`` coordinates in the slot basis and
applies the ``d x d`` iteration matrix, which scales to large ``N``.

The black-box is defined only on the subspace and is not unitary there for
``d > 2``. States on the orbit of ``|s_0>`` nevertheless keep unit norm to
rounding; measurement still normalises the outcome weights before sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .analysis import iterations_for, subspace_operators
from .diffusion import delta_full
from .errors import DomainError, ProtocolError, SizeError
from .subspace import GroverConfig, SubspaceBasis, embed, gram_matrix, make_basis, tau_overlaps
from .tensor import max_operator_dim

RNG_ALGORITHM = "numpy.PCG64/SeedSequence"
RUNAWAY_GUARD = 10_000

Representation = Literal["full", "subspace"]


@dataclass(frozen=True)
class QuantumState:
    config: GroverConfig
    representation: Representation
    amplitudes: np.ndarray  # length N (full) or d (subspace coordinates)

    def full_vector(self, basis: SubspaceBasis | None = None) -> np.ndarray:
        if self.representation == "full":
            return self.amplitudes
        basis = basis or make_basis(self.config)
        return basis.reconstruct(self.amplitudes)

    def norm(self) -> float:
        if self.representation == "full":
            return float(np.linalg.norm(self.amplitudes))
        c = self.amplitudes
        return math.sqrt(max(0.0, float(np.real(np.conj(c) @ gram_matrix(self.config) @ c))))

    def tau_amplitude(self) -> complex:
        if self.representation == "full":
            return complex(self.amplitudes[self.config.tau])
        return complex(tau_overlaps(self.config) @ self.amplitudes)

    def tau_probability(self) -> float:
        """``|<tau|psi>|^2`` without normalisation, matching the analytic model."""
        return abs(self.tau_amplitude()) ** 2


@dataclass(frozen=True)
class RunStats:
    answer: int
    runs: int
    oracle_calls: int
    success: bool
    seed: int
    iterations: int
    rng: str = RNG_ALGORITHM


def initial_state(config: GroverConfig, representation: Representation = "subspace") -> QuantumState:
    if representation == "full":
        _check_full(config)
        vec = make_basis(config).s(0).copy()
        return QuantumState(config, "full", vec)
    coords = np.zeros(config.d, dtype=complex)
    coords[-1] = 1.0
    return QuantumState(config, "subspace", coords)


def _check_full(config: GroverConfig) -> None:
    if config.N > max_operator_dim():
        raise SizeError(f"full representation needs N <= {max_operator_dim()}, got N={config.N}")


@lru_cache(maxsize=32)
def full_iteration(config: GroverConfig) -> np.ndarray:
    """``Delta_full @ embed(Upsilon)`` as one ``N x N`` matrix."""
    _check_full(config)
    basis = make_basis(config)
    upsilon = embed(subspace_operators(config).upsilon, basis)
    return delta_full(config.d, config.n, "closed_form") @ upsilon


def evolve(config: GroverConfig, r: int, representation: Representation = "subspace") -> QuantumState:
    """State after ``r`` Grover iterations from ``|s_0>``."""
    if r < 0:
        raise ValueError(f"iteration count must be >= 0, got {r}")
    state = initial_state(config, representation)
    if representation == "full":
        step = full_iteration(config)
    elif representation == "subspace":
        step = subspace_operators(config).gamma
    else:
        raise ValueError(f"unknown representation {representation!r}")
    amps = state.amplitudes
    for _ in range(r):
        amps = step @ amps
    return QuantumState(config, representation, amps)


def tau_curve(config: GroverConfig, r_max: int, representation: Representation = "subspace") -> np.ndarray:
    """Unnormalised ``tau`` probability for ``r = 0..r_max``."""
    state = initial_state(config, representation)
    step = full_iteration(config) if representation == "full" else subspace_operators(config).gamma
    amps = state.amplitudes
    out = np.empty(r_max + 1)
    for r in range(r_max + 1):
        out[r] = abs(QuantumState(config, representation, amps).tau_amplitude()) ** 2
        amps = step @ amps
    return out


@dataclass(frozen=True)
class OutcomeDistribution:
    """Normalised measurement weights of a state.

    ``weights`` covers every basis index when the state is small enough to
    reconstruct; otherwise it is ``None`` and misses are drawn uniformly
    from the ``N - 1`` non-target indices.
    """

    config: GroverConfig
    p_tau: float
    weights: np.ndarray | None

    def sample(self, rng: np.random.Generator) -> int:
        if self.weights is not None:
            return int(rng.choice(self.config.N, p=self.weights))
        if rng.random() < self.p_tau:
            return self.config.tau
        j = int(rng.integers(self.config.N - 1))
        return j + 1 if j >= self.config.tau else j


def outcome_distribution(state: QuantumState, reconstruct_limit: int | None = None) -> OutcomeDistribution:
    config = state.config
    limit = max_operator_dim() if reconstruct_limit is None else reconstruct_limit
    if state.representation == "full" or config.N <= limit:
        vec = state.full_vector()
        w = np.abs(vec) ** 2
        w = w / w.sum()
        return OutcomeDistribution(config, float(w[config.tau]), w)
    p_tau = state.tau_probability() / state.norm() ** 2
    return OutcomeDistribution(config, min(1.0, p_tau), None)


def make_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def measure(state: QuantumState, rng_seed: int | np.random.Generator | None = None) -> int:
    """Sample a basis index with probability proportional to ``|amplitude|^2``."""
    return outcome_distribution(state).sample(make_rng(rng_seed))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, derived from ``(seed, trial)``."""
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def protocol_from_distribution(
    dist: OutcomeDistribution, iterations: int, rng: np.random.Generator, seed: int = 0
) -> RunStats:
    seen: set[int] = set()
    for runs in range(1, RUNAWAY_GUARD + 1):
        outcome = dist.sample(rng)
        if outcome in seen:
            return RunStats(outcome, runs, runs * iterations, outcome == dist.config.tau, seed, iterations)
        seen.add(outcome)
    raise ProtocolError(f"no repeated outcome after {RUNAWAY_GUARD} runs")


def repeated_run_protocol(
    config: GroverConfig,
    rho: float,
    rng_seed: int = 0,
    representation: Representation = "subspace",
) -> RunStats:
    """Run ``round(rho sqrt(N))`` iterations and measure until an outcome repeats."""
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    r = iterations_for(rho, config.N)
    dist = outcome_distribution(evolve(config, r, representation))
    return protocol_from_distribution(dist, r, make_rng(rng_seed), rng_seed)


@dataclass(frozen=True)
class TrialSummary:
    trials: int
    successes: int
    failures: int
    mean_oracle_calls: float
    mean_runs: float
    analytic_calls: float

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


def run_trials(
    config: GroverConfig,
    rho: float,
    trials: int,
    seed: int = 0,
    representation: Representation = "subspace",
) -> list[RunStats | ProtocolError]:
    """Independent protocol trials; trial ``i`` uses the stream ``(seed, i)``.

    A trial that trips the runaway guard is returned as its ``ProtocolError``.
    """
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    r = iterations_for(rho, config.N)
    dist = outcome_distribution(evolve(config, r, representation))
    results: list[RunStats | ProtocolError] = []
    for i in range(trials):
        try:
            results.append(protocol_from_distribution(dist, r, trial_rng(seed, i), seed))
        except ProtocolError as exc:
            results.append(exc)
    return results


def summarize(results, analytic_calls: float) -> TrialSummary:
    ok = [s for s in results if isinstance(s, RunStats)]
    successes = sum(s.success for s in ok)
    mean_calls = float(np.mean([s.oracle_calls for s in ok])) if ok else float("nan")
    mean_runs = float(np.mean([s.runs for s in ok])) if ok else float("nan")
    return TrialSummary(len(results), successes, len(results) - len(ok), mean_calls, mean_runs, analytic_calls)
