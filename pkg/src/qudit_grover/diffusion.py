"""Diffusion operator: gate-by-gate products and their closed forms.

Layers are listed in circuit order (left to right as drawn) and multiplied
right to left, so the first layer drawn is the rightmost factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import SizeError
from .gates import check_arity, elementary_gate, controlled_inc, root_of_unity, GateKind
from .tensor import check_operator_dim, kron, kron_power, matmul_chain, dagger


@dataclass(frozen=True)
class CircuitProduct:
    """Circuit layers in drawing order plus their evaluated matrix."""

    layers: tuple[np.ndarray, ...]
    product: np.ndarray

    @classmethod
    def from_layers(cls, layers) -> "CircuitProduct":
        layers = tuple(np.asarray(m, dtype=complex) for m in layers)
        return cls(layers, matmul_chain(layers[::-1]))


def _check(d: int, n: int) -> int:
    d = check_arity(d)
    if n < 1:
        raise SizeError(f"register width must be >= 1, got {n}")
    check_operator_dim(d**n)
    return d


def _last_wire(gate: np.ndarray, d: int, n: int) -> np.ndarray:
    if n == 1:
        return gate
    return kron(np.eye(d ** (n - 1), dtype=complex), gate)


def lambda_matrix(d: int) -> np.ndarray:
    """``w^(d-1) X^-1 - I``: the block that generates the diffusion operator.

    Its null space is spanned by the second QFT column and
    ``L f_i = (w^(i-1) - 1) f_i`` for the others.
    """
    d = check_arity(d)
    x_inv = elementary_gate(GateKind.X_INVERSE, d)
    return root_of_unity(d, d - 1) * x_inv - np.eye(d, dtype=complex)


def zeta_circuit(d: int, n: int) -> CircuitProduct:
    d = _check(d, n)
    x = kron_power(elementary_gate(GateKind.X, d), n)
    x_inv = kron_power(elementary_gate(GateKind.X_INVERSE, d), n)
    f = _last_wire(elementary_gate(GateKind.F, d), d, n)
    f_inv = _last_wire(elementary_gate(GateKind.F_INVERSE, d), d, n)
    return CircuitProduct.from_layers([x, f, controlled_inc(d, n), f_inv, x_inv])


def zeta(d: int, n: int) -> np.ndarray:
    """``(X^-1)^n (I..F^-1) C_X^n (I..F) X^n``; block diagonal, corner ``zeta(n-1)``."""
    return zeta_circuit(d, n).product


def zeta_closed_form(d: int, n: int) -> np.ndarray:
    """Diagonal with ``w^(d-1) Z^-1`` in the first ``d`` slots and ones elsewhere."""
    d = _check(d, n)
    diag = np.ones(d**n, dtype=complex)
    diag[:d] = [root_of_unity(d, d - 1 - j) for j in range(d)]
    return np.diag(diag)


def diffusion_circuit(d: int, n: int) -> CircuitProduct:
    """Full d-ary diffusion circuit: QFT layer, zeta, inverse QFT layer."""
    d = _check(d, n)
    f = kron_power(elementary_gate(GateKind.F, d), n)
    inner = zeta_circuit(d, n)
    return CircuitProduct.from_layers([f, *inner.layers, dagger(f)])


def delta_closed_form(d: int, n: int) -> np.ndarray:
    d = _check(d, n)
    m = d ** (n - 1)
    ones = np.ones((m, m), dtype=complex)
    return np.kron(ones, lambda_matrix(d)) / m + np.eye(d**n, dtype=complex)


def delta_full(d: int, n: int, mode: Literal["product", "closed_form"] = "closed_form") -> np.ndarray:
    """The ``d^n x d^n`` diffusion operator, by gate product or closed form."""
    if mode == "product":
        return diffusion_circuit(d, n).product
    if mode == "closed_form":
        return delta_closed_form(d, n)
    raise ValueError(f"unknown mode {mode!r}")


def binary_diffusion_circuit(n: int, conjugated: bool = False) -> CircuitProduct:
    _check(2, n)
    x = kron_power(elementary_gate(GateKind.X, 2), n)
    h_last = _last_wire(elementary_gate(GateKind.H, 2), 2, n)
    layers = [x, h_last, controlled_inc(2, n), h_last, x]
    if conjugated:
        h_all = kron_power(elementary_gate(GateKind.H, 2), n)
        layers = [h_all, *layers, h_all]
    return CircuitProduct.from_layers(layers)


def binary_diffusion(n: int, conjugated: bool = False) -> np.ndarray:
    """Qubit diffusion circuit; equals ``-(2|0><0| - I)``, or ``-(2|s><s| - I)`` if conjugated."""
    return binary_diffusion_circuit(n, conjugated).product


def reflection_about(v: np.ndarray) -> np.ndarray:
    """``2|v><v| - I`` for a unit vector ``v``."""
    v = np.asarray(v, dtype=complex).ravel()
    return 2.0 * np.outer(v, np.conj(v)) - np.eye(v.shape[0])
