import math

import numpy as np
import pytest
from scipy.linalg import block_diag

from qudit_grover.diffusion import (
    binary_diffusion,
    delta_full,
    diffusion_circuit,
    lambda_matrix,
    reflection_about,
    zeta,
    zeta_circuit,
    zeta_closed_form,
)
from qudit_grover.errors import SizeError
from qudit_grover.gates import GateKind, elementary_gate, root_of_unity
from qudit_grover.tensor import matmul_chain, unitarity_defect

GRID = [(d, n) for d in (2, 3, 4, 5, 6) for n in (1, 2, 3) if d**n <= 729]


def maxdiff(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


@pytest.mark.parametrize("d", range(2, 10))
def test_zeta_single_qudit(d):
    z_inv = elementary_gate(GateKind.Z, d).conj()
    assert maxdiff(zeta(d, 1), root_of_unity(d, d - 1) * z_inv) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_zeta_binary(n):
    expected = np.eye(2**n)
    expected[0, 0] = -1
    assert maxdiff(zeta(2, n), expected) <= 1e-12


def test_zeta_ternary_pair():
    w2 = root_of_unity(3, 2)
    corner = w2 * elementary_gate(GateKind.Z, 3).conj()
    assert maxdiff(zeta(3, 2), block_diag(corner, np.eye(3), np.eye(3))) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 5])
@pytest.mark.parametrize("n", [2, 3])
def test_zeta_block_recursion(d, n):
    z = zeta(d, n)
    b = d ** (n - 1)
    assert maxdiff(z[:b, :b], zeta(d, n - 1)) <= 1e-12
    for j in range(1, d):
        assert maxdiff(z[j * b : (j + 1) * b, j * b : (j + 1) * b], np.eye(b)) <= 1e-12
    assert maxdiff(z, zeta_closed_form(d, n)) <= 1e-12


def test_circuit_product_is_right_to_left():
    circ = zeta_circuit(3, 2)
    assert len(circ.layers) == 5
    manual = circ.layers[4] @ circ.layers[3] @ circ.layers[2] @ circ.layers[1] @ circ.layers[0]
    assert maxdiff(circ.product, manual) <= 1e-11
    assert maxdiff(circ.product, matmul_chain(circ.layers[::-1])) <= 1e-11


@pytest.mark.parametrize("d", range(2, 10))
def test_delta_single_qudit(d):
    x_inv = elementary_gate(GateKind.X_INVERSE, d)
    assert maxdiff(delta_full(d, 1, "closed_form"), root_of_unity(d, d - 1) * x_inv) <= 1e-12
    assert maxdiff(delta_full(d, 1, "product"), root_of_unity(d, d - 1) * x_inv) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_delta_binary_closed_form(n):
    N = 2**n
    s = np.full(N, 1 / math.sqrt(N))
    expected = np.eye(N) - 2 / N * np.ones((N, N))
    assert maxdiff(delta_full(2, n, "closed_form"), expected) <= 1e-12
    assert maxdiff(expected, -reflection_about(s)) <= 1e-12


@pytest.mark.parametrize("d,n", GRID)
def test_delta_product_matches_closed_form(d, n):
    prod = delta_full(d, n, "product")
    closed = delta_full(d, n, "closed_form")
    assert maxdiff(prod, closed) <= 1e-10
    assert unitarity_defect(closed) <= 1e-10


def test_diffusion_circuit_layers():
    circ = diffusion_circuit(3, 2)
    assert len(circ.layers) == 7


def test_lambda_is_ternary_display():
    w = root_of_unity(3, 1)
    displayed = np.array([[-1, w**2, 0], [0, -1, w**2], [w**2, 0, -1]])
    assert maxdiff(lambda_matrix(3), displayed) <= 1e-15


def test_binary_diffusion_single_qubit():
    assert maxdiff(binary_diffusion(1), np.diag([-1, 1])) <= 1e-12


def test_binary_diffusion_three_qubits():
    expected = np.eye(8)
    expected[0, 0] = -1
    assert maxdiff(binary_diffusion(3), expected) <= 1e-12


def test_binary_diffusion_conjugated_pair():
    N = 4
    # -(2|s><s| - I) = I - (2/N) J
    expected = np.eye(N) - 2 / N * np.ones((N, N))
    h = elementary_gate(GateKind.H, 2)
    hh = np.kron(h, h)
    assert maxdiff(binary_diffusion(2, conjugated=True), expected) <= 1e-11
    assert maxdiff(hh @ binary_diffusion(2) @ hh, expected) <= 1e-11


@pytest.mark.parametrize("n", range(1, 8))
def test_binary_global_phase(n):
    N = 2**n
    s = np.full(N, 1 / math.sqrt(N))
    zero = np.eye(N)[0]
    assert maxdiff(-1 * binary_diffusion(n, True), reflection_about(s)) <= 1e-11
    assert maxdiff(-1 * binary_diffusion(n, False), reflection_about(zero)) <= 1e-11
    assert maxdiff(delta_full(2, n, "product"), binary_diffusion(n, True)) <= 1e-11


def test_size_cap():
    with pytest.raises(SizeError):
        delta_full(3, 7)
    with pytest.raises(ValueError):
        delta_full(3, 2, "bogus")
