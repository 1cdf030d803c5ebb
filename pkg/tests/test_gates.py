import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qudit_grover.errors import ArityError, SizeError
from qudit_grover.gates import GateKind, controlled_inc, elementary_gate, root_of_unity
from qudit_grover.tensor import unitarity_defect


def test_root_of_unity_values():
    assert root_of_unity(2, 1) == -1
    assert root_of_unity(4, 1) == 1j
    assert root_of_unity(3, -1) == root_of_unity(3, 2)


@given(st.integers(2, 16), st.integers(-100, 100))
def test_root_of_unity_cyclic(d, p):
    assert root_of_unity(d, p) == root_of_unity(d, p + d)
    assert abs(root_of_unity(d, p) - np.exp(2j * np.pi * p / d)) <= 1e-12


def test_binary_triple():
    assert np.array_equal(elementary_gate(GateKind.X, 2), [[0, 1], [1, 0]])
    assert np.array_equal(elementary_gate(GateKind.Z, 2), np.diag([1, -1]))
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    assert np.max(np.abs(elementary_gate(GateKind.F, 2) - h)) <= 1e-15
    assert np.array_equal(elementary_gate(GateKind.H, 2), elementary_gate(GateKind.F, 2))


def test_ternary_clock():
    w = np.exp(2j * np.pi / 3)
    assert np.max(np.abs(elementary_gate(GateKind.Z, 3) - np.diag([1, w, w**2]))) <= 1e-15


def test_increment_action():
    x = elementary_gate(GateKind.X, 5)
    for j in range(5):
        assert np.array_equal(x @ np.eye(5)[j], np.eye(5)[(j + 1) % 5])


def test_hadamard_only_binary():
    with pytest.raises(ArityError):
        elementary_gate(GateKind.H, 3)


@pytest.mark.parametrize("d", [1, 17, 0])
def test_arity_range(d):
    with pytest.raises(ArityError):
        elementary_gate(GateKind.X, d)


@pytest.mark.parametrize("d", range(2, 17))
def test_gates_unitary_and_orders(d):
    kinds = [GateKind.X, GateKind.Z, GateKind.F, GateKind.X_INVERSE, GateKind.F_INVERSE]
    for kind in kinds:
        assert unitarity_defect(elementary_gate(kind, d)) <= 1e-12
    x = elementary_gate(GateKind.X, d)
    z = elementary_gate(GateKind.Z, d)
    f = elementary_gate(GateKind.F, d)
    eye = np.eye(d)
    assert np.max(np.abs(np.linalg.matrix_power(x, d) - eye)) <= 1e-12
    assert np.max(np.abs(np.linalg.matrix_power(z, d) - eye)) <= 1e-12
    assert np.max(np.abs(f @ f.conj().T - eye)) <= 1e-12
    assert np.array_equal(elementary_gate(GateKind.X_INVERSE, d), x.conj().T)
    assert np.array_equal(elementary_gate(GateKind.F_INVERSE, d), f.conj().T)


def test_hadamard_fourth_power():
    f = elementary_gate(GateKind.F, 2)
    assert np.max(np.abs(np.linalg.matrix_power(f, 4) - np.eye(2))) <= 1e-12


def test_cnot():
    x = np.array([[0, 1], [1, 0]])
    expected = np.block([[np.eye(2), np.zeros((2, 2))], [np.zeros((2, 2)), x]])
    assert np.array_equal(controlled_inc(2, 2), expected)


def test_controlled_inc_base_case():
    assert np.array_equal(controlled_inc(3, 1), elementary_gate(GateKind.X, 3))


def brute_controlled_inc(d, n):
    # Build from the digit rule: bump the last digit when all others are 1.
    size = d**n
    out = np.zeros((size, size))
    for digits in itertools.product(range(d), repeat=n):
        src = sum(x * d ** (n - 1 - i) for i, x in enumerate(digits))
        new = list(digits)
        if all(x == 1 for x in digits[:-1]):
            new[-1] = (new[-1] + 1) % d
        dst = sum(x * d ** (n - 1 - i) for i, x in enumerate(new))
        out[dst, src] = 1
    return out


def test_controlled_inc_ternary_pair():
    c = controlled_inc(3, 2)
    for a, m in itertools.product(range(3), repeat=2):
        img = c @ np.eye(9)[3 * a + m]
        expected = 3 * a + ((m + 1) % 3 if a == 1 else m)
        assert np.array_equal(img, np.eye(9)[expected])


@pytest.mark.parametrize("d,n", [(d, n) for d in range(2, 10) for n in range(1, 7) if d**n <= 729])
def test_controlled_inc_exhaustive(d, n):
    c = controlled_inc(d, n)
    assert np.array_equal(c, brute_controlled_inc(d, n))
    assert unitarity_defect(c) <= 1e-12


def test_controlled_inc_cap():
    with pytest.raises(SizeError):
        controlled_inc(3, 7)
