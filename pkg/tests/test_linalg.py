import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhtheorem import linalg as la
from qhtheorem.exceptions import DimensionError, InvalidStateError, NotHermitianError, NotUnitaryError

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=4)


def random_complex(dim, rng):
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


# --- kron -------------------------------------------------------------------

def test_kron_identity():
    np.testing.assert_array_equal(la.kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_system_is_slow_index():
    p0, p1 = 0.3, 0.7
    out = la.kron(np.diag([p0, p1]), la.ket_bra(2, 0, 0))
    np.testing.assert_array_equal(out, np.diag([p0, 0, p1, 0]))


def test_kron_sigma_x_pair_flips_both():
    # hand expansion: (X (x) X)|00> = X|0> (x) X|0> = |1> (x) |1> = |11>, index 3
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    np.testing.assert_array_equal(la.kron(SX, SX) @ ket00, [0, 0, 0, 1])


def test_kron_entry_formula():
    rng = np.random.default_rng(0)
    a, b = random_complex(2, rng), random_complex(3, rng)
    out = la.kron(a, b)
    for i, j, k, l in itertools.product(range(2), range(2), range(3), range(3)):
        assert abs(out[i * 3 + k, j * 3 + l] - a[i, j] * b[k, l]) <= 1e-14


def test_results_are_read_only():
    out = la.kron(np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        out[0, 0] = 2


def test_as_matrix_rejects_bad_input():
    with pytest.raises(DimensionError):
        la.as_matrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        la.as_matrix([[np.nan, 0], [0, 1]])


@settings(max_examples=50, deadline=None)
@given(seed=seeds, da=dims, db=dims, dc=dims)
def test_kron_associative(seed, da, db, dc):
    rng = np.random.default_rng(seed)
    a, b, c = random_complex(da, rng), random_complex(db, rng), random_complex(dc, rng)
    np.testing.assert_allclose(la.kron(la.kron(a, b), c), la.kron(a, la.kron(b, c)), atol=1e-12, rtol=0)


# --- partial trace ----------------------------------------------------------

def brute_partial_trace(m, ds, dr, keep):
    """Explicit index sum, independent of the reshape/einsum path."""
    if keep == "system":
        out = np.zeros((ds, ds), dtype=complex)
        for i, j, k in itertools.product(range(ds), range(ds), range(dr)):
            out[i, j] += m[i * dr + k, j * dr + k]
    else:
        out = np.zeros((dr, dr), dtype=complex)
        for i, j, k in itertools.product(range(dr), range(dr), range(ds)):
            out[i, j] += m[k * dr + i, k * dr + j]
    return out


def test_partial_trace_bell_state_is_maximally_mixed():
    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    proj = np.outer(bell, bell.conj())
    expected = brute_partial_trace(proj, 2, 2, "system")
    np.testing.assert_allclose(expected, 0.5 * np.eye(2), atol=1e-15)
    np.testing.assert_allclose(la.partial_trace(proj, 2, 2), expected, atol=1e-15)
    np.testing.assert_allclose(la.partial_trace(proj, 2, 2, keep="reservoir"), 0.5 * np.eye(2), atol=1e-15)


def test_partial_trace_of_correlated_final_state():
    p0, q0 = 0.8, 0.6
    p1, q1 = 1 - p0, 1 - q0
    g, e = la.ket_bra(2, 0, 0), la.ket_bra(2, 1, 1)
    rf = (p0 * q0 * la.kron(g, g) + p1 * q0 * la.kron(g, e)
          + p0 * q1 * la.kron(e, e) + p1 * q1 * la.kron(e, g))
    np.testing.assert_allclose(la.partial_trace(rf, 2, 2), np.diag([q0, q1]), atol=1e-15)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionError):
        la.partial_trace(np.eye(4), 3, 2)
    with pytest.raises(ValueError):
        la.partial_trace(np.eye(4), 2, 2, keep="both")


@settings(max_examples=50, deadline=None)
@given(seed=seeds, ds=dims, dr=dims)
def test_partial_trace_matches_brute_force_and_keeps_trace(seed, ds, dr):
    rng = np.random.default_rng(seed)
    m = random_complex(ds * dr, rng)
    for keep in ("system", "reservoir"):
        out = la.partial_trace(m, ds, dr, keep=keep)
        np.testing.assert_allclose(out, brute_partial_trace(m, ds, dr, keep), atol=1e-12)
        assert abs(np.trace(out) - np.trace(m)) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(seed=seeds, ds=dims, dr=dims)
def test_partial_trace_of_product(seed, ds, dr):
    rng = np.random.default_rng(seed)
    a, b = random_complex(ds, rng), random_complex(dr, rng)
    np.testing.assert_allclose(la.partial_trace(la.kron(a, b), ds, dr), a * np.trace(b), atol=1e-12)


def test_swap_factors():
    rng = np.random.default_rng(3)
    a, b = random_complex(2, rng), random_complex(3, rng)
    np.testing.assert_allclose(la.swap_factors(la.kron(a, b), 2, 3), la.kron(b, a), atol=1e-15)


# --- eigenvalues, dagger -----------------------------------------------------

def test_eigenvalues_diagonal():
    np.testing.assert_allclose(la.hermitian_eigenvalues(np.diag([0.7, 0.3])), [0.3, 0.7], atol=1e-15)


def test_eigenvalues_rank_one_projector():
    np.testing.assert_allclose(la.hermitian_eigenvalues(0.5 * (np.eye(2) + SX)), [0, 1], atol=1e-15)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(NotHermitianError):
        la.hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))


@settings(max_examples=30, deadline=None)
@given(seed=seeds, dim=dims)
def test_eigenvalues_satisfy_characteristic_polynomial(seed, dim):
    m = la.random_hermitian(dim, np.random.default_rng(seed))
    lam = la.hermitian_eigenvalues(m)
    assert np.all(np.diff(lam) >= 0)
    assert abs(lam.sum() - np.trace(m).real) <= 1e-10
    # Newton identities: power sums equal traces of matrix powers
    for k in range(2, dim + 1):
        assert np.isclose(np.sum(lam ** k), np.trace(np.linalg.matrix_power(m, k)).real, atol=1e-9)
    scale = np.max(np.abs(m)) ** dim
    for x in lam:
        assert abs(np.linalg.det(m - x * np.eye(dim))) <= 1e-9 * max(scale, 1.0)


def test_dagger():
    np.testing.assert_array_equal(la.dagger(np.eye(1)), np.eye(1))
    np.testing.assert_array_equal(la.dagger(1j * SZ), -1j * SZ)


# --- validation ---------------------------------------------------------------

def test_validate_density_accepts_mixed_state():
    rho = la.validate_density(np.diag([0.5, 0.5]))
    assert rho.dim == 2


def test_validate_density_trace_violation():
    with pytest.raises(InvalidStateError) as exc:
        la.validate_density(np.diag([0.6, 0.6]))
    assert exc.value.invariant == "trace"
    assert exc.value.defect == pytest.approx(0.2, abs=1e-15)


def test_validate_density_hermiticity_violation():
    with pytest.raises(InvalidStateError) as exc:
        la.validate_density(np.array([[0.5, 0.1], [0.0, 0.5]]))
    assert exc.value.invariant == "hermiticity"
    assert exc.value.defect == pytest.approx(0.1)


def test_validate_density_positivity_violation():
    with pytest.raises(InvalidStateError) as exc:
        la.validate_density(np.diag([1.5, -0.5]))
    assert exc.value.invariant == "positivity"
    assert exc.value.defect == pytest.approx(0.5)


def test_validate_correlated_initial_state():
    # eps=0.1, p0=0.8, q0=0.6 evaluated by hand:
    # 0.9*diag(.48,.32,.12,.08) + 0.1*diag(.8,0,0,.2)
    expected = np.diag([0.512, 0.288, 0.108, 0.092])
    from qhtheorem.scenarios import ScenarioParams, correlated_initial_state

    r0 = correlated_initial_state(ScenarioParams(p0=0.8, q0=0.6, eps=0.1))
    np.testing.assert_allclose(r0, expected, atol=1e-15)
    la.validate_density(r0)


@settings(max_examples=50, deadline=None)
@given(seed=seeds, dim=dims)
def test_state_eigenvalues_in_unit_interval(seed, dim):
    rho = la.random_density(dim, rng=np.random.default_rng(seed))
    lam = rho.eigenvalues()
    assert lam[0] >= -rho.tol and lam[-1] <= 1 + rho.tol


def test_unitary_operator_validation():
    with pytest.raises(NotUnitaryError):
        la.UnitaryOperator(np.diag([1.0, 2.0]), 2)
    with pytest.raises(DimensionError):
        la.UnitaryOperator(np.eye(4), 3, 2)
    u = la.UnitaryOperator(la.random_unitary(6, np.random.default_rng(1)), 2, 3)
    assert u.swapped().sys_dim == 3
