import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from telemat import (
    DegenerateStateError,
    DimensionMismatchError,
    PureState,
    QuditDims,
    basis_index,
    basis_state,
    index_to_digits,
    inner_product,
    normalize,
    permute_particles,
    tensor_product,
)

from conftest import SQRT_HALF, epr_channel


# ---------------------------------------------------------------------------
# indexing


def test_basis_index_examples():
    assert basis_index((2, 2), (0, 0)) == 0
    assert basis_index((2, 2), (1, 0)) == 2
    assert basis_index((2, 3, 2), (1, 2, 1)) == 11


def test_basis_index_out_of_range():
    with pytest.raises(IndexError):
        basis_index((2, 2), (0, 2))
    with pytest.raises(DimensionMismatchError):
        basis_index((2, 2), (0, 0, 0))


@pytest.mark.parametrize("dims", [(2, 2), (3,), (2, 3, 2), (4, 2, 3)])
def test_basis_index_roundtrip_exhaustive(dims):
    seen = set()
    for digits in itertools.product(*(range(d) for d in dims)):
        flat = basis_index(dims, digits)
        assert index_to_digits(dims, flat) == digits
        seen.add(flat)
    assert seen == set(range(int(np.prod(dims))))


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_basis_index_bijection_hypothesis(data):
    dims = tuple(
        data.draw(st.lists(st.integers(2, 5), min_size=1, max_size=4), label="dims")
    )
    digits = tuple(data.draw(st.integers(0, d - 1)) for d in dims)
    assert index_to_digits(dims, basis_index(dims, digits)) == digits


# ---------------------------------------------------------------------------
# construction


def test_dims_validation():
    with pytest.raises(ValueError):
        QuditDims((1, 2))
    with pytest.raises(ValueError):
        QuditDims(())
    with pytest.raises(ValueError):
        QuditDims((2, 2), ("x",))
    with pytest.raises(ValueError):
        QuditDims((2, 2), ("x", "x"))


def test_pure_state_validation():
    with pytest.raises(DimensionMismatchError):
        PureState((2, 2), np.zeros(3))
    with pytest.raises(DegenerateStateError):
        PureState((2,), np.array([1.0, 1.0]), normalized=True)
    state = PureState((2,), np.array([1.0, 0.0]), normalized=True)
    with pytest.raises(ValueError):
        state.amps[0] = 5.0  # read-only


# ---------------------------------------------------------------------------
# tensor product


def test_tensor_basis_kets():
    got = tensor_product(basis_state((2,), (0,)), basis_state((2,), (1,)))
    assert got.dims.dims == (2, 2)
    np.testing.assert_allclose(got.amps, [0, 1, 0, 0])


def test_tensor_plus_with_zero():
    plus = PureState((2,), np.array([SQRT_HALF, SQRT_HALF]), normalized=True)
    got = tensor_product(plus, basis_state((2,), (0,)))
    np.testing.assert_allclose(got.amps, [SQRT_HALF, 0, SQRT_HALF, 0])


def test_tensor_unknown_with_epr_matches_index_loop():
    x0, x1 = 0.6, 0.8j
    chi = PureState((2,), np.array([x0, x1]), normalized=True)
    got = tensor_product(chi, epr_channel())

    # independent oracle: explicit index loop
    expected = np.zeros(8, complex)
    for i in range(2):
        for j in range(4):
            expected[i * 4 + j] = chi.amps[i] * epr_channel().amps[j]
    np.testing.assert_allclose(got.amps, expected, atol=1e-15)
    # frozen values from the loop above
    np.testing.assert_allclose(
        got.amps,
        [0.6 * SQRT_HALF, 0, 0, 0.6 * SQRT_HALF, 0.8j * SQRT_HALF, 0, 0, 0.8j * SQRT_HALF],
        atol=1e-15,
    )


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_tensor_norm_multiplicative(data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    a = PureState((2, 3), rng.standard_normal(6) + 1j * rng.standard_normal(6))
    b = PureState((2,), rng.standard_normal(2) + 1j * rng.standard_normal(2))
    assert tensor_product(a, b).norm() == pytest.approx(a.norm() * b.norm(), abs=1e-12)


# ---------------------------------------------------------------------------
# inner product


def test_inner_product_values():
    zero, one = basis_state((2,), (0,)), basis_state((2,), (1,))
    assert inner_product(zero, zero) == pytest.approx(1.0)
    assert inner_product(zero, one) == pytest.approx(0.0)
    plus = PureState((2, 2), np.array([SQRT_HALF, 0, 0, SQRT_HALF]), normalized=True)
    minus = PureState((2, 2), np.array([SQRT_HALF, 0, 0, -SQRT_HALF]), normalized=True)
    assert inner_product(plus, minus) == pytest.approx(0.0)


def test_inner_product_conjugates_left():
    a = PureState((2,), np.array([1j, 0]))
    b = PureState((2,), np.array([1.0, 0]))
    assert inner_product(a, b) == pytest.approx(-1j)


def test_inner_product_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        inner_product(basis_state((2,), (0,)), basis_state((3,), (0,)))


# ---------------------------------------------------------------------------
# permutation


def test_swap_basis_ket():
    got = permute_particles(basis_state((2, 2), (0, 1)), (1, 0))
    np.testing.assert_allclose(got.amps, basis_state((2, 2), (1, 0)).amps)


def test_swap_symmetric_state_fixed():
    bell = epr_channel()
    np.testing.assert_allclose(permute_particles(bell, (1, 0)).amps, bell.amps)


def test_reorder_two_qubit_coefficients():
    # listing the second particle first maps (a0, a1, a2, a3) -> (a0, a2, a1, a3)
    state = PureState((2, 2), np.array([1.0, 2.0, 3.0, 4.0]))
    got = permute_particles(state, (1, 0))
    np.testing.assert_allclose(got.amps, [1.0, 3.0, 2.0, 4.0])


def test_permute_inverse_is_identity(rng):
    state = PureState((2, 3, 2, 2), rng.standard_normal(24) + 1j * rng.standard_normal(24))
    order = (2, 0, 3, 1)
    inverse = tuple(int(i) for i in np.argsort(order))
    back = permute_particles(permute_particles(state, order), inverse)
    np.testing.assert_allclose(back.amps, state.amps)
    assert back.dims.dims == state.dims.dims


def test_permute_rejects_bad_orders():
    state = basis_state((2, 2), (0, 0))
    with pytest.raises(ValueError):
        permute_particles(state, (0, 0))
    with pytest.raises(ValueError):
        permute_particles(state, (0, 1, 2))


def test_permute_preserves_norm_and_inner_products(rng):
    for _ in range(20):
        a = PureState((2, 2, 3), rng.standard_normal(12) + 1j * rng.standard_normal(12))
        b = PureState((2, 2, 3), rng.standard_normal(12) + 1j * rng.standard_normal(12))
        order = tuple(rng.permutation(3))
        pa, pb = permute_particles(a, order), permute_particles(b, order)
        assert pa.norm() == pytest.approx(a.norm(), abs=1e-12)
        assert inner_product(pa, pb) == pytest.approx(inner_product(a, b), abs=1e-12)


def test_swap_identity_against_loop_oracle(rng):
    # composing the unknown in front of the channel equals swapping the
    # unknown onto Bob's slot of the independently built product state
    for _ in range(50):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(2, 5))
        chi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        chi /= np.linalg.norm(chi)
        psi = rng.standard_normal(n * m) + 1j * rng.standard_normal(n * m)
        psi /= np.linalg.norm(psi)

        direct = np.kron(chi, psi)
        swapped_build = np.zeros((n, n, m), complex)
        psi_mat = psi.reshape(n, m)
        for x in range(n):
            for y in range(n):
                for z in range(m):
                    swapped_build[x, y, z] = chi[y] * psi_mat[x, z]
        state = PureState((n, n, m), swapped_build.reshape(-1))
        got = permute_particles(state, (1, 0, 2))
        np.testing.assert_allclose(got.amps, direct, atol=1e-12)


# ---------------------------------------------------------------------------
# normalize


def test_normalize_examples():
    np.testing.assert_allclose(
        normalize(PureState((2,), np.array([2.0, 0.0]))).amps, [1.0, 0.0]
    )
    np.testing.assert_allclose(
        normalize(PureState((2,), np.array([1.0, 1.0]))).amps, [SQRT_HALF, SQRT_HALF]
    )


def test_normalize_zero_vector_raises():
    with pytest.raises(DegenerateStateError):
        normalize(PureState((2,), np.zeros(2)))


def test_normalize_direction_preserved(rng):
    vec = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    state = PureState((2, 3), vec)
    out = normalize(state)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(out.amps * state.norm(), state.amps, atol=1e-12)
