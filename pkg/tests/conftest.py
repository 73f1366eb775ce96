"""Shared constructors for the worked states and random instances."""

from __future__ import annotations

import numpy as np
import pytest

from telemat import (
    Bipartition,
    MeasurementBasis,
    PureState,
    QuditDims,
    build_channel_matrix,
    permute_particles,
)

SQRT_HALF = 1.0 / np.sqrt(2.0)

BELL_VECTORS = [
    [SQRT_HALF, 0, 0, SQRT_HALF],
    [SQRT_HALF, 0, 0, -SQRT_HALF],
    [0, SQRT_HALF, SQRT_HALF, 0],
    [0, SQRT_HALF, -SQRT_HALF, 0],
]


def epr_channel() -> PureState:
    """Maximally entangled pair, Bob's particle listed first."""
    return PureState(
        QuditDims((2, 2), ("1", "2")),
        np.array([SQRT_HALF, 0, 0, SQRT_HALF], complex),
        normalized=True,
    )


def bell_basis() -> MeasurementBasis:
    return MeasurementBasis(
        tuple(
            PureState(QuditDims((2, 2), ("A", "a")), np.array(v, complex), normalized=True)
            for v in BELL_VECTORS
        )
    )


def w_channel(a2: complex = 0.5, a4: complex = 0.5) -> PureState:
    """Three-qubit W-class state; Alice holds particles 1,2 and Bob particle 3."""
    amps = np.zeros(8, complex)
    amps[1] = SQRT_HALF
    amps[2] = a2
    amps[4] = a4
    return PureState(QuditDims((2, 2, 2), ("1", "2", "3")), amps, normalized=True)


W_PARTITION = Bipartition((2,), (0, 1))


def w_basis(a2: complex = 0.5, a4: complex = 0.5) -> MeasurementBasis:
    """Von Neumann basis matched to the W-class channel, on (1, 2, a)."""
    elements = []
    for sign, shifted in [(1, False), (-1, False), (1, True), (-1, True)]:
        amps = np.zeros(8, complex)
        if shifted:
            amps[0], amps[3], amps[5] = sign * SQRT_HALF, a2, a4
        else:
            amps[1], amps[2], amps[4] = sign * SQRT_HALF, a2, a4
        elements.append(
            PureState(QuditDims((2, 2, 2), ("1", "2", "a")), amps, normalized=True)
        )
    return MeasurementBasis(tuple(elements))


YC_SIGNED_INDICES = [(0, 1), (3, -1), (5, -1), (6, 1), (9, 1), (10, 1), (12, 1), (15, 1)]


def yeo_chua_state() -> PureState:
    amps = np.zeros(16, complex)
    scale = 1.0 / (2.0 * np.sqrt(2.0))
    for index, sign in YC_SIGNED_INDICES:
        amps[index] = sign * scale
    return PureState(QuditDims((2, 2, 2, 2), ("1", "2", "3", "4")), amps, normalized=True)


YC_BOB_12 = Bipartition((0, 1), (2, 3))
YC_BOB_14 = Bipartition((0, 3), (1, 2))


def bell_product_basis() -> MeasurementBasis:
    """Pairwise Bell measurements on (A1, a1) and (A2, a2), stored (A1 A2 a1 a2)."""
    mats = [np.array(v, complex).reshape(2, 2) for v in BELL_VECTORS]
    elements = []
    for left in mats:
        for right in mats:
            tensor = np.einsum("kl,mn->kmln", left, right)
            elements.append(
                PureState(
                    QuditDims((2, 2, 2, 2), ("A1", "A2", "a1", "a2")),
                    tensor.reshape(-1),
                    normalized=True,
                )
            )
    return MeasurementBasis(tuple(elements))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a complex Gaussian."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_complete_basis(m: int, n: int, rng: np.random.Generator) -> MeasurementBasis:
    """Complete orthonormal basis on the (m, n) measurement space."""
    u = haar_unitary(m * n, rng)
    return MeasurementBasis(
        tuple(PureState(QuditDims((m, n)), u[:, r], normalized=True) for r in range(m * n))
    )


def apply_local_unitaries(
    state: PureState, partition: Bipartition, u_bob: np.ndarray, u_alice: np.ndarray
) -> PureState:
    """Apply U_B (x) U_A across a bipartition, preserving the slot order."""
    cmat = build_channel_matrix(state, partition)
    transformed = u_bob @ cmat.entries @ u_alice.T
    grouped_dims = tuple(
        state.dims.dims[s] for s in partition.bob_slots + partition.alice_slots
    )
    grouped = PureState(QuditDims(grouped_dims), transformed.reshape(-1))
    order = partition.bob_slots + partition.alice_slots
    inverse = tuple(int(i) for i in np.argsort(order))
    return permute_particles(grouped, inverse)


def transform_basis_alice_side(
    basis: MeasurementBasis, m: int, u_alice: np.ndarray
) -> MeasurementBasis:
    """Apply (U_A (x) I) to every element's Alice-channel factor."""
    elements = []
    for el in basis.elements:
        block = el.amps.reshape(m, -1)
        elements.append(PureState(el.dims, (u_alice @ block).reshape(-1)))
    return MeasurementBasis(tuple(elements))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
