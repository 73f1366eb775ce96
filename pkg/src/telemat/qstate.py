"""Dense multi-qudit pure states.

A state is a flat complex amplitude vector over an ordered list of local
dimensions.  Indexing is big-endian mixed radix: the first-listed particle
is the most significant digit, so ``|b1 b2 ...>`` reads left to right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateStateError, DimensionMismatchError

NORM_TOL = 1e-9

DimsLike = "QuditDims | Sequence[int]"


@dataclass(frozen=True)
class QuditDims:
    """Ordered local dimensions of a register, with optional particle labels."""

    dims: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise ValueError("a register needs at least one particle")
        bad = [d for d in dims if d < 2]
        if bad:
            raise ValueError(f"every local dimension must be >= 2, got {dims}")
        if self.labels is not None:
            labels = tuple(str(name) for name in self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != len(dims):
                raise ValueError(
                    f"{len(labels)} labels for {len(dims)} particles"
                )
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate particle labels in {labels}")

    @property
    def size(self) -> int:
        """Total Hilbert-space dimension (product of local dimensions)."""
        return math.prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)


def _as_dims(dims: "DimsLike") -> QuditDims:
    if isinstance(dims, QuditDims):
        return dims
    return QuditDims(tuple(dims))


def basis_index(dims: "DimsLike", digits: Sequence[int]) -> int:
    """Flat index of the computational basis state with the given digits.

    Big-endian: the first particle is most significant.  For example
    ``dims=(2, 3, 2), digits=(1, 2, 1)`` gives ``1*6 + 2*2 + 1 = 11``.
    """
    qd = _as_dims(dims)
    if len(digits) != len(qd):
        raise DimensionMismatchError(
            f"{len(digits)} digits for {len(qd)} particles"
        )
    index = 0
    for slot, (digit, dim) in enumerate(zip(digits, qd.dims)):
        digit = int(digit)
        if not 0 <= digit < dim:
            raise IndexError(
                f"digit {digit} out of range for particle {slot} (dim {dim})"
            )
        index = index * dim + digit
    return index


def index_to_digits(dims: "DimsLike", index: int) -> tuple[int, ...]:
    """Inverse of :func:`basis_index`."""
    qd = _as_dims(dims)
    if not 0 <= index < qd.size:
        raise IndexError(f"index {index} out of range for dims {qd.dims}")
    digits = []
    for dim in reversed(qd.dims):
        digits.append(index % dim)
        index //= dim
    return tuple(reversed(digits))


@dataclass(frozen=True, eq=False)
class PureState:
    """A pure state as a dense amplitude vector.

    Values are immutable after construction; the amplitude array is marked
    read-only.  When ``normalized`` is set the squared norm must be 1
    within ``NORM_TOL``.
    """

    dims: QuditDims
    amps: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        qd = _as_dims(self.dims)
        object.__setattr__(self, "dims", qd)
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != qd.size:
            raise DimensionMismatchError(
                f"{amps.size} amplitudes for dims {qd.dims} "
                f"(expected {qd.size})"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)
        if self.normalized:
            sq = float(np.vdot(amps, amps).real)
            if abs(sq - 1.0) > NORM_TOL:
                raise DegenerateStateError(
                    f"state flagged normalized but sum |amp|^2 = {sq!r}"
                )

    @property
    def dim(self) -> int:
        return self.dims.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def amplitude(self, digits: Sequence[int]) -> complex:
        """Amplitude of one computational basis state."""
        return complex(self.amps[basis_index(self.dims, digits)])

    def __repr__(self) -> str:
        return (
            f"PureState(dims={self.dims.dims}, "
            f"nnz={int(np.count_nonzero(self.amps))}, "
            f"normalized={self.normalized})"
        )


def basis_state(dims: "DimsLike", digits: Sequence[int]) -> PureState:
    """Computational basis state ``|digits>``."""
    qd = _as_dims(dims)
    amps = np.zeros(qd.size, dtype=np.complex128)
    amps[basis_index(qd, digits)] = 1.0
    return PureState(qd, amps, normalized=True)


def _merged_labels(a: QuditDims, b: QuditDims) -> tuple[str, ...] | None:
    if a.labels is None or b.labels is None:
        return None
    merged = a.labels + b.labels
    if len(set(merged)) != len(merged):
        return None  # colliding labels carry no information
    return merged


def tensor_product(a: PureState, b: PureState) -> PureState:
    """Kronecker product ``a (x) b``; dims concatenate, a's particles first."""
    dims = QuditDims(a.dims.dims + b.dims.dims, _merged_labels(a.dims, b.dims))
    return PureState(
        dims,
        np.kron(a.amps, b.amps),
        normalized=a.normalized and b.normalized,
    )


def inner_product(a: PureState, b: PureState) -> complex:
    """Hermitian inner product ``<a|b>`` (conjugate-linear in ``a``)."""
    if a.dims.dims != b.dims.dims:
        raise DimensionMismatchError(
            f"inner product between dims {a.dims.dims} and {b.dims.dims}"
        )
    return complex(np.vdot(a.amps, b.amps))


def permute_particles(state: PureState, order: Sequence[int]) -> PureState:
    """Reorder particle slots.

    ``order[k]`` is the slot of ``state`` that becomes slot ``k`` of the
    result, exactly like the ``axes`` argument of ``numpy.transpose``.
    Applying ``order`` and then its inverse is the identity.
    """
    order = tuple(int(k) for k in order)
    if sorted(order) != list(range(len(state.dims))):
        raise ValueError(
            f"{order} is not a permutation of the {len(state.dims)} slots"
        )
    new_dims = QuditDims(
        tuple(state.dims.dims[k] for k in order),
        None
        if state.dims.labels is None
        else tuple(state.dims.labels[k] for k in order),
    )
    tensor = state.amps.reshape(state.dims.dims)
    return PureState(
        new_dims,
        tensor.transpose(order).reshape(-1),
        normalized=state.normalized,
    )


def normalize(state: PureState) -> PureState:
    """Scale to unit norm; raises on the zero vector."""
    nrm = state.norm()
    if nrm <= 0.0 or not math.isfinite(nrm):
        raise DegenerateStateError("cannot normalize a zero state")
    return PureState(state.dims, state.amps / nrm, normalized=True)
