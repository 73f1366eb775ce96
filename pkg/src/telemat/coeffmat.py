"""Channel, measurement and collapsed matrices of a teleportation setup.

The channel matrix of a shared state is its amplitude tensor reshaped so
that rows index Bob's composite basis and columns index Alice's.  Each
measurement-basis element reshapes the same way into a measurement matrix
(rows: Alice's channel particles, columns: the unknown-state register).
Their product ``C @ conj(M)`` is the collapsed matrix: it maps the unknown
state's coefficient vector to Bob's unnormalized post-measurement state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    BasisValidationError,
    DimensionMismatchError,
    InvalidPartitionError,
)
from .qstate import PureState, QuditDims

RANK_REL_TOL = 1e-10
UNITARY_ABS_TOL = 1e-9
ORTHO_TOL = 1e-9


@dataclass(frozen=True)
class Bipartition:
    """Assignment of particle slots to Bob (rows) and Alice (columns).

    Slot order within each side is significant: it fixes the big-endian
    composite index of that side.
    """

    bob_slots: tuple[int, ...]
    alice_slots: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bob_slots", tuple(int(s) for s in self.bob_slots))
        object.__setattr__(self, "alice_slots", tuple(int(s) for s in self.alice_slots))
        if not self.bob_slots or not self.alice_slots:
            raise InvalidPartitionError("both sides of a bipartition must be non-empty")
        overlap = set(self.bob_slots) & set(self.alice_slots)
        if overlap:
            raise InvalidPartitionError(f"slots {sorted(overlap)} assigned to both sides")
        if len(set(self.bob_slots)) != len(self.bob_slots) or len(
            set(self.alice_slots)
        ) != len(self.alice_slots):
            raise InvalidPartitionError("repeated slot within one side")

    def validate_for(self, dims: QuditDims) -> tuple[int, int]:
        """Check the partition covers ``dims`` exactly; return (n, m)."""
        covered = sorted(self.bob_slots + self.alice_slots)
        if covered != list(range(len(dims))):
            raise InvalidPartitionError(
                f"partition {self.bob_slots}|{self.alice_slots} does not cover "
                f"the {len(dims)} particle slots exactly once"
            )
        n = int(np.prod([dims.dims[s] for s in self.bob_slots]))
        m = int(np.prod([dims.dims[s] for s in self.alice_slots]))
        return n, m


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """n x m coefficient matrix of the shared channel state."""

    entries: np.ndarray
    n: int
    m: int
    partition: Bipartition

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128)
        if entries.shape != (self.n, self.m):
            raise DimensionMismatchError(
                f"channel matrix shape {entries.shape} != ({self.n}, {self.m})"
            )
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True, eq=False)
class MeasurementMatrix:
    """m x n coefficient matrix of one measurement-basis element."""

    entries: np.ndarray
    outcome_id: int = 0

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128)
        if entries.ndim != 2:
            raise DimensionMismatchError("measurement matrix must be 2-D")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True, eq=False)
class CollapsedMatrix:
    """Collapsed matrix for one outcome: ``C @ conj(M)``.

    Square (n x n) whenever the unknown register matches Bob's dimension,
    which is the standard protocol; rectangular shapes are tolerated so
    mismatched setups can still be ranked.
    """

    entries: np.ndarray
    outcome_id: int = 0

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128)
        if entries.ndim != 2:
            raise DimensionMismatchError("collapsed matrix must be 2-D")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Ordered orthonormal states on Alice's composite measurement space.

    Element order defines the outcome ids.  Orthonormality is checked by
    :func:`validate_basis`, not at construction, so that defective sets
    can be loaded and diagnosed.
    """

    elements: tuple[PureState, ...]

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if not elements:
            raise BasisValidationError("a measurement basis needs at least one element")
        dim = elements[0].dim
        for r, el in enumerate(elements):
            if el.dim != dim:
                raise BasisValidationError(
                    f"element {r} has dimension {el.dim}, expected {dim}"
                )
        if len(elements) > dim:
            raise BasisValidationError(
                f"{len(elements)} elements cannot be orthonormal in dimension {dim}"
            )

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    @property
    def count(self) -> int:
        return len(self.elements)

    @property
    def complete(self) -> bool:
        return self.count == self.dim


def _entries(mat) -> np.ndarray:
    if isinstance(mat, (ChannelMatrix, MeasurementMatrix, CollapsedMatrix)):
        return mat.entries
    return np.asarray(mat, dtype=np.complex128)


def build_channel_matrix(state: PureState, partition: Bipartition) -> ChannelMatrix:
    """Reshape a channel state into its n x m channel matrix.

    Entry (i, j) is the amplitude at the multi-index whose Bob slots (in
    ``bob_slots`` order) spell i big-endian and whose Alice slots spell j.
    """
    n, m = partition.validate_for(state.dims)
    tensor = state.amps.reshape(state.dims.dims)
    mat = tensor.transpose(partition.bob_slots + partition.alice_slots).reshape(n, m)
    return ChannelMatrix(mat, n, m, partition)


def build_measurement_matrix(
    element: PureState, m: int, n: int, outcome_id: int = 0
) -> MeasurementMatrix:
    """Reshape a basis element on the (Alice-channel, unknown) space to m x n.

    The element must be ordered with Alice's channel particles first and
    the unknown register second.
    """
    if element.dim != m * n:
        raise DimensionMismatchError(
            f"basis element has dimension {element.dim}, expected {m}*{n}"
        )
    return MeasurementMatrix(element.amps.reshape(m, n), outcome_id)


def collapsed_matrix(c: ChannelMatrix, m: MeasurementMatrix) -> CollapsedMatrix:
    """Collapsed matrix ``C @ conj(M)`` (entrywise conjugate, no transpose)."""
    cm = _entries(c)
    mm = _entries(m)
    if cm.shape[1] != mm.shape[0]:
        raise DimensionMismatchError(
            f"channel matrix is {cm.shape}, measurement matrix {mm.shape}"
        )
    return CollapsedMatrix(cm @ np.conj(mm), getattr(m, "outcome_id", 0))


def numerical_rank(mat, rel_tol: float = RANK_REL_TOL) -> int:
    """Count singular values above ``rel_tol * max(shape) * s_max``.

    The zero matrix has rank 0.
    """
    entries = _entries(mat)
    if entries.size == 0:
        raise DimensionMismatchError("rank of an empty matrix")
    s = np.linalg.svd(entries, compute_uv=False)
    s_max = float(s[0])
    if s_max == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * max(entries.shape) * s_max))


class ScaledUnitaryCheck(NamedTuple):
    ok: bool
    k: float


def is_scaled_unitary(mat, abs_tol: float = UNITARY_ABS_TOL) -> ScaledUnitaryCheck:
    """Test whether ``mat = k * U`` for some k > 0 and unitary U.

    k is ``sqrt(trace(mat @ mat^dagger) / r)`` with r the smaller side; the
    flag holds when the Gram matrix of the smaller side deviates from
    ``k^2 * I`` by at most ``abs_tol`` per entry and ``k > abs_tol``.  For
    rectangular input the test means "k times an isometry" (orthonormal
    rows or columns, whichever side is smaller).
    """
    entries = _entries(mat)
    rows, cols = entries.shape
    r = min(rows, cols)
    if rows <= cols:
        gram = entries @ entries.conj().T
    else:
        gram = entries.conj().T @ entries
    k_sq = float(np.trace(gram).real) / r
    k = float(np.sqrt(max(k_sq, 0.0)))
    deviation = float(np.max(np.abs(gram - k_sq * np.eye(r))))
    return ScaledUnitaryCheck(bool(deviation <= abs_tol and k > abs_tol), k)


@dataclass(frozen=True)
class BasisValidation:
    """Orthonormality report for a measurement basis."""

    orthonormal: bool
    complete: bool
    max_deviation: float
    offending_pairs: tuple[tuple[int, int], ...]
    count: int
    dim: int


def validate_basis(basis: MeasurementBasis, tol: float = ORTHO_TOL) -> BasisValidation:
    """Check pairwise ``|<r|s> - delta_rs|`` against ``tol``.

    ``offending_pairs`` lists (r, s) with r <= s for every violation; the
    diagonal entries report normalization failures.
    """
    stack = np.column_stack([el.amps for el in basis.elements])
    gram = stack.conj().T @ stack
    deviation = np.abs(gram - np.eye(basis.count))
    offending = [
        (r, s)
        for r in range(basis.count)
        for s in range(r, basis.count)
        if deviation[r, s] > tol
    ]
    return BasisValidation(
        orthonormal=not offending,
        complete=basis.complete,
        max_deviation=float(deviation.max()),
        offending_pairs=tuple(offending),
        count=basis.count,
        dim=basis.dim,
    )
