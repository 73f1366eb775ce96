"""Teleportation verdicts from channel/measurement/collapsed-matrix ranks.

A channel and measurement basis teleport perfectly when every reachable
collapsed matrix is a constant times a unitary.  Short of that, the ranks
bound what survives: an invertible-but-non-unitary collapsed matrix allows
only approximate recovery, and a rank-deficient one restricts perfect
transfer to a subspace of inputs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .coeffmat import (
    Bipartition,
    MeasurementBasis,
    RANK_REL_TOL,
    UNITARY_ABS_TOL,
    _entries,
    build_channel_matrix,
    build_measurement_matrix,
    collapsed_matrix,
    is_scaled_unitary,
    numerical_rank,
    validate_basis,
)
from .errors import BasisValidationError
from .qstate import PureState

CLUSTER_REL_TOL = 1e-8
ZERO_MATRIX_TOL = 1e-12


class Category(enum.Enum):
    PERFECT = "perfect"
    FULL_RANK_IMPERFECT = "full-rank-imperfect"
    SUBSPACE_ONLY = "subspace-only"
    IMPOSSIBLE = "impossible"


@dataclass(frozen=True)
class TeleportVerdict:
    """Classification of one channel + basis instance.

    ``scales`` holds the per-outcome constant k where the collapsed matrix
    is a scaled unitary, else None.  ``subspace_dim`` is set for the
    SUBSPACE_ONLY category (largest per-outcome teleportable dimension).
    ``input_dependent_probabilities`` flags perfect verdicts whose
    outcome scales differ, making outcome probabilities depend on the
    input state.
    """

    n: int
    m: int
    unknown_dim: int
    channel_rank: int
    measurement_ranks: tuple[int, ...]
    collapsed_ranks: tuple[int, ...]
    category: Category
    scales: tuple[float | None, ...]
    zero_outcomes: tuple[int, ...]
    subspace_dim: int | None = None
    input_dependent_probabilities: bool = False


@dataclass(frozen=True, eq=False)
class SubspaceReport:
    """Largest input subspace on which a collapsed matrix is a scaled isometry.

    ``basis_vectors`` has orthonormal columns spanning the subspace;
    ``eigenvalue`` is the shared eigenvalue of sigma^dagger sigma there
    (the squared singular value, i.e. the squared isometry scale).
    """

    dimension: int
    basis_vectors: np.ndarray
    eigenvalue: float


class RankCase(NamedTuple):
    case: Literal["i", "ii", "iii"]
    collapsed_rank_bound: int
    teleportable: bool


def rank_case(n: int, m: int, r_c: int) -> RankCase:
    """Which shape regime applies and the implied bound on collapsed rank.

    Case "i" (n < m) and case "iii" (n = m) admit perfect teleportation of
    a general n-dimensional state only when the channel matrix has full
    rank n; case "ii" (n > m) never does, since the collapsed rank is
    capped at m < n.
    """
    if n < 1 or m < 1:
        raise ValueError(f"dimensions must be positive, got n={n}, m={m}")
    if not 0 <= r_c <= min(n, m):
        raise ValueError(f"channel rank {r_c} out of range for {n}x{m}")
    if n < m:
        return RankCase("i", r_c, r_c == n)
    if n > m:
        return RankCase("ii", r_c, False)
    return RankCase("iii", r_c, r_c == n)


def teleportable_subspace(
    sigma, cluster_tol: float = CLUSTER_REL_TOL
) -> SubspaceReport:
    """Extract the perfect-teleportation input subspace of one outcome.

    Eigendecomposes sigma^dagger sigma, clusters eigenvalues that agree
    within ``cluster_tol`` relative to the largest, and returns the
    largest cluster above the noise floor (ties broken toward the larger
    eigenvalue).  Restricted to the returned span, sigma acts as
    ``sqrt(eigenvalue)`` times an isometry, so inputs supported there are
    recovered exactly after the unitary correction.
    """
    entries = _entries(sigma)
    cols = entries.shape[1]
    gram = entries.conj().T @ entries
    evals, evecs = np.linalg.eigh(gram)
    evals = np.maximum(evals, 0.0)
    top = float(evals[-1])
    if top <= 0.0:
        return SubspaceReport(0, np.zeros((cols, 0), dtype=np.complex128), 0.0)

    floor = cluster_tol * top
    order = np.argsort(evals)[::-1]
    clusters: list[list[int]] = [[int(order[0])]]
    for idx in order[1:]:
        prev = float(evals[clusters[-1][-1]])
        if prev - float(evals[idx]) <= cluster_tol * top:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])

    best: list[int] | None = None
    best_val = 0.0
    for cluster in clusters:
        val = float(np.mean(evals[cluster]))
        if val <= floor:
            continue
        if best is None or len(cluster) > len(best) or (
            len(cluster) == len(best) and val > best_val
        ):
            best, best_val = cluster, val
    if best is None:
        return SubspaceReport(0, np.zeros((cols, 0), dtype=np.complex128), 0.0)
    vectors = np.ascontiguousarray(evecs[:, best])
    vectors.flags.writeable = False
    return SubspaceReport(len(best), vectors, best_val)


def classify(
    channel: PureState,
    partition: Bipartition,
    basis: MeasurementBasis,
    *,
    rank_tol: float = RANK_REL_TOL,
    unitary_tol: float = UNITARY_ABS_TOL,
    cluster_tol: float = CLUSTER_REL_TOL,
) -> TeleportVerdict:
    """Classify a channel + measurement basis by the rank criterion.

    The basis must be orthonormal.  The unknown register's dimension is
    inferred from the element dimension (element dim = m * unknown dim).
    Outcomes whose collapsed matrix vanishes identically can never occur
    and are excluded from the perfect/full-rank checks, but reported.
    """
    cmat = build_channel_matrix(channel, partition)
    n, m = cmat.n, cmat.m

    check = validate_basis(basis)
    if not check.orthonormal:
        raise BasisValidationError(
            f"basis not orthonormal: max deviation {check.max_deviation:.3e} "
            f"at pairs {check.offending_pairs}"
        )
    if basis.dim % m != 0:
        raise BasisValidationError(
            f"basis element dimension {basis.dim} is not a multiple of the "
            f"Alice channel dimension {m}"
        )
    unknown_dim = basis.dim // m

    measurement_ranks: list[int] = []
    collapsed_ranks: list[int] = []
    scales: list[float | None] = []
    zero_outcomes: list[int] = []
    unitary_flags: list[bool] = []
    subspace_dims: list[int] = []

    for r, element in enumerate(basis.elements):
        mm = build_measurement_matrix(element, m, unknown_dim, r)
        sigma = collapsed_matrix(cmat, mm)
        measurement_ranks.append(numerical_rank(mm, rank_tol))
        collapsed_ranks.append(numerical_rank(sigma, rank_tol))
        if float(np.max(np.abs(sigma.entries))) <= ZERO_MATRIX_TOL:
            zero_outcomes.append(r)
            scales.append(None)
            unitary_flags.append(False)
            subspace_dims.append(0)
            continue
        ok, k = is_scaled_unitary(sigma, unitary_tol)
        scales.append(k if ok else None)
        unitary_flags.append(ok)
        subspace_dims.append(teleportable_subspace(sigma, cluster_tol).dimension)

    channel_rank = numerical_rank(cmat, rank_tol)
    live = [r for r in range(basis.count) if r not in zero_outcomes]

    category: Category
    subspace_dim: int | None = None
    input_dependent = False
    if unknown_dim > m or unknown_dim > n:
        category = Category.IMPOSSIBLE
    elif live and all(unitary_flags[r] for r in live):
        category = Category.PERFECT
        ks = [scales[r] for r in live]
        input_dependent = max(ks) - min(ks) > unitary_tol
    elif live and all(collapsed_ranks[r] == unknown_dim for r in live):
        category = Category.FULL_RANK_IMPERFECT
    else:
        category = Category.SUBSPACE_ONLY
        subspace_dim = max(subspace_dims, default=0)

    return TeleportVerdict(
        n=n,
        m=m,
        unknown_dim=unknown_dim,
        channel_rank=channel_rank,
        measurement_ranks=tuple(measurement_ranks),
        collapsed_ranks=tuple(collapsed_ranks),
        category=category,
        scales=tuple(scales),
        zero_outcomes=tuple(zero_outcomes),
        subspace_dim=subspace_dim,
        input_dependent_probabilities=input_dependent,
    )
