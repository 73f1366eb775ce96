"""Brute-force state-vector teleportation simulator.

Everything here works on raw amplitude tensors: the full system state is
composed, measurement outcomes are projected out by direct contraction,
and Bob's corrected state is compared with the original input.  This is
the independent cross-check for the matrix algebra in ``coeffmat``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .coeffmat import (
    Bipartition,
    CollapsedMatrix,
    MeasurementBasis,
    _entries,
    build_channel_matrix,
    build_measurement_matrix,
    collapsed_matrix,
    validate_basis,
)
from .errors import (
    BasisValidationError,
    DegenerateStateError,
    DimensionMismatchError,
)
from .qstate import PureState, QuditDims, tensor_product

PROB_FLOOR = 1e-18


@dataclass(frozen=True, eq=False)
class OutcomeRecord:
    """One measurement outcome of a simulated teleportation run.

    ``bob_state_raw`` is the unnormalized branch on Bob's register (its
    squared norm is the outcome probability); it is None in reports that
    aggregate over sampled inputs.  ``unreached`` marks outcomes with
    (numerically) zero probability, whose fidelity is 1 by convention and
    excluded from averages.
    """

    outcome_id: int
    probability: float
    bob_state_raw: PureState | None
    sigma_prediction: CollapsedMatrix
    corrected_fidelity: float
    unreached: bool = False


@dataclass(frozen=True, eq=False)
class SimulationReport:
    outcomes: tuple[OutcomeRecord, ...]
    average_fidelity: float
    input_description: str
    samples: int = 1
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "input": self.input_description,
            "samples": self.samples,
            "seed": self.seed,
            "average_fidelity": self.average_fidelity,
            "outcomes": [
                {
                    "outcome": rec.outcome_id,
                    "probability": rec.probability,
                    "corrected_fidelity": rec.corrected_fidelity,
                    "unreached": rec.unreached,
                    "bob_state_raw": None
                    if rec.bob_state_raw is None
                    else [[z.real, z.imag] for z in rec.bob_state_raw.amps],
                }
                for rec in self.outcomes
            ],
        }


class BranchCheck(NamedTuple):
    max_deviation: float
    partial: bool


def haar_random_state(dims, rng: np.random.Generator) -> PureState:
    """Haar-random pure state: normalized i.i.d. complex Gaussian amplitudes."""
    qd = dims if isinstance(dims, QuditDims) else QuditDims(tuple(dims))
    vec = rng.standard_normal(qd.size) + 1j * rng.standard_normal(qd.size)
    return PureState(qd, vec / np.linalg.norm(vec), normalized=True)


def compose_system(
    unknown: PureState, channel: PureState, partition: Bipartition
) -> PureState:
    """Full system state: unknown register first, then the channel particles."""
    n, _ = partition.validate_for(channel.dims)
    if unknown.dim != n:
        raise DimensionMismatchError(
            f"unknown state has dimension {unknown.dim} but Bob's side of the "
            f"channel has dimension {n}"
        )
    return tensor_product(unknown, channel)


def _element_tensor(
    element: PureState, system_dims: tuple[int, ...], alice_axes: list[int],
    unknown_axes: list[int],
) -> np.ndarray:
    shape = tuple(system_dims[ax] for ax in alice_axes + unknown_axes)
    if element.dim != int(np.prod(shape)):
        raise DimensionMismatchError(
            f"basis element dimension {element.dim} does not match the "
            f"measured space of dimension {int(np.prod(shape))}"
        )
    return element.amps.reshape(shape)


def project_outcome(
    system: PureState,
    basis_element: PureState,
    partition: Bipartition,
    unknown_slots: int,
) -> tuple[float, PureState]:
    """Project the system on one outcome; return (probability, Bob branch).

    The basis element lives on Alice's measured space ordered channel
    particles first, unknown register second.  The returned branch is
    unnormalized: its squared norm is the outcome probability.
    """
    dims = system.dims.dims
    unknown_axes = list(range(unknown_slots))
    alice_axes = [unknown_slots + s for s in partition.alice_slots]
    bob_axes = [unknown_slots + s for s in partition.bob_slots]

    tensor = system.amps.reshape(dims)
    element = _element_tensor(basis_element, dims, alice_axes, unknown_axes)
    branch = np.einsum(
        tensor,
        list(range(len(dims))),
        np.conj(element),
        alice_axes + unknown_axes,
        bob_axes,
    ).reshape(-1)
    probability = float(np.vdot(branch, branch).real)
    bob_dims = QuditDims(
        tuple(dims[ax] for ax in bob_axes),
        None
        if system.dims.labels is None
        else tuple(system.dims.labels[ax] for ax in bob_axes),
    )
    return probability, PureState(bob_dims, branch)


def verify_branch_decomposition(
    unknown: PureState,
    channel: PureState,
    partition: Bipartition,
    basis: MeasurementBasis,
) -> BranchCheck:
    """Rebuild the system state from its outcome branches and compare.

    Each branch is the basis element tensored with the collapsed matrix
    applied to the unknown coefficients.  For a complete basis the
    reconstruction must match the composed system exactly; for an
    incomplete one the deviation measures the amplitude mass outside the
    spanned subspace and the result is flagged partial.
    """
    system = compose_system(unknown, channel, partition)
    cmat = build_channel_matrix(channel, partition)
    dims = system.dims.dims
    unknown_slots = len(unknown.dims)
    unknown_axes = list(range(unknown_slots))
    alice_axes = [unknown_slots + s for s in partition.alice_slots]
    bob_axes = [unknown_slots + s for s in partition.bob_slots]
    bob_shape = tuple(dims[ax] for ax in bob_axes)

    recon = np.zeros(dims, dtype=np.complex128)
    for r, el in enumerate(basis.elements):
        mm = build_measurement_matrix(el, cmat.m, unknown.dim, r)
        branch = (cmat.entries @ np.conj(mm.entries) @ unknown.amps).reshape(bob_shape)
        element = _element_tensor(el, dims, alice_axes, unknown_axes)
        recon += np.einsum(
            element,
            alice_axes + unknown_axes,
            branch,
            bob_axes,
            list(range(len(dims))),
        )
    deviation = float(np.max(np.abs(recon.reshape(-1) - system.amps)))
    return BranchCheck(deviation, partial=not basis.complete)


def correction_operator(sigma) -> np.ndarray:
    """Bob's correcting unitary: adjoint of the polar factor of sigma.

    With sigma = U P (polar decomposition), returns U^dagger; when sigma
    is exactly k times a unitary this recovers k * identity.
    """
    entries = _entries(sigma)
    if float(np.max(np.abs(entries))) == 0.0:
        raise DegenerateStateError("zero collapsed matrix has no polar factor")
    w, _, vh = np.linalg.svd(entries, full_matrices=False)
    return (w @ vh).conj().T


def _single_input_records(
    unknown: PureState,
    channel: PureState,
    partition: Bipartition,
    basis: MeasurementBasis,
) -> list[OutcomeRecord]:
    system = compose_system(unknown, channel, partition)
    cmat = build_channel_matrix(channel, partition)
    unknown_slots = len(unknown.dims)
    records = []
    for r, el in enumerate(basis.elements):
        mm = build_measurement_matrix(el, cmat.m, unknown.dim, r)
        sigma = collapsed_matrix(cmat, mm)
        probability, branch = project_outcome(system, el, partition, unknown_slots)
        if probability <= PROB_FLOOR:
            records.append(
                OutcomeRecord(r, probability, branch, sigma, 1.0, unreached=True)
            )
            continue
        correction = correction_operator(sigma)
        overlap = np.vdot(unknown.amps, correction @ branch.amps)
        fidelity = float(abs(overlap) ** 2 / probability)
        records.append(OutcomeRecord(r, probability, branch, sigma, fidelity))
    return records


def run_teleportation(
    unknown: PureState | str,
    channel: PureState,
    partition: Bipartition,
    basis: MeasurementBasis,
    *,
    samples: int = 1000,
    seed: int = 0,
) -> SimulationReport:
    """Simulate the full protocol and report per-outcome statistics.

    ``unknown`` is either a concrete state or the string ``"random"``, in
    which case ``samples`` Haar-random inputs are drawn from a seeded
    NumPy ``default_rng`` (PCG64) and the report aggregates over them:
    per-outcome probabilities are means, per-outcome fidelities are
    probability-weighted means, so ``sum_r p_r * F_r`` still equals the
    average fidelity.  Identical arguments and seed give identical
    reports.
    """
    check = validate_basis(basis)
    if not check.orthonormal:
        raise BasisValidationError(
            f"basis not orthonormal: max deviation {check.max_deviation:.3e}"
        )

    if isinstance(unknown, PureState):
        records = _single_input_records(unknown, channel, partition, basis)
        average = float(
            sum(rec.probability * rec.corrected_fidelity
                for rec in records if not rec.unreached)
        )
        return SimulationReport(
            tuple(records),
            average,
            input_description=f"explicit state on dims {unknown.dims.dims}",
            samples=1,
            seed=None,
        )

    if unknown != "random":
        raise ValueError(f"unknown must be a PureState or 'random', got {unknown!r}")
    if samples < 1:
        raise ValueError("samples must be >= 1")

    n, _ = partition.validate_for(channel.dims)
    bob_dims = QuditDims(tuple(channel.dims.dims[s] for s in partition.bob_slots))
    rng = np.random.default_rng(seed)
    inputs = [haar_random_state(bob_dims, rng) for _ in range(samples)]

    count = basis.count
    prob_sums = np.zeros(count)
    weighted_fid = np.zeros(count)
    sigmas: list[CollapsedMatrix] = []
    total = 0.0
    for state in inputs:
        records = _single_input_records(state, channel, partition, basis)
        if not sigmas:
            sigmas = [rec.sigma_prediction for rec in records]
        for rec in records:
            prob_sums[rec.outcome_id] += rec.probability
            if not rec.unreached:
                weighted_fid[rec.outcome_id] += rec.probability * rec.corrected_fidelity
        total += sum(
            rec.probability * rec.corrected_fidelity
            for rec in records
            if not rec.unreached
        )

    aggregated = []
    for r in range(count):
        mean_p = float(prob_sums[r] / samples)
        if prob_sums[r] <= PROB_FLOOR:
            aggregated.append(
                OutcomeRecord(r, mean_p, None, sigmas[r], 1.0, unreached=True)
            )
        else:
            fid = float(weighted_fid[r] / prob_sums[r])
            aggregated.append(OutcomeRecord(r, mean_p, None, sigmas[r], fid))
    return SimulationReport(
        tuple(aggregated),
        float(total / samples),
        input_description=f"{samples} haar-random inputs on dims {bob_dims.dims}",
        samples=samples,
        seed=seed,
    )
