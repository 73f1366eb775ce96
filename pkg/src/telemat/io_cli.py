"""State/basis file formats, analysis reports and the ``telemat`` CLI.

Files are versioned JSON documents with amplitudes keyed by basis digit
strings, so the worked examples stay human-writable and diff-friendly.
Exit codes of ``telemat analyze``: 0 perfect, 1 limited (subspace-only or
full-rank-imperfect), 2 impossible, 3 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .coeffmat import (
    Bipartition,
    MeasurementBasis,
    ORTHO_TOL,
    RANK_REL_TOL,
    UNITARY_ABS_TOL,
    build_channel_matrix,
    build_measurement_matrix,
    collapsed_matrix,
    is_scaled_unitary,
    numerical_rank,
    validate_basis,
)
from .criterion import (
    CLUSTER_REL_TOL,
    Category,
    classify,
    rank_case,
    teleportable_subspace,
)
from .errors import StateFormatError, TelematError, UsageError
from .qstate import PureState, QuditDims, basis_index, index_to_digits
from .telesim import run_teleportation

FORMAT_VERSION = 1

EXIT_PERFECT = 0
EXIT_LIMITED = 1
EXIT_IMPOSSIBLE = 2
EXIT_ERROR = 3


# ---------------------------------------------------------------------------
# file format


def _parse_digits(text: str, dims: tuple[int, ...], location: str) -> tuple[int, ...]:
    tokens = text.split(",") if "," in text else list(text)
    if len(tokens) != len(dims):
        raise StateFormatError(
            f"index {text!r} has {len(tokens)} digits for {len(dims)} particles",
            location,
        )
    try:
        return tuple(int(t) for t in tokens)
    except ValueError:
        raise StateFormatError(f"non-numeric digit in index {text!r}", location)


def parse_state_document(doc, where: str = "state") -> PureState:
    """Build a PureState from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise StateFormatError("document must be a JSON object", where)
    if doc.get("version") != FORMAT_VERSION:
        raise StateFormatError(
            f"unsupported version {doc.get('version')!r}", f"{where}.version"
        )
    particles = doc.get("particles")
    if not isinstance(particles, list) or not particles:
        raise StateFormatError("'particles' must be a non-empty list", f"{where}.particles")
    dims: list[int] = []
    labels: list[str] = []
    for i, particle in enumerate(particles):
        loc = f"{where}.particles[{i}]"
        if not isinstance(particle, dict):
            raise StateFormatError("particle must be an object", loc)
        dim = particle.get("dim")
        if not isinstance(dim, int) or dim < 2:
            raise StateFormatError(f"'dim' must be an integer >= 2, got {dim!r}", loc)
        dims.append(dim)
        labels.append(str(particle.get("label", str(i + 1))))
    if len(set(labels)) != len(labels):
        raise StateFormatError(f"duplicate particle labels in {labels}", f"{where}.particles")
    qdims = QuditDims(tuple(dims), tuple(labels))

    amps = np.zeros(qdims.size, dtype=np.complex128)
    seen: set[int] = set()
    entries = doc.get("amplitudes", [])
    if not isinstance(entries, list):
        raise StateFormatError("'amplitudes' must be a list", f"{where}.amplitudes")
    for j, entry in enumerate(entries):
        loc = f"{where}.amplitudes[{j}]"
        if not isinstance(entry, dict) or "index" not in entry:
            raise StateFormatError("amplitude entry must be an object with 'index'", loc)
        index_str = entry["index"]
        if not isinstance(index_str, str):
            raise StateFormatError(f"'index' must be a string, got {index_str!r}", loc)
        digits = _parse_digits(index_str, qdims.dims, loc)
        try:
            flat = basis_index(qdims, digits)
        except IndexError as exc:
            raise StateFormatError(f"index {index_str!r}: {exc}", loc)
        if flat in seen:
            raise StateFormatError(f"duplicate index {index_str!r}", loc)
        seen.add(flat)
        re, im = entry.get("re", 0.0), entry.get("im", 0.0)
        if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
            raise StateFormatError("'re' and 'im' must be numbers", loc)
        amps[flat] = complex(re, im)

    normalized = bool(doc.get("normalized", False))
    if normalized:
        sq = float(np.vdot(amps, amps).real)
        if abs(sq - 1.0) > 1e-9:
            raise StateFormatError(
                f"flagged normalized but sum |amp|^2 = {sq!r}", f"{where}.normalized"
            )
    return PureState(qdims, amps, normalized=normalized)


def serialize_state(state: PureState) -> dict:
    """Inverse of :func:`parse_state_document`; amplitudes round-trip exactly."""
    dims = state.dims.dims
    labels = state.dims.labels or tuple(str(i + 1) for i in range(len(dims)))
    commas = any(d > 10 for d in dims)
    amplitudes = []
    for flat, amp in enumerate(state.amps):
        if amp == 0:
            continue
        digits = index_to_digits(state.dims, flat)
        text = ",".join(map(str, digits)) if commas else "".join(map(str, digits))
        amplitudes.append({"index": text, "re": float(amp.real), "im": float(amp.imag)})
    return {
        "version": FORMAT_VERSION,
        "particles": [{"label": lab, "dim": d} for lab, d in zip(labels, dims)],
        "normalized": state.normalized,
        "amplitudes": amplitudes,
    }


def parse_basis_document(doc, where: str = "basis") -> MeasurementBasis:
    if not isinstance(doc, dict):
        raise StateFormatError("document must be a JSON object", where)
    if doc.get("version") != FORMAT_VERSION:
        raise StateFormatError(
            f"unsupported version {doc.get('version')!r}", f"{where}.version"
        )
    elements = doc.get("elements")
    if not isinstance(elements, list) or not elements:
        raise StateFormatError("'elements' must be a non-empty list", f"{where}.elements")
    states = tuple(
        parse_state_document(el, f"{where}.elements[{r}]") for r, el in enumerate(elements)
    )
    return MeasurementBasis(states)


def serialize_basis(basis: MeasurementBasis) -> dict:
    return {
        "version": FORMAT_VERSION,
        "elements": [serialize_state(el) for el in basis.elements],
    }


def _load_json(source, where: str):
    if hasattr(source, "read"):
        text = source.read()
        name = where
    else:
        path = Path(source)
        name = str(path)
        text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text), name
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"invalid JSON: {exc}", name)


def parse_state_file(source) -> PureState:
    """Read a state document from a path or file-like object."""
    doc, name = _load_json(source, "state")
    return parse_state_document(doc, name)


def parse_basis_file(source) -> MeasurementBasis:
    """Read a basis document (ordered list of states) from a path or stream."""
    doc, name = _load_json(source, "basis")
    return parse_basis_document(doc, name)


def write_state_file(state: PureState, path) -> None:
    Path(path).write_text(json.dumps(serialize_state(state), indent=2) + "\n", "utf-8")


def write_basis_file(basis: MeasurementBasis, path) -> None:
    Path(path).write_text(json.dumps(serialize_basis(basis), indent=2) + "\n", "utf-8")


# ---------------------------------------------------------------------------
# reports


def _matrix_to_lists(mat: np.ndarray) -> list:
    return [[[z.real, z.imag] for z in row] for row in np.asarray(mat)]


def _format_matrix(mat: np.ndarray, indent: str = "    ") -> str:
    rows = []
    for row in np.asarray(mat):
        cells = ", ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row)
        rows.append(f"{indent}[{cells}]")
    return "\n".join(rows)


@dataclass
class AnalysisReport:
    """Everything ``telemat analyze`` knows about one instance."""

    tolerances: dict
    channel: dict
    verdict: dict
    outcomes: list | None = None
    simulation: dict | None = None

    def to_dict(self) -> dict:
        return {
            "tolerances": self.tolerances,
            "channel": self.channel,
            "verdict": self.verdict,
            "outcomes": self.outcomes,
            "simulation": self.simulation,
        }

    def render_text(self) -> str:
        tol = self.tolerances
        ch = self.channel
        lines = [
            f"channel: {ch['n']}x{ch['m']}  bob={','.join(ch['bob'])}  "
            f"alice={','.join(ch['alice'])}",
            f"tolerances: rank rel={tol['rank_rel']:g}  "
            f"unitary abs={tol['unitary_abs']:g}  cluster rel={tol['cluster_rel']:g}",
            "channel matrix:",
            _format_matrix(np.array([[complex(re, im) for re, im in row]
                                     for row in ch["entries"]])),
            f"channel rank: {ch['rank']}  (case {ch['case']}, "
            f"collapsed-rank bound {ch['collapsed_rank_bound']})",
        ]
        if ch["scaled_unitary"]:
            lines.append(f"channel is a scaled isometry: k = {ch['scale']:.12g}")
        else:
            lines.append("channel is not a scaled isometry")
        if self.outcomes is not None:
            lines.append("outcomes:")
            lines.append("  r   rank(M)  rank(sigma)  scaled-unitary        k  subspace-dim")
            for rec in self.outcomes:
                k = "-" if rec["scale"] is None else f"{rec['scale']:.6f}"
                lines.append(
                    f"  {rec['outcome']:<4}{rec['measurement_rank']:<9}"
                    f"{rec['collapsed_rank']:<13}"
                    f"{'yes' if rec['scaled_unitary'] else 'no':<15}{k:>8}"
                    f"  {rec['subspace_dim']:>4}"
                )
        lines.append(f"verdict: {self.verdict['category']}")
        if self.verdict.get("subspace_dim") is not None:
            lines.append(
                f"teleportable subspace dimension: {self.verdict['subspace_dim']} "
                "(per measurement outcome)"
            )
        if self.verdict.get("input_dependent_probabilities"):
            lines.append(
                "note: outcome scales differ; outcome probabilities depend on the input"
            )
        return "\n".join(lines)


def build_analysis_report(
    channel: PureState,
    partition: Bipartition,
    basis: MeasurementBasis | None,
    *,
    rank_tol: float = RANK_REL_TOL,
    unitary_tol: float = UNITARY_ABS_TOL,
    cluster_tol: float = CLUSTER_REL_TOL,
) -> tuple[AnalysisReport, int]:
    """Analyze one channel (and optional basis); return report and exit code."""
    cmat = build_channel_matrix(channel, partition)
    n, m = cmat.n, cmat.m
    r_c = numerical_rank(cmat, rank_tol)
    su = is_scaled_unitary(cmat, unitary_tol)
    case = rank_case(n, m, r_c)
    labels = channel.dims.labels or tuple(
        str(i + 1) for i in range(len(channel.dims))
    )
    channel_info = {
        "bob": [labels[s] for s in partition.bob_slots],
        "alice": [labels[s] for s in partition.alice_slots],
        "n": n,
        "m": m,
        "rank": r_c,
        "scaled_unitary": su.ok,
        "scale": su.k if su.ok else None,
        "case": case.case,
        "collapsed_rank_bound": case.collapsed_rank_bound,
        "entries": _matrix_to_lists(cmat.entries),
    }
    tolerances = {
        "rank_rel": rank_tol,
        "unitary_abs": unitary_tol,
        "cluster_rel": cluster_tol,
    }

    if basis is None:
        if n > m:
            category, code = "impossible", EXIT_IMPOSSIBLE
        elif su.ok:
            category, code = "perfect-capable", EXIT_PERFECT
        else:
            category, code = "limited", EXIT_LIMITED
        verdict = {"category": category, "exit_code": code}
        return AnalysisReport(tolerances, channel_info, verdict), code

    result = classify(
        channel,
        partition,
        basis,
        rank_tol=rank_tol,
        unitary_tol=unitary_tol,
        cluster_tol=cluster_tol,
    )
    outcomes = []
    for r, element in enumerate(basis.elements):
        mm = build_measurement_matrix(element, m, result.unknown_dim, r)
        sigma = collapsed_matrix(cmat, mm)
        sub = teleportable_subspace(sigma, cluster_tol)
        outcomes.append(
            {
                "outcome": r,
                "measurement_rank": result.measurement_ranks[r],
                "collapsed_rank": result.collapsed_ranks[r],
                "scaled_unitary": result.scales[r] is not None,
                "scale": result.scales[r],
                "zero": r in result.zero_outcomes,
                "subspace_dim": sub.dimension,
                "measurement_entries": _matrix_to_lists(mm.entries),
                "collapsed_entries": _matrix_to_lists(sigma.entries),
            }
        )
    code = {
        Category.PERFECT: EXIT_PERFECT,
        Category.FULL_RANK_IMPERFECT: EXIT_LIMITED,
        Category.SUBSPACE_ONLY: EXIT_LIMITED,
        Category.IMPOSSIBLE: EXIT_IMPOSSIBLE,
    }[result.category]
    verdict = {
        "category": result.category.value,
        "exit_code": code,
        "unknown_dim": result.unknown_dim,
        "subspace_dim": result.subspace_dim,
        "input_dependent_probabilities": result.input_dependent_probabilities,
        "zero_outcomes": list(result.zero_outcomes),
    }
    return AnalysisReport(tolerances, channel_info, verdict, outcomes), code


# ---------------------------------------------------------------------------
# CLI


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); 2 means "impossible" here
        raise UsageError(message)


def _partition_from_labels(
    dims: QuditDims, bob_spec: str, alice_spec: str
) -> Bipartition:
    labels = dims.labels or tuple(str(i + 1) for i in range(len(dims)))
    slot_of = {lab: i for i, lab in enumerate(labels)}

    def to_slots(spec: str, side: str) -> tuple[int, ...]:
        names = [t.strip() for t in spec.split(",") if t.strip()]
        if not names:
            raise UsageError(f"--{side} needs at least one particle label")
        missing = [name for name in names if name not in slot_of]
        if missing:
            raise UsageError(
                f"--{side} names unknown particles {missing}; "
                f"declared labels are {list(labels)}"
            )
        return tuple(slot_of[name] for name in names)

    return Bipartition(to_slots(bob_spec, "bob"), to_slots(alice_spec, "alice"))


def _add_partition_args(parser):
    parser.add_argument("--bob", required=True, help="comma-separated particle labels held by Bob")
    parser.add_argument("--alice", required=True, help="comma-separated particle labels held by Alice")


def _add_tolerance_args(parser):
    parser.add_argument("--tol-rank", type=float, default=RANK_REL_TOL,
                        help="relative singular-value cutoff for ranks")
    parser.add_argument("--tol-unitary", type=float, default=UNITARY_ABS_TOL,
                        help="max entry deviation for scaled-unitarity")
    parser.add_argument("--tol-cluster", type=float, default=CLUSTER_REL_TOL,
                        help="relative eigenvalue clustering tolerance for subspaces")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="telemat",
                     description="Rank analysis and simulation of teleportation channels")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_analyze = sub.add_parser("analyze", help="classify a channel (and optional basis)")
    p_analyze.add_argument("channel", help="channel state file")
    _add_partition_args(p_analyze)
    p_analyze.add_argument("--basis", help="measurement basis file")
    _add_tolerance_args(p_analyze)
    p_analyze.add_argument("--format", choices=("text", "structured"), default="text")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_sim = sub.add_parser("simulate", help="run the state-vector teleportation oracle")
    p_sim.add_argument("channel", help="channel state file")
    _add_partition_args(p_sim)
    p_sim.add_argument("--basis", required=True, help="measurement basis file")
    group = p_sim.add_mutually_exclusive_group(required=True)
    group.add_argument("--unknown", help="unknown input state file")
    group.add_argument("--random", action="store_true",
                       help="average over Haar-random inputs")
    p_sim.add_argument("--samples", type=int, default=1000,
                       help="number of random inputs (with --random)")
    p_sim.add_argument("--seed", type=int, default=0, help="random generator seed")
    _add_tolerance_args(p_sim)
    p_sim.add_argument("--format", choices=("text", "structured"), default="text")
    p_sim.set_defaults(func=_cmd_simulate)

    p_rank = sub.add_parser("rank", help="rank of a state's coefficient matrix")
    p_rank.add_argument("state", help="state file")
    _add_partition_args(p_rank)
    p_rank.add_argument("--tol-rank", type=float, default=RANK_REL_TOL)
    p_rank.add_argument("--format", choices=("text", "structured"), default="text")
    p_rank.set_defaults(func=_cmd_rank)

    p_basis = sub.add_parser("basis-check", help="validate a measurement basis")
    p_basis.add_argument("basis", help="basis file")
    p_basis.add_argument("--tol-unitary", type=float, default=ORTHO_TOL,
                         help="orthonormality tolerance")
    p_basis.add_argument("--format", choices=("text", "structured"), default="text")
    p_basis.set_defaults(func=_cmd_basis_check)
    return parser


def _cmd_analyze(args) -> int:
    channel = parse_state_file(args.channel)
    partition = _partition_from_labels(channel.dims, args.bob, args.alice)
    basis = parse_basis_file(args.basis) if args.basis else None
    report, code = build_analysis_report(
        channel,
        partition,
        basis,
        rank_tol=args.tol_rank,
        unitary_tol=args.tol_unitary,
        cluster_tol=args.tol_cluster,
    )
    if args.format == "structured":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.render_text())
    return code


def _cmd_simulate(args) -> int:
    channel = parse_state_file(args.channel)
    partition = _partition_from_labels(channel.dims, args.bob, args.alice)
    basis = parse_basis_file(args.basis)
    unknown = parse_state_file(args.unknown) if args.unknown else "random"
    sim = run_teleportation(
        unknown, channel, partition, basis, samples=args.samples, seed=args.seed
    )
    verdict = classify(
        channel,
        partition,
        basis,
        rank_tol=args.tol_rank,
        unitary_tol=args.tol_unitary,
        cluster_tol=args.tol_cluster,
    )
    if args.format == "structured":
        doc = {
            "simulation": sim.to_dict(),
            "category": verdict.category.value,
            "subspace_dim": verdict.subspace_dim,
        }
        print(json.dumps(doc, indent=2))
        return 0
    print(f"input: {sim.input_description}")
    print("  r   probability   fidelity   k")
    for rec in sim.outcomes:
        k = verdict.scales[rec.outcome_id]
        k_text = "-" if k is None else f"{k:.6f}"
        flag = "  (unreached)" if rec.unreached else ""
        print(
            f"  {rec.outcome_id:<4}{rec.probability:>10.6f}  "
            f"{rec.corrected_fidelity:>9.6f}   {k_text}{flag}"
        )
    print(f"average fidelity: {sim.average_fidelity:.9f}")
    if verdict.category is Category.SUBSPACE_ONLY:
        print(
            f"hint: general inputs cannot be teleported perfectly; per-outcome "
            f"teleportable subspace dimension is {verdict.subspace_dim}"
        )
    return 0


def _cmd_rank(args) -> int:
    state = parse_state_file(args.state)
    partition = _partition_from_labels(state.dims, args.bob, args.alice)
    cmat = build_channel_matrix(state, partition)
    rank = numerical_rank(cmat, args.tol_rank)
    if args.format == "structured":
        print(json.dumps({"n": cmat.n, "m": cmat.m, "rank": rank,
                          "tol_rank": args.tol_rank}))
    else:
        print(f"coefficient matrix {cmat.n}x{cmat.m}, rank {rank} "
              f"(rel tol {args.tol_rank:g})")
    return 0


def _cmd_basis_check(args) -> int:
    basis = parse_basis_file(args.basis)
    report = validate_basis(basis, args.tol_unitary)
    doc = {
        "orthonormal": report.orthonormal,
        "complete": report.complete,
        "count": report.count,
        "dim": report.dim,
        "max_deviation": report.max_deviation,
        "offending_pairs": [list(p) for p in report.offending_pairs],
    }
    if args.format == "structured":
        print(json.dumps(doc, indent=2))
    else:
        status = "orthonormal" if report.orthonormal else "NOT orthonormal"
        completeness = "complete" if report.complete else "incomplete"
        print(f"{report.count} elements on dimension {report.dim}: {status}, "
              f"{completeness} (max deviation {report.max_deviation:.3e}, "
              f"tol {args.tol_unitary:g})")
        for r, s in report.offending_pairs:
            print(f"  offending pair: ({r}, {s})")
    return 0 if report.orthonormal else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            return EXIT_ERROR
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except TelematError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # argparse --help
        code = exc.code or 0
        return int(code) if isinstance(code, int) else EXIT_ERROR


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
