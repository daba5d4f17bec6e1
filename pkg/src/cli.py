"""
Command-line surface

Every subcommand reads one JSON document (a path, or "-" for standard
input) and writes JSON, DOT or text. Exit codes: 0 on success, 1 when a
validation fails, 2 on unusable input or an exceeded cap.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Type

from pydantic import BaseModel, ValidationError

from .core.errors import CapExceededError, ConsistencyError, GreedoidError, InputError
from .core.progress_tracker import progress_tracker
from .core.utils import dump_json_document, normalize_sign_string, parse_json_document
from .geometry.arrangements import RationalArrangement, om_from_vectors
from .geometry.complexified import complexified_oig
from .geometry.convexity import from_model as convex_from_model
from .greedoids.flats import flat_lattice
from .greedoids.setsys import SetSystem, check_axioms, contract, require_class, restrict
from .models.schemas import (
    ArrangementModel,
    AxiomClass,
    OIGBundle,
    OutputFormat,
    PointSetModel,
    SetSystemModel,
    ToposModel,
    VectorConfigModel,
)
from .oriented.covectors import all_covectors
from .oriented.orient import OrientedSystem, contract_oig, load_bundle, oig_from_antimatroid, restrict_oig, topes
from .topology.complexes import order_complex
from .topology.covector_poset import augment, tope_graph, tope_graph_dot, tope_poset
from .topology.flags import flag_count, flag_table, sphere_report
from .topology.rco import recursive_coatom_ordering

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class Outcome:
    """What a subcommand produced: a document per format and whether it passed"""

    def __init__(self, data, passed: bool = True, text: Optional[str] = None, dot: Optional[str] = None):
        self.data = data
        self.passed = passed
        self.text = text
        self.dot = dot

    def render(self, fmt: OutputFormat) -> str:
        if fmt == OutputFormat.DOT:
            if self.dot is None:
                raise InputError("This command has no DOT output")
            return self.dot
        if fmt == OutputFormat.TEXT and self.text is not None:
            return self.text if self.text.endswith("\n") else self.text + "\n"
        data = self.data.model_dump(mode="json") if isinstance(self.data, BaseModel) else self.data
        return dump_json_document(data)


# ---------------------------------------------------------------- input


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e.strerror or e}") from e


def _load(path: str, model: Type[BaseModel]) -> BaseModel:
    return model.model_validate(parse_json_document(_read(path), source=path))


def _load_system_or_bundle(path: str):
    document = parse_json_document(_read(path), source=path)
    if isinstance(document, dict) and "covectors" in document:
        return OIGBundle.model_validate(document)
    return SetSystemModel.model_validate(document)


def _labels(text: Optional[str], flag: str) -> List[str]:
    if text is None:
        raise InputError(f"{flag} is required")
    return [label.strip() for label in text.split(",") if label.strip()]


def _valid_oig(path: str, exhaustive: bool = False) -> Tuple[Optional[OrientedSystem], Optional[Outcome]]:
    """A validated bundle, or the failing report as the outcome"""
    oig = load_bundle(_load(path, OIGBundle), exhaustive=exhaustive)
    if not oig.report.passed:
        report = oig.report.to_model(oig.lattice)
        return None, Outcome(report, passed=False, text=_report_text(report.model_dump()))
    return oig, None


def _report_text(report: Dict) -> str:
    if report.get("passed"):
        return "passed"
    lines = ["failed"]
    for key, value in sorted(report.items()):
        if key != "passed" and value:
            lines.append(f"  {key}: {value}")
    return "\n".join(lines)


def _base(args, oig: OrientedSystem) -> str:
    if args.base:
        return normalize_sign_string(args.base)
    return topes(oig)[0].signs


def _bundle_outcome(oig: OrientedSystem) -> Outcome:
    bundle = oig.to_bundle()
    return Outcome(bundle, text="\n".join(bundle.covectors))


# ---------------------------------------------------------------- commands


def cmd_check(args) -> Outcome:
    system = SetSystem.from_model(_load(args.input, SetSystemModel))
    report = check_axioms(system, AxiomClass(args.axiom_class), exhaustive=args.exhaustive)
    model = report.to_model(system.ground)
    return Outcome(model, passed=report.passed, text=_report_text(model.model_dump(mode="json")))


def cmd_flats(args) -> Outcome:
    system = SetSystem.from_model(_load(args.input, SetSystemModel))
    require_class(system)
    lattice = flat_lattice(system)
    lines = [
        f"{f.id}: xi={lattice.ground.describe(f.xi)} corank={f.corank}" for f in lattice.flats
    ]
    return Outcome(lattice.to_model(), text="\n".join(lines), dot=lattice.to_dot())


def cmd_covectors(args) -> Outcome:
    system = SetSystem.from_model(_load(args.input, SetSystemModel))
    require_class(system)
    lattice = flat_lattice(system)
    covectors = all_covectors(lattice)
    return Outcome(
        OIGBundle(system=system.to_model(), covectors=[c.signs for c in covectors]),
        text="\n".join(c.signs for c in covectors),
    )


def cmd_orient(args) -> Outcome:
    oig = load_bundle(_load(args.input, OIGBundle), exhaustive=args.exhaustive)
    report = oig.report.to_model(oig.lattice)
    return Outcome(report, passed=report.passed, text=_report_text(report.model_dump()))


def cmd_from_points(args) -> Outcome:
    geometry = convex_from_model(_load(args.input, PointSetModel))
    return _bundle_outcome(oig_from_antimatroid(geometry.system))


def cmd_from_vectors(args) -> Outcome:
    model = _load(args.input, VectorConfigModel)
    return _bundle_outcome(om_from_vectors(model.fractions(), model.labels, model.d))


def cmd_from_arrangement(args) -> Outcome:
    arrangement = RationalArrangement.from_model(_load(args.input, ArrangementModel))
    return _bundle_outcome(complexified_oig(arrangement))


def cmd_contract(args) -> Outcome:
    source = _load_system_or_bundle(args.input)
    labels = _labels(args.by, "--by")
    if isinstance(source, OIGBundle):
        oig = load_bundle(source)
        return _bundle_outcome(contract_oig(oig, oig.lattice.ground.mask(labels)))
    system = SetSystem.from_model(source)
    result = contract(system, system.ground.mask(labels))
    return Outcome(result.to_model())


def cmd_restrict(args) -> Outcome:
    source = _load_system_or_bundle(args.input)
    labels = _labels(args.to, "--to")
    if isinstance(source, OIGBundle):
        oig = load_bundle(source)
        restricted = restrict_oig(oig, oig.lattice.ground.mask(labels))
        model = restricted.to_model()
        return Outcome(model, text="\n".join(model.covectors + [f"hypothesis_holds={model.hypothesis_holds}"]))
    system = SetSystem.from_model(source)
    return Outcome(restrict(system, system.ground.mask(labels)).to_model())


def cmd_topes(args) -> Outcome:
    oig, failed = _valid_oig(args.input)
    if failed:
        return failed
    base = _base(args, oig)
    graph = tope_graph(oig)
    poset = tope_poset(oig, base)
    model = ToposModel(
        base=base,
        topes=sorted(graph.nodes),
        adjacency=sorted(tuple(sorted(edge)) for edge in graph.edges),
        poset_covers=sorted(poset.covers()),
    )
    return Outcome(model, text="\n".join(poset.elements), dot=tope_graph_dot(graph))


def cmd_rco(args) -> Outcome:
    oig, failed = _valid_oig(args.input)
    if failed:
        return failed
    base = _base(args, oig)
    ordering = recursive_coatom_ordering(oig, base)
    return Outcome(ordering.to_model(), passed=ordering.passed, text="verified" if ordering.passed else ordering.violation)


def cmd_sphere(args) -> Outcome:
    oig, failed = _valid_oig(args.input)
    if failed:
        return failed
    report = sphere_report(oig, _base(args, oig))
    h = report.homology
    text = "\n".join([
        f"rank {report.rank}",
        f"thin {report.thin}, eulerian {report.eulerian}",
        f"cells by rank {report.cell_counts}",
        f"f-vector {h.f_vector}, euler {h.euler}, reduced betti {h.reduced_betti}",
        f"sphere evidence {report.sphere_evidence}",
    ])
    return Outcome(report.to_model(), passed=report.sphere_evidence, text=text, dot=augment(oig).to_dot(name="covectors"))


def cmd_complex(args) -> Outcome:
    oig, failed = _valid_oig(args.input)
    if failed:
        return failed
    complex_ = order_complex(augment(oig))
    model = complex_.to_model()
    return Outcome(model, text="\n".join(" ".join(face) for face in model.facets))


def cmd_flags(args) -> Outcome:
    oig, failed = _valid_oig(args.input)
    if failed:
        return failed
    if args.chain:
        try:
            chain = [int(part) for part in args.chain.split(",")]
        except ValueError:
            raise InputError(f"--chain takes comma-separated flat ids, got {args.chain!r}") from None
        row = flag_count(oig, chain)
        return Outcome(row.to_model(), passed=row.agrees, text=f"{row.chain}: {row.observed} observed, {row.predicted} predicted")
    table = flag_table(oig)
    text = "\n".join(f"{r.chain}: {r.observed} observed, {r.predicted} predicted" for r in table.rows)
    return Outcome(table.to_model(), passed=table.all_agree, text=text)


COMMANDS: Dict[str, Tuple[Callable, str]] = {
    "check": (cmd_check, "check the axioms of a set system"),
    "flats": (cmd_flats, "lattice of flats of an interval greedoid"),
    "covectors": (cmd_covectors, "all covectors of an interval greedoid"),
    "orient": (cmd_orient, "validate an oriented interval greedoid bundle"),
    "from-points": (cmd_from_points, "oriented antimatroid of a point set"),
    "from-vectors": (cmd_from_vectors, "oriented matroid of a vector configuration"),
    "from-arrangement": (cmd_from_arrangement, "oriented greedoid of a complexified arrangement"),
    "contract": (cmd_contract, "contract a system or bundle by a feasible set"),
    "restrict": (cmd_restrict, "restrict a system or bundle to a subset"),
    "topes": (cmd_topes, "tope graph and tope poset"),
    "rco": (cmd_rco, "build and verify a recursive coatom ordering"),
    "sphere": (cmd_sphere, "sphericity evidence for the covector poset"),
    "complex": (cmd_complex, "order complex of the covector poset as facets"),
    "flags": (cmd_flags, "flag counts against the Möbius product"),
}


def _log_progress():
    summary = progress_tracker.get_status_summary()
    if not summary["total_components"]:
        return
    failed = [c["id"] for c in summary["failed_components"]]
    logger.debug(
        f"stages: {summary['total_components']}, progress {summary['overall_progress']:.0f}%, failed: {failed or 'none'}"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greedoid", description="Interval greedoids and their orientations")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, (handler, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("input", help="JSON input file, or - for standard input")
        sub.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
        sub.add_argument("-o", "--output", help="write to this file instead of standard output")
        sub.set_defaults(handler=handler)
        if name == "check":
            sub.add_argument("--class", dest="axiom_class", choices=[c.value for c in AxiomClass],
                             default=AxiomClass.INTERVAL_GREEDOID.value)
        if name in ("check", "orient"):
            sub.add_argument("--exhaustive", action="store_true", help="report every witness")
        if name == "contract":
            sub.add_argument("--by", help="comma-separated labels of a feasible set")
        if name == "restrict":
            sub.add_argument("--to", help="comma-separated labels")
        if name in ("topes", "rco", "sphere"):
            sub.add_argument("--base", help="base tope as a sign string")
        if name == "flags":
            sub.add_argument("--chain", help="comma-separated flat ids from top to bottom")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    progress_tracker.reset()

    try:
        outcome = args.handler(args)
        rendered = outcome.render(OutputFormat(args.format))
    except ValidationError as e:
        print(f"error: invalid input document: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, CapExceededError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as e:
        print(f"failed: {e}", file=sys.stderr)
        return EXIT_FAILED
    except GreedoidError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED

    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    logger.debug(f"{args.command}: passed={outcome.passed}")
    if args.verbose:
        _log_progress()
    return EXIT_OK if outcome.passed else EXIT_FAILED
