"""
Command-line entry point.

    python -m app.main power --kind sym --r 2 --json-in z-shift2.json
    python -m app.main inf --preset Fp-over-Z --N 3
    python -m app.main paper-suite

Every subcommand prints one canonical JSON document on stdout (and to --out
when given). Exit codes: 0 ok, 1 suite mismatch, 2 bad input, 3 violated
precondition. Errors are printed as {"error": <class>, "message": ...}.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import EngineError, InputError, PreconditionError
from app.core.logging_config import setup_logging
from app.core.metrics import render_engine_metrics
from app.schemas import (
    ComplexPayload,
    HomologyPayload,
    PresentationPayload,
    StubSummary,
    SuiteReport,
)
from app.services.complexes import ChainComplex, homology
from app.services.dalg import (
    AlgebraPresentation,
    circle_comparison,
    cotangent_complex,
    crystallization_gr_compare,
    d_minus,
    derham_stub,
    free_crystalline_stub,
    graded_free_table,
    hochschild_stub,
    infinitesimal_stub,
    kahler,
)
from app.services.dold_kan import PowerFunctorKind, derived_power, lsym_total
from app.services.filtered import FilteredStub, graded_pieces, is_beilinson_static
from app.services.linalg import RingSpec
from app.services.suite import canonical_json, paper_suite, preset, preset_names

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3

SUBCOMMANDS = (
    "lsym",
    "power",
    "cotangent",
    "derham",
    "inf",
    "hh",
    "circle",
    "graded-table",
    "crys-stub",
    "paper-suite",
    "homology",
    "metrics",
)


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so usage errors get the JSON diagnostic."""

    def error(self, message: str):
        raise InputError(message)


# inputs


def _read_json(path: str) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_complex(args: argparse.Namespace) -> ChainComplex:
    if args.json_in:
        return ComplexPayload.model_validate(_read_json(args.json_in)).to_complex()
    if args.degree is not None:
        return ChainComplex.concentrated(RingSpec.parse(args.ring), args.degree, args.rank)
    raise InputError("give a complex with --json-in or a free generator with --degree")


def _load_presentation(args: argparse.Namespace) -> AlgebraPresentation:
    if args.json_in:
        return PresentationPayload.model_validate(_read_json(args.json_in)).to_presentation()
    if args.preset:
        return preset(args.preset, args.p)
    raise InputError(f"give a presentation with --json-in or --preset ({', '.join(preset_names())})")


def _weight_cutoff(args: argparse.Namespace) -> int:
    value = settings.default_weight_cutoff if args.weight_cutoff is None else args.weight_cutoff
    if value < 0:
        raise InputError("--weight-cutoff must be nonnegative")
    return value


def _degree_cutoff(args: argparse.Namespace) -> int:
    value = settings.default_degree_cutoff if args.degree_cutoff is None else args.degree_cutoff
    if value < 0:
        raise InputError("--degree-cutoff must be nonnegative")
    return value


# outputs


def stub_summary(stub: FilteredStub) -> StubSummary:
    return StubSummary(
        N=stub.N,
        strict=stub.strict,
        levels=[homology(level).to_payload() for level in stub.levels],
        graded=[homology(g).to_payload() for g in graded_pieces(stub)],
        truncated_above=stub.levels[0].truncated_above,
    )


def _graded_payload(labels: dict) -> dict:
    return {str(w): {str(d): text for d, text in t.items()} for w, t in labels.items()}


# subcommands


def _cmd_lsym(args: argparse.Namespace) -> Any:
    c = _load_complex(args)
    total = lsym_total(c, _weight_cutoff(args), _degree_cutoff(args))
    return {"ring": c.ring.label, "weights": _graded_payload(total.homology_labels())}


def _cmd_power(args: argparse.Namespace) -> Any:
    if args.r is None:
        raise InputError("power needs --r")
    kind = PowerFunctorKind.parse(args.kind, args.r)
    result = derived_power(kind, _load_complex(args), _degree_cutoff(args))
    return HomologyPayload.from_table(homology(result), result.truncated_above)


def _cmd_homology(args: argparse.Namespace) -> Any:
    c = _load_complex(args)
    return HomologyPayload.from_table(homology(c), c.truncated_above)


def _cmd_cotangent(args: argparse.Namespace) -> Any:
    p = _load_presentation(args)
    l = cotangent_complex(p, relative=args.relative)
    out = {**l.summary(), "homology": homology(l.over_base()).to_payload()}
    if not args.relative:
        out["kahler"] = kahler(p).label
    return out


def _cmd_derham(args: argparse.Namespace) -> Any:
    p = _load_presentation(args)
    stub = derham_stub(p, args.N, degree_cutoff=_degree_cutoff(args))
    return {**stub_summary(stub).model_dump(), "beilinson_static": is_beilinson_static(stub)}


def _cmd_inf(args: argparse.Namespace) -> Any:
    return stub_summary(infinitesimal_stub(_load_presentation(args), args.N))


def _cmd_hh(args: argparse.Namespace) -> Any:
    p = _load_presentation(args)
    return stub_summary(hochschild_stub(p, args.N, degree_cutoff=_degree_cutoff(args)))


def _cmd_circle(args: argparse.Namespace) -> Any:
    if args.N < 2:
        raise InputError("the filtered circle needs --N >= 2")
    return {
        "comparison": circle_comparison(args.N).to_payload(),
        "d_minus": _graded_payload(d_minus().homology_labels()),
    }


def _cmd_graded_table(args: argparse.Namespace) -> Any:
    c = _load_complex(args)
    table = graded_free_table(
        args.flavor, args.a, c, args.n, _weight_cutoff(args), _degree_cutoff(args)
    )
    return {
        "flavor": args.flavor,
        "a": args.a,
        "n": args.n,
        "weights": _graded_payload(table.homology_labels()),
    }


def _cmd_crys_stub(args: argparse.Namespace) -> Any:
    if args.preset or args.json_in:
        p = _load_presentation(args)
        return {
            "presentation": p.describe(),
            "comparisons": [crystallization_gr_compare(p, s).to_payload() for s in range(args.N + 1)],
        }
    return stub_summary(free_crystalline_stub(args.i, args.rank, args.N))


def _cmd_paper_suite(args: argparse.Namespace) -> Any:
    report = paper_suite(args.golden)
    for case in report.cases:
        logger.info("%-34s %-8s %-5s %.3fs", case.name, case.provenance, case.status, case.runtime_seconds)
    return report


def _cmd_metrics(args: argparse.Namespace) -> Any:
    body, _ = render_engine_metrics()
    return body.decode("utf-8")


_HANDLERS: dict[str, Callable[[argparse.Namespace], Any]] = {
    "lsym": _cmd_lsym,
    "power": _cmd_power,
    "cotangent": _cmd_cotangent,
    "derham": _cmd_derham,
    "inf": _cmd_inf,
    "hh": _cmd_hh,
    "circle": _cmd_circle,
    "graded-table": _cmd_graded_table,
    "crys-stub": _cmd_crys_stub,
    "paper-suite": _cmd_paper_suite,
    "homology": _cmd_homology,
    "metrics": _cmd_metrics,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--ring", default="Z", help="Base ring label: Z, Q or Fp:<p>")
    common.add_argument("--weight-cutoff", type=int, default=None, help="Highest weight computed")
    common.add_argument("--degree-cutoff", type=int, default=None, help="Highest exact degree")
    common.add_argument("--json-in", default=None, help="JSON input file (complex or presentation)")
    common.add_argument("--out", default=None, help="Also write the JSON result to this file")

    complex_input = _Parser(add_help=False)
    complex_input.add_argument("--degree", type=int, default=None, help="Free generator in this degree")
    complex_input.add_argument("--rank", type=int, default=1, help="Rank of the free generator")

    presentation_input = _Parser(add_help=False)
    presentation_input.add_argument("--preset", default=None, help=f"One of {', '.join(preset_names())}")
    presentation_input.add_argument("--p", type=int, default=2, help="The prime of Fp-over-Z")

    stub_size = _Parser(add_help=False)
    stub_size.add_argument("--N", type=int, default=3, help="Stub length")

    parser = _Parser(prog="derham", description="Exact derived algebra computations")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sub.add_parser("lsym", parents=[common, complex_input], help="Total LSym through the cutoffs")
    power = sub.add_parser("power", parents=[common, complex_input], help="One derived power functor")
    power.add_argument("--kind", default="sym", help="sym|ext|div|antisym")
    power.add_argument("--r", type=int, default=None, help="Functor weight")
    sub.add_parser("homology", parents=[common, complex_input], help="Homology of a JSON complex")

    cot = sub.add_parser("cotangent", parents=[common, presentation_input], help="Cotangent complex")
    cot.add_argument("--relative", action="store_true", help="L of S over the presenting ring")
    sub.add_parser("derham", parents=[common, presentation_input, stub_size], help="Hodge-filtered de Rham stub")
    sub.add_parser("inf", parents=[common, presentation_input, stub_size], help="I-adic (infinitesimal) stub")
    sub.add_parser("hh", parents=[common, presentation_input, stub_size], help="HKR-filtered Hochschild stub")

    circle = sub.add_parser("circle", parents=[common], help="Filtered circle comparison")
    circle.add_argument("--N", type=int, default=4, help="Weight truncation")

    table = sub.add_parser("graded-table", parents=[common, complex_input], help="Graded free algebra table")
    table.add_argument("--flavor", default="B", help="N, B or B-strict")
    table.add_argument("--a", type=int, default=0, help="Shear parameter")
    table.add_argument("--n", type=int, default=1, help="Weight of the generator")

    crys = sub.add_parser("crys-stub", parents=[common, presentation_input], help="Crystalline stubs")
    crys.add_argument("--i", type=int, default=1, help="Weight of the free generator")
    crys.add_argument("--rank", type=int, default=1, help="Rank of P")
    crys.add_argument("--N", type=int, default=2, help="Highest weight")

    suite = sub.add_parser("paper-suite", parents=[common], help="Run the golden example suite")
    suite.add_argument("--golden", default=None, help="Alternative golden file")

    sub.add_parser("metrics", parents=[common], help="Prometheus metrics of this process")
    return parser


def _emit(result: Any, out: Optional[str]) -> str:
    text = result if isinstance(result, str) else canonical_json(result)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    return text


def _fail(code: int, exc: Exception) -> int:
    sys.stdout.write(canonical_json({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    return code


def run_subcommand(argv: Sequence[str]) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        result = _HANDLERS[args.command](args)
        if isinstance(result, SuiteReport):
            _emit({"summary": result.summary(), **result.model_dump()}, args.out)
        else:
            _emit(result, args.out)
    except ValidationError as exc:
        return _fail(EXIT_INPUT, exc)
    except InputError as exc:
        return _fail(EXIT_INPUT, exc)
    except PreconditionError as exc:
        return _fail(EXIT_PRECONDITION, exc)
    except EngineError as exc:  # pragma: no cover - every engine error is one of the two above
        return _fail(EXIT_INPUT, exc)
    if args.command == "paper-suite" and not result.ok:
        return EXIT_SUITE_FAILED
    return EXIT_OK


def main() -> None:
    setup_logging()
    sys.exit(run_subcommand(sys.argv[1:]))


if __name__ == "__main__":
    main()
