"""Command-line interface.

Exit codes: 0 success, 1 usage or failed regression, 2 input validation,
3 computation error.  With --json, errors are additionally emitted as one
JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import bracket as bracket_mod
from .bracket import BracketConvention, calibrate_full, drobotukhina
from .classify import (
    EXPECTED_JOIN_CLASS_COUNTS,
    classify_joins,
    identify,
    ordered_join_classes,
    profile,
    run_golden_checks,
)
from .constructions import AbstractConfiguration, as_permutation, build_symbol, jc
from .errors import (
    ComputationError,
    NotCalibrated,
    SkewLinesError,
    ValidationError,
)
from .geometry import Configuration
from .invariants import (
    chirality_certificate,
    pointset_cyclic_invariant,
    pointset_skew_triple_sum,
    podkorytov_exists,
    triple_table,
    validate_pointset,
)
from .constructions import stable_equivalent
from .serialize import (
    configuration_to_json,
    dump_json,
    load_document,
    profile_report,
)
from .symbols import decompose, parse_symbol

DEFAULT_CALIBRATION_PATH = "drobotukhina_calibration.json"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_COMPUTATION = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2); keep 1 for usage
        raise _UsageError(message)


def _require_lines(path: str) -> Configuration:
    doc = load_document(path)
    if doc.configuration is None:
        raise ValidationError(f"{path} contains no 'lines'")
    return doc.configuration


def _load_convention(args) -> BracketConvention:
    path = Path(args.calibration)
    if not path.exists():
        raise NotCalibrated(
            f"no calibration record at {path}; run 'skewlines calibrate' first"
        )
    data = json.loads(path.read_text(encoding="utf-8"))
    return BracketConvention.from_json(data["convention"])


def _optional_convention(args) -> Optional[BracketConvention]:
    path = Path(args.calibration)
    if not path.exists():
        return None
    data = json.loads(path.read_text(encoding="utf-8"))
    return BracketConvention.from_json(data["convention"])


def _emit(args, doc: dict, out: Optional[str]) -> None:
    text = dump_json(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------------

def _cmd_validate(args) -> int:
    doc = load_document(args.file)
    parts = []
    if doc.configuration is not None:
        parts.append(f"{doc.configuration.n} pairwise skew lines")
    if doc.point_set is not None:
        validate_pointset(doc.point_set)
        parts.append(f"{doc.point_set.q} nonsingular points")
    print("ok: " + ", ".join(parts))
    return EXIT_OK


def _cmd_lk(args) -> int:
    c = _require_lines(args.file)
    from .geometry import lk_pair

    value = lk_pair(c.line(args.i), c.line(args.j))
    print(f"{value:+d}")
    return EXIT_OK


def _cmd_lk3(args) -> int:
    c = _require_lines(args.file)
    from .geometry import lk_triple

    value = lk_triple(c.line(args.i), c.line(args.j), c.line(args.k))
    print(f"{value:+d}")
    return EXIT_OK


def _cmd_profile(args) -> int:
    from .invariants import INCONCLUSIVE

    c = _require_lines(args.file)
    conv = _optional_convention(args)
    prof = profile(c, conv)
    verdict = chirality_certificate(c) if c.n >= 3 else INCONCLUSIVE
    report = profile_report(prof, verdict)
    result = identify(c, None) if c.n <= 7 else None
    if result is not None:
        report["join_class"] = (
            "non-join or unknown"
            if result.cluster is None
            else f"jc{result.cluster.representative}"
        )
    _emit(args, report, None)
    return EXIT_OK


def _cmd_jc(args) -> int:
    sigma = as_permutation([int(v) for v in args.permutation.split(",")])
    c = jc(sigma)
    _emit(args, configuration_to_json(c), args.output)
    return EXIT_OK


def _cmd_symbol_build(args) -> int:
    symbol = parse_symbol(args.symbol)
    c = build_symbol(symbol)
    _emit(args, configuration_to_json(c), args.output)
    return EXIT_OK


def _cmd_decompose(args) -> int:
    c = _require_lines(args.file)
    symbol = decompose(triple_table(c))
    print("nondecomposable" if symbol is None else symbol.render())
    return EXIT_OK


def _cmd_bracket(args) -> int:
    c = _require_lines(args.file)
    conv = _load_convention(args)
    print(drobotukhina(c, conv).text())
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    result = calibrate_full()
    record = {
        "convention": result.convention.to_json(),
        "matches": list(result.matches),
        "note": result.note,
    }
    Path(args.calibration).write_text(dump_json(record), encoding="utf-8")
    print(f"calibration stored in {args.calibration}")
    print(f"note: {result.note}")
    return EXIT_OK


def _cmd_classify_joins(args) -> int:
    if args.n == 7 and not args.slow:
        raise _UsageError("n=7 sweeps 5040 joins with 2^21-state brackets; pass --slow")
    conv = _optional_convention(args)
    if conv is None and not args.no_brackets:
        conv = bracket_mod.default_convention()
    clusters = classify_joins(
        args.n,
        include_brackets=not args.no_brackets,
        convention=conv,
        threads=args.threads,
    )
    print(f"{len(clusters)} classes of joins of {args.n} lines "
          f"(expected {EXPECTED_JOIN_CLASS_COUNTS[args.n]})")
    for idx, cl in enumerate(clusters, start=1):
        symbol = "nondecomposable" if cl.symbol is None else cl.symbol.render()
        line = (f"[{idx:2d}] jc{cl.representative} members={len(cl.members)} "
                f"sum={cl.triple_sum:+d} symbol={symbol}")
        if cl.bracket is not None:
            line += f" bracket={cl.bracket.text()}"
        print(line)
    return EXIT_OK


def _cmd_ordered_joins(args) -> int:
    print(ordered_join_classes(args.n))
    return EXIT_OK


def _cmd_points(args) -> int:
    doc = load_document(args.file)
    if doc.point_set is None:
        raise ValidationError(f"{args.file} contains no 'points'")
    p = validate_pointset(doc.point_set)
    q = p.q
    lines = [f"q = {q}"]
    if q >= 6:
        s = pointset_skew_triple_sum(p)
        lines.append(f"skew-triple sum = {s:+d}")
        if q % 8 in (6, 7):
            lines.append("term count is odd (q = 6 or 7 mod 8): nonamphicheiral")
    else:
        lines.append("skew-triple sum needs q >= 6")
    if q >= 7:
        cy = pointset_cyclic_invariant(p)
        lines.append(f"cyclic-triple sum = {cy:+d}")
        if q % 4 == 3:
            lines.append("cyclic term count is odd (q = 3 mod 4): nonamphicheiral")
    else:
        lines.append("cyclic-triple sum needs q >= 7")
    print("\n".join(lines))
    return EXIT_OK


def _cmd_podkorytov(args) -> int:
    print("yes" if podkorytov_exists(args.p, args.q) else "no")
    return EXIT_OK


def _cmd_stable_equiv(args) -> int:
    a = triple_table(_require_lines(args.file1))
    b = triple_table(_require_lines(args.file2))
    same = stable_equivalent(AbstractConfiguration(a), AbstractConfiguration(b))
    print("yes" if same else "no")
    return EXIT_OK


def _cmd_golden(args) -> int:
    conv = _optional_convention(args)
    checks = run_golden_checks(include_slow=args.slow, convention=conv)
    failed = 0
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        detail = f"  ({check.detail})" if check.detail and not check.passed else ""
        print(f"{status} {check.name}{detail}")
        failed += 0 if check.passed else 1
    print(f"{len(checks) - failed}/{len(checks)} golden checks passed")
    return EXIT_OK if failed == 0 else EXIT_USAGE


# -- wiring ------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="skewlines", description=__doc__)
    parser.add_argument("--json", action="store_true",
                        help="emit errors as JSON on stderr")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes for sweeps (results are identical)")
    parser.add_argument("--calibration", default=DEFAULT_CALIBRATION_PATH,
                        help="path of the bracket calibration record")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a configuration/point-set file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("lk", help="pair linking sign of lines i and j")
    p.add_argument("file")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.set_defaults(func=_cmd_lk)

    p = sub.add_parser("lk3", help="triple linking sign of lines i, j, k")
    p.add_argument("file")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=_cmd_lk3)

    p = sub.add_parser("profile", help="full invariant report of a configuration")
    p.add_argument("file")
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("jc", help="emit the join of a permutation, e.g. 1,2,5,6,3,4")
    p.add_argument("permutation")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_jc)

    p = sub.add_parser("symbol-build", help='realize a symbol, e.g. "<+<1>,<-2>,<-2>>"')
    p.add_argument("symbol")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_symbol_build)

    p = sub.add_parser("decompose", help="decomposition symbol of a configuration")
    p.add_argument("file")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("bracket", help="bracket polynomial (needs a calibration record)")
    p.add_argument("file")
    p.set_defaults(func=_cmd_bracket)

    p = sub.add_parser("calibrate", help="fix the bracket convention and store it")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("classify-joins", help="cluster all joins of N lines")
    p.add_argument("n", type=int, choices=range(2, 8), metavar="N")
    p.add_argument("--slow", action="store_true", help="allow the N=7 sweep")
    p.add_argument("--no-brackets", action="store_true",
                   help="skip per-cluster bracket polynomials")
    p.set_defaults(func=_cmd_classify_joins)

    p = sub.add_parser("ordered-joins", help="count labeled join classes of N lines")
    p.add_argument("n", type=int, choices=range(2, 6), metavar="N")
    p.set_defaults(func=_cmd_ordered_joins)

    p = sub.add_parser("points", help="invariants of a nonsingular point set")
    p.add_argument("file")
    p.set_defaults(func=_cmd_points)

    p = sub.add_parser("podkorytov", help="does an amphicheiral set of P lines and Q points exist")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=_cmd_podkorytov)

    p = sub.add_parser("stable-equiv", help="stable equivalence of two configurations")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=_cmd_stable_equiv)

    p = sub.add_parser("golden", help="run the frozen regression suite")
    p.add_argument("--slow", action="store_true", help="include the n=7 sweep")
    p.set_defaults(func=_cmd_golden)

    return parser


def _report_error(args, code: int, exc: Exception) -> int:
    message = str(exc)
    print(f"error: {message}", file=sys.stderr)
    if args is not None and getattr(args, "json", False):
        payload = {"error": type(exc).__name__, "message": message}
        labels = getattr(exc, "labels", None)
        if labels is not None:
            payload["labels"] = list(labels)
        print(json.dumps(payload), file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        return _report_error(args, EXIT_VALIDATION, exc)
    except (ComputationError, SkewLinesError) as exc:
        return _report_error(args, EXIT_COMPUTATION, exc)


if __name__ == "__main__":
    sys.exit(main())
