"""Command line: ``knotq compute | corpus | fuzz | svg``.

Exit codes are 0 on success, 1 on an expectation mismatch or a failed
property, and 2 on usage or input errors.
"""
import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import List, Optional, Sequence, Union

from .action import EPS, admissible_assignment, debug_dump
from .burau import burau_determinant
from .diagram import LAYOUTS, BraidWord, DiagramError, LongDiagram, NotAKnot, parse_diagram
from .exactgeom import Degenerate
from .invariant import (full_report, mirror_discrepancies, report_from_pipeline, run_pipeline,
                        to_decorated)
from .lattice import GroupTooLarge, UnexpectedFreeRank
from .moves import MoveError, fuzz, mirror

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2

INPUT_ERRORS = (ValueError, DiagramError, NotAKnot, Degenerate, GroupTooLarge,
                UnexpectedFreeRank, MoveError, OSError)


class InputError(Exception):
    pass


class SourcingError(InputError):
    """A corpus braid whose determinant disagrees with its expected torsion order."""


Source = Union[BraidWord, LongDiagram]


# ------------------------------------------------------------------ corpus

@dataclass
class CorpusEntry:
    name: str
    source: Source
    expected: dict

    def validate_source(self) -> None:
        """Burau determinant must equal the expected torsion order (braid entries)."""
        if not isinstance(self.source, BraidWord) or "torsion" not in self.expected:
            return
        order = 1
        for d in self.expected["torsion"]:
            order *= d
        det = burau_determinant(self.source)
        if det != order:
            raise SourcingError("%s: braid has determinant %d but the expected torsion "
                                "order is %d" % (self.name, det, order))


def parse_braid(strands, letters) -> BraidWord:
    if isinstance(letters, str):
        letters = letters.replace(",", " ").split()
    try:
        return BraidWord(int(strands), [int(x) for x in letters])
    except (TypeError, ValueError) as exc:
        raise InputError("bad braid word: %s" % exc) from None


def load_corpus(path: Optional[str] = None) -> List[CorpusEntry]:
    """Corpus file: a JSON list of {name, braid | diagram, expected}."""
    try:
        if path is None:
            text = resources.files("knotq").joinpath("data/corpus.json").read_text()
        else:
            with open(path) as fh:
                text = fh.read()
        raw = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError("cannot read corpus: %s" % exc) from None
    if not isinstance(raw, list):
        raise InputError("corpus must be a list of entries")
    out = []
    for i, item in enumerate(raw):
        try:
            name = item.get("name", "entry%d" % i)
            if "braid" in item:
                src = parse_braid(item["braid"]["strands"], item["braid"]["letters"])
            elif "diagram" in item:
                src = parse_diagram(item["diagram"])
            else:
                raise InputError("entry %r has neither braid nor diagram" % name)
        except (AttributeError, KeyError, TypeError, DiagramError, Degenerate) as exc:
            raise InputError("corpus entry %d: %s" % (i, exc)) from None
        out.append(CorpusEntry(name, src, dict(item.get("expected", {}))))
    return out


def check_entry(entry: CorpusEntry, report) -> List[str]:
    """Names of the expectations the report fails."""
    exp, bad = entry.expected, []
    if "torsion" in exp and list(exp["torsion"]) != report.torsion:
        bad.append("torsion %s != expected %s" % (report.torsion, exp["torsion"]))
    if exp.get("minv") is not None and sorted(exp["minv"]) != report.minv:
        bad.append("minv %s != expected %s" % (report.minv, sorted(exp["minv"])))
    if "q_multiset" in exp:
        got = report.fingerprint.to_json()["q"]
        want = {k: int(v) for k, v in exp["q_multiset"].items()}
        want = {_canon_q(k): v for k, v in want.items()}
        if got != want:
            bad.append("q multiset %s != expected %s" % (got, want))
    return bad


def _canon_q(key: str) -> str:
    v = Fraction(key) % 1
    return str(v.numerator) if v.denominator == 1 else "%d/%d" % (v.numerator, v.denominator)


def run_corpus(entries: Sequence[CorpusEntry]):
    """Validate every source first, then compute; returns (rows, n_failed)."""
    for e in entries:
        e.validate_source()
    rows, failed = [], 0
    for e in entries:
        rep = full_report(e.source)
        bad = check_entry(e, rep)
        failed += bool(bad)
        rows.append({"name": e.name, "report": rep, "problems": bad})
    return rows, failed


# ------------------------------------------------------------------ helpers

def _source_from_args(args) -> Source:
    if (args.braid is None) == (args.diagram is None):
        raise InputError("give exactly one of --braid (with --strands) or --diagram")
    if args.diagram is not None:
        try:
            with open(args.diagram) as fh:
                return parse_diagram(json.load(fh))
        except json.JSONDecodeError as exc:
            raise InputError("diagram file is not valid JSON: %s" % exc) from None
    if args.strands is None:
        raise InputError("--braid needs --strands")
    return parse_braid(args.strands, args.braid)


def _add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--braid", help='braid letters, e.g. "1 -2 1 -2"')
    p.add_argument("--strands", type=int, help="number of strands of the braid")
    p.add_argument("--diagram", help="path to a DiagramSpec JSON file")
    p.add_argument("--layout", choices=LAYOUTS, default="left",
                   help="grid layout used to draw a braid (default: left)")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# ------------------------------------------------------------------ commands

def cmd_compute(args) -> int:
    src = _source_from_args(args)
    eps = Fraction(0) if args.eps_zero else EPS
    pipe = run_pipeline(src, layout=args.layout, eps=eps)
    rep = report_from_pipeline(pipe)
    if args.debug:
        sys.stdout.write(debug_dump(pipe.decorated, pipe.assignment, pipe.forms, pipe.phi))
    if args.json:
        sys.stdout.write(_dump(rep.to_json()) + "\n")
    else:
        sys.stdout.write(rep.to_text())
    return EXIT_OK


def cmd_corpus(args) -> int:
    entries = load_corpus(args.path)
    rows, failed = run_corpus(entries)
    if args.json:
        doc = [{"name": r["name"], "status": "fail" if r["problems"] else "pass",
                "problems": r["problems"], "report": r["report"].to_json()} for r in rows]
        sys.stdout.write(_dump(doc) + "\n")
    else:
        for r in rows:
            rep = r["report"]
            status = "FAIL" if r["problems"] else "pass"
            minv = "-" if rep.minv is None else " ".join(map(str, rep.minv))
            line = "%-10s torsion=%-8s minv=%-6s %s" % (
                r["name"], ",".join(map(str, rep.torsion)) or "1", minv, status)
            if r["problems"]:
                line += "  (" + "; ".join(r["problems"]) + ")"
            sys.stdout.write(line + "\n")
        sys.stdout.write("%d entries, %d failed\n" % (len(rows), failed))
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_fuzz(args) -> int:
    src = _source_from_args(args)
    if not isinstance(src, BraidWord):
        raise InputError("fuzz works on braid words")
    report = fuzz(src, n_moves=args.moves, trials=args.trials, seed=args.seed)
    doc = report.to_json()
    if args.mirror_check:
        base, mir = full_report(src), full_report(mirror(src))
        problems = mirror_discrepancies(base, mir)
        doc["mirror_check"] = {
            "status": "fail" if problems else "pass",
            "problems": problems,
            "mirror_fingerprint_equal": mir.fingerprint == base.fingerprint,
        }
    sys.stdout.write(_dump(doc) + "\n")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_svg(args) -> int:
    from .svg import render_svg

    src = _source_from_args(args)
    dec = to_decorated(src, layout=args.layout)
    names = args.names.split(",") if args.names else None
    if names is not None and len(names) != len(dec.bridges):
        raise InputError("%d names given for %d bridges" % (len(names), len(dec.bridges)))
    text = render_svg(dec, admissible_assignment(dec), names)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knotq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute the invariant of one knot")
    _add_source_args(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--debug", action="store_true",
                   help="also print the assignment, auxiliary forms and action functional")
    p.add_argument("--eps-zero", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("corpus", help="run a regression corpus")
    p.add_argument("path", nargs="?", help="corpus JSON file (default: the shipped corpus)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("fuzz", help="check invariance under random Markov moves")
    _add_source_args(p)
    p.add_argument("--moves", type=int, default=30)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mirror-check", action="store_true",
                   help="also run the (conjectural) mirror sign-flip check")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("svg", help="render the decorated diagram as SVG")
    _add_source_args(p)
    p.add_argument("-o", "--output", help="output file (default: standard output)")
    p.add_argument("--names", help="comma-separated bridge names, e.g. s,r,q,p")
    p.set_defaults(func=cmd_svg)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError,) + INPUT_ERRORS as exc:
        sys.stderr.write("knotq: error: %s\n" % exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
