"""Command line interface: ``perfcone <command> ...``.

Exit codes: 0 on success, 1 when a mathematical check fails (inequivalent,
not realizable, failed criterion), 2 on bad usage or unreadable input.
All numbers in JSON output are decimal strings.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import data
from .classify import (
    BaseSystem,
    builtin_domain,
    classify_faces,
    default_domains,
    extend_and_classify,
    realizable_bases,
)
from .cone import RayCone, dimension, is_basic, is_simplicial, sublattice_index
from .equiv import are_equivalent, automorphism_group
from .forms import ParseError, VectorConfig, _data_lines, _ints, parse_config
from .realize import IterationCapExceeded, is_perfect_cone_config
from .voronoi2 import (
    MatrixCone,
    cone_dimension,
    is_basic_matrix_cone,
    is_simplicial_matrix_cone,
    parse_cones,
    sublattice_index as matrix_index,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

logger = logging.getLogger("perfcone")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _num(x) -> str:
    return str(Fraction(x)) if isinstance(x, Fraction) else str(x)


def _matrix_json(rows) -> list[list[str]]:
    return [[_num(x) for x in row] for row in rows]


def _emit(obj: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        return
    for key in obj:
        val = obj[key]
        if isinstance(val, list) and val and isinstance(val[0], list):
            out.write(f"{key}:\n")
            for row in val:
                out.write("  " + " ".join(str(x) for x in row) + "\n")
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            for k, item in enumerate(val, 1):
                out.write(f"{key} {k}:\n")
                for sub, v in item.items():
                    out.write(f"  {sub}: {v}\n")
        else:
            out.write(f"{key}: {val}\n")


def _threads(arg: int | None) -> int:
    if arg is not None:
        if arg < 1:
            raise UsageError("--threads must be at least 1")
        return arg
    env = os.environ.get("PERFCONE_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"PERFCONE_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise UsageError("PERFCONE_THREADS must be at least 1")
        return n
    return os.cpu_count() or 1


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def detect_kind(text: str) -> str:
    """``vectors`` when the body has exactly M lines of g entries, else ``matrices``."""
    lines = _data_lines(text)
    if not lines:
        raise ParseError("empty input file")
    no, head = lines[0]
    hdr = _ints(head, no)
    if len(hdr) != 2:
        raise ParseError("header must have two integers", no)
    g, count = hdr
    body = lines[1:]
    if len(body) == count and all(len(t) == g for _, t in body):
        return "vectors"
    return "matrices"


def _load_config(path: str) -> VectorConfig:
    return parse_config(_read(path))


# ---------------------------------------------------------------- commands


def _vector_report(config: VectorConfig) -> dict:
    c = RayCone(config)
    return {
        "kind": "vectors",
        "g": str(config.g),
        "dim": str(dimension(c)),
        "rays": str(len(c)),
        "simplicial": is_simplicial(c),
        "basic": is_basic(c),
        "index": str(sublattice_index(c)),
    }


def _matrix_report(c: MatrixCone) -> dict:
    return {
        "g": str(c.g),
        "dim": str(cone_dimension(c)),
        "rays": str(len(c)),
        "simplicial": is_simplicial_matrix_cone(c),
        "basic": is_basic_matrix_cone(c),
        "index": str(matrix_index(c)),
        "psd": all(c.psd_flags()),
    }


def cmd_check(args) -> int:
    text = _read(args.path)
    kind = detect_kind(text) if args.kind == "auto" else args.kind
    if kind == "vectors":
        report = _vector_report(parse_config(text))
    else:
        try:
            cones = parse_cones(text)
        except ParseError as exc:
            if args.kind == "auto":
                raise ParseError(f"{exc} (read as a matrix cone file; use --kind to override)") from None
            raise
        report = {"kind": "matrices", "cones": [_matrix_report(c) for c in cones]}
    _emit(report, args.format)
    return EXIT_OK


def cmd_realize(args) -> int:
    config = _load_config(args.path)
    verdict = is_perfect_cone_config(config, max_cuts=args.max_cuts)
    report = {"realizable": verdict.realizable, "cuts": str(len(verdict.excluded)),
              "iterations": str(verdict.iterations)}
    if verdict.realizable:
        report["witness"] = _matrix_json(verdict.witness.entries)
    else:
        report["reason"] = verdict.obstruction
    _emit(report, args.format)
    return EXIT_OK if verdict.realizable else EXIT_FAIL


def _parse_dims(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if lo > hi:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--dims expects A..B or a comma list, got {text!r}") from None


def _domains(g: int, names: str | None, include_e7: bool) -> tuple[list[RayCone], list[str]]:
    if names:
        cones, labels = [], []
        for item in names.split(","):
            item = item.strip()
            if item in data.GRAMS:
                cones.append(builtin_domain(item))
            else:
                cones.append(RayCone(_load_config(item)))
            labels.append(item)
    else:
        try:
            labels = list(default_domains(g, include_e7))
        except ValueError as exc:
            raise UsageError(f"{exc}; supply --domains") from None
        cones = [builtin_domain(n) for n in labels]
    bad = [lab for lab, c in zip(labels, cones) if c.g != g]
    if bad:
        raise UsageError(f"domains {bad} do not live in dimension g={g}")
    return cones, labels


def classify_json(g: int, dims, domain_names, n_jobs: int = 1, include_e7: bool = False) -> str:
    cones, labels = _domains(g, domain_names, include_e7)
    return classify_faces(cones, dims, labels, n_jobs=n_jobs).dumps()


def cmd_classify(args) -> int:
    text = classify_json(args.g, _parse_dims(args.dims), args.domains, _threads(args.threads), args.include_e7)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_extend(args) -> int:
    if args.base:
        cfg = _load_config(args.base)
        if cfg.g != len(cfg):
            raise UsageError("a base system needs exactly g vectors")
        bases = [BaseSystem(cfg.pairs)]
    else:
        bases = realizable_bases(args.g, args.max_index, _threads(args.threads))
    report = extend_and_classify(bases, n_jobs=_threads(args.threads))
    text = report.dumps()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = _load_config(args.a), _load_config(args.b)
    if a.g != b.g:
        raise UsageError(f"configurations live in different dimensions ({a.g} and {b.g})")
    w = are_equivalent(a, b)
    if w is None:
        _emit({"equivalent": False}, args.format)
        return EXIT_FAIL
    _emit({"equivalent": True, "U": _matrix_json(w.U)}, args.format)
    return EXIT_OK


def cmd_aut(args) -> int:
    config = _load_config(args.path)
    if config.rank() != config.g:
        raise UsageError("automorphism groups need a spanning configuration")
    grp = automorphism_group(config)
    _emit({"order": str(grp.order), "generators": [{"matrix": _matrix_json(u)} for u in grp.generators]}, args.format)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    from . import acceptance

    results = acceptance.run_all(n_jobs=_threads(args.threads))
    if args.json:
        sys.stdout.write(json.dumps({
            "passed": all(r.passed for r in results),
            "criteria": [r.to_json() for r in results],
        }, indent=2, sort_keys=True) + "\n")
    else:
        for r in results:
            sys.stdout.write(r.line() + "\n")
        sys.stdout.write(f"{sum(r.passed for r in results)}/{len(results)} criteria passed\n")
    failed = [r for r in results if not r.passed]
    if failed:
        sys.stderr.write(f"failed criterion {failed[0].number}: {failed[0].name}\n")
        return EXIT_FAIL
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="perfcone", description="Exact analysis of perfect and second-Voronoi cones.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def fmt(sp):
        sp.add_argument("--format", choices=("json", "table"), default="json")

    sp = sub.add_parser("check", help="dimension, simpliciality, basicness and index of a cone")
    sp.add_argument("path")
    sp.add_argument("--kind", choices=("auto", "vectors", "matrices"), default="auto")
    fmt(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("realize", help="decide whether a configuration is a full minimal-vector set")
    sp.add_argument("path")
    sp.add_argument("--max-cuts", type=int, default=10_000)
    fmt(sp)
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("classify", help="face orbits of perfect domains as a JSON report")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--dims", help="A..B or a comma separated list (default: all)")
    sp.add_argument("--domains", help="comma separated built-in names or vector config files")
    sp.add_argument("--include-e7", action="store_true", help="use the E7* domain at g=7")
    sp.add_argument("--out")
    sp.add_argument("--threads", type=int)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("extend", help="grow base systems by one vector and classify")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--base", help="vector config file with g vectors (default: enumerate)")
    sp.add_argument("--max-index", type=int, default=2)
    sp.add_argument("--out")
    sp.add_argument("--threads", type=int)
    sp.set_defaults(func=cmd_extend)

    sp = sub.add_parser("equiv", help="GL_g(Z)-equivalence of two configurations")
    sp.add_argument("a")
    sp.add_argument("b")
    fmt(sp)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("aut", help="automorphism group of a configuration")
    sp.add_argument("path")
    fmt(sp)
    sp.set_defaults(func=cmd_aut)

    sp = sub.add_parser("verify-paper", help="run every reproduction criterion")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--threads", type=int)
    sp.set_defaults(func=cmd_verify_paper)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"perfcone: error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        sys.stderr.write(f"perfcone: parse error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"perfcone: invalid input: {exc}\n")
        return EXIT_USAGE
    except IterationCapExceeded as exc:
        sys.stderr.write(f"perfcone: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
