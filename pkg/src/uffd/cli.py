"""Command-line entry point: ``uffd construct|verify|decode|simulate|bounds|table``.

Exit codes: 0 success or property holds, 1 property violated or decoding
failed, 2 construction failed, 3 bad input, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import bounds as B
from .core import CodeMatrix, ConstructionError, InputError, Outcome, ResourceCapError
from .decode import decode, simulate_trials
from .ensembles import EnsembleSpec, construct
from .tables import emit_tables
from . import verify as V

EXIT_OK, EXIT_VIOLATED, EXIT_CONSTRUCTION, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _round(x):
    """Floats to 6 significant digits, recursively; non-finite to null."""
    if isinstance(x, float):
        return float(f"{x:.6g}") if math.isfinite(x) else None
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    return x


def _emit(obj):
    print(json.dumps(_round(obj), sort_keys=True))


def _load_code(path) -> CodeMatrix:
    try:
        return CodeMatrix.load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _load_outcome(path) -> Outcome:
    try:
        return Outcome.from_text(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _positive(kind):
    def conv(s):
        v = kind(s)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {s}")
        return v

    return conv


# subcommands


def cmd_construct(a) -> int:
    target = a.target.replace("-", "_")
    if target.startswith("uffd") and a.mode and not target.endswith(a.mode):
        raise InputError(f"--mode {a.mode} contradicts --target {a.target}")
    spec = EnsembleSpec(
        t=a.t,
        n_initial=a.n,
        p=a.p,
        d=a.d,
        kind="constant_weight" if a.kind == "cw" else "bernoulli",
        target=target,
        seed=a.seed,
        max_retries=a.max_retries,
        min_columns=a.min_columns,
        allow_large=a.allow_large,
    )
    C = construct(spec)
    if a.out:
        C.save(a.out)
        _emit({"t": C.t, "n": C.n, "target": target, "seed": a.seed, "out": str(a.out)})
    else:
        sys.stdout.write(C.to_text())
    return EXIT_OK


_PROPERTY_ALIASES = {
    "uf": "uf",
    "union_free": "uf",
    "uffd": "uffd",
    "uf_eq": "uf",
    "uf_le": "uf",
    "uffd_eq": "uffd",
    "uffd_le": "uffd",
    "disjunctive": "disjunctive",
    "ssm": "ssm",
    "list_decoding": "list_decoding",
    "cover_cap": "cover_cap",
}


def cmd_verify(a) -> int:
    name = a.property.replace("-", "_")
    if name not in _PROPERTY_ALIASES:
        raise InputError(f"unknown property {a.property!r}")
    mode = a.mode
    if name.endswith(("_eq", "_le")):
        implied = name[-2:]
        if mode and mode != implied:
            raise InputError(f"--mode {mode} contradicts --property {a.property}")
        mode = implied
    mode = mode or "eq"
    kind = _PROPERTY_ALIASES[name]
    C = _load_code(a.code)
    if kind == "uf":
        rep = V.is_union_free(C, a.d, mode)
    elif kind == "uffd":
        rep = V.is_uffd(C, a.d, mode)
    elif kind == "disjunctive":
        rep = V.is_disjunctive(C, a.d)
    elif kind == "ssm":
        rep = V.is_ssm(C, a.d)
    elif kind == "cover_cap":
        rep = V.cover_cap_ok(C, a.d, mode)
    else:
        if a.list_size is None:
            raise InputError("--list-size is required for list-decoding")
        rep = V.is_list_decoding(C, a.d, a.list_size)
    _emit(rep.to_dict())
    return EXIT_OK if rep.holds else EXIT_VIOLATED


def cmd_decode(a) -> int:
    C = _load_code(a.code)
    r = _load_outcome(a.outcome)
    res = decode(C, r, a.d, a.mode, a.algorithm)
    _emit(res.to_dict())
    return EXIT_VIOLATED if res.status == "failure" else EXIT_OK


def cmd_simulate(a) -> int:
    C = _load_code(a.code)
    summary = simulate_trials(C, a.d, a.mode, a.trials, a.seed)
    _emit(summary.to_dict())
    return EXIT_OK


def _grid(a) -> B.Grid:
    g = B.DEFAULT_GRID
    kw = {}
    if a.p_step is not None:
        kw["p_step"] = a.p_step
    if a.alpha_step is not None:
        kw["alpha_step"] = a.alpha_step
        kw["scan_alpha_step"] = max(a.alpha_step, g.scan_alpha_step)
    return B.Grid(**{**g.__dict__, **kw})


def cmd_bounds(a) -> int:
    if a.action == "table":
        return cmd_table(a)
    if a.family is None or a.d is None:
        raise InputError("bounds needs --family and --d")
    family = a.family.replace("-", "_")
    res = B.bound(family, a.d, a.p, _grid(a), a.threads)
    doc = res.to_dict()
    if a.json:
        _emit(doc)
    else:
        for key in ("family", "d", "rate", "p_opt", "r2", "beta"):
            v = doc[key]
            print(f"{key}: {f'{v:.6g}' if isinstance(v, float) else v}")
        for e in doc["per_d0"]:
            print(f"  d0={e['d0']}: r1={e['r1']:.6g}")
    return EXIT_OK


def cmd_table(a) -> int:
    text = emit_tables(a.d_min, a.d_max, a.format, grid=_grid(a), threads=a.threads, quiet=a.quiet)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="uffd", description="Union-free codes with fast decoding for group testing.")
    ap.add_argument("--threads", type=_positive(int), default=os.cpu_count() or 1)
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="random code with purification")
    c.add_argument("--t", type=_positive(int), required=True)
    c.add_argument("--n", type=_positive(int), required=True, help="initial number of columns")
    c.add_argument("--d", type=_positive(int), required=True)
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--kind", choices=["cw", "bernoulli"], default="cw")
    c.add_argument("--target", choices=["uffd-eq", "uffd-le", "disjunctive"], default="uffd-eq")
    c.add_argument("--mode", choices=["eq", "le"], default=None)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-retries", type=int, default=10)
    c.add_argument("--min-columns", type=int, default=2)
    c.add_argument("--allow-large", action="store_true", help="lift the desk-scale size limit")
    c.add_argument("--out", type=Path, default=None)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a code property exhaustively")
    v.add_argument("--code", required=True)
    v.add_argument("--d", type=_positive(int), required=True)
    v.add_argument("--property", required=True, help="uf, uffd, disjunctive, ssm, list-decoding or cover-cap")
    v.add_argument("--mode", choices=["eq", "le"], default=None)
    v.add_argument("--list-size", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decode", help="decode one outcome")
    d.add_argument("--code", required=True)
    d.add_argument("--outcome", required=True)
    d.add_argument("--d", type=_positive(int), required=True)
    d.add_argument("--mode", choices=["eq", "le"], default="eq")
    d.add_argument("--algorithm", choices=["uffd", "comp", "dd", "brute"], default="uffd")
    d.set_defaults(func=cmd_decode)

    s = sub.add_parser("simulate", help="decode random defective sets")
    s.add_argument("--code", required=True)
    s.add_argument("--d", type=_positive(int), required=True)
    s.add_argument("--mode", choices=["eq", "le"], default="eq")
    s.add_argument("--trials", type=_positive(int), default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_simulate)

    def table_flags(p):
        p.add_argument("--d-min", type=int, default=2)
        p.add_argument("--d-max", type=int, default=6)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--quiet", action="store_true", help="no progress on stderr")

    def grid_flags(p):
        p.add_argument("--p-step", type=_positive(float), default=None)
        p.add_argument("--alpha-step", type=_positive(float), default=None)

    b = sub.add_parser("bounds", help="random-coding rate bounds")
    b.add_argument("action", nargs="?", choices=["table"], default=None)
    b.add_argument("--family", choices=["uffd-eq", "uf-eq", "uffd-le", "uf-le", "disjunctive"])
    b.add_argument("--d", type=_positive(int))
    b.add_argument("--p", type=float, default=None)
    b.add_argument("--json", action="store_true")
    grid_flags(b)
    table_flags(b)
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("table", help="same as 'bounds table'")
    grid_flags(t)
    table_flags(t)
    t.set_defaults(func=cmd_table)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return a.func(a)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
