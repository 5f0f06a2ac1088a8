"""kannappan command-line front door.

    kannappan witness
    kannappan defect --fn quadratic:1,0 --carrier Z --triple 3,4,5
    kannappan eta --word bbaa --tilde
    kannappan limit --fn quadratic:1,1+noise:0.5,3 --point 7 --mode hat
    kannappan verify

Every run builds a JSON-able report; --format picks json, csv or a plain
table.  Reports carry the seed and tolerances used.  Parse errors exit 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import acceptance
from .abelian import fit_least_squares, fit_quadratic_additive, jung_recover, measured_defect
from .algebra import DomainError, FreeAbelian, parse_carrier, vec
from .counterexample import instability_witness
from .limits import DEFAULT_NMAX, DEFAULT_TOL, decompose, hat_limit, tilde_limit
from .patterns import PatternCounter
from .realfn import kannappan_defect, nfold_defect, parse_fn, sup_defect

FORMATS = ("table", "json", "csv")


class UsageError(Exception):
    """Bad command-line input; reported with usage and exit code 2."""


def _jsonable(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else float(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def dump_json(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2)


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v} (~{float(v):.12g})"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


# ---------------------------------------------------------------------------
# input parsing


def _carrier(args):
    try:
        return parse_carrier(args.carrier)
    except DomainError as exc:
        raise UsageError(f"--carrier: {exc}") from exc


def _fn(args, carrier):
    if not args.fn:
        raise UsageError("--fn is required")
    try:
        return parse_fn(args.fn, carrier)
    except (DomainError, KeyError, ValueError, OSError) as exc:
        raise UsageError(f"--fn: {exc}") from exc


def _element(carrier, text: str):
    try:
        return carrier.parse(text.strip())
    except (DomainError, ValueError) as exc:
        raise UsageError(f"cannot parse {text!r} in {carrier}: {exc}") from exc


def _elements(carrier, tokens: list[str], expect: int | None = None) -> list:
    # one token "3,4,5" splits on commas; otherwise each token is one literal
    if len(tokens) == 1 and (expect is None or expect > 1):
        tokens = tokens[0].split(";" if ";" in tokens[0] else ",")
    if expect is not None and len(tokens) != expect:
        raise UsageError(f"expected {expect} elements, got {len(tokens)}: {tokens}")
    return [_element(carrier, t) for t in tokens]


def _corpus(args, carrier) -> list:
    if getattr(args, "corpus", None):
        path = Path(args.corpus)
        if not path.exists():
            raise UsageError(f"--corpus: no such file {path}")
        lines = [ln.strip() for ln in path.read_text().splitlines()]
        items = [_element(carrier, ln) for ln in lines if ln and not ln.startswith("#")]
    elif getattr(args, "range", None) or getattr(args, "radius", None) is not None:
        if args.radius is not None:
            args.range = f"{-args.radius}:{args.radius}"
        try:
            lo, hi = (int(t) for t in args.range.split(":"))
        except ValueError as exc:
            raise UsageError("--range expects lo:hi") from exc
        if not isinstance(carrier, FreeAbelian) or carrier.k != 1:
            raise UsageError("--range needs the carrier Z")
        items = [vec(n) for n in range(lo, hi + 1)]
    else:
        raise UsageError("a corpus is required (--corpus FILE or --range lo:hi)")
    if not items:
        raise UsageError("empty corpus")
    return items


def _config(args, **extra) -> dict:
    cfg = {"subcommand": args.cmd}
    for key in ("fn", "carrier", "corpus", "range", "radius", "seed", "tol", "nmax", "mode", "method"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    cfg.update(extra)
    return cfg


# ---------------------------------------------------------------------------
# subcommands; each returns (ok, report, rows for table/csv)


def cmd_defect(args):
    carrier = _carrier(args)
    f = _fn(args, carrier)
    if args.triple:
        x, y, z = _elements(carrier, args.triple, 3)
        value = kannappan_defect(f, x, y, z)
        report = {"config": _config(args), "triple": [str(x), str(y), str(z)], "value": value}
        return True, report, [("triple", f"({x}, {y}, {z})"), ("defect", _fmt(value))]
    corpus = _corpus(args, carrier)
    rng = random.Random(args.seed)
    if len(corpus) ** 3 <= args.samples:
        triples = list(itertools.product(corpus, repeat=3))
    else:
        triples = [tuple(rng.choice(corpus) for _ in range(3)) for _ in range(args.samples)]
    rep = sup_defect(f, triples)
    report = {"config": _config(args, samples=args.samples), **rep.to_json()}
    ok = args.c is None or abs(rep.sup_estimate) <= Fraction(args.c)
    rows = [("samples", rep.samples), ("witness", "(" + ", ".join(map(str, rep.triple)) + ")"),
            ("sup |defect|", _fmt(rep.sup_estimate))]
    return ok, report, rows


def cmd_nfold(args):
    carrier = _carrier(args)
    f = _fn(args, carrier)
    xs = _elements(carrier, args.points)
    try:
        res = nfold_defect(f, xs, args.c)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    ok = res.holds(args.tol)
    report = {"config": _config(args, c=args.c), "n": len(xs), "points": [str(x) for x in xs],
              "value": res.value, "bound": res.bound, "holds": ok}
    return ok, report, [("n", len(xs)), ("bound", _fmt(res.bound)), ("value", _fmt(res.value))]


def cmd_limit(args):
    carrier = _carrier(args)
    f = _fn(args, carrier)
    x = _element(carrier, args.point)
    fn = hat_limit if args.mode == "hat" else tilde_limit
    res = fn(f, x, args.nmax, args.tol, c=args.c, method=args.method, base=args.base)
    report = {"config": _config(args, base=args.base, c=args.c), "point": str(x), **res.to_json()}
    rows = [("point", str(x)), ("method", res.method), ("iterations", res.iterations),
            ("converged", res.converged)]
    rows += [("warning", w) for w in res.warnings]
    rows.append((f"{args.mode} limit", _fmt(res.value)))
    return res.converged, report, rows


def cmd_decompose(args):
    carrier = _carrier(args)
    f = _fn(args, carrier)
    corpus = _corpus(args, carrier)
    dec = decompose(f, corpus, args.nmax, args.tol, args.method,
                    corpus_name=args.corpus or args.range)
    report = {"config": _config(args), **dec.to_json()}
    rows = [(str(p.point), _fmt(p.value), _fmt(p.quartic), _fmt(p.linear), _fmt(p.remainder))
            for p in dec.points]
    header = ("point", "f", "quartic", "linear", "remainder")
    return not dec.partial, report, {"header": header, "rows": rows,
                                     "footer": [("remainder sup", _fmt(dec.remainder_sup))]}


def cmd_eta(args):
    try:
        counter = PatternCounter(args.pattern)
        word = args.word
        if args.tilde:
            value, what = counter.eta_tilde(word), "eta~"
        elif args.power is not None:
            value, what = counter.power_count(word, args.power), f"eta(x^(2^{args.power}))"
        else:
            value, what = counter.eta(word), "eta"
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    report = {"config": _config(args, word=word, pattern=args.pattern), "quantity": what,
              "value": value, "crossing": counter.crossing_count(word)}
    return True, report, [("word", word), (what, value)]


def cmd_witness(args):
    rep = instability_witness()
    report = {"config": _config(args), **rep.to_json()}
    return rep.ok, report, {"header": ("quantity", "value", "provenance"), "rows": rep.rows(),
                            "footer": [("value", rep.value)]}


def cmd_fit(args):
    carrier = FreeAbelian(args.dim)
    f = _fn(args, carrier)
    if args.lstsq:
        model = fit_least_squares(f, _corpus(args, carrier), args.dim)
    else:
        model = fit_quadratic_additive(f, args.dim)
    report = {"config": _config(args, dim=args.dim, lstsq=args.lstsq), **model.to_json()}
    rows = [(f"M[{i}]", " ".join(map(_fmt, row))) for i, row in enumerate(model.form)]
    rows.append(("a", " ".join(map(_fmt, model.additive))))
    return True, report, rows


def cmd_jung(args):
    carrier = FreeAbelian(args.dim)
    f = _fn(args, carrier)
    corpus = _corpus(args, carrier)
    d = measured_defect(f, corpus) if args.c is None else Fraction(args.c)
    res = jung_recover(f, corpus, d, Fraction(args.theta), method=args.method, tol=args.tol)
    report = {"config": _config(args, dim=args.dim, theta=args.theta, c=args.c), **res.to_json()}
    rows = [(f"Q[{i}]", " ".join(map(_fmt, row))) for i, row in enumerate(res.Q.form)]
    rows += [("measured defect", _fmt(d)), ("sup |f - Q|", _fmt(res.sup_dev)),
             ("3 * defect", _fmt(3 * Fraction(d))), ("bound holds", res.holds)]
    return res.holds, report, rows


def cmd_verify(args):
    only = set(args.only) if args.only else None
    echo = print if args.format == "table" else None
    results = acceptance.run_all(args.seed, only, echo=echo)
    ok = all(r.ok for r in results)
    report = {"config": _config(args), "ok": ok,
              "criteria": [{k: v for k, v in r.to_json().items() if k != "seconds"}
                           for r in results]}
    passed = sum(r.ok for r in results)
    rows = {"header": ("criterion", "ok", "detail"),
            "rows": [(r.number, r.ok, r.detail) for r in results],
            "footer": [("passed", f"{passed}/{len(results)}")], "echoed": True}
    return ok, report, rows


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--out", help="also write the JSON report here")

    fn_opts = argparse.ArgumentParser(add_help=False)
    fn_opts.add_argument("--fn", help="function: shorthand, inline JSON or @file.json")
    fn_opts.add_argument("--carrier", default="Z", help="Z, Z^k, Z/m, K4, F:ab, zero(..), wr(..), prod(..)")

    corpus_opts = argparse.ArgumentParser(add_help=False)
    corpus_opts.add_argument("--corpus", help="file with one element literal per line")
    corpus_opts.add_argument("--range", help="integer range on Z, written --range=lo:hi")
    corpus_opts.add_argument("--radius", type=int, help="shorthand for --range=-R:R")

    limit_opts = argparse.ArgumentParser(add_help=False)
    limit_opts.add_argument("--nmax", type=int, default=DEFAULT_NMAX)
    limit_opts.add_argument("--method", choices=("auto", "closed", "iterate"), default="auto")

    p = argparse.ArgumentParser(prog="kannappan", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("defect", parents=[common, fn_opts, corpus_opts], help="Kannappan defect")
    s.add_argument("--triple", nargs="+", help="x,y,z or three literals")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--c", type=Fraction, help="fail if the sup exceeds c")
    s.set_defaults(run=cmd_defect)

    s = sub.add_parser("nfold", parents=[common, fn_opts], help="n-fold defect and its bound")
    s.add_argument("--points", nargs="+", required=True)
    s.add_argument("--c", type=Fraction, help="defect constant (estimated if omitted)")
    s.set_defaults(run=cmd_nfold)

    s = sub.add_parser("limit", parents=[common, fn_opts, limit_opts], help="hat / tilde limit")
    s.add_argument("--point", required=True)
    s.add_argument("--mode", choices=("hat", "tilde"), default="hat")
    s.add_argument("--base", type=int, default=2)
    s.add_argument("--c", type=Fraction)
    s.set_defaults(run=cmd_limit)

    s = sub.add_parser("decompose", parents=[common, fn_opts, corpus_opts, limit_opts],
                       help="quartic / linear / bounded split")
    s.set_defaults(run=cmd_decompose)

    s = sub.add_parser("eta", parents=[common], help="aabb counts")
    s.add_argument("--word", required=True)
    s.add_argument("--pattern", default="aabb")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--tilde", action="store_true")
    g.add_argument("--power", type=int, help="count in x^(2^n)")
    s.set_defaults(run=cmd_eta)

    s = sub.add_parser("witness", parents=[common], help="instability witness table")
    s.set_defaults(run=cmd_witness)

    s = sub.add_parser("fit", parents=[common, fn_opts, corpus_opts], help="fit M, a on Z^k")
    s.add_argument("--dim", type=int, default=1)
    s.add_argument("--lstsq", action="store_true", help="float least squares over the corpus")
    s.set_defaults(run=cmd_fit)

    s = sub.add_parser("jung", parents=[common, fn_opts, corpus_opts], help="Jung-type recovery on Z^k")
    s.add_argument("--dim", type=int, default=1)
    s.add_argument("--theta", type=Fraction, default=Fraction(0))
    s.add_argument("--c", type=Fraction, help="defect bound (measured if omitted)")
    s.add_argument("--method", choices=("auto", "closed", "iterate"), default="auto")
    s.set_defaults(run=cmd_jung)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", type=int, nargs="+", help="criterion numbers")
    s.set_defaults(run=cmd_verify)
    return p


def _render(args, ok: bool, report: dict, rows) -> str:
    if args.format == "json":
        return dump_json(report)
    if isinstance(rows, dict):
        header, body, footer = rows["header"], rows["rows"], rows.get("footer", [])
    else:
        header, body, footer = None, [], rows
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(header)
            w.writerows(body)
        else:
            w.writerow(("key", "value"))
            w.writerows(footer)
        return buf.getvalue().rstrip("\n")
    lines = []
    if header and not (isinstance(rows, dict) and rows.get("echoed")):
        widths = [max(len(str(r[i])) for r in [header, *body]) for i in range(len(header))]
        lines.append("  ".join(str(h).ljust(wd) for h, wd in zip(header, widths)).rstrip())
        for r in body:
            lines.append("  ".join(str(c).ljust(wd) for c, wd in zip(r, widths)).rstrip())
    for key, value in footer:
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ok, report, rows = args.run(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"kannappan {args.cmd}: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        report = {"config": _config(args), "ok": False, "error": str(exc)}
        print(dump_json(report) if args.format == "json" else f"error: {exc}")
        return 1
    report.setdefault("ok", ok)
    if args.out:
        Path(args.out).write_text(dump_json(report) + "\n")
    print(_render(args, ok, report, rows))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
