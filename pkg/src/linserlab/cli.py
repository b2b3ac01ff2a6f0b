"""Command-line front end.

Subcommands: eval, grid, sweep, zariski, family, check.  Exact values are
never silently floated: machine output carries both the symbolic form and
a decimal approximation with stated precision.  Identical configuration
and seed produce byte-identical output.

Exit codes: 0 success, 1 computational error (bad class, budget, failed
assertion), 2 configuration error (flags, malformed files).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .engine import (asymptotic_cohomology, asymptotic_order, fujita_sweep,
                     geometric_schedule, relative_gap, restricted_volume,
                     volume, volume_by_counting, zariski)
from .errors import ConfigError, LabError
from .families import (asymptotic_ord0, parse_family_text, regularity_scan,
                       verify_multiplicativity)
from .harness import (chamber_fit, check_homogeneity, check_log_concavity,
                      check_lipschitz, check_numerical_invariance)
from .models import (BlowupPdModel, CutkoskyModel, NSClass, SurfaceModel,
                     ToricModel, as_class, resolve_model)
from .scalars import QuadExt, format_scalar, parse_rat, rat


def _approx(value) -> str:
    return f"{float(value):.12g}"


def exact_payload(value):
    return {"exact": format_scalar(value), "approx": _approx(value),
            "precision": "12 significant digits"}


def _parse_class(text: str) -> NSClass:
    try:
        return NSClass([parse_rat(tok) for tok in text.split(",")])
    except Exception as exc:
        raise ConfigError(f"bad class {text!r}: {exc}") from None


def _parse_vector(text: str):
    return [parse_rat(tok) for tok in text.split(",")]


def parse_slice(spec: str):
    """Parse 'origin=-2,-2;d1=1,0;d2=0,1;n=33;step=1/8'."""
    fields = {}
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ConfigError(f"bad slice component {chunk!r}")
        k, v = chunk.split("=", 1)
        fields[k.strip()] = v.strip()
    try:
        origin = _parse_vector(fields["origin"])
        d1 = _parse_vector(fields["d1"])
        d2 = _parse_vector(fields["d2"])
        n = int(fields["n"])
        step = parse_rat(fields.get("step", "1"))
    except KeyError as exc:
        raise ConfigError(f"slice spec missing {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ConfigError(f"bad slice spec: {exc}") from None
    if n < 2:
        raise ConfigError("slice needs n >= 2")
    if len(d1) != len(origin) or len(d2) != len(origin):
        raise ConfigError("slice directions must match the origin length")
    if all(c == 0 for c in d1) or all(c == 0 for c in d2):
        raise ConfigError("slice directions must be nonzero")
    return NSClass(origin), NSClass(d1), NSClass(d2), n, step


def render(fmt, columns, rows, payload=None) -> str:
    """Rows of already-stringified cells to table/csv; payload to json."""
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
        return buf.getvalue().rstrip("\n")
    widths = [max(len(str(c)), *(len(str(r[i])) for r in rows)) if rows
              else len(str(c)) for i, c in enumerate(columns)]
    out = ["  ".join(str(c).ljust(w) for c, w in zip(columns, widths))]
    for r in rows:
        out.append("  ".join(str(x).ljust(w) for x, w in zip(r, widths)))
    return "\n".join(out)


def rows_from_json(text: str):
    """Re-render a grid/sweep JSON payload as its table rows (round-trip)."""
    payload = json.loads(text)
    return payload["columns"], [[cell for cell in row] for row in payload["rows"]]


# -- eval -----------------------------------------------------------------------

def _cmd_eval(args) -> int:
    model = resolve_model(args.model)
    xi = _parse_class(args.cls)
    what = args.what
    if what == "vol":
        res = volume(model, xi)
        text = f"{format_scalar(res.value)} ({res.provenance})"
        payload = {"command": "eval", "what": "vol", "model": args.model,
                   "class": [str(c) for c in xi],
                   "value": exact_payload(res.value),
                   "provenance": res.provenance, "detail": res.detail}
    elif what == "hhat":
        vec = asymptotic_cohomology(model, xi)
        text = "  ".join(f"h^{i}={format_scalar(v)}" for i, v in enumerate(vec.values))
        payload = {"command": "eval", "what": "hhat", "model": args.model,
                   "class": [str(c) for c in xi],
                   "values": [exact_payload(v) for v in vec.values]}
    elif what == "ord":
        if args.ray is None:
            raise ConfigError("--what ord needs --ray")
        val = asymptotic_order(model, args.ray, xi)
        text = format_scalar(val)
        payload = {"command": "eval", "what": "ord", "ray": args.ray,
                   "model": args.model, "class": [str(c) for c in xi],
                   "value": exact_payload(val)}
    elif what == "rvol":
        if args.ray is None:
            raise ConfigError("--what rvol needs --ray")
        val = restricted_volume(model, args.ray, xi)
        text = format_scalar(val)
        payload = {"command": "eval", "what": "rvol", "ray": args.ray,
                   "model": args.model, "class": [str(c) for c in xi],
                   "value": exact_payload(val)}
    else:
        raise ConfigError(f"unknown --what {what!r}")
    if args.format == "json":
        print(render("json", [], [], payload))
    else:
        print(text)
    return 0


# -- grid -----------------------------------------------------------------------

def _cmd_grid(args) -> int:
    model = resolve_model(args.model)
    origin, d1, d2, n, step = parse_slice(args.slice)
    columns = ["s", "t"] + [f"c{i}" for i in range(len(origin))] + ["vol"]
    want_hhat = args.with_hhat
    hhat_len = (model.dim + 1) if isinstance(model, BlowupPdModel) else 3
    if want_hhat:
        columns += [f"hhat{i}" for i in range(hhat_len)]
    for ray in args.ray:
        columns.append(f"ord{ray}")
    rows = []
    jrows = []
    for i in range(n):
        for j in range(n):
            s, t = i * step, j * step
            xi = origin + s * d1 + t * d2
            cells = [format_scalar(s), format_scalar(t)]
            cells += [format_scalar(c) for c in xi]
            jcell = {"s": str(s), "t": str(t), "class": [str(c) for c in xi]}
            try:
                v = volume(model, xi).value
                cells.append(format_scalar(v))
                jcell["vol"] = exact_payload(v)
            except LabError:
                cells.append("")
                jcell["vol"] = None
            if want_hhat:
                try:
                    vec = asymptotic_cohomology(model, xi).values
                    cells += [format_scalar(v) for v in vec]
                    jcell["hhat"] = [exact_payload(v) for v in vec]
                except LabError:
                    cells += [""] * hhat_len
                    jcell["hhat"] = None
            for ray in args.ray:
                try:
                    o = asymptotic_order(model, ray, xi)
                    cells.append(format_scalar(o))
                    jcell.setdefault("ord", {})[str(ray)] = exact_payload(o)
                except LabError:
                    cells.append("")
                    jcell.setdefault("ord", {})[str(ray)] = None
            rows.append(cells)
            jrows.append(jcell)
    if args.format == "json":
        payload = {"command": "grid", "model": args.model, "columns": columns,
                   "rows": [[c for c in r] for r in rows], "cells": jrows}
        print(render("json", [], [], payload))
    else:
        print(render(args.format, columns, rows))
    return 0


# -- sweep ----------------------------------------------------------------------

def _cmd_sweep(args) -> int:
    model = resolve_model(args.model)
    if args.divisor is not None:
        divisor = [parse_rat(t) for t in args.divisor.split(",")]
    elif args.cls is not None:
        divisor = _parse_class(args.cls)
    else:
        raise ConfigError("sweep needs --divisor or --class")
    schedule = geometric_schedule(args.to, start=args.start)
    if args.mode == "fujita":
        rows_data = fujita_sweep(model, divisor, schedule, budget=args.budget)
    else:
        res = volume_by_counting(model, divisor, schedule, budget=args.budget)
        rows_data = list(res.sequence)
    target = None
    try:
        if isinstance(model, ToricModel):
            target = volume(model, model.class_of_divisor(divisor)).value
        else:
            target = volume(model, divisor).value
    except LabError:
        target = None
    columns = ["m", "value", "approx", "rel_gap"]
    rows = []
    jrows = []
    final_gap = None
    for m, v in rows_data:
        gap = None
        if target is not None and (target != 0 or v != 0):
            gap = relative_gap(QuadExt(0) + v, QuadExt(0) + target) \
                if isinstance(target, QuadExt) else relative_gap(v, target)
        rows.append([m, format_scalar(v), _approx(v),
                     _approx(gap) if gap is not None else ""])
        jrows.append({"m": m, "value": exact_payload(v),
                      "rel_gap": _approx(gap) if gap is not None else None})
        final_gap = gap
    if args.format == "json":
        payload = {"command": "sweep", "model": args.model, "mode": args.mode,
                   "columns": columns, "rows": [[str(c) for c in r] for r in rows],
                   "cells": jrows,
                   "target": exact_payload(target) if target is not None else None,
                   "final_rel_gap": _approx(final_gap) if final_gap is not None else None}
        print(render("json", [], [], payload))
    else:
        print(render(args.format, columns, rows))
        if target is not None:
            print(f"closed form: {format_scalar(target)}"
                  + (f"   final relative gap: {_approx(final_gap)}"
                     if final_gap is not None else ""))
    if args.tol is not None:
        if final_gap is None:
            raise LabError("no closed form available to compare against")
        if final_gap > rat(args.tol):
            print(f"FAIL: final relative gap {_approx(final_gap)} exceeds "
                  f"{args.tol}", file=sys.stderr)
            return 1
    return 0


# -- zariski ----------------------------------------------------------------------

def _cmd_zariski(args) -> int:
    model = resolve_model(args.model)
    if not isinstance(model, SurfaceModel):
        raise ConfigError("zariski needs a surface model")
    xi = _parse_class(args.cls)
    dec = zariski(model, xi)
    vol = model.q(dec.positive)
    if args.format == "json":
        payload = {"command": "zariski", "model": args.model,
                   "class": [str(c) for c in xi],
                   "positive": [str(c) for c in dec.positive],
                   "negative": [str(c) for c in dec.negative],
                   "support": list(dec.support),
                   "coefficients": [str(c) for c in dec.coefficients],
                   "volume": exact_payload(vol)}
        print(render("json", [], [], payload))
    else:
        print(f"P = ({', '.join(format_scalar(c) for c in dec.positive)})")
        print(f"N = ({', '.join(format_scalar(c) for c in dec.negative)})")
        print(f"support = {list(dec.support)}")
        print(f"coefficients = {[format_scalar(c) for c in dec.coefficients]}")
        print(f"vol = {format_scalar(vol)} (closed_form)")
    return 0


# -- family -----------------------------------------------------------------------

def _load_family(args):
    if args.family:
        with open(args.family, "r", encoding="utf-8") as fh:
            return parse_family_text(fh.read())
    if args.rule:
        rank = args.rank
        header = f"family rank {rank} vars {args.vars}\n"
        if args.weight:
            header += f"weight {args.weight}\n"
        return parse_family_text(header + "rule " + args.rule + "\n")
    raise ConfigError("family needs --family FILE or --rule TEXT")


def _cmd_family(args) -> int:
    fam = _load_family(args)
    status = 0
    sections = []
    payload = {"command": "family", "name": fam.name, "rank": fam.rank,
               "vars": fam.nvars}
    if args.verify_box is not None:
        rep = verify_multiplicativity(fam, args.verify_box)
        sections.append(rep.to_text())
        payload["multiplicativity"] = {
            "pairs": rep.pairs_checked, "passed": rep.passed,
            "violations": [[list(m), list(l), list(a)] for m, l, a in rep.violations[:50]]}
        if not rep.passed:
            status = 1
    if args.ord is not None:
        direction = tuple(int(x) for x in args.ord.split(","))
        est = asymptotic_ord0(fam, direction, args.depth)
        sections.append(f"ord along {direction} at depth {args.depth}: "
                        f"{format_scalar(est.value)}  "
                        f"(bracket {[f'{k}:{v}' for k, v in est.bracket]})")
        payload["ord"] = {"direction": list(direction), "depth": args.depth,
                          "value": exact_payload(est.value),
                          "sequence": [[k, str(v)] for k, v in est.sequence]}
    if args.scan is not None:
        origin, d1, d2, n, step = parse_slice(args.scan)
        scan = regularity_scan(fam, tuple(origin), tuple(step * c for c in d1),
                               tuple(step * c for c in d2), steps=n,
                               depth=args.depth,
                               require_ample_indices=not args.no_ample_check)
        sections.append(scan.to_text())
        payload["scan"] = {
            "max_second_difference": str(scan.max_second_difference),
            "piecewise_linear": scan.piecewise_linear,
            "creases": [[str(c) for c in p] for p in scan.crease_points],
            "samples": [{"point": [str(c) for c in s.point],
                         "value": str(s.value)} for s in scan.samples]}
    if not sections and args.format != "json":
        raise ConfigError("family needs at least one of --verify-box/--ord/--scan")
    if args.format == "json":
        print(render("json", [], [], payload))
    else:
        print("\n".join(sections))
    return status


# -- check ------------------------------------------------------------------------

_DEFAULT_SLICES = {
    "blowup": "origin=-1,1;d1=1,0;d2=0,-1;n=12;step=1/4",
    "cutkosky": "origin=0,0,0;d1=1,0,0;d2=0,0,1;n=4;step=1/4",
}


def _cmd_check(args) -> int:
    model = resolve_model(args.model)
    prop = args.property
    if prop == "log_concavity":
        rep = check_log_concavity(model, n=args.n, seed=args.seed)
    elif prop == "homogeneity":
        rep = check_homogeneity(model, n=args.n, seed=args.seed)
    elif prop == "numerical_invariance":
        rep = check_numerical_invariance(model, n=args.n, seed=args.seed)
    elif prop in ("lipschitz", "chamber_fit"):
        spec = args.slice
        if spec is None:
            key = "cutkosky" if isinstance(model, CutkoskyModel) else "blowup"
            spec = _DEFAULT_SLICES[key]
        origin, d1, d2, n, step = parse_slice(spec)
        if prop == "lipschitz":
            rep = check_lipschitz(model, origin, d1, d2, steps=n,
                                  span=n * step)
        else:
            values = [k * step for k in range(n + 1)]
            fit = chamber_fit(model, origin, d1, d2, degree=model.dim,
                              s_values=values, t_values=values)
            print(fit.to_text() if args.format != "json" else json.dumps({
                "command": "check", "property": prop,
                "chambers": len(fit.chambers),
                "piecewise_polynomial": fit.piecewise_polynomial,
                "detail": fit.to_text()}, indent=2, sort_keys=True))
            return 0 if fit.piecewise_polynomial else 1
    else:
        raise ConfigError(f"unknown property {prop!r}")
    if args.format == "json":
        payload = {"command": "check", "property": prop, "model": args.model,
                   "passed": rep.passed, "samples": rep.samples,
                   "violations": len(rep.violations),
                   "worst_margin": rep.worst_margin, "detail": rep.detail}
        print(render("json", [], [], payload))
    else:
        print(rep.to_text())
    return 0 if rep.passed else 1


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linserlab",
        description="Exact asymptotic invariants of divisor classes on "
                    "catalog variety models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True):
        if model:
            p.add_argument("--model", required=True,
                           help="model file path or preset name")
        p.add_argument("--format", choices=("table", "csv", "json"),
                       default="table")
        p.add_argument("--budget", type=int, default=None,
                       help="lattice-point candidate budget")

    p = sub.add_parser("eval", help="evaluate an invariant at one class")
    common(p)
    p.add_argument("--class", dest="cls", required=True,
                   help="comma-separated class coordinates")
    p.add_argument("--what", choices=("vol", "hhat", "ord", "rvol"),
                   default="vol")
    p.add_argument("--ray", type=int, default=None)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("grid", help="invariants over a 2D slice")
    common(p)
    p.add_argument("--slice", required=True,
                   help="origin=..;d1=..;d2=..;n=..;step=..")
    p.add_argument("--with-hhat", action="store_true")
    p.add_argument("--ray", type=int, action="append", default=[])
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("sweep", help="oracle or moving-part sweeps")
    common(p)
    p.add_argument("--divisor", default=None,
                   help="integral divisor data (model specific)")
    p.add_argument("--class", dest="cls", default=None)
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--mode", choices=("oracle", "fujita"), default="oracle")
    p.add_argument("--tol", default=None,
                   help="fail (exit 1) when the final relative gap exceeds this")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("zariski", help="Zariski decomposition on a surface")
    common(p)
    p.add_argument("--class", dest="cls", required=True)
    p.set_defaults(func=_cmd_zariski)

    p = sub.add_parser("family", help="multigraded monomial-ideal families")
    common(p, model=False)
    p.add_argument("--family", default=None, help="family file")
    p.add_argument("--rule", default=None, help="inline rule text")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--vars", type=int, default=2)
    p.add_argument("--weight", default=None, help="comma-separated weights")
    p.add_argument("--verify-box", type=int, default=None,
                   help="check multiplicativity on [-B..B]^rank")
    p.add_argument("--ord", default=None, help="direction m1,m2,...")
    p.add_argument("--scan", default=None, help="slice spec for regularity scan")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--no-ample-check", action="store_true")
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("check", help="property suites")
    common(p)
    p.add_argument("--property", required=True,
                   choices=("log_concavity", "homogeneity",
                            "numerical_invariance", "lipschitz", "chamber_fit"))
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slice", default=None)
    p.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
