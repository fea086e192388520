"""
Command-line entry point.

    sierpile counts --level 2
    sierpile heights --level 2 --class s2 [--vertex LU:t] [--method local] [--float]
    sierpile expectations --level 3 --sink two
    sierpile limits [--sink one] [--method local]
    sierpile sample sandpile|lerw|wilson --level 2 --seed 7
    sierpile verify --suite fast|full --seed 0
    sierpile export graph|heatmap --level 3 --out file

Exit codes: 0 success, 1 domain / usage error, 2 verification failure.
"""

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import census, expectations, gasket, heights, oracle, sandpile
from .errors import DomainError

CLASS_NAMES = {"tree": "T", "s1": "S1", "s2": "S2", "s3": "S3", "r": "R"}


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _num(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    return str(x)


def _dec(x, digits=12):
    if isinstance(x, Fraction):
        return f"{float(x):.{digits}g}"
    return f"{x:.{digits}g}" if isinstance(x, float) else str(x)


def _with_decimals(d):
    """Exact strings for every Fraction leaf, plus a parallel 'decimal' map for top-level ones."""
    out = {}
    dec = {}
    for k, v in d.items():
        if isinstance(v, Fraction):
            out[k] = _num(v)
            dec[k] = _dec(v)
        elif isinstance(v, (list, tuple)) and v and all(isinstance(x, Fraction) for x in v):
            out[k] = [_num(x) for x in v]
            dec[k] = [_dec(x) for x in v]
        else:
            out[k] = v
    if dec:
        out["decimal"] = dec
    return out


def _emit(args, obj, rows=None, header=None):
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if rows is None:
            header = list(obj.keys())
            rows = [[obj[k] if not isinstance(obj[k], (list, dict)) else json.dumps(obj[k], sort_keys=True)
                     for k in header]]
        if header:
            w.writerow(header)
        for r in rows:
            w.writerow([_num(x) if isinstance(x, Fraction) else x for x in r])
        text = buf.getvalue()
    else:
        text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------ commands

def cmd_counts(args):
    st = census.counts_recursive(args.level)
    if st != census.counts_closed(args.level):
        raise AssertionError("recursion and closed form disagree")
    _emit(args, {"n": st.n, "tau": str(st.tau), "sigma": str(st.sigma), "rho": str(st.rho)})
    return 0


def _method(args):
    return "exact" if args.method is None else args.method


def cmd_heights(args):
    cls = CLASS_NAMES[args.cls]
    if args.float:
        from . import transfer
        g = gasket.build_graph(args.level)
        arr = transfer.ensemble_table(args.level, cls, exact=False)
        rows = []
        for i, v in enumerate(g.vertices):
            x, y = gasket.display_xy(v)
            for k in range(5):
                rows.append([f"{x:.6f}", f"{y:.6f}", str(v), k, f"{arr[i][k]:.12g}"])
        if args.format == "csv":
            _emit(args, None, rows, ["x", "y", "vertex", "k", "probability"])
        else:
            _emit(args, {"level": args.level, "class": cls, "numeric": "float (approximate)",
                         "table": {str(v): [float(arr[i][k]) for k in range(5)]
                                   for i, v in enumerate(g.vertices)}})
        return 0
    vp = heights.vertex_probs(args.level, cls, _method(args))
    if args.vertex:
        v = gasket.VertexAddr.parse(args.vertex)
        d = vp[v]
        deg = gasket.build_graph(args.level).degree(v)
        h = heights.desc_to_height(d, deg)
        _emit(args, _with_decimals({"level": args.level, "class": cls, "vertex": str(v),
                                    "method": vp.method, "desc": list(d.probs), "height": list(h.probs)}))
        return 0
    if args.format == "csv":
        rows = []
        for v, d in sorted(vp.table.items()):
            x, y = gasket.display_xy(v)
            for k in range(5):
                rows.append([f"{x:.6f}", f"{y:.6f}", str(v), k, _num(d[k])])
        _emit(args, None, rows, ["x", "y", "vertex", "k", "probability"])
    else:
        _emit(args, vp.to_json())
    return 0


def cmd_expectations(args):
    sink = args.sink or "one"
    rep = expectations.expected_heights(args.level, sink, _method(args))
    dvec = [expectations.expected_desc(args.level, i, _method(args)) for i in range(4)]
    obj = {"level": args.level, "sinks": list(rep.sink), "method": rep.method,
           "W": list(rep.w), "W_total": rep.total,
           "looping_constant": expectations.looping_constant(args.level, _method(args))}
    out = _with_decimals(obj)
    out["Dbar"] = {c: [_num(dvec[i][a]) for i in range(4)] for a, c in enumerate(census.CLASSES)}
    _emit(args, out)
    return 0


def cmd_limits(args):
    rep = expectations.limit_report(args.sink or "one", _method(args))
    obj = {"sink": list(rep.sink), "method": rep.method, "w": list(rep.w),
           "mean_height": rep.wbar, "zeta": rep.zeta, "dbar": list(rep.dbar[:4]),
           "dbar_total": rep.dbar_total}
    _emit(args, _with_decimals(obj))
    return 0


def cmd_sample(args):
    rng = sandpile.default_rng(args.seed)
    g = gasket.build_graph(args.level)
    if args.kind == "sandpile":
        cg = gasket.contract_sinks(g, args.sink or "one")
        c, counts = sandpile.run_chain(sandpile.max_stable(cg), args.steps, rng, burn_in=args.burn_in)
        mean = Fraction(sum(sum(k) * v for k, v in counts.items()), max(1, sum(counts.values())))
        _emit(args, {"final": c.to_json(), "steps": args.steps, "burn_in": args.burn_in,
                     "mean_total_height": _dec(mean), "distinct_states": len(counts)})
    elif args.kind == "lerw":
        sinks = gasket.parse_sinks(args.sink or "one")
        tg = [g.index[gasket.corner_addr(args.level, c)] for c in sinks]
        start = g.index[gasket.VertexAddr.parse(args.vertex)] if args.vertex else 0
        s = oracle.lerw(g, start, tg, rng, args.seed)
        _emit(args, {"start": str(g.vertices[start]), "path": [str(g.vertices[i]) for i in s.path]})
    else:
        sinks = gasket.parse_sinks(args.sink or "one")
        roots = [g.index[gasket.corner_addr(args.level, c)] for c in sinks]
        parent = oracle.wilson_sample(g, roots, rng)
        V = g.vertices
        _emit(args, {"roots": [str(V[r]) for r in roots],
                     "parent": {str(V[i]): str(V[p]) for i, p in enumerate(parent) if p >= 0}})
    return 0


def cmd_export(args):
    if args.what == "graph":
        _emit(args, gasket.build_graph(args.level).to_json())
        return 0
    args.cls = args.cls or "s2"
    return cmd_heights(args)


def cmd_verify(args):
    from .verify import run_suite
    results = run_suite(args.suite, args.seed)
    ok = True
    for name, status, detail in results:
        print(f"{status:5s} {name}: {detail}")
        if status == "FAIL":
            ok = False
    return 0 if ok else 2


# ------------------------------------------------------------ parser

def build_parser():
    p = _Parser(prog="sierpile", description="Sandpiles and spanning forests on Sierpinski gasket graphs")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, level=True):
        if level:
            sp.add_argument("--level", type=int, required=True)
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("counts")
    common(sp)
    sp = sub.add_parser("heights")
    common(sp)
    sp.add_argument("--class", dest="cls", choices=list(CLASS_NAMES), default="tree")
    sp.add_argument("--vertex")
    sp.add_argument("--method", choices=["exact", "local"])
    sp.add_argument("--float", action="store_true")
    sp = sub.add_parser("expectations")
    common(sp)
    sp.add_argument("--sink", choices=["one", "two", "three"])
    sp.add_argument("--method", choices=["exact", "local"])
    sp = sub.add_parser("limits")
    common(sp, level=False)
    sp.add_argument("--sink", choices=["one", "two", "three"])
    sp.add_argument("--method", choices=["exact", "local"])
    sp = sub.add_parser("sample")
    sp.add_argument("kind", choices=["sandpile", "lerw", "wilson"])
    common(sp)
    sp.add_argument("--sink", choices=["one", "two", "three"])
    sp.add_argument("--vertex")
    sp.add_argument("--steps", type=int, default=10000)
    sp.add_argument("--burn-in", type=int, default=1000)
    sp = sub.add_parser("verify")
    sp.add_argument("--suite", choices=["fast", "full"], default="fast")
    sp.add_argument("--seed", type=int, default=0)
    sp = sub.add_parser("export")
    sp.add_argument("what", choices=["graph", "heatmap"])
    common(sp)
    sp.add_argument("--class", dest="cls", choices=list(CLASS_NAMES))
    sp.add_argument("--vertex")
    sp.add_argument("--method", choices=["exact", "local"])
    sp.add_argument("--float", action="store_true")
    return p


COMMANDS = {"counts": cmd_counts, "heights": cmd_heights, "expectations": cmd_expectations,
            "limits": cmd_limits, "sample": cmd_sample, "verify": cmd_verify, "export": cmd_export}


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required (try --help)")
        return COMMANDS[args.command](args)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
