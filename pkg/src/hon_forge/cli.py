"""Command-line front end: ``hon-forge construct|verify|table|points``.

Exit codes: 0 success, 1 a verification verdict failed, 2 bad usage or
input, 3 an instance exceeds a size cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from hon_forge import bz, nets, tables, walsh
from hon_forge._limits import EnumerationLimitError, max_enum

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def _load_net(path: str, t=None, alpha=None, beta=None) -> nets.DigitalNet:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"net file {path} not found")
    try:
        field, mats = nets.parse_net_text(p.read_text())
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    side = _sidecar_path(p)
    meta = json.loads(side.read_text()) if side.exists() else {}
    alpha = alpha if alpha is not None else meta.get("alpha", 1)
    beta = beta if beta is not None else (Fraction(meta["beta"]) if "beta" in meta else None)
    t = t if t is not None else meta.get("t")
    try:
        return nets.DigitalNet.from_matrices(field, mats, t=t, alpha=alpha, beta=beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write_outputs(net: nets.DigitalNet, out: str | None, provenance: str, extra: dict | None = None):
    text = nets.write_net(net)
    p = net.params
    report = {
        "q": p.b,
        "n": p.n,
        "m": p.m,
        "s": p.s,
        "t": p.t,
        "alpha": p.alpha,
        "beta": str(p.beta),
        "sigma": p.strength,
        "provenance": provenance,
    }
    report.update(extra or {})
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text)
    _sidecar_path(Path(out)).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def cmd_construct(args) -> int:
    if args.kind == "pascal":
        try:
            net = nets.pascal_net(args.q, args.m, args.s)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _write_outputs(net, args.out, "generalised Faure net, t = 0")
    elif args.kind == "interlace":
        classical = _load_net(args.input, t=args.t)
        try:
            net = nets.interlace(classical, args.d)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _write_outputs(
            net, args.out, f"digit interlacing of factor {args.d}, t = d*min(m, t' + floor(s(d-1)/2))"
        )
    elif args.kind == "bz":
        chain = _load_chain(args.chain)
        inputs = [_load_net(path) for path in args.input.split(",") if path]
        try:
            net = bz.rule_xv(chain, inputs, alpha=args.alpha, unserved=args.unserved)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _write_outputs(
            net,
            args.out,
            "concatenation rule bound: floor(beta n) + 1 - min_u (floor(beta_u n_u) - t_u + 1) delta'_u",
            {"chain_deltas": list(chain.deltas), "unserved": args.unserved},
        )
    else:  # rs-chain
        try:
            chain = bz.rs_chain(args.q, args.s_prime, _int_list(args.dims))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        text = bz.write_chain(chain)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def _load_chain(path: str) -> bz.CodeChain:
    try:
        return bz.read_chain(path)
    except (OSError, ValueError) as exc:
        raise UsageError(f"chain file {path}: {exc}") from None


def cmd_verify(args) -> int:
    if args.t is not None and args.t < 0:
        raise UsageError("--t must be nonnegative")
    try:
        beta = Fraction(args.beta) if args.beta is not None else None
    except ValueError:
        raise UsageError(f"bad --beta {args.beta!r}") from None
    net = _load_net(args.path, alpha=args.alpha, beta=beta)
    p = net.params
    t = p.t if args.t is None else args.t
    if t > p.floor_beta_n:
        raise UsageError(f"--t {t} exceeds floor(beta n) = {p.floor_beta_n}")
    methods = ["rank", "dual", "walsh", "geometric"] if args.method == "all" else [args.method]
    points = None
    verdicts = {}
    for method in methods:
        try:
            if method == "rank":
                ok = nets.verify_net_definition(net, t)
            elif method == "dual":
                ok = nets.strict_t(net) <= t
            else:
                if net.q**net.m > max_enum():
                    raise EnumerationLimitError(f"{net.q}^{net.m} points exceed the enumeration cap")
                if points is None:
                    points = nets.generate_points(net)
                if method == "walsh":
                    ok = walsh.verify_net_walsh(points, t, p.alpha, p.beta, p.n, p.m)
                else:
                    ok = walsh.verify_net_geometric(points, t, p.alpha, p.beta, p.n, p.m)
        except EnumerationLimitError as exc:
            print(f"{method}: size cap exceeded ({exc})", file=sys.stderr)
            return EXIT_CAP
        verdicts[method] = ok
        print(f"{method}: {'pass' if ok else 'fail'}")
    if args.method == "all":
        agree = len(set(verdicts.values())) == 1
        print(f"agreement: {'yes' if agree else 'no'}")
    return EXIT_OK if all(verdicts.values()) else EXIT_FAIL


def _parse_range(text: str) -> range:
    parts = text.split(":")
    try:
        lo, hi = (int(x) for x in parts)
    except ValueError:
        raise UsageError(f"bad --m-range {text!r}, expected LO:HI") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"bad --m-range {text!r}")
    return range(lo, hi + 1)


def cmd_table(args) -> int:
    m_range = _parse_range(args.m_range)
    rules = [r for r in args.rules.split(",") if r]
    if any(r not in tables.RULES for r in rules):
        raise UsageError(f"--rules must be drawn from {','.join(tables.RULES)}")
    if args.params == "bundled":
        table = tables.bundled_param_table()
    elif args.params and Path(args.params).exists():
        try:
            table = tables.load_param_table(args.params)
        except ValueError as exc:
            raise UsageError(f"{args.params}: {exc}") from None
    else:
        if args.params:
            print(f"warning: {args.params} not found; using t' = 0 for s <= q only", file=sys.stderr)
        else:
            print("warning: no --params given; using t' = 0 for s <= q only", file=sys.stderr)
        table = tables.ParamTable()
    rows = tables.render_table(args.q, args.s, m_range, rules, table, alpha=args.alpha)
    sys.stdout.write(tables.format_sigma_tsv(rows, rules))
    return EXIT_OK


def _decimal(x: Fraction) -> str:
    return repr(float(x))


def cmd_points(args) -> int:
    net = _load_net(args.path)
    if net.q**net.m > max_enum():
        print(f"{net.q}^{net.m} points exceed the enumeration cap", file=sys.stderr)
        return EXIT_CAP
    points = nets.generate_points(net)
    if args.format == "spectrum":
        if args.r is None or args.r < 0:
            raise UsageError("--format spectrum needs --r >= 0")
        if args.r > net.n:
            raise UsageError(f"--r {args.r} exceeds the digit depth n = {net.n}")
        try:
            spec = walsh.dual_vector(points, args.r, cap=max_enum())
        except EnumerationLimitError as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_CAP
        sys.stdout.write(spec.to_tsv())
        return EXIT_OK
    depth = net.n if args.r is None else args.r
    if not 0 <= depth <= net.n:
        raise UsageError(f"--r must lie in [0, {net.n}]")
    if args.format == "digits":
        sys.stdout.write(nets.format_points(points, depth))
    else:
        trimmed = nets.PointSet(points.b, points.digits[:, :, :depth])
        for point in trimmed.fractions():
            print("\t".join(_decimal(x) for x in point))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hon-forge", description="Construct and verify higher order digital nets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    con = sub.add_parser("construct", help="build a net (or an inner code chain) and write it out")
    kinds = con.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    pas = kinds.add_parser("pascal", help="generalised Faure (0, m, s)-net")
    pas.add_argument("--q", type=int, required=True)
    pas.add_argument("--m", type=int, required=True)
    pas.add_argument("--s", type=int, required=True)
    inter = kinds.add_parser("interlace", help="digit interlacing of a classical net")
    inter.add_argument("--d", type=int, required=True)
    inter.add_argument("--in", dest="input", required=True)
    inter.add_argument("--t", type=int, help="t of the classical net (default: sidecar, else trivial)")
    bzp = kinds.add_parser("bz", help="concatenate nets along an inner code chain")
    bzp.add_argument("--chain", required=True)
    bzp.add_argument("--in", dest="input", required=True, help="comma-separated net files, one per level")
    bzp.add_argument("--alpha", type=int)
    bzp.add_argument("--unserved", choices=["keep", "delete"], default="keep")
    rs = kinds.add_parser("rs-chain", help="nested Reed-Solomon chain file")
    rs.add_argument("--q", type=int, required=True)
    rs.add_argument("--s-prime", type=int, required=True)
    rs.add_argument("--dims", required=True, help="e.g. 0,2,4")
    for p in (pas, inter, bzp, rs):
        p.add_argument("--out", help="output path (default: stdout, no sidecar)")
    con.set_defaults(func=cmd_construct)

    ver = sub.add_parser("verify", help="check the net property by one or more methods")
    ver.add_argument("path")
    ver.add_argument("--t", type=int)
    ver.add_argument("--alpha", type=int)
    ver.add_argument("--beta")
    ver.add_argument("--method", choices=["rank", "dual", "walsh", "geometric", "all"], default="all")
    ver.set_defaults(func=cmd_verify)

    tab = sub.add_parser("table", help="strength table as TSV")
    tab.add_argument("--q", type=int, required=True)
    tab.add_argument("--alpha", type=int, default=2)
    tab.add_argument("--s", type=int, required=True)
    tab.add_argument("--m-range", required=True, help="LO:HI, inclusive")
    tab.add_argument("--rules", default="dir,xv")
    tab.add_argument("--params", help="parameter TSV, or 'bundled'")
    tab.set_defaults(func=cmd_table)

    pts = sub.add_parser("points", help="print the points or their Walsh spectrum")
    pts.add_argument("path")
    pts.add_argument("--r", type=int)
    pts.add_argument("--format", choices=["digits", "decimal", "spectrum"], default="digits")
    pts.set_defaults(func=cmd_points)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hon-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationLimitError as exc:
        print(f"hon-forge: size cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
