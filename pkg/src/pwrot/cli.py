"""Command-line front end (``pwrot``)."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .dynamics import code_orbit
from .induction import StepCapExceeded, base_cone, default_max_steps, extract_substitution, first_return, induced_map
from .render import emit_tables, render_svg
from .scenario import ScenarioError, load_scenario, map_from_spec, parse_point, run_scenario
from .symbolic import graph_language, load_graph

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _map_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", required=True, help="rotation angle as a fraction of a turn, e.g. 1/6")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--sigma", help="bijective parameter, e.g. 1/3 (default 0)")
    g.add_argument("--centers", nargs=2, metavar="P", help='two centers, e.g. "(-1,1)" "(-3,1)"')


def _map_from_args(args):
    spec = {"theta": args.theta}
    if args.centers:
        spec["centers"] = args.centers
    else:
        spec["sigma"] = args.sigma or "0"
    return map_from_spec(spec)


def cmd_run(args) -> int:
    rep = run_scenario(load_scenario(args.scenario))
    if args.json:
        print(json.dumps(rep.to_json(), indent=2, sort_keys=True))
    else:
        sys.stdout.write(rep.text(timing=args.timing))
    return rep.exit_code


def _float_orbit(m, z: complex, steps: int) -> str:
    maps = m.maps()
    coeffs = {a: (complex(g.mul), complex(g.trans)) for a, g in maps.items()}
    out = []
    for _ in range(steps):
        a = "0" if z.imag > 0 else "1"
        mul, t = coeffs[a]
        out.append(a)
        z = mul * z + t
    return "".join(out)


def cmd_orbit(args) -> int:
    m = _map_from_args(args)
    z = parse_point(args.point, m.n)
    coding = code_orbit(m, z, args.steps)
    print(coding.word)
    if coding.hit_boundary_at is not None:
        print(f"orbit hits a discontinuity at step {coding.hit_boundary_at}", file=sys.stderr)
    if args.float_check:
        fw = _float_orbit(m, complex(z), len(coding.word))
        k = next((i for i, (a, b) in enumerate(zip(fw, coding.word)) if a != b), None)
        print("float coding agrees" if k is None else f"float coding diverges at step {k}")
    return EXIT_OK


def cmd_return(args) -> int:
    m = _map_from_args(args)
    steps = default_max_steps(m.theta.denominator)
    rs = first_return(m, base_cone(m), steps)
    if rs.unresolved:
        print(f"{len(rs.unresolved)} regions unresolved after {steps} steps", file=sys.stderr)
        return EXIT_FAIL
    if args.piece:
        try:
            rs = first_return(induced_map(rs), induced_map(rs).branch(args.piece).domains, 4 * max(len(rs.pieces), 4))
        except KeyError:
            print(f"no piece {args.piece!r}", file=sys.stderr)
            return EXIT_INPUT
    sys.stdout.write(emit_tables(rs))
    return EXIT_FAIL if rs.unresolved else EXIT_OK


def cmd_induce(args) -> int:
    m = _map_from_args(args)
    steps = default_max_steps(m.theta.denominator)
    rs = first_return(m, base_cone(m), steps)
    if rs.unresolved:
        print(f"{len(rs.unresolved)} regions unresolved after {steps} steps", file=sys.stderr)
        return EXIT_FAIL
    t = induced_map(rs)
    if args.piece not in t.alphabet:
        print(f"no piece {args.piece!r}; pieces are {t.alphabet}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(emit_tables(rs))
    sub, h, _ = extract_substitution(t, args.piece)
    if h is None:
        print(f"no conjugacy found for the return to {args.piece}")
        return EXIT_FAIL
    print(f"conjugacy {h!r}")
    sys.stdout.write(emit_tables(sub))
    return EXIT_OK


def cmd_language(args) -> int:
    g = load_graph(args.graph)
    for w in sorted(graph_language(g, args.length, args.depth), key=lambda w: (len(w), w)):
        print(w)
    return EXIT_OK


def cmd_attractor(args) -> int:
    rep = run_scenario(load_scenario(args.scenario))
    sys.stdout.write(rep.text())
    ctx = rep.context
    if ctx.tiling is not None:
        print(json.dumps(ctx.tiling.to_json(), indent=2, sort_keys=True))
    return rep.exit_code


def cmd_render(args) -> int:
    rep = run_scenario(load_scenario(args.scenario), skip=("render",))
    window = [Fraction(v) for v in args.window.split(",")]
    if len(window) != 4:
        raise ScenarioError("window needs x0,y0,x1,y1")
    render_svg(rep.context.partition, window, args.out, rep.context.m.n)
    print(f"wrote {args.out}")
    return rep.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pwrot", description="Exact piecewise rotations of the plane.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("run", help="run a scenario file")
    q.add_argument("scenario")
    q.add_argument("--json", action="store_true")
    q.add_argument("--timing", action="store_true", help="print action timings (not deterministic)")
    q.set_defaults(func=cmd_run)

    q = sub.add_parser("orbit", help="code the orbit of a point")
    _map_args(q)
    q.add_argument("--point", required=True)
    q.add_argument("--steps", type=int, required=True)
    q.add_argument("--float-check", action="store_true", help="compare with a floating-point run")
    q.set_defaults(func=cmd_orbit)

    q = sub.add_parser("return", help="first-return table on the base cone")
    _map_args(q)
    q.add_argument("--piece")
    q.set_defaults(func=cmd_return)

    q = sub.add_parser("induce", help="substitution from the return to a piece")
    _map_args(q)
    q.add_argument("--piece", required=True)
    q.set_defaults(func=cmd_induce)

    q = sub.add_parser("language", help="factors of a substitution graph language")
    q.add_argument("--graph", required=True)
    q.add_argument("--length", type=int, required=True)
    q.add_argument("--depth", type=int, required=True)
    q.set_defaults(func=cmd_language)

    q = sub.add_parser("attractor", help="run an attractor scenario and print the tiling")
    q.add_argument("scenario")
    q.set_defaults(func=cmd_attractor)

    q = sub.add_parser("render", help="render the last partition of a scenario to SVG")
    q.add_argument("scenario")
    q.add_argument("--window", required=True, help="x0,y0,x1,y1")
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StepCapExceeded as exc:
        print(f"step cap exceeded: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
