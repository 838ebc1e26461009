"""JSON scenarios: a map, then a pipeline of checks run in exact arithmetic."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .attractor import (
    Certificate,
    CertificationError,
    RegionSet,
    TilingReport,
    attractor_candidate,
    connected_components,
    encloses_origin,
    forward_regions,
    image_complement,
    step_regions,
    verify_tiling,
)
from .cyclotomic import Cyclo, field_for_angle, parse_cyclo
from .dynamics import PiecewiseMap, build_map, code_orbit
from .geometry import ConvexRegion, HalfPlane, convex_hull, difference, intersect, point, polygon, transform
from .induction import (
    ReturnStructure,
    StepCapExceeded,
    Substitution,
    base_cone,
    default_max_steps,
    extract_substitution,
    first_return,
    fixed_cell,
    induced_map,
    merge_convex,
    relabel,
    renormalize,
)
from .render import emit_tables, render_svg
from .symbolic import (
    cell_of_prefix,
    cyclic_equal,
    family_theta_third,
    graph_language,
    load_graph,
    periodic_cell,
    project_word,
    smallest_period,
)

__all__ = ["ScenarioError", "ActionResult", "Report", "run_scenario", "load_scenario", "parse_point", "map_from_spec"]


class ScenarioError(ValueError):
    """Malformed scenario (exit status 2)."""


@dataclass
class ActionResult:
    action: str
    ok: bool
    lines: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def text(self) -> str:
        head = f"[{'PASS' if self.ok else 'FAIL'}] {self.action}"
        return "\n".join([head] + [f"    {ln}" for ln in self.lines])


@dataclass
class Report:
    name: str
    results: list[ActionResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def text(self, timing: bool = False) -> str:
        out = [f"scenario: {self.name}"]
        for r in self.results:
            out.append(r.text())
            if timing:
                out.append(f"    time: {r.seconds:.2f} s")
        out.append(f"overall: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(out) + "\n"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "actions": [{"action": r.action, "ok": r.ok, "lines": r.lines} for r in self.results],
        }


@dataclass
class Context:
    m: PiecewiseMap
    maps: dict[str, PiecewiseMap] = field(default_factory=dict)
    base: ConvexRegion | None = None
    rs: ReturnStructure | None = None
    subs: dict[str, Substitution] = field(default_factory=dict)
    sets: dict[str, RegionSet] = field(default_factory=dict)
    cert: Certificate | None = None
    tiling: TilingReport | None = None
    partition: list[tuple[str, ConvexRegion]] = field(default_factory=list)


# ----------------------------------------------------------------------------
# parsing


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _coord(v, n: int) -> Cyclo:
    if isinstance(v, (int, Fraction)):
        return Cyclo.from_rational(n, v)
    return parse_cyclo(str(v), n)


def parse_point(spec, n: int) -> Cyclo:
    """``"(x, y)"``, ``[x, y]`` or a single ``cyclo(N)[...]`` complex value."""
    if isinstance(spec, (list, tuple)):
        if len(spec) != 2:
            raise ScenarioError(f"point needs two coordinates: {spec!r}")
        return point(_coord(spec[0], n), _coord(spec[1], n), n)
    text = str(spec).strip()
    if text.startswith("cyclo("):
        return parse_cyclo(text, n)
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    parts = _split_top(text)
    if len(parts) != 2:
        raise ScenarioError(f"cannot parse point {spec!r}")
    return point(_coord(parts[0], n), _coord(parts[1], n), n)


def _fraction(v, what: str) -> Fraction:
    try:
        return Fraction(str(v))
    except (ValueError, ZeroDivisionError):
        raise ScenarioError(f"{what} must be a rational, got {v!r}") from None


def map_from_spec(spec: dict) -> PiecewiseMap:
    if "theta" not in spec:
        raise ScenarioError("map needs theta")
    theta = _fraction(spec["theta"], "theta")
    n = int(spec.get("field") or field_for_angle(theta))
    if ("sigma" in spec) == ("centers" in spec):
        raise ScenarioError("map needs exactly one of sigma or centers")
    try:
        if "sigma" in spec:
            return build_map(theta, sigma=_fraction(spec["sigma"], "sigma"), n=n)
        cs = [parse_point(c, n) for c in spec["centers"]]
        if len(cs) != 2:
            raise ScenarioError("centers needs two points")
        return build_map(theta, centers_=cs, n=n)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc)) from None


def load_scenario(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from None
    _check_schema(data)
    return data


def _check_schema(data) -> None:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    for key in ("name", "map", "pipeline"):
        if key not in data:
            raise ScenarioError(f"scenario lacks {key!r}")
    if not isinstance(data["pipeline"], list):
        raise ScenarioError("pipeline must be a list")
    for k, step in enumerate(data["pipeline"]):
        if not isinstance(step, dict) or "action" not in step:
            raise ScenarioError(f"pipeline step {k} lacks 'action'")
        if step["action"] not in ACTIONS:
            raise ScenarioError(f"pipeline step {k}: unknown action {step['action']!r}")
        exp = step.get("expect")
        if exp is not None and "source" not in exp:
            raise ScenarioError(f"pipeline step {k}: expectation without a source")


# ----------------------------------------------------------------------------
# helpers


def _map(ctx: Context, step: dict) -> PiecewiseMap:
    name = step.get("on", "map")
    if name not in ctx.maps:
        raise ScenarioError(f"no map named {name!r} at this point of the pipeline")
    return ctx.maps[name]


def _source(step: dict) -> str:
    return (step.get("expect") or {}).get("source", "")


def _shape(r: ConvexRegion):
    return len(r.vertices()) if r.is_bounded() else "unbounded"


def _polygons(spec, n: int) -> list[ConvexRegion]:
    return [polygon([parse_point(p, n) for p in poly]) for poly in spec]


def _same_union(a: list[ConvexRegion], b: list[ConvexRegion]) -> bool:
    return not any(difference(r, b) for r in a) and not any(difference(r, a) for r in b)


def _invariant(m: PiecewiseMap, regions: list[ConvexRegion]) -> list[ConvexRegion]:
    """Pieces of T(regions) falling outside regions (empty when invariant)."""
    out = []
    for img in step_regions(m, regions):
        out.extend(difference(img, regions))
    return out


# ----------------------------------------------------------------------------
# actions


def act_cone(ctx: Context, step: dict) -> ActionResult:
    ctx.base = base_cone(ctx.m)
    v = ctx.base.vertices()
    lines = [f"cone vertex {v[0]!r}" if v else "cone without vertex"]
    ok = True
    exp = step.get("expect")
    if exp and "vertex" in exp:
        want = parse_point(exp["vertex"], ctx.m.n)
        ok = bool(v) and v[0] == want
        if not ok:
            lines.append(f"expected vertex {exp['vertex']} ({exp['source']})")
    ctx.partition = [("cone", ctx.base)]
    return ActionResult("cone", ok, lines)


def act_first_return(ctx: Context, step: dict) -> ActionResult:
    m = _map(ctx, step)
    if "piece" in step:
        base = m.branch(step["piece"]).domains
    else:
        if ctx.base is None:
            ctx.base = base_cone(m)
        base = ctx.base
    steps = step.get("max_steps") or default_max_steps(m.theta.denominator if m.theta else 8)
    rs = first_return(m, base, steps)
    lines = []
    ok = not rs.unresolved
    if rs.unresolved:
        lines.append(f"{len(rs.unresolved)} regions did not return within {steps} steps")
    exp = step.get("expect") or {}
    if "labels" in step:
        # explicit alignment, label -> return word
        rs = relabel(rs, step["labels"])
    if "table" in exp:
        want = exp["table"]
        got = sorted(p.word for p in rs.pieces)
        if "labels" not in step and sorted(want.values()) == got:
            rs = relabel(rs, want)
        table = rs.table()
        if table == want:
            lines.append(f"return words match ({exp['source']})")
        else:
            ok = False
            lines.append(f"expected words {sorted(want.values())} ({exp['source']})")
            lines.append(f"computed words {got}")
            diff = {a: (w, table.get(a)) for a, w in want.items() if table.get(a) != w}
            if "labels" in step:
                lines.append(f"differences (expected, computed): {diff}")
    for p in rs.pieces:
        k = p.map.rotation_power()
        lines.append(f"{p.label}: {p.word}  rotation {k}  shape {[_shape(r) for r in p.regions]}")
    if "pieces" in exp and len(rs.pieces) != exp["pieces"]:
        ok = False
        lines.append(f"expected {exp['pieces']} pieces ({exp['source']}), computed {len(rs.pieces)}")
    for key, checker in (("rotation", lambda p: p.map.rotation_power()), ("shapes", lambda p: _shape(p.regions[0]))):
        for label, want in (exp.get(key) or {}).items():
            got = checker(rs.piece(label))
            if got != want:
                ok = False
                lines.append(f"{key} of {label}: expected {want} ({exp['source']}), computed {got}")
    ctx.rs = rs
    if not rs.unresolved:
        ctx.maps[step.get("name", "induced")] = induced_map(rs)
    ctx.partition = [(p.label, r) for p in rs.pieces for r in p.regions]
    return ActionResult("first_return", ok, lines)


def act_tables(ctx: Context, step: dict) -> ActionResult:
    if ctx.rs is None:
        raise ScenarioError("tables needs a preceding first_return")
    lines = emit_tables(ctx.rs).rstrip("\n").split("\n")
    return ActionResult("tables", True, lines)


def act_induce(ctx: Context, step: dict) -> ActionResult:
    m = _map(ctx, step)
    piece = step["piece"]
    try:
        sub, h, rs = extract_substitution(m, piece, step.get("max_steps"))
    except StepCapExceeded as exc:
        return ActionResult("induce", False, [str(exc)])
    lines = []
    if h is None:
        lines.append("no conjugacy found")
        if sub is not None:
            lines.append(f"closed return table {sub.images}")
    else:
        kind = "translation" if h.mul == 1 else "similarity"
        lines.append(f"conjugacy: {kind} {h!r}")
        lines.append(f"substitution {sub.images}")
        ctx.subs[step.get("name", piece)] = sub
    ok = h is not None
    exp = step.get("expect") or {}
    if "substitution" in exp:
        want = Substitution(dict(exp["substitution"]))
        if sub != want or h is None:
            ok = False
            lines.append(f"expected {want.images} ({exp['source']})")
            if sub is not None:
                diff = {a: (want.images.get(a), sub.images.get(a)) for a in want.images if want.images.get(a) != sub.images.get(a)}
                lines.append(f"differences (expected, computed): {diff}")
    if "conjugacy" in exp and h is not None:
        kind = "translation" if h.mul == 1 else "similarity"
        if kind != exp["conjugacy"]:
            ok = False
            lines.append(f"expected a {exp['conjugacy']} conjugacy ({exp['source']})")
    return ActionResult("induce", ok, lines)


def act_periodic_cells(ctx: Context, step: dict) -> ActionResult:
    m = _map(ctx, step)
    ok = True
    lines = []
    cells = {}
    for item in step["words"]:
        w = item["word"]
        rep = periodic_cell(m, w)
        got = rep.shape if rep.nonempty else None
        cells[w] = rep.cell if rep.nonempty else None
        want_nonempty = item.get("nonempty", True)
        good = rep.nonempty == want_nonempty
        if "vertices" in item and rep.nonempty:
            good = good and got == item["vertices"]
        ok = ok and good
        msg = f"{w}: " + (f"cell with {got} vertices" if rep.nonempty else "no periodic cell")
        if not good:
            msg += f"; expected {item.get('vertices', 'nonempty' if want_nonempty else 'empty')} ({_source(step) or item.get('source', '')})"
        lines.append(msg)
    for group in step.get("equal_sides", []):
        lengths = set()
        for w in group:
            c = cells.get(w)
            if c is None:
                ok = False
                lines.append(f"equal sides: {w} has no cell")
                continue
            vs = c.vertices()
            for a, b in zip(vs, vs[1:] + vs[:1]):
                d = b - a
                lengths.add(d * d.conj())
        if len(lengths) != 1:
            ok = False
            lines.append(f"sides of {group} are not all equal")
        else:
            lines.append(f"all sides of {group} have squared length {next(iter(lengths))!r}")
    ctx.partition = [(w, c) for w, c in cells.items() if c is not None]
    return ActionResult("periodic_cells", ok, lines)


def act_projection(ctx: Context, step: dict) -> ActionResult:
    if ctx.rs is None:
        raise ScenarioError("projection needs a preceding first_return")
    table = ctx.rs.table()
    ok = True
    lines = []
    for w, want in step["words"].items():
        got = project_word(table, w)
        good = cyclic_equal(got, want)
        ok = ok and good
        lines.append(f"{w} -> {got}" + ("" if good else f"; expected cyclically {want} ({_source(step)})"))
    return ActionResult("projection", ok, lines)


def act_restrict(ctx: Context, step: dict) -> ActionResult:
    m = _map(ctx, step)
    letters = step["letters"]
    branches = tuple(b for b in m.branches if b.label in letters)
    regions = merge_convex([d for b in branches for d in b.domains])
    escape = _invariant(m, [d for b in branches for d in b.domains])
    name = step["name"]
    ctx.maps[name] = PiecewiseMap(m.n, branches, theta=m.theta, name=name, base=tuple(regions))
    ctx.sets[name] = RegionSet(m.n, regions)
    ctx.partition = [(b.label, d) for b in branches for d in b.domains]
    ok = not escape
    lines = [f"{name}: union of {letters}, {len(regions)} convex parts, area {ctx.sets[name].area()!r}"]
    lines.append("invariant" if ok else f"not invariant: {len(escape)} image pieces leave the set")
    return ActionResult("restrict", ok, lines)


def act_orbit_set(ctx: Context, step: dict) -> ActionResult:
    """Union of the orbit of a piece until its first return."""
    m = _map(ctx, step)
    piece = step["piece"]
    rs = first_return(m, m.branch(piece).domains, step.get("max_steps") or 4 * max(len(m.branches), 4))
    if rs.unresolved:
        return ActionResult("orbit_set", False, ["return to the piece is unresolved"])
    regions: list[ConvexRegion] = []
    maps = m.maps()
    for p in rs.pieces:
        for r in p.regions:
            cur = r
            for a in p.word[:-1]:
                cur = transform(cur, maps[a])
                regions.extend(difference(cur, regions))
            regions.extend(difference(r, regions))
    name = step["name"]
    ctx.sets[name] = RegionSet(m.n, regions)
    escape = _invariant(m, regions)
    ok = not escape
    return ActionResult(
        "orbit_set",
        ok,
        [f"{name}: orbit of {piece}, {len(regions)} pieces", "invariant" if ok else "not invariant"],
    )


def act_complement_set(ctx: Context, step: dict) -> ActionResult:
    m = _map(ctx, step)
    base = list(m.base) if m.base is not None else [ctx.base]
    cut = [r for name in step["of"] for r in ctx.sets[name]]
    regions = []
    for b in base:
        regions.extend(difference(b, cut))
    name = step["name"]
    rset = RegionSet(m.n, regions)
    ctx.sets[name] = rset
    escape = _invariant(m, regions)
    ok = not escape and bool(regions)
    lines = [f"{name}: {len(regions)} pieces, bounded {rset.is_bounded()}, area {rset.area()!r}"]
    lines.append("invariant" if not escape else "not invariant")
    if step.get("bounded") and not rset.is_bounded():
        ok = False
        lines.append("expected a bounded set")
    return ActionResult("complement_set", ok, lines)


def act_annulus(ctx: Context, step: dict) -> ActionResult:
    m = _map(ctx, step)
    regions = []
    lines = []
    ok = True
    for w in step["words"]:
        for k in range(len(w)):
            rep = periodic_cell(m, w[k:] + w[:k])
            if not rep.nonempty:
                ok = False
                lines.append(f"{w[k:] + w[:k]}: no periodic cell")
                continue
            regions.append(rep.cell)
        lines.append(f"{w}: orbit of {len(w)} cells")
    if not ok:
        return ActionResult("annulus", False, lines)
    comps = connected_components(regions)
    enclosed = encloses_origin(regions)
    lines.append(f"{len(regions)} cells, {len(comps)} connected component(s), origin enclosed: {enclosed}")
    ctx.partition = [(f"cell{k}", r) for k, r in enumerate(regions)]
    return ActionResult("annulus", len(comps) == 1 and enclosed, lines)


def _seed(ctx: Context, spec: dict) -> RegionSet:
    n = ctx.m.n
    if "polygons" in spec:
        return RegionSet(n, _polygons(spec["polygons"], n), check=True)
    if "hull_of_fixed_cells" in spec:
        pts = []
        for label in spec["hull_of_fixed_cells"]:
            pts.extend(fixed_cell(ctx.m, label).vertices())
        return RegionSet(n, [convex_hull(pts)])
    if "fixed_cells" in spec:
        return RegionSet(n, [fixed_cell(ctx.m, label) for label in spec["fixed_cells"]], check=True)
    raise ScenarioError("attractor seed needs polygons, hull_of_fixed_cells or fixed_cells")


def act_attractor(ctx: Context, step: dict) -> ActionResult:
    seed = _seed(ctx, step["seed"])
    try:
        ctx.cert = attractor_candidate(ctx.m, seed, step.get("depth", 5))
    except CertificationError as exc:
        return ActionResult("attractor", False, [str(exc), f"witness vertices {exc.witness.vertices()!r}"])
    ctx.partition = [("attractor", r) for r in seed]
    lines = [f"certified ({ctx.cert.kind}), {len(seed)} pieces, area {ctx.cert.area!r}"]
    ok = True
    exp = step.get("expect") or {}
    if "kind" in exp and exp["kind"] != ctx.cert.kind:
        ok = False
        lines.append(f"expected a {exp['kind']} map ({exp['source']})")
    if "vertices" in exp:
        got = [len(r.vertices()) for r in seed]
        if got != exp["vertices"]:
            ok = False
            lines.append(f"vertex counts {got}, expected {exp['vertices']} ({exp['source']})")
    return ActionResult("attractor", ok, lines)


def act_tiling(ctx: Context, step: dict) -> ActionResult:
    if ctx.cert is None:
        raise ScenarioError("tiling needs a certified attractor")
    rep = verify_tiling(ctx.m, ctx.cert, step["max_period"], step["depth"])
    ctx.tiling = rep
    ctx.partition = [(t.orbit, t.region) for t in rep.tiles]
    lines = [f"{len(rep.tiles)} tiles in {len(rep.orbits)} orbits; periods {sorted(rep.periods)}"]
    for orbit, tiles in sorted(rep.orbits.items()):
        lines.append(f"orbit {orbit}: period {tiles[0].period}, {len(tiles)} cells, vertices {[len(t.region.vertices()) for t in tiles]}")
    lines.append(f"tile area {rep.tile_area()!r}, transient area {rep.transient_area()!r}, leftover area {rep.leftover_area()!r}")
    ok = True
    exp = step.get("expect") or {}
    if "periods" in exp and sorted(rep.periods) != sorted(exp["periods"]):
        ok = False
        lines.append(f"expected periods {sorted(exp['periods'])} ({exp['source']})")
    if exp.get("full"):
        if rep.leftover or rep.transient or rep.tile_area() != ctx.cert.area:
            ok = False
            lines.append(f"tiles do not fill the attractor ({exp['source']})")
    if "orbit_sizes" in exp:
        sizes = sorted(len(t) for t in rep.orbits.values())
        if sizes != sorted(exp["orbit_sizes"]):
            ok = False
            lines.append(f"orbit sizes {sizes}, expected {sorted(exp['orbit_sizes'])} ({exp['source']})")
    return ActionResult("tiling", ok, lines)


def act_leftover_sequence(ctx: Context, step: dict) -> ActionResult:
    if ctx.cert is None:
        raise ScenarioError("leftover_sequence needs a certified attractor")
    values = []
    lines = []
    for d in step["depths"]:
        rep = verify_tiling(ctx.m, ctx.cert, d, d)
        values.append(rep.leftover_area())
        lines.append(f"depth {d}: leftover area {complex(values[-1]).real:.12f}, periods {sorted(rep.periods)}")
    ok = all((b - a).sign() < 0 for a, b in zip(values, values[1:]))
    if not ok:
        lines.append(f"leftover area is not strictly decreasing ({_source(step)})")
    return ActionResult("leftover_sequence", ok, lines)


def _region_from_spec(spec, n: int) -> ConvexRegion:
    return ConvexRegion(n, [HalfPlane.make(*(_coord(c, n) for c in h), n) for h in spec])


def act_image_complement(ctx: Context, step: dict) -> ActionResult:
    sigma = image_complement(ctx.m)
    ctx.sets["sigma"] = sigma
    lines = [f"{len(sigma)} pieces: " + "; ".join(" & ".join(f"{h.a!r}x+{h.b!r}y+{h.c!r}>0" for h in r.halfplanes) for r in sigma)]
    ok = True
    exp = step.get("expect") or {}
    if "regions" in exp:
        want = [_region_from_spec(r, ctx.m.n) for r in exp["regions"]]
        if not _same_union(list(sigma), want):
            ok = False
            lines.append(f"expected {exp['regions']} ({exp['source']})")
    ctx.partition = [("sigma", r) for r in sigma]
    return ActionResult("image_complement", ok, lines)


def act_compact_set(ctx: Context, step: dict) -> ActionResult:
    """Inside the window, the complement of the forward images of the
    uncovered set equals the certified attractor."""
    if ctx.cert is None:
        raise ScenarioError("compact_set needs a certified attractor")
    from .render import window_region

    n = ctx.m.n
    box = window_region(step["window"], n)
    fw = forward_regions(ctx.m, image_complement(ctx.m), step["steps"])
    rest = difference(box, fw.regions)
    seed = list(ctx.cert.attractor)
    ok = _same_union(rest, seed)
    lines = [f"window minus {step['steps']} forward images: {len(rest)} pieces, area {RegionSet(n, rest).area()!r}"]
    if not ok:
        extra = [r for r in rest if difference(r, seed)]
        lines.append(f"differs from the attractor; {len(extra)} extra pieces")
    else:
        lines.append("equals the attractor")
    return ActionResult("compact_set", ok, lines)


def act_window_cover(ctx: Context, step: dict) -> ActionResult:
    """Periodic cells of a map tile a window of its base region exactly."""
    from .render import window_region

    m = _map(ctx, step)
    n = m.n
    box = window_region(step["window"], n)
    base = list(m.base) if m.base is not None else [ctx.base]
    target = RegionSet(n, [intersect(b, box) for b in base])
    if not target:
        return ActionResult("window_cover", False, ["the window misses the base region"])
    rep = verify_tiling(m, target, step["max_period"], step["depth"])
    ctx.partition = [(t.orbit, t.region) for t in rep.tiles]
    covered = rep.tile_area()
    ok = not rep.leftover and not rep.transient and covered == target.area()
    lines = [
        f"{len(rep.tiles)} periodic cells in {len(rep.orbits)} orbits, periods {sorted(rep.periods)}",
        f"cell area {covered!r}, window area {target.area()!r}",
    ]
    if not ok:
        lines.append(f"uncovered area {rep.leftover_area()!r} ({_source(step)})")
    return ActionResult("window_cover", ok, lines)


def act_language(ctx: Context, step: dict) -> ActionResult:
    if step.get("family") == "theta_third":
        words_fn = lambda depth: family_theta_third(depth)
        lang = graph_language(words_fn, step["length"], step["depth"])
    else:
        g = load_graph(step["graph"])
        lang = graph_language(g, step["length"], step["depth"])
    lines = [f"{len(lang)} factors of length <= {step['length']}"]
    ok = True
    for w in step.get("contains", []):
        if w not in lang:
            ok = False
            lines.append(f"missing factor {w}")
    return ActionResult("language", ok, lines)


def _centre(r: ConvexRegion) -> Cyclo:
    vs = r.vertices()
    return sum(vs[1:], vs[0]) / len(vs)


def act_renormalize(ctx: Context, step: dict) -> ActionResult:
    """Search a self-similarity sending periodic cells onto smaller ones."""
    m = _map(ctx, step)
    n = m.n
    scales = [_coord(v, n) for v in step["scales"]]
    sources, targets = [], []
    for w in step["from"]:
        rep = periodic_cell(m, w)
        if rep.nonempty:
            sources.append(_centre(rep.cell))
    for w in step["to"]:
        for k in range(len(w)):
            rep = periodic_cell(m, w[k:] + w[:k])
            if rep.nonempty:
                targets.append(_centre(rep.cell))
    found = renormalize(m, scales, [(p, q) for p in sources for q in targets], step.get("max_steps", 400))
    if found is None:
        return ActionResult("renormalize", False, [f"no self-similarity among {len(sources) * len(targets) * n * len(scales)} candidates"])
    sub, h, _ = found
    ctx.subs[step["name"]] = sub
    lines = [f"conjugacy {h!r}", f"substitution {sub.images}"]
    return ActionResult("renormalize", True, lines)


def act_nonperiodic(ctx: Context, step: dict) -> ActionResult:
    """Nested cells of a substitution fixed point: a point whose coding
    agrees with the fixed point for ``length`` symbols."""
    m = _map(ctx, step)
    if "substitution" in step:
        sub = Substitution(dict(step["substitution"]))
    elif step["from"] in ctx.subs:
        sub = ctx.subs[step["from"]]
    else:
        return ActionResult("nonperiodic", False, [f"no derived substitution named {step['from']!r}"])
    seed = step["seed"]
    length = step["length"]
    w = seed
    while len(w) < length:
        nxt = sub(w)
        if not nxt.startswith(w):
            raise ScenarioError("seed letter is not the start of a fixed point")
        w = nxt
    w = w[:length]
    cells = cell_of_prefix(m, w)
    if not cells:
        return ActionResult("nonperiodic", False, ["the prefix has an empty cell"])
    vs = cells[0].vertices()
    z = sum(vs[1:], vs[0]) / len(vs)
    coding = code_orbit(m, z, length).word
    lines = [f"cell of the length-{length} prefix has {len(vs)} vertices"]
    ok = coding == w
    if not ok:
        lines.append("the centre of the cell does not follow the prefix")
    per = smallest_period(w, step["max_period"])
    lines.append(f"smallest period <= {step['max_period']}: {per}")
    ok = ok and per is None
    return ActionResult("nonperiodic", ok, lines)


def act_render(ctx: Context, step: dict) -> ActionResult:
    text = render_svg(ctx.partition, step["window"], step.get("out"), ctx.m.n)
    return ActionResult("render", True, [f"{text.count('<polygon')} polygons" + (f" -> {step['out']}" if step.get("out") else "")])


ACTIONS: dict[str, Callable[[Context, dict], ActionResult]] = {
    "cone": act_cone,
    "first_return": act_first_return,
    "tables": act_tables,
    "induce": act_induce,
    "periodic_cells": act_periodic_cells,
    "projection": act_projection,
    "restrict": act_restrict,
    "orbit_set": act_orbit_set,
    "complement_set": act_complement_set,
    "annulus": act_annulus,
    "attractor": act_attractor,
    "tiling": act_tiling,
    "leftover_sequence": act_leftover_sequence,
    "image_complement": act_image_complement,
    "compact_set": act_compact_set,
    "window_cover": act_window_cover,
    "language": act_language,
    "renormalize": act_renormalize,
    "nonperiodic": act_nonperiodic,
    "render": act_render,
}


def run_scenario(data: dict | str, skip: tuple[str, ...] = ()) -> Report:
    if isinstance(data, str):
        data = load_scenario(data)
    else:
        _check_schema(data)
    m = map_from_spec(data["map"])
    ctx = Context(m, maps={"map": m})
    results = []
    for step in data["pipeline"]:
        if step["action"] in skip:
            continue
        t0 = time.perf_counter()
        try:
            res = ACTIONS[step["action"]](ctx, step)
        except (KeyError, TypeError) as exc:
            raise ScenarioError(f"action {step['action']}: bad or missing field {exc}") from None
        res.seconds = time.perf_counter() - t0
        results.append(res)
    rep = Report(data["name"], results)
    rep.context = ctx
    return rep
