"""Words, substitution graphs, languages and periodic cells."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .dynamics import PiecewiseMap
from .geometry import ConvexRegion, Isometry, intersect, transform, vertices_and_rays, whole_plane
from .induction import Substitution

__all__ = [
    "SubstitutionGraph",
    "PeriodicCellReport",
    "substitution_apply",
    "graph_language",
    "factors",
    "periodic_factors",
    "cell_of_prefix",
    "periodic_cell",
    "project_word",
    "rotation_words",
    "approx_sequence",
    "cyclic_equal",
    "min_rotation",
    "family_theta_third",
    "load_substitution",
    "load_graph",
    "smallest_period",
]


def substitution_apply(s: Substitution, w: str) -> str:
    return s(w)


# ----------------------------------------------------------------------------
# words


def min_rotation(w: str) -> str:
    if not w:
        return w
    return min(w[k:] + w[:k] for k in range(len(w)))


def primitive_root(w: str) -> str:
    for d in range(1, len(w) + 1):
        if len(w) % d == 0 and w[:d] * (len(w) // d) == w:
            return w[:d]
    return w


def cyclic_equal(u: str, v: str) -> bool:
    """u^omega and v^omega are shifts of one another."""
    u, v = primitive_root(u), primitive_root(v)
    return len(u) == len(v) and v in u + u


def factors(w: str, n: int) -> set[str]:
    out = set()
    for length in range(0, n + 1):
        for k in range(0, len(w) - length + 1):
            out.add(w[k:k + length])
    return out


def periodic_factors(z: str, n: int) -> set[str]:
    """Factors of length <= n of z^omega."""
    if not z:
        return {""}
    reps = n // len(z) + 2
    return factors(z * reps, n)


def smallest_period(w: str, max_period: int) -> int | None:
    """Smallest p <= max_period with w[k] == w[k+p] for all k, else None."""
    for p in range(1, max_period + 1):
        if all(w[k] == w[k + p] for k in range(len(w) - p)):
            return p
    return None


# ----------------------------------------------------------------------------
# substitution graphs


@dataclass
class SubstitutionGraph:
    """Vertices carry seed words; edges carry substitutions.

    The words attached to a path v0 -e1-> v1 ... -ek-> vk are
    s_k(...s_1(seeds(v0))...) together with the seeds met later along the
    path pushed through the remaining substitutions.
    """

    seeds: dict[str, list[str]]
    edges: list[tuple[str, str, Substitution]] = field(default_factory=list)

    def __post_init__(self):
        for src, dst, s in self.edges:
            if src not in self.seeds or dst not in self.seeds:
                raise ValueError(f"edge {src}->{dst} uses an unknown vertex")

    @classmethod
    def loop(cls, sub: Substitution, seeds: Iterable[str]) -> "SubstitutionGraph":
        return cls({"v": list(seeds)}, [("v", "v", sub)])

    def words(self, depth: int) -> set[str]:
        """All words z produced along paths with at most ``depth`` edges."""
        current = {v: set(ws) for v, ws in self.seeds.items()}
        out = set().union(*current.values()) if current else set()
        for _ in range(depth):
            nxt = {v: set() for v in self.seeds}
            for src, dst, s in self.edges:
                nxt[dst].update(s(w) for w in current[src])
            for v in nxt:
                nxt[v] |= set(self.seeds[v])
            if nxt == current:
                break
            current = nxt
            for ws in current.values():
                out |= ws
        return out


def graph_language(g, n: int, depth: int) -> set[str]:
    """Factors of length <= n of z^omega for the words z produced by ``g``.

    ``g`` may be a SubstitutionGraph or any callable depth -> iterable of words
    (used for families that are not generated by a graph).
    """
    words = g.words(depth) if isinstance(g, SubstitutionGraph) else set(g(depth))
    out: set[str] = set()
    for z in sorted(words):
        out |= periodic_factors(z, n)
    return out


def family_theta_third(bound: int) -> list[str]:
    """A^n B^n C, A^(n+1) B^n C, B^(n+1) A^n C for n <= bound."""
    out = []
    for k in range(bound + 1):
        out += ["A" * k + "B" * k + "C", "A" * (k + 1) + "B" * k + "C", "B" * (k + 1) + "A" * k + "C"]
    return out


def load_substitution(text_or_path: str) -> Substitution:
    try:
        data = json.loads(text_or_path)
    except json.JSONDecodeError:
        with open(text_or_path) as fh:
            data = json.load(fh)
    return Substitution(dict(data))


def load_graph(data: Mapping | str) -> SubstitutionGraph:
    """Graph JSON: {"vertices": {name: [seeds]}, "edges": [{"from", "to", "substitution"}]}."""
    if isinstance(data, str):
        with open(data) as fh:
            data = json.load(fh)
    seeds = {k: list(v) for k, v in data["vertices"].items()}
    edges = [(e["from"], e["to"], Substitution(dict(e["substitution"]))) for e in data.get("edges", [])]
    return SubstitutionGraph(seeds, edges)


# ----------------------------------------------------------------------------
# cells


def cell_of_prefix(m: PiecewiseMap, w: str) -> list[ConvexRegion]:
    """Disjoint convex regions whose points have codings starting with ``w``.

    For the two-branch maps (and any map whose letters are convex) this is a
    single region or nothing.
    """
    if m.base is not None:
        start = list(m.base)
    else:
        start = [whole_plane(m.n)]
    states = [(r, Isometry.identity(m.n)) for r in start]
    for a in w:
        br = m.branch(a)
        nxt = []
        for cur, g in states:
            for d in br.domains:
                part = intersect(cur, d)
                if not part.empty:
                    nxt.append((transform(part, br.map), br.map @ g))
        states = nxt
        if not states:
            return []
    return [transform(cur, g.inverse()) for cur, g in states]


@dataclass
class PeriodicCellReport:
    period_word: str
    cell: ConvexRegion | None
    shape: int | None
    periodic: bool
    isometry: Isometry
    # number of map steps before every point of the cell comes back
    orbit_period: int | None = None

    @property
    def nonempty(self) -> bool:
        return self.cell is not None and not self.cell.empty


def rotation_order(g: Isometry) -> int | None:
    """Smallest r >= 1 with g^r = id, or None (g of infinite order)."""
    k = g.rotation_power()
    if k is None:
        return None
    r = g.n // math.gcd(k, g.n)
    h = g
    for _ in range(r - 1):
        h = g @ h
    return r if h.is_identity() else None


def periodic_cell(m: PiecewiseMap, w: str) -> PeriodicCellReport:
    """Cell of the periodic coding w^omega.

    If the isometry read along w has finite order r, the cell is the set of
    points whose coding starts with w^r; those points are r-periodic under
    the return isometry.  Otherwise (a nonzero translation) no open periodic
    cell exists.
    """
    if not w:
        raise ValueError("period word must be nonempty")
    g = m.word_isometry(w)
    r = rotation_order(g)
    if r is None:
        return PeriodicCellReport(w, None, None, False, g)
    cells = cell_of_prefix(m, w * max(r, 2))
    if len(cells) > 1:
        from .induction import merge_convex

        cells = merge_convex(cells)
    if not cells:
        return PeriodicCellReport(w, None, None, False, g)
    if len(cells) > 1:
        raise ValueError(f"cell of {w}^omega is not convex ({len(cells)} parts)")
    cell = cells[0]
    shape = len(vertices_and_rays(cell)[0]) if cell.is_bounded() else None
    return PeriodicCellReport(w, cell, shape, True, g, orbit_period=r * len(w))


# ----------------------------------------------------------------------------
# projections and rotation words


def project_word(return_words: Mapping[str, str], w: str) -> str:
    try:
        return "".join(return_words[a] for a in w)
    except KeyError as exc:
        raise KeyError(f"letter {exc.args[0]!r} has no return word") from None


def rotation_words(p: int, q: int) -> set[str]:
    """Period words of the pure rotation by 2*pi*p/q about the origin."""
    if not (0 < p < q) or math.gcd(p, q) != 1:
        raise ValueError("need 0 < p < q with gcd(p, q) = 1")
    k = q // 2
    if q % 2 == 0:
        base_words = ["0" * k + "1" * k]
    else:
        base_words = ["0" * k + "1" * (k + 1), "0" * (k + 1) + "1" * k]
    if p == 1:
        return set(base_words)
    out = set()
    for b in base_words:
        out.add("".join(b[(j * p) % q] for j in range(q)))
    return out


def approx_sequence(c: int, d: int, k: int) -> Fraction:
    """p_k/q_k = (p0 + k c) / (q0 + k d) with p0/q0 the best lower approximant."""
    theta = Fraction(c, d)
    if theta.numerator != c or theta.denominator != d:
        raise ValueError("c/d must be in lowest terms")
    best = None
    for q0 in range(1, d):
        p0 = math.ceil(theta * q0) - 1
        r = Fraction(p0, q0)
        if best is None or r > best:
            best = r
    if best is None:
        raise ValueError("no approximant with denominator < d")
    # keep the representation with smallest denominator of that value
    p0, q0 = best.numerator, best.denominator
    return Fraction(p0 + k * c, q0 + k * d)
