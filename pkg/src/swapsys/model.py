"""Core swap-system model: digraph, outcomes, preference generators, serialization.

A swap system couples a digraph of prearranged asset transfers (each arc is
one asset moving between two distinct parties) with, per party, a list of
preference generator pairs over that party's outcomes.  An outcome of a party
is the pair (subset of its in-arcs, subset of its out-arcs) that ended up
triggered; both subsets are encoded as bitmasks over the party's neighbor
lists, sorted lexicographically so bit positions are stable across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

DEFAULT_DEGREE_CAP = 20


class ModelError(ValueError):
    """Raised for malformed documents or invariant-violating construction."""


class Arc(NamedTuple):
    src: str
    dst: str

    def __str__(self) -> str:
        return f"({self.src},{self.dst})"


def _as_arc(pair) -> Arc:
    if isinstance(pair, Arc):
        return pair
    return Arc(str(pair[0]), str(pair[1]))


class SwapDigraph:
    """Weakly connected digraph with per-vertex ordered adjacency.

    Arcs are stored in canonical (lexicographic) order; ``arc_index`` gives
    each arc's bit position for subgraph masks.  Per-vertex in/out neighbor
    lists are sorted lexicographically; bit ``i`` of an outcome mask refers to
    the ``i``-th neighbor of that list.
    """

    def __init__(self, vertices: Sequence[str], arcs: Iterable, *,
                 degree_cap: Optional[int] = DEFAULT_DEGREE_CAP):
        self.vertices = tuple(str(v) for v in vertices)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ModelError("duplicate vertex identifiers")
        if any(not v for v in self.vertices):
            raise ModelError("empty vertex identifier")
        if len(self.vertices) < 2:
            raise ModelError("a swap digraph needs at least 2 vertices")

        arc_list = [_as_arc(a) for a in arcs]
        seen = set()
        for a in arc_list:
            if a.src not in vset or a.dst not in vset:
                raise ModelError(f"arc {a} references unknown vertex")
            if a.src == a.dst:
                raise ModelError(f"self-loop {a} is not allowed")
            if a in seen:
                raise ModelError(f"duplicate arc {a}")
            seen.add(a)
        self.arcs: tuple[Arc, ...] = tuple(sorted(arc_list))
        self.arc_index: dict[Arc, int] = {a: i for i, a in enumerate(self.arcs)}
        self.degree_cap = degree_cap

        ins: dict[str, list[str]] = {v: [] for v in self.vertices}
        outs: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a in self.arcs:
            outs[a.src].append(a.dst)
            ins[a.dst].append(a.src)
        self.in_nbrs = {v: tuple(sorted(ins[v])) for v in self.vertices}
        self.out_nbrs = {v: tuple(sorted(outs[v])) for v in self.vertices}
        for v in self.vertices:
            if not self.in_nbrs[v] or not self.out_nbrs[v]:
                raise ModelError(f"vertex {v!r} has empty in- or out-adjacency")
            d = len(self.in_nbrs[v]) + len(self.out_nbrs[v])
            if degree_cap is not None and d > degree_cap:
                raise ModelError(
                    f"vertex {v!r} has total degree {d} > cap {degree_cap}")
        if not self._weakly_connected():
            raise ModelError("digraph is not weakly connected")

        self._in_pos = {v: {u: i for i, u in enumerate(self.in_nbrs[v])}
                        for v in self.vertices}
        self._out_pos = {v: {u: i for i, u in enumerate(self.out_nbrs[v])}
                         for v in self.vertices}
        # global arc index -> (bit in dst's in-mask, bit in src's out-mask)
        self.in_bit_of_arc = {a: self._in_pos[a.dst][a.src] for a in self.arcs}
        self.out_bit_of_arc = {a: self._out_pos[a.src][a.dst] for a in self.arcs}

    def _weakly_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a in self.arcs:
            adj[a.src].add(a.dst)
            adj[a.dst].add(a.src)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def din(self, v: str) -> int:
        return len(self.in_nbrs[v])

    def dout(self, v: str) -> int:
        return len(self.out_nbrs[v])

    def in_mask_from_names(self, v: str, names: Iterable[str]) -> int:
        mask = 0
        pos = self._in_pos[v]
        for n in names:
            if n not in pos:
                raise ModelError(f"{n!r} is not an in-neighbor of {v!r}")
            mask |= 1 << pos[n]
        return mask

    def out_mask_from_names(self, v: str, names: Iterable[str]) -> int:
        mask = 0
        pos = self._out_pos[v]
        for n in names:
            if n not in pos:
                raise ModelError(f"{n!r} is not an out-neighbor of {v!r}")
            mask |= 1 << pos[n]
        return mask

    def in_names(self, v: str, mask: int) -> tuple[str, ...]:
        return tuple(u for i, u in enumerate(self.in_nbrs[v]) if mask >> i & 1)

    def out_names(self, v: str, mask: int) -> tuple[str, ...]:
        return tuple(u for i, u in enumerate(self.out_nbrs[v]) if mask >> i & 1)

    def full_in(self, v: str) -> int:
        return (1 << self.din(v)) - 1

    def full_out(self, v: str) -> int:
        return (1 << self.dout(v)) - 1

    def __eq__(self, other) -> bool:
        return (isinstance(other, SwapDigraph)
                and self.vertices == other.vertices and self.arcs == other.arcs)

    def __hash__(self):
        return hash((self.vertices, self.arcs))

    def __repr__(self):
        return f"SwapDigraph({len(self.vertices)} vertices, {len(self.arcs)} arcs)"


class Outcome(NamedTuple):
    """A party's outcome: bitmask pair over its ordered in/out neighbor lists."""
    owner: str
    in_mask: int
    out_mask: int

    def describe(self, d: SwapDigraph) -> str:
        ins = ",".join(d.in_names(self.owner, self.in_mask)) or "-"
        outs = ",".join(d.out_names(self.owner, self.out_mask)) or "-"
        return f"<{ins}|{outs}>"


def outcome_of(d: SwapDigraph, v: str, in_names: Iterable[str],
               out_names: Iterable[str]) -> Outcome:
    return Outcome(v, d.in_mask_from_names(v, in_names),
                   d.out_mask_from_names(v, out_names))


def deal(d: SwapDigraph, v: str) -> Outcome:
    return Outcome(v, d.full_in(v), d.full_out(v))


def nodeal(d: SwapDigraph, v: str) -> Outcome:
    return Outcome(v, 0, 0)


class GeneratorPair(NamedTuple):
    owner: str
    worse: Outcome
    better: Outcome


def generator_pair(d: SwapDigraph, v: str, worse, better) -> GeneratorPair:
    """Build a generator pair from (in_names, out_names) pairs or Outcomes."""
    def resolve(o) -> Outcome:
        if isinstance(o, Outcome):
            return o
        if isinstance(o, str):
            token = o.upper()
            if token == "DEAL":
                return deal(d, v)
            if token == "NODEAL":
                return nodeal(d, v)
            raise ModelError(f"unknown outcome token {o!r}")
        return outcome_of(d, v, o[0], o[1])
    w, b = resolve(worse), resolve(better)
    if w.owner != v or b.owner != v:
        raise ModelError("generator outcomes must be owned by the same vertex")
    if w == b:
        raise ModelError(f"generator pair for {v!r} relates an outcome to itself")
    return GeneratorPair(v, w, b)


@dataclass(frozen=True)
class Subgraph:
    """A vertex subset plus an arc subset of the parent digraph."""
    digraph: SwapDigraph
    vertex_set: frozenset[str]
    arc_set: frozenset[Arc]

    def __post_init__(self):
        unknown = self.vertex_set - set(self.digraph.vertices)
        if unknown:
            raise ModelError(f"subgraph references unknown vertices {sorted(unknown)}")
        for a in self.arc_set:
            if a not in self.digraph.arc_index:
                raise ModelError(f"subgraph arc {a} is not in the digraph")
            if a.src not in self.vertex_set or a.dst not in self.vertex_set:
                raise ModelError(f"subgraph arc {a} leaves the vertex set")

    @property
    def arc_mask(self) -> int:
        mask = 0
        for a in self.arc_set:
            mask |= 1 << self.digraph.arc_index[a]
        return mask

    def is_spanning(self) -> bool:
        return self.vertex_set == set(self.digraph.vertices)

    def sorted_arcs(self) -> tuple[Arc, ...]:
        return tuple(sorted(self.arc_set))

    def __repr__(self):
        return f"Subgraph({sorted(self.vertex_set)}, {self.sorted_arcs()})"


def subgraph_of(d: SwapDigraph, arcs: Iterable, vertices: Optional[Iterable[str]] = None) -> Subgraph:
    """Subgraph from arcs; vertex set defaults to the arc endpoints."""
    arc_set = frozenset(_as_arc(a) for a in arcs)
    if vertices is None:
        vs = frozenset(x for a in arc_set for x in (a.src, a.dst))
    else:
        vs = frozenset(str(v) for v in vertices)
    return Subgraph(d, vs, arc_set)


def full_subgraph(d: SwapDigraph) -> Subgraph:
    return Subgraph(d, frozenset(d.vertices), frozenset(d.arcs))


def subgraph_from_mask(d: SwapDigraph, mask: int, spanning: bool = False) -> Subgraph:
    arcs = frozenset(a for a in d.arcs if mask >> d.arc_index[a] & 1)
    if spanning:
        vs = frozenset(d.vertices)
    else:
        vs = frozenset(x for a in arcs for x in (a.src, a.dst))
    return Subgraph(d, vs, arcs)


def deal_outcome(g: Subgraph, v: str) -> Outcome:
    """Outcome of ``v`` when exactly the arcs of ``g`` are triggered."""
    if v not in g.vertex_set:
        raise ModelError(f"vertex {v!r} is not in the subgraph")
    d = g.digraph
    im = om = 0
    for a in g.arc_set:
        if a.dst == v:
            im |= 1 << d.in_bit_of_arc[a]
        elif a.src == v:
            om |= 1 << d.out_bit_of_arc[a]
    return Outcome(v, im, om)


@dataclass(frozen=True, eq=False)
class SwapSystem:
    """A swap digraph plus per-vertex preference generators.

    ``underwater_vertices`` marks parties whose poset carries, in addition to
    any explicit generator pairs, the whole family "omega below NoDeal for
    every outcome with some out-arc but not all in-arcs".  The family is kept
    symbolic because it is exponentially large in the vertex degree.
    """
    digraph: SwapDigraph
    generators: Mapping[str, tuple[GeneratorPair, ...]] = field(default_factory=dict)
    underwater_vertices: frozenset[str] = frozenset()

    def __post_init__(self):
        gens = {}
        for v, pairs in self.generators.items():
            if v not in self.digraph._in_pos:
                raise ModelError(f"generators reference unknown vertex {v!r}")
            pairs = tuple(pairs)
            for p in pairs:
                if p.owner != v:
                    raise ModelError(f"generator for {v!r} owned by {p.owner!r}")
                for o in (p.worse, p.better):
                    if o.in_mask >> self.digraph.din(v) or o.out_mask >> self.digraph.dout(v):
                        raise ModelError(f"outcome mask out of range for {v!r}")
            if pairs:
                gens[v] = pairs
        object.__setattr__(self, "generators", gens)
        unknown = self.underwater_vertices - set(self.digraph.vertices)
        if unknown:
            raise ModelError(f"underwater marker on unknown vertices {sorted(unknown)}")

    def generator_count(self) -> int:
        return sum(len(p) for p in self.generators.values())

    def gens_for(self, v: str) -> tuple[GeneratorPair, ...]:
        return self.generators.get(v, ())


# --- serialization ---------------------------------------------------------

def _outcome_to_doc(d: SwapDigraph, o: Outcome):
    if o.in_mask == d.full_in(o.owner) and o.out_mask == d.full_out(o.owner):
        return "DEAL"
    if o.in_mask == 0 and o.out_mask == 0:
        return "NODEAL"
    return {"in": sorted(d.in_names(o.owner, o.in_mask)),
            "out": sorted(d.out_names(o.owner, o.out_mask))}


def _outcome_from_doc(d: SwapDigraph, v: str, doc) -> Outcome:
    if isinstance(doc, str):
        token = doc.upper()
        if token == "DEAL":
            return deal(d, v)
        if token == "NODEAL":
            return nodeal(d, v)
        raise ModelError(f"unknown outcome token {doc!r} for vertex {v!r}")
    if not isinstance(doc, dict) or set(doc) - {"in", "out"}:
        raise ModelError(f"malformed outcome document for vertex {v!r}")
    return outcome_of(d, v, doc.get("in", []), doc.get("out", []))


def serialize_swap_system(s: SwapSystem) -> str:
    d = s.digraph
    doc = {
        "vertices": list(d.vertices),
        "arcs": [[a.src, a.dst] for a in d.arcs],
        "generators": {
            v: [{"worse": _outcome_to_doc(d, p.worse),
                 "better": _outcome_to_doc(d, p.better)} for p in s.generators[v]]
            for v in sorted(s.generators)
        },
    }
    if s.underwater_vertices:
        doc["underwater_generators"] = sorted(s.underwater_vertices)
    if d.degree_cap != DEFAULT_DEGREE_CAP:
        doc["degree_cap"] = d.degree_cap
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_swap_system(text: str) -> SwapSystem:
    """Parse the JSON system document (see README for the schema)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(doc, dict):
        raise ModelError("top-level document must be a JSON object")
    for key in ("vertices", "arcs"):
        if key not in doc:
            raise ModelError(f"missing required key {key!r}")
    cap = doc.get("degree_cap", DEFAULT_DEGREE_CAP)
    if cap is not None and not isinstance(cap, int):
        raise ModelError("degree_cap must be an integer or null")
    d = SwapDigraph(doc["vertices"], doc["arcs"], degree_cap=cap)
    gens: dict[str, tuple[GeneratorPair, ...]] = {}
    for v, pairs in (doc.get("generators") or {}).items():
        if v not in d._in_pos:
            raise ModelError(f"generators reference unknown vertex {v!r}")
        resolved = []
        for p in pairs:
            if not isinstance(p, dict) or "worse" not in p or "better" not in p:
                raise ModelError(f"generator entry for {v!r} needs 'worse' and 'better'")
            resolved.append(generator_pair(
                d, v, _outcome_from_doc(d, v, p["worse"]),
                _outcome_from_doc(d, v, p["better"])))
        gens[v] = tuple(resolved)
    uw = frozenset(doc.get("underwater_generators", []))
    return SwapSystem(d, gens, uw)


# --- subgraph documents (witness files for the CLI) ------------------------

def serialize_subgraph(g: Subgraph) -> str:
    doc = {"vertices": sorted(g.vertex_set),
           "arcs": [[a.src, a.dst] for a in g.sorted_arcs()]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_subgraph(d: SwapDigraph, text: str) -> Subgraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}")
    if "arcs" not in doc:
        raise ModelError("subgraph document needs an 'arcs' key")
    return subgraph_of(d, [tuple(a) for a in doc["arcs"]],
                       doc.get("vertices"))
