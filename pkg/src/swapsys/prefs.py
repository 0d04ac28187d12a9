"""Preference engine: materializes each party's poset and answers queries.

The poset of a party is the reflexive-transitive closure of three edge kinds
over its outcome space:

* monotone moves (gaining an in-arc or shedding an out-arc is never worse),
* the explicit NoDeal-below-Deal pair,
* the party's generator pairs (worse below better), where a party flagged in
  ``SwapSystem.underwater_vertices`` carries the whole implicit family
  "omega below NoDeal for every omega with some out-arc but not all in-arcs".

Rather than materializing the 2^(din+dout)-node relation graph, comparisons
factor any witnessing path into monotone segments stitched through the small
set of generator edges, so a query costs O(#generators) after a one-time
closure over that edge set.  Tests check this against a brute-force BFS over
the full relation graph for small degrees.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .model import (
    GeneratorPair,
    ModelError,
    Outcome,
    SwapDigraph,
    SwapSystem,
    deal,
    nodeal,
)


class Ordering:
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def _mono(a_in: int, a_out: int, b_in: int, b_out: int) -> bool:
    # inclusive monotonicity: a <= b iff a.in subset b.in and b.out subset a.out
    return (a_in & ~b_in) == 0 and (b_out & ~a_out) == 0


def generic_leq(d: SwapDigraph, a: Outcome, b: Outcome) -> bool:
    """The generic relation alone: monotone moves plus NoDeal-below-Deal."""
    if a.owner != b.owner:
        raise ModelError(f"owner mismatch: {a.owner!r} vs {b.owner!r}")
    if _mono(a.in_mask, a.out_mask, b.in_mask, b.out_mask):
        return True
    fin, fout = d.full_in(a.owner), d.full_out(a.owner)
    return (a.in_mask, a.out_mask) == (0, 0) and (b.in_mask, b.out_mask) == (fin, fout)


class VertexPoset:
    """Reachability oracle for one party's preference poset."""

    def __init__(self, system: SwapSystem, v: str):
        d = system.digraph
        self.v = v
        self.fin = d.full_in(v)
        self.fout = d.full_out(v)
        self.has_family = v in system.underwater_vertices
        # special edges: explicit generators, then the NoDeal->Deal pair,
        # then (optionally) the underwater family as one pseudo-edge.
        self.edges: list[tuple[Optional[Outcome], Outcome]] = [
            (p.worse, p.better) for p in system.gens_for(v)
        ]
        self.edges.append((Outcome(v, 0, 0), Outcome(v, self.fin, self.fout)))
        self.family = len(self.edges) if self.has_family else -1
        n = len(self.edges) + (1 if self.has_family else 0)
        self.n = n
        step = [[False] * n for _ in range(n)]
        for i in range(n):
            ti, to = self._target(i)
            for j in range(n):
                step[i][j] = self._enters(j, ti, to)
        # reachability in >= 0 steps (reflexive), plus >= 1 step for cycles
        reach = [row[:] for row in step]
        for k in range(n):
            rk = reach[k]
            for i in range(n):
                if reach[i][k]:
                    ri = reach[i]
                    for j in range(n):
                        if rk[j]:
                            ri[j] = True
        self._strict_reach = reach
        self.reach = [[reach[i][j] or i == j for j in range(n)] for i in range(n)]
        self._cache: dict[tuple[int, int, int, int], bool] = {}
        self._cacheable = n <= 64 and (d.din(v) + d.dout(v)) <= 16

    def _target(self, i: int) -> tuple[int, int]:
        if i == self.family:
            return (0, 0)  # NoDeal
        t = self.edges[i][1]
        return (t.in_mask, t.out_mask)

    def _enters(self, i: int, in_m: int, out_m: int) -> bool:
        """Can an outcome with these masks be monotonically below edge i's source?"""
        if i == self.family:
            return in_m != self.fin and out_m != 0  # some underwater outcome is above it
        w = self.edges[i][0]
        return _mono(in_m, out_m, w.in_mask, w.out_mask)

    def _exits(self, i: int, in_m: int, out_m: int) -> bool:
        """Is edge i's target monotonically below an outcome with these masks?"""
        ti, to = self._target(i)
        return _mono(ti, to, in_m, out_m)

    def leq_masks(self, a_in: int, a_out: int, b_in: int, b_out: int) -> bool:
        if _mono(a_in, a_out, b_in, b_out):
            return True
        key = (a_in, a_out, b_in, b_out)
        if self._cacheable:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        starts = [i for i in range(self.n) if self._enters(i, a_in, a_out)]
        result = False
        if starts:
            reach = self.reach
            for j in range(self.n):
                if self._exits(j, b_in, b_out) and any(reach[i][j] for i in starts):
                    result = True
                    break
        if self._cacheable:
            self._cache[key] = result
        return result

    def leq(self, a: Outcome, b: Outcome) -> bool:
        return self.leq_masks(a.in_mask, a.out_mask, b.in_mask, b.out_mask)

    def has_preference_cycle(self) -> bool:
        """True iff the generated relation violates antisymmetry."""
        return any(self._strict_reach[i][i] for i in range(self.n))

    def improving_bases(self, in_m: int, out_m: int) -> list[tuple[int, int]]:
        """Minimal outcomes whose monotone up-sets union to everything >= the given one.

        The up-set of each returned (in_req, out_allowed) pair is a cube; the
        union of the cubes is exactly the set of outcomes weakly preferred to
        the given outcome.  Used by the dominance search.
        """
        bases = [(in_m, out_m)]
        for j in range(self.n):
            if any(self._enters(i, in_m, out_m) and self.reach[i][j] for i in range(self.n)):
                bases.append(self._target(j))
        # keep a base only if no kept base's cube already contains its cube
        minimal: list[tuple[int, int]] = []
        for b in bases:
            if any(_mono(m[0], m[1], b[0], b[1]) for m in minimal):
                continue
            minimal = [m for m in minimal if not _mono(b[0], b[1], m[0], m[1])]
            minimal.append(b)
        return minimal


def poset(system: SwapSystem, v: str) -> VertexPoset:
    cache = system.__dict__.get("_posets")
    if cache is None:
        cache = {}
        object.__setattr__(system, "_posets", cache)
    p = cache.get(v)
    if p is None:
        p = cache[v] = VertexPoset(system, v)
    return p


def compare(system: SwapSystem, v: str, a: Outcome, b: Outcome) -> str:
    if a.owner != v or b.owner != v:
        raise ModelError(f"compare on {v!r} got outcomes owned by {a.owner!r}/{b.owner!r}")
    if a == b:
        return Ordering.EQUAL
    p = poset(system, v)
    if p.leq(a, b):
        return Ordering.LESS
    if p.leq(b, a):
        return Ordering.GREATER
    return Ordering.INCOMPARABLE


def is_acceptable(system: SwapSystem, v: str, omega: Outcome) -> bool:
    if omega.owner != v:
        raise ModelError(f"outcome owned by {omega.owner!r}, not {v!r}")
    return poset(system, v).leq_masks(0, 0, omega.in_mask, omega.out_mask)


# --- outcome classes (Deal / NoDeal / Discount / FreeRide / Underwater) -----

DEAL = "DEAL"
NODEAL = "NODEAL"
DISCOUNT = "DISCOUNT"
FREERIDE = "FREERIDE"
UNDERWATER = "UNDERWATER"


def classify_outcome(d: SwapDigraph, omega: Outcome) -> frozenset[str]:
    v = omega.owner
    fin, fout = d.full_in(v), d.full_out(v)
    flags = set()
    if omega.in_mask == fin and omega.out_mask == fout:
        flags.add(DEAL)
    if omega.in_mask == 0 and omega.out_mask == 0:
        flags.add(NODEAL)
    if omega.in_mask == fin and omega.out_mask != fout:
        flags.add(DISCOUNT)
    if omega.in_mask != 0 and omega.out_mask == 0:
        flags.add(FREERIDE)
    if omega.in_mask != fin and omega.out_mask != 0:
        flags.add(UNDERWATER)
    return frozenset(flags)


def underwater_outcomes(d: SwapDigraph, v: str) -> Iterable[Outcome]:
    """All outcomes of v with some out-arc triggered but not all in-arcs."""
    fin, fout = d.full_in(v), d.full_out(v)
    for im in range(fin):  # excludes the full in-mask
        for om in range(1, fout + 1):
            yield Outcome(v, im, om)


_MATERIALIZE_LIMIT = 200_000


def h_closure(d: SwapDigraph, symbolic: bool = False) -> SwapSystem:
    """The swap system on ``d`` whose only non-generic preferences put every
    underwater outcome below NoDeal (one generator per underwater outcome).

    With ``symbolic=True`` the family is carried as a per-vertex flag instead
    of materialized pairs; the two forms answer identical queries.
    """
    if symbolic:
        return SwapSystem(d, {}, frozenset(d.vertices))
    gens: dict[str, tuple[GeneratorPair, ...]] = {}
    for v in d.vertices:
        count = ((1 << d.din(v)) - 1) * ((1 << d.dout(v)) - 1)
        if count > _MATERIALIZE_LIMIT:
            raise ModelError(
                f"underwater family of {v!r} has {count} pairs; use symbolic=True")
        nd = nodeal(d, v)
        gens[v] = tuple(GeneratorPair(v, u, nd) for u in underwater_outcomes(d, v))
    return SwapSystem(d, gens)


def validate_system(system: SwapSystem) -> list[str]:
    """Invariant violations as strings; empty means the system is valid.

    Digraph invariants are enforced at construction, so this focuses on the
    preference side: the relation generated by the generic rules, the
    generator pairs, and transitivity must be antisymmetric per vertex.
    """
    violations = []
    d = system.digraph
    for v in d.vertices:
        try:
            if VertexPoset(system, v).has_preference_cycle():
                violations.append(f"preference cycle at vertex {v!r}")
        except ModelError as e:
            violations.append(f"bad generators at vertex {v!r}: {e}")
    return violations
