"""Strongly connected components (Kosaraju) and connectivity predicates."""

from __future__ import annotations

from dataclasses import dataclass

from .model import Subgraph


@dataclass(frozen=True)
class SccPartition:
    components: tuple[frozenset[str], ...]
    index_of: dict[str, int]

    def same_component(self, u: str, v: str) -> bool:
        return self.index_of[u] == self.index_of[v]


def _adjacency(g: Subgraph):
    fwd: dict[str, list[str]] = {v: [] for v in g.vertex_set}
    rev: dict[str, list[str]] = {v: [] for v in g.vertex_set}
    for a in g.sorted_arcs():
        fwd[a.src].append(a.dst)
        rev[a.dst].append(a.src)
    return fwd, rev


def _dfs_finish_order(vertices, adj) -> list[str]:
    # iterative DFS; reduction graphs can chain hundreds of vertices
    seen = set()
    order = []
    for root in vertices:
        if root in seen:
            continue
        seen.add(root)
        stack = [(root, iter(adj[root]))]
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                order.append(v)
                stack.pop()
    return order


def strongly_connected_components(g: Subgraph) -> SccPartition:
    """Kosaraju's two-pass SCC; components ordered by smallest vertex id."""
    vertices = sorted(g.vertex_set)
    fwd, rev = _adjacency(g)
    order = _dfs_finish_order(vertices, fwd)
    seen: set[str] = set()
    comps: list[frozenset[str]] = []
    for root in reversed(order):
        if root in seen:
            continue
        comp = {root}
        seen.add(root)
        stack = [root]
        while stack:
            v = stack.pop()
            for w in rev[v]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    comps.sort(key=min)
    index = {v: i for i, comp in enumerate(comps) for v in comp}
    return SccPartition(tuple(comps), index)


def weakly_connected_components(g: Subgraph) -> tuple[frozenset[str], ...]:
    adj: dict[str, set[str]] = {v: set() for v in g.vertex_set}
    for a in g.arc_set:
        adj[a.src].add(a.dst)
        adj[a.dst].add(a.src)
    seen: set[str] = set()
    comps = []
    for root in sorted(g.vertex_set):
        if root in seen:
            continue
        comp = {root}
        seen.add(root)
        stack = [root]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return tuple(sorted(comps, key=min))


def is_piecewise_strongly_connected(g: Subgraph) -> bool:
    """Every vertex has an incident arc and every arc stays inside one SCC.

    Equivalently: every weakly connected component of g is strongly connected
    and non-trivial.
    """
    incident = set()
    for a in g.arc_set:
        incident.add(a.src)
        incident.add(a.dst)
    if incident != set(g.vertex_set):
        return False
    scc = strongly_connected_components(g)
    return all(scc.same_component(a.src, a.dst) for a in g.arc_set)
