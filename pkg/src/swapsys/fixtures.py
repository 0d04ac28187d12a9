"""Bundled example systems used by the benchmark, the CLI, and the tests.

s1: three parties on a bidirectional triangle; each prefers a one-for-one
    trade over the full swap (the cyclic-witness example).
s2: four parties where two of them would rather swap directly with each
    other, breaking the full protocol's equilibrium.
s3: six parties in paired gadgets with a known witness (two trade couples
    plus a third cycle).
s4: s3 with the third couple's mutual-trade preferences removed.
s5: s3 plus a seventh party fed by both u-parties.

s4 and s5 are derived from s3's description programmatically rather than
restated.
"""

from __future__ import annotations

import os

from .model import (
    Subgraph,
    SwapSystem,
    SwapDigraph,
    generator_pair,
    serialize_swap_system,
    subgraph_of,
)
from .prefs import h_closure

DEAL = "DEAL"


def _build(vertices, arcs, gen_specs) -> SwapSystem:
    d = SwapDigraph(vertices, arcs)
    gens = {}
    for v, pairs in gen_specs.items():
        resolved = []
        for worse, better in pairs:
            worse = worse if worse != DEAL else ((d.in_nbrs[v]), (d.out_nbrs[v]))
            resolved.append(generator_pair(d, v, worse, better))
        gens[v] = tuple(resolved)
    return SwapSystem(d, gens)


def _s3_description():
    vertices = ["u1", "u2", "v1", "v2", "t1", "t2"]
    arcs = []
    for i, j in ((1, 2), (2, 1)):
        arcs += [(f"u{i}", f"v{i}"), (f"v{i}", f"u{i}"),
                 (f"u{i}", f"u{j}"), (f"v{i}", f"v{j}"),
                 (f"v{i}", f"t{i}"), (f"t{i}", f"v{j}"), (f"t{i}", f"t{j}")]
    arcs = sorted(set(arcs))
    gens = {}
    for i, j in ((1, 2), (2, 1)):
        gens[f"u{i}"] = [
            (DEAL, ([f"v{i}"], [f"v{i}"])),
            (DEAL, ([f"u{j}"], [f"u{j}"])),
        ]
        gens[f"v{i}"] = [
            (DEAL, ([f"u{i}"], [f"u{i}"])),
            (DEAL, ([f"t{j}"], [f"t{i}"])),
            (([f"t{j}"], [f"t{i}"]), ([f"v{j}"], [f"v{j}"])),
        ]
        gens[f"t{i}"] = [
            (DEAL, ([f"v{i}"], [f"v{j}"])),
            (DEAL, ([f"t{j}"], [f"t{j}"])),
        ]
    return vertices, arcs, gens


def s1_system() -> SwapSystem:
    vertices = ["u", "v", "w"]
    arcs = [("u", "v"), ("v", "u"), ("u", "w"), ("w", "u"), ("v", "w"), ("w", "v")]
    gens = {
        "u": [(DEAL, (["v"], ["v"])), ((["v"], ["v"]), (["v"], ["w"]))],
        "v": [(DEAL, (["u"], ["u"])), ((["u"], ["u"]), (["w"], ["u"]))],
        "w": [(DEAL, (["u"], ["v"]))],
    }
    return _build(vertices, arcs, gens)


def s2_system() -> SwapSystem:
    vertices = ["u", "v", "x", "y"]
    arcs = [("u", "x"), ("x", "v"), ("u", "v"), ("v", "u"), ("v", "y"), ("y", "u")]
    gens = {
        "u": [(DEAL, (["v"], ["v"]))],
        "v": [(DEAL, (["u"], ["u"]))],
    }
    return _build(vertices, arcs, gens)


def s3_system() -> SwapSystem:
    return _build(*_s3_description())


def s4_system() -> SwapSystem:
    # s3 minus the mutual-trade generators of t1 and t2
    vertices, arcs, gens = _s3_description()
    for i, j in ((1, 2), (2, 1)):
        gens[f"t{i}"] = [p for p in gens[f"t{i}"]
                         if p != (DEAL, ([f"t{j}"], [f"t{j}"]))]
    return _build(vertices, arcs, gens)


def s5_system() -> SwapSystem:
    # s3 plus party s1 with arcs (u1,s1), (u2,s1), (s1,t1); preferences unchanged
    vertices, arcs, gens = _s3_description()
    vertices.append("s1")
    arcs += [("u1", "s1"), ("u2", "s1"), ("s1", "t1")]
    return _build(vertices, arcs, gens)


def s2_h_system() -> SwapSystem:
    """The s2 digraph under the pure hashed-timelock preference closure."""
    return h_closure(s2_system().digraph)


def s1_g2(system: SwapSystem) -> Subgraph:
    return subgraph_of(system.digraph, [("u", "w"), ("w", "v"), ("v", "u")],
                       vertices=system.digraph.vertices)


def s1_h(system: SwapSystem) -> Subgraph:
    return subgraph_of(system.digraph, [("u", "v"), ("v", "u")])


def s3_g2(system: SwapSystem) -> Subgraph:
    arcs = [("u1", "u2"), ("u2", "u1"), ("v1", "t1"), ("v2", "t2"),
            ("t1", "v2"), ("t2", "v1")]
    return subgraph_of(system.digraph, arcs, vertices=system.digraph.vertices)


def s3_g3(system: SwapSystem) -> Subgraph:
    arcs = [("u1", "v1"), ("v1", "u1"), ("u2", "v2"), ("v2", "u2"),
            ("t1", "t2"), ("t2", "t1")]
    return subgraph_of(system.digraph, arcs, vertices=system.digraph.vertices)


def s3_h1(system: SwapSystem) -> Subgraph:
    return subgraph_of(system.digraph, [("v1", "v2"), ("v2", "v1")])


def s3_h2(system: SwapSystem) -> Subgraph:
    return subgraph_of(system.digraph, [("t1", "t2"), ("t2", "t1")])


BENCH_NAMES = ("s1", "s2", "s3", "s4", "s5")

_BUILDERS = {
    "s1": s1_system,
    "s2": s2_system,
    "s3": s3_system,
    "s4": s4_system,
    "s5": s5_system,
    "s2h": s2_h_system,
}


def fixture_system(name: str) -> SwapSystem:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(_BUILDERS)}")


def write_fixtures(directory: str) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    written = []
    for name, builder in sorted(_BUILDERS.items()):
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w") as fh:
            fh.write(serialize_swap_system(builder()))
        written.append(path)
    return written
