"""Atomicity decision engine: dominance tests and the spanning-subgraph search.

A swap system admits an atomic protocol iff some spanning subgraph G of its
digraph is (c.1) piece-wise strongly connected with no isolated vertices,
(c.2) leaves every party at least as well off as triggering everything, and
(c.3) is strictly dominated by no subgraph H.  The engine enumerates G
candidates as ascending binary counters over the canonical arc order (so the
reported witness is reproducible) and discharges (c.3) either by a guided
constraint search over per-vertex improvement cubes or by a flat sweep over
arc subsets.

Note on control flow: the published pseudocode for this search answers "no"
as soon as the *first* G passing (c.1)+(c.2) has a strict dominator.  That
rule is order-dependent and contradicts the published results on the larger
fixtures, so it is not the default here; ``literal_first_g=True`` reproduces
it for comparison.  The default keeps scanning past dominated candidates,
which matches both the characterization theorem and the reported outcomes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graphs import SccPartition, is_piecewise_strongly_connected, strongly_connected_components
from .model import (
    Arc,
    ModelError,
    Subgraph,
    SwapSystem,
    deal_outcome,
    full_subgraph,
    subgraph_from_mask,
)
from .prefs import Ordering, compare, poset, validate_system


class TimeBudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class SearchConfig:
    frozen_in: frozenset[Arc] = frozenset()    # arcs forced into every G candidate
    frozen_out: frozenset[Arc] = frozenset()   # arcs excluded from every candidate
    h_frozen_in: frozenset[Arc] = frozenset()  # arcs forced into every H candidate
    h_search: str = "guided"                   # "guided" | "flat"
    h_scope: str = "arcs"                      # "arcs" | "full" (flat sweep only)
    mode: str = "early"                        # "early" | "exhaustive"
    literal_first_g: bool = False
    time_budget: Optional[float] = None
    jobs: int = 1


@dataclass
class AtomicityVerdict:
    decision: str                       # "yes" | "no" | "inconclusive"
    witness: Optional[Subgraph] = None
    scc: Optional[SccPartition] = None
    stats: dict = field(default_factory=dict)

    @property
    def is_yes(self) -> bool:
        return self.decision == "yes"


# --- public dominance operations (Subgraph level) ---------------------------

def dominates(system: SwapSystem, h: Subgraph, g: Subgraph) -> bool:
    """True iff triggering exactly h's arcs leaves every party of h at least
    as well off as triggering exactly g's arcs (g must be spanning)."""
    if not g.is_spanning():
        raise ModelError("dominance is defined against a spanning subgraph")
    for v in sorted(h.vertex_set):
        rel = compare(system, v, deal_outcome(g, v), deal_outcome(h, v))
        if rel not in (Ordering.LESS, Ordering.EQUAL):
            return False
    return True


def strictly_dominates(system: SwapSystem, h: Subgraph, g: Subgraph) -> bool:
    if not g.is_spanning():
        raise ModelError("dominance is defined against a spanning subgraph")
    strict = False
    for v in sorted(h.vertex_set):
        rel = compare(system, v, deal_outcome(g, v), deal_outcome(h, v))
        if rel not in (Ordering.LESS, Ordering.EQUAL):
            return False
        if rel == Ordering.LESS:
            strict = True
    return strict


# --- mask-level engine -------------------------------------------------------

class _Engine:
    """Bit-mask views of one system, shared by the candidate loops."""

    def __init__(self, system: SwapSystem):
        self.system = system
        d = system.digraph
        self.d = d
        self.order = tuple(sorted(d.vertices))
        self.vindex = {v: i for i, v in enumerate(self.order)}
        self.n_arcs = len(d.arcs)
        # per arc: (src id, dst id, local out bit, local in bit, src idx, dst idx)
        self.arc_info = []
        for a in d.arcs:
            self.arc_info.append((a.src, a.dst, d.out_bit_of_arc[a],
                                  d.in_bit_of_arc[a], self.vindex[a.src],
                                  self.vindex[a.dst]))
        self.in_arcmask = {v: 0 for v in self.order}
        self.out_arcmask = {v: 0 for v in self.order}
        self.in_gbit = {v: {} for v in self.order}   # local in bit -> global idx
        self.out_gbit = {v: {} for v in self.order}  # local out bit -> global idx
        for gi, (src, dst, ob, ib, _si, _di) in enumerate(self.arc_info):
            self.out_arcmask[src] |= 1 << gi
            self.in_arcmask[dst] |= 1 << gi
            self.in_gbit[dst][ib] = gi
            self.out_gbit[src][ob] = gi
        self.full = {v: (d.full_in(v), d.full_out(v)) for v in self.order}
        self.posets = {v: poset(system, v) for v in self.order}

    def c2_cubes_global(self) -> list[tuple[int, int]]:
        """Per-vertex admissible-outcome cubes lifted to global arc masks.

        A candidate G satisfies the dominance filter at v iff for some cube
        (need, forbid): G contains every arc of ``need`` and no arc of
        ``forbid``.  Exact, not just necessary: the cubes are the monotone
        up-sets of the minimal outcomes weakly above the full-digraph deal.
        """
        out = []
        for v in self.order:
            fin, fout = self.full[v]
            cubes = []
            for ni, ao in self.posets[v].improving_bases(fin, fout):
                need = 0
                for bit, gi in self.in_gbit[v].items():
                    if ni >> bit & 1:
                        need |= 1 << gi
                allow = 0
                for bit, gi in self.out_gbit[v].items():
                    if ao >> bit & 1:
                        allow |= 1 << gi
                forbid = self.out_arcmask[v] & ~allow
                cubes.append((need, forbid))
            out.append(cubes)
        return out

    def local_outcomes(self, mask: int) -> dict[str, tuple[int, int]]:
        """Per-endpoint (in, out) local masks for the arcs set in ``mask``."""
        res: dict[str, list[int]] = {}
        m = mask
        while m:
            low = m & -m
            m ^= low
            src, dst, ob, ib, _si, _di = self.arc_info[low.bit_length() - 1]
            e = res.get(dst)
            if e is None:
                e = res[dst] = [0, 0]
            e[0] |= 1 << ib
            e = res.get(src)
            if e is None:
                e = res[src] = [0, 0]
            e[1] |= 1 << ob
        return {v: (e[0], e[1]) for v, e in res.items()}

    def local_outcome(self, v: str, mask: int) -> tuple[int, int]:
        im = om = 0
        m = mask & (self.in_arcmask[v] | self.out_arcmask[v])
        while m:
            low = m & -m
            m ^= low
            src, dst, ob, ib, _si, _di = self.arc_info[low.bit_length() - 1]
            if dst == v:
                im |= 1 << ib
            else:
                om |= 1 << ob
        return im, om

    def degree_ok(self, gmask: int) -> bool:
        return all(gmask & self.in_arcmask[v] and gmask & self.out_arcmask[v]
                   for v in self.order)

    def piecewise_ok(self, gmask: int) -> bool:
        # degree screen assumed done; every arc must be intra-SCC
        n = len(self.order)
        fwd: list[list[int]] = [[] for _ in range(n)]
        rev: list[list[int]] = [[] for _ in range(n)]
        present = []
        m = gmask
        while m:
            low = m & -m
            m ^= low
            _s, _t, _ob, _ib, si, di = self.arc_info[low.bit_length() - 1]
            fwd[si].append(di)
            rev[di].append(si)
            present.append((si, di))
        comp = _scc_ids(n, fwd, rev)
        return all(comp[s] == comp[t] for s, t in present)

    def c2_ok(self, gmask: int) -> bool:
        outcomes = self.local_outcomes(gmask)
        for v in self.order:
            fin, fout = self.full[v]
            gin, gout = outcomes.get(v, (0, 0))
            if not self.posets[v].leq_masks(fin, fout, gin, gout):
                return False
        return True


def _scc_ids(n: int, fwd: list[list[int]], rev: list[list[int]]) -> list[int]:
    seen = [False] * n
    order: list[int] = []
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [(root, 0)]
        while stack:
            v, i = stack[-1]
            if i < len(fwd[v]):
                stack[-1] = (v, i + 1)
                w = fwd[v][i]
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, 0))
            else:
                order.append(v)
                stack.pop()
    comp = [-1] * n
    cid = 0
    for root in reversed(order):
        if comp[root] >= 0:
            continue
        comp[root] = cid
        stack = [root]
        while stack:
            v = stack.pop()
            for w in rev[v]:
                if comp[w] < 0:
                    comp[w] = cid
                    stack.append(w)
        cid += 1
    return comp


class _Deadline:
    def __init__(self, budget: Optional[float]):
        self.t0 = time.perf_counter()
        self.deadline = None if budget is None else self.t0 + budget

    def check(self):
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise TimeBudgetExceeded

    def elapsed(self) -> float:
        return time.perf_counter() - self.t0


def _dominance_ok(eng: _Engine, hmask: int, dg_outcomes,
                  extra_isolated=()) -> tuple[bool, bool]:
    """(dominates, strictly) for the arc set ``hmask`` plus isolated vertices."""
    outcomes = eng.local_outcomes(hmask)
    for v in extra_isolated:
        outcomes.setdefault(v, (0, 0))
    if not outcomes:
        return False, False
    strict = False
    for v, (hin, hout) in outcomes.items():
        gin, gout = dg_outcomes.get(v, (0, 0))
        if not eng.posets[v].leq_masks(gin, gout, hin, hout):
            return False, False
        if (hin, hout) != (gin, gout):
            strict = True
    return True, strict


# --- strict-dominator searches ------------------------------------------------

def _guided_dominator(eng: _Engine, gmask: int, frozen_out_mask: int,
                      h_frozen_mask: int, deadline: Optional[_Deadline],
                      stats: dict) -> Optional[int]:
    """Exhaustive constraint search for an H strictly dominating G.

    Per vertex, the outcomes weakly preferred to its G outcome form a union
    of monotone cubes (required in-arcs, allowed out-arcs).  The search picks
    one cube or absence per vertex, propagating arc obligations both ways; a
    consistent choice yields a whole family of dominators between the forced
    arc set and the allowed arc set, from which a strict member is extracted
    when one exists.
    """
    order = eng.order
    n = len(order)
    d = eng.d

    fo_in = {v: 0 for v in order}
    fo_out = {v: 0 for v in order}
    m = frozen_out_mask
    while m:
        low = m & -m
        m ^= low
        src, dst, ob, ib, _si, _di = eng.arc_info[low.bit_length() - 1]
        fo_in[dst] |= 1 << ib
        fo_out[src] |= 1 << ob

    dg_outcomes = eng.local_outcomes(gmask)
    dg = {v: dg_outcomes.get(v, (0, 0)) for v in order}
    bases: list[list[tuple[int, int]]] = []
    for v in order:
        cand = []
        for ni, ao in eng.posets[v].improving_bases(*dg[v]):
            if ni & fo_in[v]:
                continue
            cand.append((ni, ao & ~fo_out[v]))
        bases.append(cand)

    # per vertex: local in bit -> (source vertex index, global arc idx, src out bit)
    in_arc_info: list[dict[int, tuple[int, int, int]]] = [{} for _ in range(n)]
    for gi, (_src, _dst, ob, ib, si, di) in enumerate(eng.arc_info):
        in_arc_info[di][ib] = (si, gi, ob)

    demand_out = [0] * n
    must_present = [False] * n
    chosen: list[Optional[tuple[int, int]]] = [None] * n

    m = h_frozen_mask
    while m:
        low = m & -m
        m ^= low
        _src, _dst, ob, _ib, si, di = eng.arc_info[low.bit_length() - 1]
        demand_out[si] |= 1 << ob
        must_present[si] = True
        must_present[di] = True

    def leaf() -> Optional[int]:
        stats["h_examined"] = stats.get("h_examined", 0) + 1
        required = h_frozen_mask
        for k in range(n):
            if chosen[k] is None:
                continue
            ni = chosen[k][0]
            for bit, (_si, gi, _ob) in in_arc_info[k].items():
                if ni >> bit & 1:
                    required |= 1 << gi
        allowed = required
        for gi, (_src, _dst, ob, _ib, si, di) in enumerate(eng.arc_info):
            if frozen_out_mask >> gi & 1:
                continue
            cs, cd = chosen[si], chosen[di]
            if cs is None or cd is None:
                continue
            if cs[1] >> ob & 1:
                allowed |= 1 << gi
        if allowed == 0:
            return None
        dom, strict = _dominance_ok(eng, required, dg) if required else (True, False)
        if not dom:
            return None
        if strict:
            return required
        free = allowed & ~required
        while free:
            low = free & -free
            free ^= low
            dom, strict = _dominance_ok(eng, required | low, dg)
            if dom and strict:
                return required | low
        return None

    def rec(k: int) -> Optional[int]:
        if deadline is not None:
            deadline.check()
        if k == n:
            return leaf()
        if demand_out[k] == 0 and not must_present[k]:
            chosen[k] = None
            found = rec(k + 1)
            if found is not None:
                return found
        for ni, ao in bases[k]:
            if demand_out[k] & ~ao:
                continue
            pushed: list[tuple[int, int, bool]] = []
            ok = True
            for bit, (si, _gi, ob) in in_arc_info[k].items():
                if not (ni >> bit & 1):
                    continue
                if si < k:
                    cb = chosen[si]
                    if cb is None or not (cb[1] >> ob & 1):
                        ok = False
                        break
                else:
                    obit = 1 << ob
                    if demand_out[si] & obit:
                        pushed.append((si, 0, must_present[si]))
                    else:
                        demand_out[si] |= obit
                        pushed.append((si, obit, must_present[si]))
                    must_present[si] = True
            if ok:
                chosen[k] = (ni, ao)
                found = rec(k + 1)
                if found is not None:
                    return found
                chosen[k] = None
            for si, obit, was in reversed(pushed):
                demand_out[si] &= ~obit
                must_present[si] = was
        chosen[k] = None
        return None

    return rec(0)


def _flat_dominator(eng: _Engine, gmask: int, frozen_out_mask: int,
                    h_frozen_mask: int, scope: str,
                    deadline: Optional[_Deadline], stats: dict) -> Optional[int]:
    """Plain sweep over arc subsets (ascending), optional full vertex scope."""
    free = [gi for gi in range(eng.n_arcs)
            if not (frozen_out_mask >> gi & 1) and not (h_frozen_mask >> gi & 1)]
    dg = eng.local_outcomes(gmask)
    vertices = eng.order
    for counter in range(1 << len(free)):
        if deadline is not None and counter % 4096 == 0:
            deadline.check()
        hmask = h_frozen_mask
        c = counter
        k = 0
        while c:
            if c & 1:
                hmask |= 1 << free[k]
            c >>= 1
            k += 1
        stats["h_examined"] = stats.get("h_examined", 0) + 1
        dom, strict = _dominance_ok(eng, hmask, dg)
        if dom and strict:
            return hmask
        if scope == "full":
            endpoints = set(eng.local_outcomes(hmask))
            rest = [v for v in vertices if v not in endpoints]
            for extra_counter in range(1, 1 << len(rest)):
                extra = [rest[i] for i in range(len(rest)) if extra_counter >> i & 1]
                dom, strict = _dominance_ok(eng, hmask, dg, extra)
                if dom and strict:
                    return hmask
    return None


# --- the decision procedure --------------------------------------------------

def _arcs_to_mask(eng: _Engine, arcs) -> int:
    mask = 0
    for a in arcs:
        a = Arc(*a)
        if a not in eng.d.arc_index:
            raise ModelError(f"frozen arc {a} is not in the digraph")
        mask |= 1 << eng.d.arc_index[a]
    return mask


def _candidate_masks(eng: _Engine, frozen_in_mask: int, frozen_out_mask: int,
                     lo: int, hi: int, stats: Optional[dict] = None):
    """G-candidate masks passing the degree screen and the dominance filter
    (c.2), ascending.

    Candidates are frozen_in plus every subset of the free arcs, enumerated
    as a binary counter over canonical arc positions.  Both screens are
    vectorized over mask chunks; the dominance filter tests each vertex's
    cube union exactly, so survivors only need the connectivity check and
    the dominator search.
    """
    free = [gi for gi in range(eng.n_arcs)
            if not (frozen_in_mask >> gi & 1) and not (frozen_out_mask >> gi & 1)]
    nf = len(free)
    hi = min(hi, 1 << nf)
    cubes = eng.c2_cubes_global()
    if stats is None:
        stats = {}
    if nf <= 62 and eng.n_arcs <= 62:
        chunk = 1 << 20
        for start in range(lo, hi, chunk):
            stop = min(start + chunk, hi)
            arr = np.arange(start, stop, dtype=np.int64)
            masks = np.full(arr.shape, frozen_in_mask, dtype=np.int64)
            for k, pos in enumerate(free):
                masks |= ((arr >> k) & 1) << pos
            alive = np.ones(arr.shape, dtype=bool)
            for v in eng.order:
                alive &= (masks & eng.in_arcmask[v]) != 0
                alive &= (masks & eng.out_arcmask[v]) != 0
            stats["g_candidates"] = stats.get("g_candidates", 0) + int(alive.sum())
            for vcubes in cubes:
                ok = np.zeros(arr.shape, dtype=bool)
                for need, forbid in vcubes:
                    ok |= ((masks & need) == need) & ((masks & forbid) == 0)
                alive &= ok
                if not alive.any():
                    break
            stats["g_c2_passed"] = stats.get("g_c2_passed", 0) + int(alive.sum())
            for m in masks[alive]:
                yield int(m)
    else:
        for counter in range(lo, hi):
            gmask = frozen_in_mask
            c = counter
            k = 0
            while c:
                if c & 1:
                    gmask |= 1 << free[k]
                c >>= 1
                k += 1
            if not eng.degree_ok(gmask):
                continue
            stats["g_candidates"] = stats.get("g_candidates", 0) + 1
            ok = all(any((gmask & need) == need and not (gmask & forbid)
                         for need, forbid in vcubes) for vcubes in cubes)
            if not ok:
                continue
            stats["g_c2_passed"] = stats.get("g_c2_passed", 0) + 1
            yield gmask


def find_strict_dominator(system: SwapSystem, g: Subgraph,
                          cfg: SearchConfig = SearchConfig()) -> Optional[Subgraph]:
    """Search for a subgraph strictly dominating the spanning subgraph g."""
    if not g.is_spanning():
        raise ModelError("dominator search needs a spanning subgraph")
    eng = _Engine(system)
    frozen_out_mask = _arcs_to_mask(eng, cfg.frozen_out)
    h_frozen_mask = _arcs_to_mask(eng, cfg.h_frozen_in)
    deadline = _Deadline(cfg.time_budget)
    stats: dict = {}
    gmask = g.arc_mask
    if cfg.h_search == "flat":
        hmask = _flat_dominator(eng, gmask, frozen_out_mask, h_frozen_mask,
                                cfg.h_scope, deadline, stats)
    else:
        hmask = _guided_dominator(eng, gmask, frozen_out_mask, h_frozen_mask,
                                  deadline, stats)
    if hmask is None:
        return None
    h = subgraph_from_mask(system.digraph, hmask)
    assert strictly_dominates(system, h, g), "dominator search returned a non-dominator"
    return h


def decide_atomic(system: SwapSystem, cfg: SearchConfig = SearchConfig()) -> AtomicityVerdict:
    """Decide whether the system admits an atomic protocol (the Theorem-4 search).

    Returns a yes verdict with the first witness in enumeration order, a no
    verdict after exhausting candidates, or an inconclusive verdict when the
    time budget runs out.
    """
    problems = validate_system(system)
    if problems:
        raise ModelError("; ".join(problems))
    if cfg.frozen_in & cfg.frozen_out:
        raise ModelError("frozen_in and frozen_out overlap")
    if cfg.literal_first_g and cfg.jobs != 1:
        raise ModelError("literal_first_g is single-job only")
    if cfg.jobs > 1:
        return _decide_parallel(system, cfg)
    return _decide_range(system, cfg, 0, None)


def _decide_range(system: SwapSystem, cfg: SearchConfig, lo: int,
                  hi: Optional[int]) -> AtomicityVerdict:
    eng = _Engine(system)
    frozen_in_mask = _arcs_to_mask(eng, cfg.frozen_in)
    frozen_out_mask = _arcs_to_mask(eng, cfg.frozen_out)
    h_frozen_mask = _arcs_to_mask(eng, cfg.h_frozen_in)
    deadline = _Deadline(cfg.time_budget)
    stats = {"g_candidates": 0, "g_c1_passed": 0, "g_c2_passed": 0,
             "h_examined": 0, "witnesses": 0}

    nf = len([gi for gi in range(eng.n_arcs)
              if not (frozen_in_mask >> gi & 1) and not (frozen_out_mask >> gi & 1)])
    hi = (1 << nf) if hi is None else min(hi, 1 << nf)
    stats["g_space"] = hi - lo

    witness_mask = None
    try:
        for gmask in _candidate_masks(eng, frozen_in_mask, frozen_out_mask,
                                      lo, hi, stats):
            deadline.check()
            if not eng.piecewise_ok(gmask):
                continue
            stats["g_c1_passed"] += 1
            assert eng.c2_ok(gmask)
            if cfg.h_search == "flat":
                hmask = _flat_dominator(eng, gmask, frozen_out_mask, h_frozen_mask,
                                        cfg.h_scope, deadline, stats)
            else:
                hmask = _guided_dominator(eng, gmask, frozen_out_mask, h_frozen_mask,
                                          deadline, stats)
            if hmask is not None:
                if cfg.literal_first_g:
                    stats["elapsed"] = deadline.elapsed()
                    return AtomicityVerdict("no", stats=stats)
                continue
            stats["witnesses"] += 1
            if witness_mask is None:
                witness_mask = gmask
            if cfg.mode == "early" or cfg.literal_first_g:
                break
    except TimeBudgetExceeded:
        stats["elapsed"] = deadline.elapsed()
        return AtomicityVerdict("inconclusive", stats=stats)

    stats["elapsed"] = deadline.elapsed()
    if witness_mask is None:
        return AtomicityVerdict("no", stats=stats)
    witness = subgraph_from_mask(system.digraph, witness_mask, spanning=True)
    return AtomicityVerdict("yes", witness=witness,
                            scc=strongly_connected_components(witness), stats=stats)


def _decide_parallel(system: SwapSystem, cfg: SearchConfig) -> AtomicityVerdict:
    """Partition the G-candidate range across processes; the minimum-index
    successful candidate wins, keeping the reported witness deterministic."""
    import concurrent.futures as cf

    from .model import serialize_swap_system

    eng = _Engine(system)
    frozen_in_mask = _arcs_to_mask(eng, cfg.frozen_in)
    frozen_out_mask = _arcs_to_mask(eng, cfg.frozen_out)
    nf = len([gi for gi in range(eng.n_arcs)
              if not (frozen_in_mask >> gi & 1) and not (frozen_out_mask >> gi & 1)])
    total = 1 << nf
    jobs = max(1, cfg.jobs)
    step = (total + jobs - 1) // jobs
    payload = serialize_swap_system(system)
    cfg_args = (sorted(tuple(a) for a in cfg.frozen_in),
                sorted(tuple(a) for a in cfg.frozen_out),
                sorted(tuple(a) for a in cfg.h_frozen_in),
                cfg.h_search, cfg.h_scope, cfg.mode, cfg.time_budget)
    merged = {"g_candidates": 0, "g_c1_passed": 0, "g_c2_passed": 0,
              "h_examined": 0, "witnesses": 0, "g_space": total}
    best: Optional[tuple[int, tuple]] = None
    inconclusive = False
    with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_decide_worker, payload, cfg_args, lo, min(lo + step, total))
                   for lo in range(0, total, step)]
        for fut in futures:
            decision, wmask, stats = fut.result()
            for k in merged:
                if k in stats and k != "g_space":
                    merged[k] += stats[k]
            if decision == "inconclusive":
                inconclusive = True
            if wmask is not None and (best is None or wmask < best[0]):
                best = (wmask, ())
    if best is not None:
        witness = subgraph_from_mask(system.digraph, best[0], spanning=True)
        return AtomicityVerdict("yes", witness=witness,
                                scc=strongly_connected_components(witness), stats=merged)
    if inconclusive:
        return AtomicityVerdict("inconclusive", stats=merged)
    return AtomicityVerdict("no", stats=merged)


def _decide_worker(payload: str, cfg_args, lo: int, hi: int):
    from .model import parse_swap_system

    system = parse_swap_system(payload)
    frozen_in, frozen_out, h_frozen, h_search, h_scope, mode, budget = cfg_args
    cfg = SearchConfig(frozen_in=frozenset(Arc(*a) for a in frozen_in),
                       frozen_out=frozenset(Arc(*a) for a in frozen_out),
                       h_frozen_in=frozenset(Arc(*a) for a in h_frozen),
                       h_search=h_search, h_scope=h_scope, mode=mode,
                       time_budget=budget)
    verdict = _decide_range(system, cfg, lo, hi)
    wmask = verdict.witness.arc_mask if verdict.witness is not None else None
    return verdict.decision, wmask, verdict.stats


def verify_witness(system: SwapSystem, g: Subgraph, h_scope: str = "arcs",
                   h_frozen_in: frozenset[Arc] = frozenset()) -> bool:
    """Re-check (c.1)-(c.3) for g independently of the decision path.

    The dominator check is a flat sweep over arc subsets (optionally over
    vertex supersets too), not the guided search used by decide_atomic.
    """
    if not g.is_spanning():
        return False
    if not is_piecewise_strongly_connected(g):
        return False
    if not dominates(system, g, full_subgraph(system.digraph)):
        return False
    eng = _Engine(system)
    stats: dict = {}
    hmask = _flat_dominator(eng, g.arc_mask, 0, _arcs_to_mask(eng, h_frozen_in),
                            h_scope, None, stats)
    return hmask is None


def decide_atomic_naive(system: SwapSystem, h_scope: str = "arcs") -> AtomicityVerdict:
    """Unpruned double enumeration over Subgraph objects; the small-scale oracle.

    Every spanning arc subset is tested with the public predicates and every
    arc subset is tested as a dominator, with no short-circuiting except the
    final verdict.  Exponential twice over; callers keep |A| small.
    """
    problems = validate_system(system)
    if problems:
        raise ModelError("; ".join(problems))
    d = system.digraph
    n = len(d.arcs)
    full = full_subgraph(d)
    stats = {"g_candidates": 1 << n, "h_examined": 0, "witnesses": 0}
    witness = None
    for gmask in range(1 << n):
        g = subgraph_from_mask(d, gmask, spanning=True)
        if not is_piecewise_strongly_connected(g):
            continue
        if not dominates(system, g, full):
            continue
        dominated = False
        for hmask in range(1 << n):
            stats["h_examined"] += 1
            h = subgraph_from_mask(d, hmask)
            if h.arc_set and strictly_dominates(system, h, g):
                dominated = True
                break
            if h_scope == "full":
                rest = sorted(set(d.vertices) - h.vertex_set)
                for extra_counter in range(1, 1 << len(rest)):
                    extra = {rest[i] for i in range(len(rest)) if extra_counter >> i & 1}
                    h2 = Subgraph(d, h.vertex_set | extra, h.arc_set)
                    if h2.vertex_set and strictly_dominates(system, h2, g):
                        dominated = True
                        break
                if dominated:
                    break
        if not dominated:
            stats["witnesses"] += 1
            if witness is None:
                witness = g
    if witness is None:
        return AtomicityVerdict("no", stats=stats)
    return AtomicityVerdict("yes", witness=witness,
                            scc=strongly_connected_components(witness), stats=stats)
