"""Discrete-round simulation of the hashed-timelock swap protocol.

One protocol session runs per strongly connected component of the chosen
subgraph.  Round 0 is contract creation; from round 1 on, parties that have
seen contracts on all their in-arcs release their own secret and propagate
any secret observed on an out-arc to their in-arcs, extending the key's path
and signature chain by themselves.  A key whose path has n vertices is
accepted while the phase-2 clock (round minus one) is at most delta*n, and
locks expire once the clock passes delta times the session size, the longest
possible simple path.  Parties act in canonical vertex order; actions submit
against the previous round's state and commit at the round's end, so a party
observes exactly the events of earlier rounds.

Cryptography is structural: secrets and hashes are real digests, signatures
are verified signer-id chains.  The simulator checks chain/path agreement
and timing exactly; it does not do public-key math.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .graphs import is_piecewise_strongly_connected, strongly_connected_components
from .model import Arc, ModelError, Outcome, Subgraph, SwapSystem, full_subgraph
from .prefs import Ordering, classify_outcome, compare, is_acceptable


def _digest(data: str) -> str:
    return hashlib.sha256(data.encode()).hexdigest()


@dataclass(frozen=True)
class Secret:
    owner: str
    value: str
    hash: str

    @classmethod
    def generate(cls, owner: str, session: int, seed: int) -> "Secret":
        value = _digest(f"secret|{seed}|{session}|{owner}")
        return cls(owner, value, _digest(value))


class Hashkey(NamedTuple):
    secret_value: str
    path: tuple[str, ...]       # recipient first, secret owner last
    sig_chain: tuple[str, ...]  # signers innermost-first: reverse of path


@dataclass
class Hashlock:
    secret_owner: str
    hash: str
    state: str = "locked"       # locked | unlocked | expired
    round: Optional[int] = None
    key: Optional[Hashkey] = None

    def unlock(self, key: Hashkey, rnd: int):
        assert self.state == "locked"
        self.state = "unlocked"
        self.round = rnd
        self.key = key

    def expire(self, rnd: int):
        assert self.state == "locked"
        self.state = "expired"
        self.round = rnd


@dataclass
class Contract:
    arc: Arc
    locks: dict[str, Hashlock]
    created_round: int
    triggered_round: Optional[int] = None

    @property
    def triggered(self) -> bool:
        return self.triggered_round is not None


class Event(NamedTuple):
    round: int
    actor: str
    kind: str   # create | release | propagate | unlock | trigger | expire | reject | side_deal
    detail: str


# --- strategies ---------------------------------------------------------------

class Create(NamedTuple):
    arc: Arc


class PostKey(NamedTuple):
    arc: Arc            # an in-arc of the acting party
    secret_owner: str


class PartyView:
    """What one party can see when choosing its actions for a round."""

    def __init__(self, sim: "_Simulator", v: str):
        self.sim = sim
        self.me = v
        self.round = sim.round
        self.delta = sim.delta
        self.session = sim.session_of.get(v)
        self.in_arcs = sim.g_in.get(v, ())
        self.out_arcs = sim.g_out.get(v, ())

    def contract(self, arc: Arc) -> Optional[Contract]:
        return self.sim.contracts.get(arc)

    def all_in_contracts_created(self) -> bool:
        return all(arc in self.sim.contracts for arc in self.in_arcs)

    def observed_out_keys(self) -> list[tuple[str, Hashkey]]:
        """(secret owner, key) pairs unlocked so far on the party's out-arcs."""
        seen = []
        for arc in self.out_arcs:
            c = self.sim.contracts.get(arc)
            if c is None:
                continue
            for owner, lock in c.locks.items():
                if lock.state == "unlocked":
                    seen.append((owner, lock.key))
        return seen

    def lock_state(self, arc: Arc, owner: str) -> Optional[str]:
        c = self.sim.contracts.get(arc)
        if c is None or owner not in c.locks:
            return None
        return c.locks[owner].state

    def own_in_locks_resolved(self) -> bool:
        for arc in self.in_arcs:
            c = self.sim.contracts.get(arc)
            if c is None:
                return False
            if any(lock.state == "locked" for lock in c.locks.values()):
                return False
        return True


class Strategy:
    name = "strategy"

    def actions(self, view: PartyView) -> list:
        raise NotImplementedError


class SilentStrategy(Strategy):
    name = "silent"

    def actions(self, view: PartyView) -> list:
        return []


class HonestStrategy(Strategy):
    """The protocol itself: create, release own secret, propagate observed ones."""
    name = "honest"

    def __init__(self, propagate_after_receipt: bool = True):
        self.propagate_after_receipt = propagate_after_receipt

    def actions(self, view: PartyView) -> list:
        acts = []
        if view.round == 0:
            return [Create(arc) for arc in view.out_arcs]
        if not view.all_in_contracts_created():
            return []
        for arc in view.in_arcs:
            if view.lock_state(arc, view.me) == "locked":
                acts.append(PostKey(arc, view.me))
        if not self.propagate_after_receipt and view.own_in_locks_resolved():
            return acts
        for owner, _key in view.observed_out_keys():
            for arc in view.in_arcs:
                if view.lock_state(arc, owner) == "locked":
                    acts.append(PostKey(arc, owner))
        return acts


class ScriptedStrategy(Strategy):
    """Fixed per-round action lists; only the party's own arcs are legal."""
    name = "scripted"

    def __init__(self, script: dict[int, Sequence]):
        self.script = {int(r): list(acts) for r, acts in script.items()}

    def actions(self, view: PartyView) -> list:
        return list(self.script.get(view.round, []))


class DelayedStrategy(Strategy):
    """Honest behavior started late; creations happen at the delayed round."""

    def __init__(self, delay: int, propagate_after_receipt: bool = True):
        self.delay = delay
        self.inner = HonestStrategy(propagate_after_receipt)
        self.name = f"delayed:{delay}"

    def actions(self, view: PartyView) -> list:
        if view.round < self.delay:
            return []
        if view.round == self.delay:
            acts = [Create(arc) for arc in view.out_arcs
                    if view.contract(arc) is None]
            if view.round > 0:
                inner = self.inner.actions(view)
                acts.extend(a for a in inner if not isinstance(a, Create))
            return acts
        return self.inner.actions(view)


class WithholdStrategy(Strategy):
    """Creates contracts but never posts any key."""
    name = "withhold"

    def actions(self, view: PartyView) -> list:
        if view.round == 0:
            return [Create(arc) for arc in view.out_arcs]
        return []


class NoPropagateStrategy(Strategy):
    """Releases its own secret but never relays anyone else's."""
    name = "nopropagate"

    def actions(self, view: PartyView) -> list:
        if view.round == 0:
            return [Create(arc) for arc in view.out_arcs]
        if not view.all_in_contracts_created():
            return []
        return [PostKey(arc, view.me) for arc in view.in_arcs
                if view.lock_state(arc, view.me) == "locked"]


class QuitStrategy(Strategy):
    """Honest until a cutoff round, then silent."""

    def __init__(self, cutoff: int):
        self.cutoff = cutoff
        self.inner = HonestStrategy()
        self.name = f"quit:{cutoff}"

    def actions(self, view: PartyView) -> list:
        if view.round >= self.cutoff:
            return []
        return self.inner.actions(view)


def make_strategy(spec: Union[str, Strategy]) -> Strategy:
    if isinstance(spec, Strategy):
        return spec
    token = spec.strip().lower()
    if token == "honest":
        return HonestStrategy()
    if token == "silent":
        return SilentStrategy()
    if token == "withhold":
        return WithholdStrategy()
    if token == "nopropagate":
        return NoPropagateStrategy()
    if token.startswith("delayed:"):
        return DelayedStrategy(int(token.split(":", 1)[1]))
    if token.startswith("quit:"):
        return QuitStrategy(int(token.split(":", 1)[1]))
    raise ModelError(f"unknown strategy {spec!r}")


# --- the simulator -------------------------------------------------------------

@dataclass
class SimReport:
    g_arcs: frozenset[Arc]
    sessions: tuple[frozenset[str], ...]
    strategies: dict[str, str]
    triggered: dict[Arc, bool]
    outcomes: dict[str, Outcome]
    classes: dict[str, frozenset[str]]
    acceptable: dict[str, bool]
    events: tuple[Event, ...]
    delta: int
    seed: int

    def honest_parties(self) -> list[str]:
        return sorted(v for v, name in self.strategies.items() if name == "honest")

    def triggered_arcs(self) -> frozenset[Arc]:
        return frozenset(a for a, t in self.triggered.items() if t)


class _Simulator:
    def __init__(self, system: SwapSystem, g: Subgraph,
                 strategies: dict[str, Strategy], delta: int, seed: int):
        self.system = system
        self.d = system.digraph
        self.g = g
        self.delta = delta
        self.seed = seed
        self.strategies = strategies
        self.round = 0
        self.events: list[Event] = []
        self.contracts: dict[Arc, Contract] = {}

        scc = strongly_connected_components(g)
        self.sessions = scc.components
        self.session_of = {v: i for i, comp in enumerate(scc.components) for v in comp}
        self.secrets: dict[tuple[int, str], Secret] = {}
        for i, comp in enumerate(self.sessions):
            for v in sorted(comp):
                self.secrets[(i, v)] = Secret.generate(v, i, seed)
        self.g_in: dict[str, tuple[Arc, ...]] = {v: () for v in g.vertex_set}
        self.g_out: dict[str, tuple[Arc, ...]] = {v: () for v in g.vertex_set}
        for a in g.sorted_arcs():
            self.g_in[a.dst] = self.g_in[a.dst] + (a,)
            self.g_out[a.src] = self.g_out[a.src] + (a,)
        # session adjacency for simple-path checks
        self.session_adj: dict[int, dict[str, set[str]]] = {}
        for a in g.arc_set:
            i = self.session_of[a.src]
            if self.session_of[a.dst] == i:
                self.session_adj.setdefault(i, {}).setdefault(a.src, set()).add(a.dst)

    def log(self, actor: str, kind: str, detail: str):
        self.events.append(Event(self.round, actor, kind, detail))

    # -- validity ---------------------------------------------------------

    def _path_exists(self, session: int, path: tuple[str, ...]) -> bool:
        if len(set(path)) != len(path):
            return False
        comp = self.sessions[session]
        if any(p not in comp for p in path):
            return False
        adj = self.session_adj.get(session, {})
        return all(path[i + 1] in adj.get(path[i], ()) for i in range(len(path) - 1))

    def _key_valid(self, arc: Arc, owner: str, key: Hashkey) -> Optional[str]:
        session = self.session_of.get(arc.dst)
        if session is None or self.session_of.get(arc.src) != session:
            return "arc outside any session"
        secret = self.secrets[(session, owner)]
        if _digest(key.secret_value) != secret.hash:
            return "hash mismatch"
        if not key.path or key.path[0] != arc.dst or key.path[-1] != owner:
            return "path endpoints wrong"
        if not self._path_exists(session, key.path):
            return "not a simple session path"
        if key.sig_chain != tuple(reversed(key.path)):
            return "signature chain does not reverse the path"
        clock = self.round - 1
        if clock > self.delta * len(key.path):
            return "key window passed"
        return None

    def _build_key(self, poster: str, arc: Arc, owner: str) -> Optional[Hashkey]:
        """The key the poster can produce for this lock: its own secret, or an
        observed key extended by one hop."""
        session = self.session_of[poster]
        if owner == poster:
            value = self.secrets[(session, poster)].value
            return Hashkey(value, (poster,), (poster,))
        best: Optional[Hashkey] = None
        for out_arc in self.g_out.get(poster, ()):
            c = self.contracts.get(out_arc)
            if c is None or owner not in c.locks:
                continue
            lock = c.locks[owner]
            if lock.state != "unlocked" or lock.key is None:
                continue
            k = lock.key
            if poster in k.path:
                continue
            cand = Hashkey(k.secret_value, (poster,) + k.path, k.sig_chain + (poster,))
            if best is None or len(cand.path) < len(best.path):
                best = cand
        return best

    # -- action commit ------------------------------------------------------

    def _commit_create(self, actor: str, arc: Arc):
        if arc.src != actor:
            self.log(actor, "reject", f"create on non-owned arc {arc}")
            return
        if arc not in self.d.arc_index:
            self.log(actor, "reject", f"create on unknown arc {arc}")
            return
        if arc in self.contracts:
            return
        session = self.session_of.get(arc.src)
        if session is None or self.session_of.get(arc.dst) != session:
            self.log(actor, "reject", f"create outside session graph {arc}")
            return
        members = sorted(self.sessions[session])
        locks = {w: Hashlock(w, self.secrets[(session, w)].hash) for w in members}
        self.contracts[arc] = Contract(arc, locks, self.round)
        self.log(actor, "create", f"contract {arc} locked by {len(locks)} hashlocks")

    def _commit_post(self, actor: str, arc: Arc, owner: str):
        if arc.dst != actor:
            self.log(actor, "reject", f"post on non-incoming arc {arc}")
            return
        c = self.contracts.get(arc)
        if c is None:
            self.log(actor, "reject", f"post on missing contract {arc}")
            return
        lock = c.locks.get(owner)
        if lock is None:
            self.log(actor, "reject", f"no hashlock of {owner} on {arc}")
            return
        if lock.state != "locked":
            return
        key = self._build_key(actor, arc, owner)
        if key is None:
            self.log(actor, "reject", f"no key material for {owner} on {arc}")
            return
        why = self._key_valid(arc, owner, key)
        if why is not None:
            self.log(actor, "reject", f"key for {owner} on {arc}: {why}")
            return
        lock.unlock(key, self.round)
        self.log(actor, "unlock", f"lock {owner} on {arc} via path {'>'.join(key.path)}")
        if all(lk.state == "unlocked" for lk in c.locks.values()):
            c.triggered_round = self.round
            self.log(arc.src, "trigger", f"contract {arc} transfers the asset")

    def run(self) -> None:
        horizon = max((self.delta * len(comp) for comp in self.sessions), default=0) + 1
        for t in range(horizon + 1):
            self.round = t
            queue: list[tuple[str, object]] = []
            for v in sorted(self.g.vertex_set):
                view = PartyView(self, v)
                for act in self.strategies[v].actions(view):
                    queue.append((v, act))
            for actor, act in queue:
                if isinstance(act, Create):
                    self._commit_create(actor, Arc(*act.arc))
                elif isinstance(act, PostKey):
                    self._commit_post(actor, Arc(*act.arc), act.secret_owner)
                else:
                    raise ModelError(f"unknown action {act!r} from {actor}")
            clock = t - 1
            for arc, c in sorted(self.contracts.items()):
                limit = self.delta * len(self.sessions[self.session_of[arc.src]])
                if clock >= limit:
                    for owner in sorted(c.locks):
                        lock = c.locks[owner]
                        if lock.state == "locked":
                            lock.expire(t)
                            self.log(arc.src, "expire",
                                     f"lock {owner} on {arc} timed out; asset returns")


def run_protocol(system: SwapSystem, g: Subgraph,
                 strategies: dict[str, Union[str, Strategy]],
                 delta: int = 1, seed: int = 0,
                 propagate_after_receipt: bool = True,
                 side_deal: Optional[Iterable[Arc]] = None) -> SimReport:
    """Run one protocol execution on the subgraph g and extract outcomes.

    ``strategies`` must cover every vertex of g.  ``side_deal`` arcs, if any,
    are triggered by mutual consent after the protocol rounds finish; both
    endpoints must belong to parties that are not following the protocol.
    """
    if not is_piecewise_strongly_connected(g):
        raise ModelError("protocol subgraph must be piece-wise strongly connected")
    missing = set(g.vertex_set) - set(strategies)
    if missing:
        raise ModelError(f"strategies missing for {sorted(missing)}")
    resolved: dict[str, Strategy] = {}
    for v in sorted(g.vertex_set):
        s = make_strategy(strategies[v])
        if isinstance(s, HonestStrategy):
            s.propagate_after_receipt = propagate_after_receipt
        resolved[v] = s
    sim = _Simulator(system, g, resolved, delta, seed)
    sim.run()

    d = system.digraph
    triggered = {a: False for a in d.arcs}
    for arc, c in sim.contracts.items():
        if c.triggered:
            triggered[arc] = True
    if side_deal:
        final = sim.round + 1
        for arc in sorted(Arc(*a) for a in side_deal):
            if arc not in d.arc_index:
                raise ModelError(f"side-deal arc {arc} not in the digraph")
            for endpoint in (arc.src, arc.dst):
                if isinstance(resolved.get(endpoint), HonestStrategy):
                    raise ModelError(f"side-deal endpoint {endpoint} follows the protocol")
            if not triggered[arc]:
                triggered[arc] = True
                sim.events.append(Event(final, arc.src, "side_deal",
                                        f"arc {arc} triggered by mutual consent"))

    outcomes: dict[str, Outcome] = {}
    for v in d.vertices:
        im = om = 0
        for a in d.arcs:
            if not triggered[a]:
                continue
            if a.dst == v:
                im |= 1 << d.in_bit_of_arc[a]
            elif a.src == v:
                om |= 1 << d.out_bit_of_arc[a]
        outcomes[v] = Outcome(v, im, om)
    classes = {v: classify_outcome(d, outcomes[v]) for v in d.vertices}
    acceptable = {v: is_acceptable(system, v, outcomes[v]) for v in d.vertices}
    names = {v: resolved[v].name for v in resolved}
    return SimReport(frozenset(g.arc_set), sim.sessions, names, triggered,
                     outcomes, classes, acceptable, tuple(sim.events), delta, seed)


# --- invariant checks over reports ---------------------------------------------

def check_triggered_prefix(report: SimReport, path: Sequence[str]) -> bool:
    """Along the path, every triggered arc must come before every non-triggered
    one (callers filter to paths whose internal vertices ended acceptable)."""
    seen_gap = False
    for u, w in zip(path, path[1:]):
        t = report.triggered.get(Arc(u, w))
        if t is None:
            raise ModelError(f"({u},{w}) is not an arc of the digraph")
        if not t:
            seen_gap = True
        elif seen_gap:
            return False
    return True


def check_outgoing_guard(report: SimReport, v: str) -> bool:
    """An out-arc of v triggered only if all of v's in-arcs inside the protocol
    subgraph triggered (the conforming-party guarantee)."""
    any_out = any(t and a.src == v for a, t in report.triggered.items())
    if not any_out:
        return True
    return all(report.triggered[a] for a in report.g_arcs if a.dst == v)


@dataclass
class CoalitionReport:
    coalition: frozenset[str]
    side_deal: frozenset[Arc]
    baseline: dict[str, Outcome]     # protocol outcome had the member conformed
    achieved: dict[str, Outcome]
    relation: dict[str, str]         # compare(baseline, achieved) per member
    joint_improvement: bool
    sim: SimReport


def coalition_deviation_demo(system: SwapSystem, coalition: Iterable[str],
                             side_deal: Iterable, g: Optional[Subgraph] = None,
                             delta: int = 1, seed: int = 0) -> CoalitionReport:
    """Run the protocol with the coalition silent toward outsiders while its
    members trigger the side-deal arcs among themselves, then compare each
    member's achieved outcome with its conforming outcome."""
    coalition = frozenset(coalition)
    deal_arcs = frozenset(Arc(*a) for a in side_deal)
    for a in deal_arcs:
        if a.src not in coalition or a.dst not in coalition:
            raise ModelError(f"side-deal arc {a} leaves the coalition")
    if g is None:
        g = full_subgraph(system.digraph)
    strategies: dict[str, Union[str, Strategy]] = {
        v: ("silent" if v in coalition else "honest") for v in sorted(g.vertex_set)}
    report = run_protocol(system, g, strategies, delta=delta, seed=seed,
                          side_deal=deal_arcs)
    from .model import deal_outcome

    baseline = {v: deal_outcome(g, v) for v in sorted(coalition) if v in g.vertex_set}
    achieved = {v: report.outcomes[v] for v in sorted(coalition)}
    relation = {v: compare(system, v, baseline[v], achieved[v])
                for v in baseline}
    joint = bool(coalition) and all(
        relation[v] in (Ordering.LESS, Ordering.EQUAL) for v in relation
    ) and any(relation[v] == Ordering.LESS for v in relation)
    return CoalitionReport(coalition, deal_arcs, baseline, achieved, relation,
                           joint, report)
