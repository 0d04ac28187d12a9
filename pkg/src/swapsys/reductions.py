"""Hardness-reduction generators and the brute-force formula oracles.

``cnf_to_swap`` emits, for a CNF formula, a swap system that admits an atomic
protocol iff the formula is satisfiable; ``eadnf1x_to_swap`` does the same
for exists-forall DNF formulas whose terms carry exactly one existential
literal.  Both return a :class:`GadgetMap` describing the vertex naming and
the frozen-arc hints that the gadget structure justifies; the hints shrink
the decision search but never change its verdict on these instances.

The oracles (``sat_bruteforce``, ``eadnf_bruteforce``) are deliberately
naive: every equivalence test in the suite pits the decision engine against
them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from .model import (
    Arc,
    GeneratorPair,
    ModelError,
    SwapDigraph,
    SwapSystem,
    generator_pair,
    outcome_of,
)


class FormulaError(ValueError):
    pass


# --- CNF ------------------------------------------------------------------

@dataclass(frozen=True)
class CnfFormula:
    n_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n_vars < 1:
            raise FormulaError("need at least one variable")
        for c in self.clauses:
            if not c:
                raise FormulaError("empty clause")
            seen = set()
            for lit in c:
                var = abs(lit)
                if lit == 0 or var > self.n_vars:
                    raise FormulaError(f"literal {lit} out of range")
                if var in seen:
                    raise FormulaError(
                        f"clause {c} uses variable {var} more than once")
                seen.add(var)
        if not self.clauses:
            raise FormulaError("need at least one clause")


def parse_dimacs(text: str) -> CnfFormula:
    n_vars = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError(f"line {lineno}: malformed problem line")
            n_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if n_vars is None:
        n_vars = max((abs(l) for c in clauses for l in c), default=0)
    return CnfFormula(n_vars, tuple(clauses))


def format_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.n_vars} {len(f.clauses)}"]
    for c in f.clauses:
        lines.append(" ".join(str(l) for l in c) + " 0")
    return "\n".join(lines) + "\n"


def sat_bruteforce(f: CnfFormula) -> bool:
    """Exhaustive satisfiability check; the oracle side of the CNF reduction."""
    if f.n_vars > 24:
        raise FormulaError("brute force capped at 24 variables")
    for bits in range(1 << f.n_vars):
        ok = True
        for clause in f.clauses:
            if not any((bits >> (abs(l) - 1) & 1) == (l > 0) for l in clause):
                ok = False
                break
        if ok:
            return True
    return False


def sat_dpll(f: CnfFormula) -> bool:
    """Independent unit-propagating solver; cross-checks sat_bruteforce."""
    def solve(clauses, assignment):
        while True:
            unit = next((c for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            lit = unit[0]
            clauses, conflict = _assign(clauses, lit)
            if conflict:
                return False
        if not clauses:
            return True
        lit = clauses[0][0]
        for choice in (lit, -lit):
            reduced, conflict = _assign(clauses, choice)
            if not conflict and solve(reduced, None):
                return True
        return False

    def _assign(clauses, lit):
        out = []
        for c in clauses:
            if lit in c:
                continue
            rest = tuple(l for l in c if l != -lit)
            if not rest:
                return [], True
            out.append(rest)
        return out, False

    return solve([tuple(c) for c in f.clauses], None)


# --- exists-forall DNF ------------------------------------------------------

@dataclass(frozen=True)
class EadnfFormula:
    """exists x_1..x_k forall y_1..y_l (term_1 or ... or term_m).

    Literals are signed indices: x-variables are 1..k, y-variables k+1..k+l.
    """
    k: int
    l: int
    terms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.k < 0 or self.l < 0:
            raise FormulaError("negative variable counts")
        if not self.terms:
            raise FormulaError("need at least one term")
        for t in self.terms:
            if not t:
                raise FormulaError("empty term")
            seen = set()
            for lit in t:
                var = abs(lit)
                if lit == 0 or var > self.k + self.l:
                    raise FormulaError(f"literal {lit} out of range")
                if var in seen:
                    raise FormulaError(f"term {t} repeats variable {var}")
                seen.add(var)

    def x_literals(self, term: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(l for l in term if abs(l) <= self.k)

    def y_literals(self, term: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(l for l in term if abs(l) > self.k)

    def is_1x(self) -> bool:
        return all(len(self.x_literals(t)) == 1 and len(self.y_literals(t)) >= 1
                   for t in self.terms)


def parse_eadnf(text: str) -> EadnfFormula:
    lines = [l.strip() for l in text.splitlines()
             if l.strip() and not l.strip().startswith("#")]
    if not lines:
        raise FormulaError("empty document")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "exists" or head[2] != "forall":
        raise FormulaError('first line must be "exists <k> forall <l>"')
    k, l = int(head[1]), int(head[3])
    terms = tuple(tuple(int(tok) for tok in line.split()) for line in lines[1:])
    return EadnfFormula(k, l, terms)


def format_eadnf(f: EadnfFormula) -> str:
    lines = [f"exists {f.k} forall {f.l}"]
    for t in f.terms:
        lines.append(" ".join(str(l) for l in t))
    return "\n".join(lines) + "\n"


def eadnf_bruteforce(f: EadnfFormula) -> bool:
    """True iff some x-assignment makes every y-assignment satisfy a term."""
    if f.k + f.l > 20:
        raise FormulaError("brute force capped at 20 variables")

    def term_true(term, xbits, ybits):
        for lit in term:
            var = abs(lit)
            val = (xbits >> (var - 1) & 1) if var <= f.k else (ybits >> (var - f.k - 1) & 1)
            if val != (1 if lit > 0 else 0):
                return False
        return True

    for xbits in range(1 << f.k):
        if all(any(term_true(t, xbits, ybits) for t in f.terms)
               for ybits in range(1 << f.l)):
            return True
    return False


def dnf1x_normalize(f: EadnfFormula) -> EadnfFormula:
    """Rewrite terms of up to three literals into the one-x-literal form.

    A term with two x-literals x_p & x_q & y_r becomes
    (x_p & y_r & y') or (not y' & x_q & y_r) with a fresh universal y'; a term
    with no x-literal is split on x_1.  Terms made only of x-literals are
    rejected: such formulas are satisfiable by fiat and need no gadget.
    The rewrite preserves the formula's truth value for every x-assignment.
    """
    for t in f.terms:
        if len(t) > 3:
            raise FormulaError("normalization expects terms of at most 3 literals")
        if not f.y_literals(t) and f.x_literals(t):
            raise FormulaError(
                f"term {t} has only existential literals; the formula is trivially true")
    k = f.k
    terms = [tuple(t) for t in f.terms]
    if k == 0:
        # introduce x1 and shift every y index up by one
        k = 1
        terms = [tuple(l + 1 if l > 0 else l - 1 for l in t) for t in terms]
    l = f.l
    out: list[tuple[int, ...]] = []
    queue = list(terms)
    while queue:
        t = queue.pop(0)
        xs = [lit for lit in t if abs(lit) <= k]
        ys = [lit for lit in t if abs(lit) > k]
        if len(xs) == 1:
            out.append(t)
            continue
        if len(xs) == 0:
            out.append((k,) + t)      # x_k positive
            out.append((-k,) + t)     # x_k negative
            continue
        # two x-literals: split on a fresh universal variable
        xp, xq = xs[0], xs[1]
        fresh = k + l + 1
        l += 1
        out.append((xp,) + tuple(ys) + (fresh,))
        out.append((-fresh, xq) + tuple(ys))
    result = EadnfFormula(k, l, tuple(out))
    if not result.is_1x():
        raise FormulaError("normalization failed to reach the 1x form")
    return result


# --- gadget constructions ----------------------------------------------------

@dataclass(frozen=True)
class GadgetMap:
    """Bookkeeping for a generated instance: naming plus frozen-arc hints."""
    vertex_roles: dict[str, str] = field(default_factory=dict)
    g_frozen_in: frozenset[Arc] = frozenset()
    g_frozen_out: frozenset[Arc] = frozenset()
    h_frozen_in: frozenset[Arc] = frozenset()
    notes: str = ""

    def to_json(self) -> str:
        doc = {
            "vertex_roles": dict(sorted(self.vertex_roles.items())),
            "g_frozen_in": sorted([a.src, a.dst] for a in self.g_frozen_in),
            "g_frozen_out": sorted([a.src, a.dst] for a in self.g_frozen_out),
            "h_frozen_in": sorted([a.src, a.dst] for a in self.h_frozen_in),
            "notes": self.notes,
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GadgetMap":
        doc = json.loads(text)
        return cls(doc.get("vertex_roles", {}),
                   frozenset(Arc(*a) for a in doc.get("g_frozen_in", [])),
                   frozenset(Arc(*a) for a in doc.get("g_frozen_out", [])),
                   frozenset(Arc(*a) for a in doc.get("h_frozen_in", [])),
                   doc.get("notes", ""))


def _lit_name(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"nx{-lit}"


def guard_variables(f: CnfFormula) -> tuple[int, ...]:
    """Variables for which some literal occurs in no clause.

    A never-occurring literal's vertex would have the core as its only
    out-neighbor, where the prescribed "keep only the core trades" preference
    collapses into its own monotone consequences and the poset degenerates.
    Each such variable gets one guard clause holding both of its literals; a
    tautology, so satisfiability is untouched, and the clause-gadget rules
    apply to it verbatim.
    """
    used = {lit for clause in f.clauses for lit in clause}
    return tuple(i for i in range(1, f.n_vars + 1)
                 if i not in used or -i not in used)


def cnf_to_swap(f: CnfFormula) -> tuple[SwapSystem, GadgetMap]:
    """The satisfiability gadget: per variable a chooser diamond (s_i feeds the
    two literals and a trade partner t_i), per clause a two-vertex appendix,
    arcs from literals to the clauses containing them, and a core vertex b
    joined both ways with everything, carrying the underwater-below-NoDeal
    poset.  Variables with a never-occurring literal get a guard clause (see
    guard_variables)."""
    n, m = f.n_vars, len(f.clauses)
    gadget_clauses: list[tuple[int, ...]] = list(f.clauses)
    guards = guard_variables(f)
    gadget_clauses += [(i, -i) for i in guards]
    roles: dict[str, str] = {"b": "core"}
    vertices = ["b"]
    arcs: list[tuple[str, str]] = []
    for i in range(1, n + 1):
        si, ti, xi, nxi = f"s{i}", f"t{i}", f"x{i}", f"nx{i}"
        vertices += [si, ti, xi, nxi]
        roles[si] = f"chooser for variable {i}"
        roles[ti] = f"trade partner of s{i}"
        roles[xi] = f"positive literal of variable {i}"
        roles[nxi] = f"negative literal of variable {i}"
        arcs += [(si, xi), (si, nxi), (si, ti), (ti, si)]
    for j in range(1, len(gadget_clauses) + 1):
        cj, aj = f"c{j}", f"a{j}"
        vertices += [cj, aj]
        roles[cj] = (f"clause {j}" if j <= m
                     else f"guard clause for variable {guards[j - m - 1]}")
        roles[aj] = f"appendix of clause {j}"
        arcs += [(cj, aj), (aj, cj)]
    for j, clause in enumerate(gadget_clauses, 1):
        for lit in clause:
            arcs.append((_lit_name(lit), f"c{j}"))
    b_arcs = []
    for v in vertices:
        if v != "b":
            b_arcs += [(v, "b"), ("b", v)]
    arcs += b_arcs
    d = SwapDigraph(vertices, arcs, degree_cap=None)

    gens: dict[str, tuple[GeneratorPair, ...]] = {}
    for i in range(1, n + 1):
        si, ti, xi, nxi = f"s{i}", f"t{i}", f"x{i}", f"nx{i}"
        # the published text prints the first worse side as <b,t|t,nx>; the
        # accompanying argument uses <b,t|x,nx>, which is what makes the
        # both-literals case collapse, so that is what we emit
        gens[si] = (
            generator_pair(d, si, (["b", ti], [xi, nxi]), ([ti], [ti])),
            generator_pair(d, si, ([ti], [ti]), (["b"], ["b", xi])),
            generator_pair(d, si, ([ti], [ti]), (["b"], ["b", nxi])),
        )
        gens[ti] = (
            generator_pair(d, ti, "deal", (["b"], ["b"])),
            generator_pair(d, ti, (["b", si], ["b"]), ([si], [si])),
        )
        for lv in (xi, nxi):
            gens[lv] = (generator_pair(d, lv, "deal", (["b"], ["b"])),)
    for j, clause in enumerate(gadget_clauses, 1):
        cj, aj = f"c{j}", f"a{j}"
        gens[cj] = tuple(
            generator_pair(d, cj, "deal", (["b", _lit_name(lit)], ["b"]))
            for lit in clause)
        gens[aj] = (generator_pair(d, aj, "deal", (["b"], ["b"])),)

    system = SwapSystem(d, gens, underwater_vertices=frozenset({"b"}))
    notes = "core-vertex arcs are in every candidate satisfying the dominance filter"
    if guards:
        notes += f"; guard clauses added for variables {list(guards)}"
    # dominators of non-canonical candidates may avoid the core vertex
    # entirely, so no arcs are forced into the H side
    hints = GadgetMap(
        vertex_roles=roles,
        g_frozen_in=frozenset(Arc(*a) for a in b_arcs),
        notes=notes,
    )
    return system, hints


def cnf_gadget_counts(f: CnfFormula) -> tuple[int, int]:
    """Closed-form vertex/arc counts; the independent per-rule counter."""
    n = f.n_vars
    g = len(guard_variables(f))
    m = len(f.clauses) + g
    occ = sum(len(c) for c in f.clauses) + 2 * g
    nv = 4 * n + 2 * m + 1
    na = 4 * n + 2 * m + occ + 2 * (nv - 1)
    return nv, na


def _ylit_name(lit: int, k: int) -> str:
    idx = abs(lit) - k
    return f"y{idx}" if lit > 0 else f"ny{idx}"


def eadnf_guard_literals(f: EadnfFormula) -> tuple[int, ...]:
    """Existential literals that occur in no term.

    Such a literal's kill-tracker would have the core as its only
    out-neighbor, degenerating its poset the same way unused CNF literals do.
    Each gets one guard term (literal and both y1-literals): a contradiction,
    so the formula's value is untouched, yet in the gadget the guard is
    killable by whichever y1-literal a dominator selects.
    """
    used = {lit for term in f.terms for lit in term if abs(lit) <= f.k}
    out = []
    for i in range(1, f.k + 1):
        for lit in (i, -i):
            if lit not in used:
                out.append(lit)
    return tuple(out)


def eadnf1x_to_swap(f: EadnfFormula) -> tuple[SwapSystem, GadgetMap]:
    """The two-level gadget: per existential variable a four-vertex chooser
    block fed by auxiliary vertex a, and one universal ring threading the
    y-literal pairs and the term vertices, with core vertex b joined to
    everything outside {a, a'}.  Never-occurring existential literals get a
    guard term (see eadnf_guard_literals)."""
    if not f.is_1x():
        raise FormulaError("construction needs the one-x-literal form")
    k, l = f.k, f.l
    guards = eadnf_guard_literals(f)
    gadget_terms: list[tuple[int, ...]] = list(f.terms)
    gadget_terms += [(lit, k + 1, -(k + 1)) for lit in guards]
    m = len(gadget_terms)
    roles = {"a": "auxiliary feeder", "aprime": "partner of a", "b": "core"}
    vertices = ["a", "aprime", "b"]
    arcs: list[tuple[str, str]] = [("a", "aprime"), ("aprime", "a")]
    for i in range(1, k + 1):
        xi, nxi, zi, nzi = f"x{i}", f"nx{i}", f"z{i}", f"nz{i}"
        vertices += [xi, nxi, zi, nzi]
        roles[xi] = f"positive literal of x{i}"
        roles[nxi] = f"negative literal of x{i}"
        roles[zi] = f"kill-tracker of x{i}"
        roles[nzi] = f"kill-tracker of not-x{i}"
        # a feeds only the literal vertices: a feeder arc into the trackers
        # would make their prescribed top preference collide with monotonicity
        arcs += [("a", xi), ("a", nxi),
                 (xi, nxi), (nxi, xi), (xi, zi), (nxi, nzi)]
    for j in range(0, l + 1):
        vertices.append(f"q{j}")
        roles[f"q{j}"] = f"universal ring junction {j}"
    for j in range(1, l + 1):
        yj, nyj = f"y{j}", f"ny{j}"
        vertices += [yj, nyj]
        roles[yj] = f"positive literal of y{j}"
        roles[nyj] = f"negative literal of y{j}"
        arcs += [(f"q{j-1}", yj), (f"q{j-1}", nyj), (yj, f"q{j}"), (nyj, f"q{j}")]
    for g in range(0, m + 1):
        vertices.append(f"p{g}")
        roles[f"p{g}"] = f"term ring junction {g}"
    for g in range(1, m + 1):
        vertices.append(f"tau{g}")
        roles[f"tau{g}"] = f"term {g}"
        arcs += [(f"p{g-1}", f"tau{g}"), (f"tau{g}", f"p{g}")]
    arcs += [(f"q{l}", "p0"), (f"p{m}", "q0")]

    def term_xlit(term):
        return next(lit for lit in term if abs(lit) <= k)

    def term_ylits(term):
        return tuple(lit for lit in term if abs(lit) > k)

    def zname_of(xlit):
        return f"z{abs(xlit)}" if xlit > 0 else f"nz{abs(xlit)}"

    for g, term in enumerate(gadget_terms, 1):
        for lit in term_ylits(term):
            arcs.append((_ylit_name(lit, k), f"tau{g}"))
        xlit = term_xlit(term)
        arcs += [(_lit_name(xlit), f"tau{g}"), (zname_of(xlit), f"tau{g}")]
    b_arcs = []
    for v in vertices:
        if v not in ("a", "aprime", "b"):
            b_arcs += [(v, "b"), ("b", v)]
    arcs += b_arcs
    d = SwapDigraph(vertices, arcs, degree_cap=None)

    terms_of_lit: dict[str, list[str]] = {}
    for g, term in enumerate(gadget_terms, 1):
        for lit in term:
            name = _lit_name(lit) if abs(lit) <= k else _ylit_name(lit, k)
            terms_of_lit.setdefault(name, []).append(f"tau{g}")

    gens: dict[str, tuple[GeneratorPair, ...]] = {}
    for i in range(1, k + 1):
        for xname, other, zname in ((f"x{i}", f"nx{i}", f"z{i}"),
                                    (f"nx{i}", f"x{i}", f"nz{i}")):
            tlist = terms_of_lit.get(xname, [])
            gens[xname] = (
                generator_pair(d, xname, "deal", (["b"], ["b", other] + tlist)),
                generator_pair(d, xname, "deal", (["b", other], ["b", zname])),
            )
            # the tracker's full trade <b,x|b,T> is its own Deal here, so the
            # only non-generic preference left is dropping everything but b
            gens[zname] = (
                generator_pair(d, zname, "deal", (["b"], ["b"])),
            )
    ylits = lambda j: (f"y{j}", f"ny{j}")
    for j in range(1, l + 1):
        for yname in ylits(j):
            tlist = terms_of_lit.get(yname, [])
            gens[yname] = (
                generator_pair(d, yname, "deal", (["b"], ["b"])),
                generator_pair(d, yname, (["b"], ["b"]),
                               ([f"q{j-1}"], [f"q{j}"] + tlist)),
            )
    for j in range(0, l + 1):
        qname = f"q{j}"
        pairs = [generator_pair(d, qname, "deal", (["b"], ["b"]))]
        if j == 0:
            for nxt in ylits(1):
                pairs.append(generator_pair(d, qname, (["b"], ["b"]),
                                            ([f"p{m}"], [nxt])))
        elif j == l:
            for prev in ylits(l):
                pairs.append(generator_pair(d, qname, (["b"], ["b"]),
                                            ([prev], ["p0"])))
        else:
            for prev in ylits(j):
                for nxt in ylits(j + 1):
                    pairs.append(generator_pair(d, qname, (["b"], ["b"]),
                                                ([prev], [nxt])))
        gens[qname] = tuple(pairs)
    for g in range(0, m + 1):
        pname = f"p{g}"
        pairs = [generator_pair(d, pname, "deal", (["b"], ["b"]))]
        if g == 0:
            pairs.append(generator_pair(d, pname, (["b"], ["b"]),
                                        ([f"q{l}"], ["tau1"])))
        elif g == m:
            pairs.append(generator_pair(d, pname, (["b"], ["b"]),
                                        ([f"tau{m}"], ["q0"])))
        else:
            pairs.append(generator_pair(d, pname, (["b"], ["b"]),
                                        ([f"tau{g}"], [f"tau{g+1}"])))
        gens[pname] = tuple(pairs)
    for g, term in enumerate(gadget_terms, 1):
        tname = f"tau{g}"
        xlit = term_xlit(term)
        xname = _lit_name(xlit)
        zname = zname_of(xlit)
        ynames = sorted(_ylit_name(lit, k) for lit in term_ylits(term))
        pairs = [
            generator_pair(d, tname, "deal", (["b", xname], ["b"])),
            generator_pair(d, tname, "deal", (["b", zname], ["b"])),
        ]
        for r in range(len(ynames) + 1):
            for subset in combinations(ynames, r):
                pairs.append(generator_pair(
                    d, tname, (["b", xname], ["b"]),
                    ([f"p{g-1}"] + list(subset), [f"p{g}"])))
                if subset:
                    pairs.append(generator_pair(
                        d, tname, (["b", zname], ["b"]),
                        ([f"p{g-1}"] + list(subset), [f"p{g}"])))
        gens[tname] = tuple(pairs)

    system = SwapSystem(d, gens)
    notes = "core-vertex arcs in every dominance-filter candidate; feeder arcs never chosen"
    if guards:
        notes += f"; guard terms added for unused literals {list(guards)}"
    feeder_arcs = [Arc("a", f"x{i}") for i in range(1, k + 1)]
    feeder_arcs += [Arc("a", f"nx{i}") for i in range(1, k + 1)]
    hints = GadgetMap(
        vertex_roles=roles,
        g_frozen_in=frozenset(Arc(*a) for a in b_arcs),
        g_frozen_out=frozenset(feeder_arcs),
        notes=notes,
    )
    return system, hints


def eadnf_gadget_counts(f: EadnfFormula) -> tuple[int, int]:
    """Closed-form vertex/arc counts; the independent per-rule counter."""
    k, l = f.k, f.l
    g = len(eadnf_guard_literals(f))
    m = len(f.terms) + g
    y_occ = sum(len(f.y_literals(t)) for t in f.terms) + 2 * g
    nv = 3 + 4 * k + (l + 1) + 2 * l + (m + 1) + m
    na = (2 + 2 * k + 4 * k + 4 * l + 2 * m + 2 + y_occ + 2 * m
          + 2 * (nv - 3))
    return nv, na
