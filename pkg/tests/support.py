"""Independent oracles shared by the test modules.

Trace semantics is computed here a second time, separately from
``formula.eval_trace``: every formula gets one bitset per trace length
``k <= max_len`` whose bit ``i`` says whether trace number ``i`` satisfies it.
Traces of length ``k`` are numbered in base ``2^|atoms|`` with the first step
as the most significant digit, so prefixing a step is a shift and "some step
followed by any tail in set S" is ``S`` replicated into every block.
"""
from __future__ import annotations

import itertools
import random

from ltlf_forward import formula as fm
from ltlf_forward.transforms import ANDP, FALSEP, TRUEP, VAR, progress


class TraceSpace:
    """All traces of length ``<= max_len`` over ``atoms``."""

    def __init__(self, atoms, max_len: int = 3):
        self.atoms = tuple(atoms)
        self.max_len = max_len
        self.base = 1 << len(self.atoms)
        self.steps = [frozenset(a for j, a in enumerate(self.atoms) if s >> j & 1) for s in range(self.base)]
        self.count = [self.base**k for k in range(max_len + 1)]
        self.full = [(1 << n) - 1 for n in self.count]
        # rep[k] * S places a length-(k-1) bitset S behind every first step
        self.rep = [0] + [sum(1 << (j * self.count[k - 1]) for j in range(self.base)) for k in range(1, max_len + 1)]
        self.masks = {}
        for a_index, a in enumerate(self.atoms):
            row = [0]
            for k in range(1, max_len + 1):
                block = self.full[k - 1]
                m = 0
                for s in range(self.base):
                    if s >> a_index & 1:
                        m |= block << (s * self.count[k - 1])
                row.append(m)
            self.masks[a] = row
        self._sem: dict = {}
        self._prog: dict = {}

    def traces(self, k: int):
        for digits in itertools.product(range(self.base), repeat=k):
            yield tuple(self.steps[d] for d in digits)

    def index(self, trace) -> int:
        i = 0
        for step in trace:
            i = i * self.base + sum(1 << self.atoms.index(a) for a in step)
        return i

    # -- direct semantics --------------------------------------------------------

    def sem(self, f: fm.Formula) -> tuple[int, ...]:
        hit = self._sem.get(f)
        if hit is not None:
            return hit
        L = self.max_len
        full, rep = self.full, self.rep
        k_ = f.kind
        if k_ == fm.TRUE:
            r = tuple(full)
        elif k_ == fm.FALSE:
            r = (0,) * (L + 1)
        elif k_ == fm.ATOM:
            r = tuple(self.masks[f.name])
        elif k_ == fm.NOT_ATOM:
            m = self.masks[f.name]
            r = (0,) + tuple(full[k] & ~m[k] for k in range(1, L + 1))
        elif k_ == fm.NOT:
            s = self.sem(f.children[0])
            r = tuple(full[k] & ~s[k] for k in range(L + 1))
        elif k_ in (fm.AND, fm.OR):
            parts = [self.sem(c) for c in f.children]
            out = []
            for k in range(L + 1):
                acc = full[k] if k_ == fm.AND else 0
                for p in parts:
                    acc = acc & p[k] if k_ == fm.AND else acc | p[k]
                out.append(acc)
            r = tuple(out)
        elif k_ in (fm.NEXT, fm.WNEXT):
            s = self.sem(f.children[0])
            strong = k_ == fm.NEXT
            out = [0 if strong else 1]
            for k in range(1, L + 1):
                if k == 1:
                    out.append(0 if strong else full[1])
                else:
                    out.append(s[k - 1] * rep[k])
            r = tuple(out)
        elif k_ in (fm.UNTIL, fm.EVENTUALLY):
            a, b = (fm.T, f.children[0]) if k_ == fm.EVENTUALLY else f.children
            sa, sb = self.sem(a), self.sem(b)
            out = [0]
            for k in range(1, L + 1):
                later = out[k - 1] * rep[k] if k >= 2 else 0
                out.append(sb[k] | (sa[k] & later))
            r = tuple(out)
        elif k_ in (fm.RELEASE, fm.ALWAYS):
            a, b = (fm.F, f.children[0]) if k_ == fm.ALWAYS else f.children
            sa, sb = self.sem(a), self.sem(b)
            out = [1]
            for k in range(1, L + 1):
                later = out[k - 1] * rep[k] if k >= 2 else full[1]
                out.append(sb[k] & (sa[k] | later))
            r = tuple(out)
        else:
            raise ValueError(k_)
        self._sem[f] = r
        return r

    def holds(self, f: fm.Formula, trace) -> bool:
        return bool(self.sem(f)[len(trace)] >> self.index(trace) & 1)

    # -- semantics through progression --------------------------------------------

    def progressed(self, f: fm.Formula, k: int | None = None) -> int:
        """Bitset of length-``k`` traces ρ with ``is_accepting(progress_trace(f, ρ))``."""
        if k is None:
            return tuple(self.progressed(f, j) for j in range(self.max_len + 1))
        key = (f, k)
        hit = self._prog.get(key)
        if hit is not None:
            return hit
        if k == 0:
            r = int(fm.is_accepting(f))
        else:
            width = self.count[k - 1]
            r = 0
            for s, step in enumerate(self.steps):
                r |= self.progressed(progress(f, step), k - 1) << (s * width)
        self._prog[key] = r
        return r


# -- propositional terms -----------------------------------------------------------

def prop_table(p, variables) -> int:
    """Truth table of a positive term as a bitset over ``2^len(variables)`` rows.

    ``variables`` lists BDD-level keys; a negated player literal reads its
    atom's column complemented, matching the literal pairing of the encoder.
    """
    n = len(variables)
    rows = 1 << n
    full = (1 << rows) - 1
    cols = {}
    for i, v in enumerate(variables):
        cols[v] = sum(1 << r for r in range(rows) if r >> i & 1)

    def go(q):
        if q.kind == TRUEP:
            return full
        if q.kind == FALSEP:
            return 0
        if q.kind == VAR:
            var = q.var
            if var.is_state:
                return cols[("state", var.formula)]
            col = cols[("atom", var.name)]
            return col if var.positive else full & ~col
        vals = [go(c) for c in q.children]
        acc = full if q.kind == ANDP else 0
        for v in vals:
            acc = acc & v if q.kind == ANDP else acc | v
        return acc

    return go(p)


def random_bool_expr(rng: random.Random, nvars: int, depth: int):
    """Nested tuples ('and'|'or'|'not', ...) or ('var', i) / ('const', b)."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.05:
            return ("const", rng.random() < 0.5)
        return ("var", rng.randrange(nvars))
    op = rng.choice(("and", "or", "not"))
    if op == "not":
        return ("not", random_bool_expr(rng, nvars, depth - 1))
    return (op, random_bool_expr(rng, nvars, depth - 1), random_bool_expr(rng, nvars, depth - 1))


def expr_table(e, nvars: int) -> int:
    rows = 1 << nvars
    full = (1 << rows) - 1
    tag = e[0]
    if tag == "const":
        return full if e[1] else 0
    if tag == "var":
        return sum(1 << r for r in range(rows) if r >> e[1] & 1)
    if tag == "not":
        return full & ~expr_table(e[1], nvars)
    a, b = expr_table(e[1], nvars), expr_table(e[2], nvars)
    return a & b if tag == "and" else a | b


def expr_bdd(bdd, e):
    tag = e[0]
    if tag == "const":
        return 1 if e[1] else 0
    if tag == "var":
        return bdd.var(e[1])
    if tag == "not":
        return bdd.negate(expr_bdd(bdd, e[1]))
    a, b = expr_bdd(bdd, e[1]), expr_bdd(bdd, e[2])
    return bdd.apply_and(a, b) if tag == "and" else bdd.apply_or(a, b)


def bdd_table(bdd, u, nvars: int) -> int:
    out = 0
    for r in range(1 << nvars):
        if bdd.evaluate(u, {i: bool(r >> i & 1) for i in range(nvars)}):
            out |= 1 << r
    return out


def full_moves(variables):
    return [dict(zip(variables, bits)) for bits in itertools.product((False, True), repeat=len(variables))]


def step_of(*moves) -> frozenset:
    return frozenset(v for m in moves for v, b in m.items() if b)


# -- expansion laws ---------------------------------------------------------------

def is_partition(cubes, variables) -> bool:
    """Cubes pairwise disjoint and jointly covering ``2^variables``."""
    for i, c in enumerate(cubes):
        if set(c) - set(variables):
            return False
        for d in cubes[i + 1:]:
            if all(c[v] == d[v] for v in set(c) & set(d)):
                return False
    return sum(2 ** (len(variables) - len(c)) for c in cubes) == 2 ** len(variables)


def expansion_violations(f, problem, policy, encoder) -> list[str]:
    """Partition and successor-equivalence failures of the arcs of ``f``."""
    from ltlf_forward.expansion import cube_matches, get_and_arcs, get_or_arcs

    bad = []
    or_arcs = list(get_or_arcs(f, problem, policy))
    if not is_partition([m for m, _ in or_arcs], problem.agent_vars):
        bad.append(f"agent moves of {f} do not partition")
    and_arcs = {}
    for ymove, phi in or_arcs:
        arcs = list(get_and_arcs(phi, problem, policy))
        if not is_partition([m for m, _ in arcs], problem.env_vars):
            bad.append(f"env moves of {phi} do not partition")
        and_arcs[id(ymove)] = arcs
    for y in full_moves(problem.agent_vars):
        [(ymove, _)] = [(m, phi) for m, phi in or_arcs if cube_matches(m, y)]
        for x in full_moves(problem.env_vars):
            [succ] = [s for m, s in and_arcs[id(ymove)] if cube_matches(m, x)]
            expected = progress(f, step_of(y, x))
            if encoder.state_key(succ) != encoder.state_key(expected):
                bad.append(f"{f} under {y} {x}: {succ} vs {expected}")
    return bad
