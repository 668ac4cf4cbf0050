"""A small reduced ordered binary decision diagram package.

Nodes are integers into a shared store.  ``0`` and ``1`` are the terminals;
every other node is a triple ``(level, low, high)`` kept unique through a
hash table, so two functions are equal iff their node ids are equal.
Levels are variable positions in the (fixed) order; smaller levels are
tested first.  No complement edges, no garbage collection, no reordering.
"""
from __future__ import annotations

from typing import Iterable, Mapping

FALSE = 0
TRUE = 1
_TERMINAL_LEVEL = 1 << 30


class BDD:
    """Shared ROBDD store with memoized apply, negation and quantification."""

    def __init__(self):
        self._level = [_TERMINAL_LEVEL, _TERMINAL_LEVEL]
        self._low = [FALSE, TRUE]
        self._high = [FALSE, TRUE]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._cache: dict = {}

    def __len__(self):
        return len(self._level)

    def clear_caches(self):
        self._cache.clear()

    # -- node access --------------------------------------------------------

    def level(self, u: int) -> int:
        return self._level[u]

    def low(self, u: int) -> int:
        return self._low[u]

    def high(self, u: int) -> int:
        return self._high[u]

    def mk(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        u = self._unique.get(key)
        if u is None:
            u = len(self._level)
            self._level.append(level)
            self._low.append(low)
            self._high.append(high)
            self._unique[key] = u
        return u

    def var(self, level: int) -> int:
        return self.mk(level, FALSE, TRUE)

    def nvar(self, level: int) -> int:
        return self.mk(level, TRUE, FALSE)

    # -- boolean operations -----------------------------------------------------

    def apply_and(self, u: int, v: int) -> int:
        if u == FALSE or v == FALSE:
            return FALSE
        if u == TRUE:
            return v
        if v == TRUE or u == v:
            return u
        if u > v:
            u, v = v, u
        key = ("and", u, v)
        r = self._cache.get(key)
        if r is None:
            r = self._split(self.apply_and, u, v)
            self._cache[key] = r
        return r

    def apply_or(self, u: int, v: int) -> int:
        if u == TRUE or v == TRUE:
            return TRUE
        if u == FALSE:
            return v
        if v == FALSE or u == v:
            return u
        if u > v:
            u, v = v, u
        key = ("or", u, v)
        r = self._cache.get(key)
        if r is None:
            r = self._split(self.apply_or, u, v)
            self._cache[key] = r
        return r

    def _split(self, op, u: int, v: int) -> int:
        lu, lv = self._level[u], self._level[v]
        top = min(lu, lv)
        u0, u1 = (self._low[u], self._high[u]) if lu == top else (u, u)
        v0, v1 = (self._low[v], self._high[v]) if lv == top else (v, v)
        return self.mk(top, op(u0, v0), op(u1, v1))

    def negate(self, u: int) -> int:
        if u <= TRUE:
            return 1 - u
        key = ("not", u)
        r = self._cache.get(key)
        if r is None:
            r = self.mk(self._level[u], self.negate(self._low[u]), self.negate(self._high[u]))
            self._cache[key] = r
        return r

    def conjoin(self, nodes: Iterable[int]) -> int:
        r = TRUE
        for u in nodes:
            r = self.apply_and(r, u)
            if r == FALSE:
                break
        return r

    def disjoin(self, nodes: Iterable[int]) -> int:
        r = FALSE
        for u in nodes:
            r = self.apply_or(r, u)
            if r == TRUE:
                break
        return r

    # -- quantification and cofactors -------------------------------------------------

    def exists(self, u: int, levels: Iterable[int]) -> int:
        return self._quantify(u, frozenset(levels), self.apply_or, "exists")

    def forall(self, u: int, levels: Iterable[int]) -> int:
        return self._quantify(u, frozenset(levels), self.apply_and, "forall")

    def _quantify(self, u: int, levels: frozenset, join, tag) -> int:
        if u <= TRUE or not levels:
            return u
        key = (tag, u, levels)
        r = self._cache.get(key)
        if r is None:
            lo = self._quantify(self._low[u], levels, join, tag)
            hi = self._quantify(self._high[u], levels, join, tag)
            lvl = self._level[u]
            r = join(lo, hi) if lvl in levels else self.mk(lvl, lo, hi)
            self._cache[key] = r
        return r

    def restrict(self, u: int, assignment: Mapping[int, bool]) -> int:
        """Cofactor of ``u`` with the given levels fixed."""
        memo: dict[int, int] = {}

        def go(w: int) -> int:
            if w <= TRUE:
                return w
            r = memo.get(w)
            if r is None:
                lvl = self._level[w]
                if lvl in assignment:
                    r = go(self._high[w] if assignment[lvl] else self._low[w])
                else:
                    r = self.mk(lvl, go(self._low[w]), go(self._high[w]))
                memo[w] = r
            return r

        return go(u)

    # -- inspection ---------------------------------------------------------------------

    def evaluate(self, u: int, assignment: Mapping[int, bool]) -> bool:
        """Value of ``u`` under a total assignment of its support (missing levels read as false)."""
        while u > TRUE:
            u = self._high[u] if assignment.get(self._level[u], False) else self._low[u]
        return u == TRUE

    def pick_cube(self, u: int) -> dict[int, bool] | None:
        """A partial assignment (level -> value) satisfying ``u``; low branches preferred."""
        if u == FALSE:
            return None
        cube = {}
        while u > TRUE:
            if self._low[u] != FALSE:
                cube[self._level[u]] = False
                u = self._low[u]
            else:
                cube[self._level[u]] = True
                u = self._high[u]
        return cube

    def support(self, u: int) -> set[int]:
        seen = set()
        levels = set()
        todo = [u]
        while todo:
            w = todo.pop()
            if w <= TRUE or w in seen:
                continue
            seen.add(w)
            levels.add(self._level[w])
            todo.append(self._low[w])
            todo.append(self._high[w])
        return levels

    def node_count(self, u: int) -> int:
        """Number of decision nodes reachable from ``u``."""
        seen = set()
        todo = [u]
        while todo:
            w = todo.pop()
            if w <= TRUE or w in seen:
                continue
            seen.add(w)
            todo.append(self._low[w])
            todo.append(self._high[w])
        return len(seen)

    def check_invariants(self) -> None:
        """Assert reducedness, ordering and uniqueness of the whole store."""
        seen = {}
        for u in range(2, len(self._level)):
            lvl, lo, hi = self._level[u], self._low[u], self._high[u]
            assert lo != hi, f"node {u} is redundant"
            assert self._level[lo] > lvl and self._level[hi] > lvl, f"node {u} breaks the order"
            assert (lvl, lo, hi) not in seen, f"node {u} duplicates {seen[(lvl, lo, hi)]}"
            seen[(lvl, lo, hi)] = u
