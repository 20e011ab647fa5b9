"""Finite sets, finite functions, and the elementary colimits of sets.

Everything downstream (categories, presheaves, Kan extensions, the game)
is built from the operations here.  Elements are opaque integer ids drawn
from a per-workspace counter, so that re-running a construction in a fresh
workspace reproduces the exact same ids; golden tests and trace replay
rely on this.
"""

from __future__ import annotations

import itertools
import threading
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import BoundaryMismatch

ElemId = int


class Workspace:
    """Allocator of fresh element ids, deterministic per run.

    Allocation is locked so that the shared default workspace stays safe
    when the session service handles requests on worker threads; code that
    needs reproducible ids should own a fresh workspace outright.
    """

    def __init__(self, start: int = 0):
        self._next = start
        self._lock = threading.Lock()

    def fresh(self) -> ElemId:
        with self._lock:
            v = self._next
            self._next += 1
            return v

    def fresh_many(self, n: int) -> list[ElemId]:
        with self._lock:
            out = list(range(self._next, self._next + n))
            self._next += n
            return out


# the default lives in the ContextVar's default slot (not an import-time
# set()) so every thread and asyncio task sees it
_workspace: ContextVar[Workspace] = ContextVar("pswork_workspace", default=Workspace())


def current_workspace() -> Workspace:
    return _workspace.get()


def fresh() -> ElemId:
    return current_workspace().fresh()


def fresh_many(n: int) -> list[ElemId]:
    return current_workspace().fresh_many(n)


@contextmanager
def fresh_workspace() -> Iterator[Workspace]:
    """Run a block with a brand-new id counter (restored afterwards)."""
    ws = Workspace()
    token = _workspace.set(ws)
    try:
        yield ws
    finally:
        _workspace.reset(token)


@dataclass(frozen=True)
class FinSet:
    """A finite set of element ids, iterated in increasing id order."""

    elems: tuple[ElemId, ...]

    def __post_init__(self):
        if list(self.elems) != sorted(set(self.elems)):
            object.__setattr__(self, "elems", tuple(sorted(set(self.elems))))

    @staticmethod
    def of(items: Iterable[ElemId]) -> "FinSet":
        return FinSet(tuple(sorted(set(items))))

    @staticmethod
    def fresh(n: int) -> "FinSet":
        return FinSet(tuple(fresh_many(n)))

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self) -> Iterator[ElemId]:
        return iter(self.elems)

    def __contains__(self, x: object) -> bool:
        return x in self.elems

    def index(self, x: ElemId) -> int:
        return self.elems.index(x)

    def __le__(self, other: "FinSet") -> bool:
        return set(self.elems) <= set(other.elems)


EMPTY = FinSet(())


class FinFun:
    """A total function between two finite sets, stored by its graph."""

    __slots__ = ("dom", "cod", "_map", "_hash")

    def __init__(self, dom: FinSet, cod: FinSet, mapping: Mapping[ElemId, ElemId]):
        m = dict(mapping)
        if set(m.keys()) != set(dom.elems):
            raise BoundaryMismatch("graph is not total on the domain")
        for v in m.values():
            if v not in cod:
                raise BoundaryMismatch(f"image {v} not in codomain")
        self.dom = dom
        self.cod = cod
        self._map = m
        self._hash = None

    def __call__(self, x: ElemId) -> ElemId:
        return self._map[x]

    def pairs(self) -> tuple[tuple[ElemId, ElemId], ...]:
        return tuple((k, self._map[k]) for k in self.dom)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinFun):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self._map == other._map

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dom, self.cod, self.pairs()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{k}->{v}" for k, v in self.pairs())
        return f"FinFun({{{body}}})"

    def image(self) -> FinSet:
        return FinSet.of(self._map.values())


def identity(s: FinSet) -> FinFun:
    return FinFun(s, s, {x: x for x in s})


def compose(f: FinFun, g: FinFun) -> FinFun:
    """Diagrammatic composition: first ``f``, then ``g``."""
    if f.cod != g.dom:
        raise BoundaryMismatch("compose: codomain of f differs from domain of g")
    return FinFun(f.dom, g.cod, {x: g(f(x)) for x in f.dom})


def is_bijection(f: FinFun) -> bool:
    return len(f.image()) == len(f.dom) == len(f.cod)


@dataclass(frozen=True)
class Coproduct:
    total: FinSet
    injections: tuple[FinFun, ...]


def coproduct(parts: list[FinSet]) -> Coproduct:
    """Disjoint union built from fresh copies, in part order then element order."""
    injections = []
    all_ids: list[ElemId] = []
    copies: list[dict[ElemId, ElemId]] = []
    for p in parts:
        c = {x: fresh() for x in p}
        copies.append(c)
        all_ids.extend(c.values())
    total = FinSet.of(all_ids)
    for p, c in zip(parts, copies):
        injections.append(FinFun(p, total, c))
    return Coproduct(total, tuple(injections))


class _UnionFind:
    """Union-find with least-id class representatives."""

    def __init__(self, items: Iterable[ElemId]):
        self.parent = {x: x for x in items}

    def find(self, x: ElemId) -> ElemId:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: ElemId, b: ElemId) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        self.parent[hi] = lo

    def classes(self) -> dict[ElemId, ElemId]:
        return {x: self.find(x) for x in self.parent}


@dataclass(frozen=True)
class Coequalizer:
    quotient_set: FinSet
    quotient: FinFun


def coequalizer(f: FinFun, g: FinFun) -> Coequalizer:
    """Quotient of the common codomain by the smallest equivalence with f(s) ~ g(s).

    Class representatives are the least element id of each class, so the
    result is canonical without a relabelling pass.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise BoundaryMismatch("coequalizer: maps are not a parallel pair")
    uf = _UnionFind(f.cod)
    for s in f.dom:
        uf.union(f(s), g(s))
    reps = uf.classes()
    q = FinSet.of(reps.values())
    return Coequalizer(q, FinFun(f.cod, q, reps))


def mediate_coproduct(cp: Coproduct, legs: list[FinFun]) -> FinFun:
    """The copairing [legs]: total -> W for a cocone out of a coproduct."""
    if len(legs) != len(cp.injections):
        raise BoundaryMismatch("copairing: wrong number of legs")
    cod = legs[0].cod if legs else EMPTY
    mapping: dict[ElemId, ElemId] = {}
    for inj, leg in zip(cp.injections, legs):
        if leg.cod != cod:
            raise BoundaryMismatch("copairing: legs disagree on codomain")
        for x in inj.dom:
            mapping[inj(x)] = leg(x)
    return FinFun(cp.total, cod, mapping)


def all_functions(s: FinSet, t: FinSet) -> Iterator[FinFun]:
    """All |t|^|s| total functions s -> t, in lexicographic image order."""
    xs = tuple(s)
    for images in itertools.product(tuple(t), repeat=len(xs)):
        yield FinFun(s, t, dict(zip(xs, images)))
