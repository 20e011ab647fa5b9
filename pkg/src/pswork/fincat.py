"""Finite categories: explicit composition tables, finite presentations, Yoneda.

Composition is stored diagrammatically: ``comp[(f, g)]`` is "f then g" and is
defined exactly when ``tgt(f) == src(g)``.  Categories built from a
presentation enumerate composable generator paths up to a length bound and
quotient them by the congruence the relations generate; the construction
fails loudly (BoundExceeded) when the bound is too small to prove closure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from . import finset
from .errors import BoundExceeded, IllFormedRelation, UnknownObject
from .finset import ElemId, FinFun, FinSet


@dataclass(frozen=True)
class FinCat:
    objects: FinSet
    morphisms: FinSet
    src: FinFun
    tgt: FinFun
    ident: FinFun  # objects -> morphisms
    comp: Mapping[tuple[ElemId, ElemId], ElemId]

    def identity_of(self, obj: ElemId) -> ElemId:
        if obj not in self.objects:
            raise UnknownObject(f"object {obj} not in category")
        return self.ident(obj)

    def is_identity(self, m: ElemId) -> bool:
        return self.ident(self.src(m)) == m

    def then(self, f: ElemId, g: ElemId) -> ElemId:
        """Composite "f then g" from the table."""
        return self.comp[(f, g)]

    def hom(self, a: ElemId, b: ElemId) -> FinSet:
        if a not in self.objects or b not in self.objects:
            raise UnknownObject("hom: unknown object")
        return FinSet.of(m for m in self.morphisms if self.src(m) == a and self.tgt(m) == b)

    def non_identity_morphisms(self) -> list[ElemId]:
        return [m for m in self.morphisms if not self.is_identity(m)]


def hom_set(c: FinCat, a: ElemId, b: ElemId) -> FinSet:
    return c.hom(a, b)


def validate_category(c: FinCat) -> list[str]:
    """Exhaustively check the category axioms; empty list means valid."""
    out: list[str] = []
    if c.src.dom != c.morphisms or c.src.cod != c.objects:
        out.append("src: wrong boundary")
    if c.tgt.dom != c.morphisms or c.tgt.cod != c.objects:
        out.append("tgt: wrong boundary")
    if c.ident.dom != c.objects or c.ident.cod != c.morphisms:
        out.append("ident: wrong boundary")
    if out:
        return out
    for o in c.objects:
        i = c.ident(o)
        if c.src(i) != o or c.tgt(i) != o:
            out.append(f"identity {i} of object {o} has wrong boundary")
    pairs = {(f, g) for f in c.morphisms for g in c.morphisms if c.tgt(f) == c.src(g)}
    if set(c.comp.keys()) != pairs:
        missing = pairs - set(c.comp.keys())
        extra = set(c.comp.keys()) - pairs
        for f, g in sorted(missing):
            out.append(f"comp missing for composable pair ({f}, {g})")
        for f, g in sorted(extra):
            out.append(f"comp defined for non-composable pair ({f}, {g})")
        return out
    for (f, g), h in c.comp.items():
        if h not in c.morphisms:
            out.append(f"comp({f},{g}) = {h} is not a morphism")
        elif c.src(h) != c.src(f) or c.tgt(h) != c.tgt(g):
            out.append(f"comp({f},{g}) = {h} has wrong boundary")
    for m in c.morphisms:
        if c.comp[(c.ident(c.src(m)), m)] != m:
            out.append(f"left unit fails at morphism {m}")
        if c.comp[(m, c.ident(c.tgt(m)))] != m:
            out.append(f"right unit fails at morphism {m}")
    for f in c.morphisms:
        for g in c.morphisms:
            if c.tgt(f) != c.src(g):
                continue
            fg = c.comp[(f, g)]
            for h in c.morphisms:
                if c.tgt(g) != c.src(h):
                    continue
                gh = c.comp[(g, h)]
                lhs = c.comp.get((fg, h))
                rhs = c.comp.get((f, gh))
                if lhs is None or rhs is None:
                    out.append(f"composition table inconsistent around ({f}, {g}, {h})")
                elif lhs != rhs:
                    out.append(f"associativity fails at ({f}, {g}, {h})")
    return out


# -- presentations ----------------------------------------------------------

# A path is a tuple of arrow names, applied left to right ("f then g" is
# ("f", "g")).  An identity path is () and is anchored at an object name.


@dataclass(frozen=True)
class PathSpec:
    arrows: tuple[str, ...]
    at: str | None = None  # anchor object, required when arrows is empty

    def __post_init__(self):
        if not self.arrows and self.at is None:
            raise IllFormedRelation("identity path needs an anchor object")


@dataclass(frozen=True)
class ArrowSpec:
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class CatPresentation:
    objects: tuple[str, ...]
    arrows: tuple[ArrowSpec, ...]
    relations: tuple[tuple[PathSpec, PathSpec], ...] = ()


@dataclass(frozen=True)
class PresentedCategory:
    """A finite category together with its presentation bookkeeping."""

    cat: FinCat
    presentation: CatPresentation
    object_ids: Mapping[str, ElemId]
    arrow_ids: Mapping[str, ElemId]  # generator arrows only
    rep_paths: Mapping[ElemId, tuple[str, ...]]  # shortlex representative per morphism
    morphism_names: Mapping[ElemId, str]

    def object_name(self, obj: ElemId) -> str:
        for name, oid in self.object_ids.items():
            if oid == obj:
                return name
        raise UnknownObject(str(obj))


def _path_boundary(p: CatPresentation, spec: PathSpec) -> tuple[str, str]:
    arrows = {a.name: a for a in p.arrows}
    if not spec.arrows:
        if spec.at not in p.objects:
            raise IllFormedRelation(f"unknown anchor object {spec.at!r}")
        return spec.at, spec.at
    cur = None
    start = None
    for name in spec.arrows:
        if name not in arrows:
            raise IllFormedRelation(f"unknown arrow {name!r}")
        a = arrows[name]
        if cur is None:
            start = a.src
        elif a.src != cur:
            raise IllFormedRelation(f"path {spec.arrows} is not composable at {name!r}")
        cur = a.tgt
    return start, cur


def _enumerate_paths(p: CatPresentation, max_len: int) -> list[tuple[str, tuple[str, ...]]]:
    """All composable paths as (start_object, arrow names), shortlex order."""
    arrows = list(p.arrows)
    arrow_index = {a.name: i for i, a in enumerate(arrows)}
    by_src: dict[str, list[ArrowSpec]] = {o: [] for o in p.objects}
    for a in arrows:
        by_src[a.src].append(a)
    out: list[tuple[str, tuple[str, ...]]] = [(o, ()) for o in p.objects]
    frontier: list[tuple[str, str, tuple[str, ...]]] = [(o, o, ()) for o in p.objects]
    for _ in range(max_len):
        nxt = []
        for start, end, names in frontier:
            for a in by_src[end]:
                nxt.append((start, a.tgt, names + (a.name,)))
        frontier = nxt
        out.extend((start, names) for start, _, names in frontier)
    out.sort(key=lambda sp: (len(sp[1]), tuple(arrow_index[n] for n in sp[1]), p.objects.index(sp[0])))
    return out


def build_presented(p: CatPresentation, max_path_len: int = 3) -> PresentedCategory:
    """Build a finite category from a presentation by bounded path enumeration.

    Paths of length <= max_path_len are closed under the congruence generated
    by the relations (single rewrite steps that stay within the bound), and
    composition concatenates class representatives.  If a concatenation of
    representatives leaves the enumerated range, the quotient is not proven
    closed and BoundExceeded is raised.
    """
    if max_path_len < 1:
        raise BoundExceeded("max_path_len must be >= 1")
    if len(set(p.objects)) != len(p.objects):
        raise IllFormedRelation("duplicate object names")
    if len({a.name for a in p.arrows}) != len(p.arrows):
        raise IllFormedRelation("duplicate arrow names")
    for a in p.arrows:
        if a.src not in p.objects or a.tgt not in p.objects:
            raise IllFormedRelation(f"arrow {a.name!r} has unknown endpoints")
    rels: list[tuple[tuple[str, ...], tuple[str, ...], str, str]] = []
    for lhs, rhs in p.relations:
        b1 = _path_boundary(p, lhs)
        b2 = _path_boundary(p, rhs)
        if b1 != b2:
            raise IllFormedRelation(f"relation sides are not parallel: {lhs} vs {rhs}")
        rels.append((lhs.arrows, rhs.arrows, b1[0], b1[1]))

    arrows = {a.name: a for a in p.arrows}
    # enumerate to twice the bound so that any concatenation of two in-bound
    # representatives is enumerated, and reductions through intermediates of
    # length up to 2*max_path_len are seen by the congruence closure
    work_len = 2 * max_path_len
    paths = _enumerate_paths(p, work_len)
    key_of = {sp: i for i, sp in enumerate(paths)}

    def boundary(sp: tuple[str, tuple[str, ...]]) -> tuple[str, str]:
        start, names = sp
        if not names:
            return start, start
        return start, arrows[names[-1]].tgt

    parent = list(range(len(paths)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    # close under single relation rewrites that stay within the bound
    changed = True
    while changed:
        changed = False
        for idx, (start, names) in enumerate(paths):
            for lhs, rhs, lsrc, _ in rels:
                for a, b in ((lhs, rhs), (rhs, lhs)):
                    la = len(a)
                    positions = range(len(names) - la + 1) if la else range(len(names) + 1)
                    for pos in positions:
                        if names[pos : pos + la] != a:
                            continue
                        here = start if pos == 0 else arrows[names[pos - 1]].tgt
                        if here != lsrc:
                            continue
                        new_names = names[:pos] + b + names[pos + la :]
                        if len(new_names) > work_len:
                            continue
                        j = key_of[(start, new_names)]
                        if find(idx) != find(j):
                            union(idx, j)
                            changed = True

    class_members: dict[int, list[int]] = {}
    for i in range(len(paths)):
        class_members.setdefault(find(i), []).append(i)
    # morphisms are the classes reachable within max_path_len; classes whose
    # shortest member is longer can only be hit as composites, which the comp
    # construction reports as BoundExceeded below
    roots = sorted(
        (r for r in class_members if len(paths[min(class_members[r])][1]) <= max_path_len),
        key=lambda r: min(class_members[r]),
    )

    object_ids = {name: finset.fresh() for name in p.objects}
    class_morph: dict[int, ElemId] = {}
    rep_paths: dict[ElemId, tuple[str, ...]] = {}
    rep_start: dict[ElemId, str] = {}
    for r in roots:
        rep = paths[min(class_members[r])]
        mid = finset.fresh()
        class_morph[r] = mid
        rep_start[mid] = rep[0]
        rep_paths[mid] = rep[1]

    objects = FinSet.of(object_ids.values())
    morphisms = FinSet.of(class_morph.values())

    def class_of(sp: tuple[str, tuple[str, ...]]) -> ElemId:
        root = find(key_of[sp])
        if root not in class_morph:
            raise BoundExceeded(
                f"path {sp[1]} does not reduce within the bound {max_path_len}; "
                "raise max_path_len"
            )
        return class_morph[root]

    src_map: dict[ElemId, ElemId] = {}
    tgt_map: dict[ElemId, ElemId] = {}
    for mid in morphisms:
        start = rep_start[mid]
        b = boundary((start, rep_paths[mid]))
        src_map[mid] = object_ids[b[0]]
        tgt_map[mid] = object_ids[b[1]]
    ident_map = {object_ids[o]: class_of((o, ())) for o in p.objects}

    comp: dict[tuple[ElemId, ElemId], ElemId] = {}
    for f in morphisms:
        for g in morphisms:
            if tgt_map[f] != src_map[g]:
                continue
            # the concatenation starts where f's representative starts; it has
            # length <= 2*max_path_len so it is always enumerated
            concat = rep_paths[f] + rep_paths[g]
            comp[(f, g)] = class_of((rep_start[f], concat))

    cat = FinCat(
        objects=objects,
        morphisms=morphisms,
        src=FinFun(morphisms, objects, src_map),
        tgt=FinFun(morphisms, objects, tgt_map),
        ident=FinFun(objects, morphisms, ident_map),
        comp=comp,
    )
    violations = validate_category(cat)
    if violations:
        raise BoundExceeded(
            "presentation did not close into a category within the bound: "
            + "; ".join(violations[:5])
        )
    # presentation soundness: both sides of each relation name the same morphism
    for lhs, rhs, s, _ in rels:
        if class_of((s, lhs)) != class_of((s, rhs)):
            raise BoundExceeded("relation sides ended in different classes; raise max_path_len")

    names: dict[ElemId, str] = {}
    for mid in morphisms:
        names[mid] = ".".join(rep_paths[mid]) if rep_paths[mid] else f"id({rep_start[mid]})"
    arrow_ids = {}
    for a in p.arrows:
        arrow_ids[a.name] = class_of((a.src, (a.name,)))
    return PresentedCategory(
        cat=cat,
        presentation=p,
        object_ids=object_ids,
        arrow_ids=arrow_ids,
        rep_paths=rep_paths,
        morphism_names=names,
    )


def from_presentation(p: CatPresentation, max_path_len: int = 3) -> FinCat:
    return build_presented(p, max_path_len).cat


def path_action(pc: PresentedCategory, actions_by_arrow: Mapping[str, FinFun],
                sets_by_object: Mapping[ElemId, FinSet], mid: ElemId) -> FinFun:
    """Contravariant action of a presented morphism, derived from generator actions.

    For a path "f1 then f2 ... then fk" the action applies the fk action
    first: X(fk o ... o f1) = X(f1) o ... o X(fk).
    """
    cat = pc.cat
    path = pc.rep_paths[mid]
    if not path:
        return finset.identity(sets_by_object[cat.src(mid)])
    acc = actions_by_arrow[path[-1]]
    for name in reversed(path[:-1]):
        acc = finset.compose(acc, actions_by_arrow[name])
    return acc
