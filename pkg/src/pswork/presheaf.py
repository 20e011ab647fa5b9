"""Finite presheaves over a finite category.

Covers validation, natural-transformation enumeration (with per-object
pruning), finite colimits via pointwise coproduct+coequalizer, products,
tensors, and the unique-lifting orthogonality check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from . import finset
from .errors import BaseMismatch, NotACocone, UnknownObject
from .fincat import FinCat
from .finset import EMPTY, ElemId, FinFun, FinSet


@dataclass(frozen=True)
class Presheaf:
    """Object-indexed finite sets with contravariant actions.

    ``actions[f]`` for f: c -> c' is the map X(c') -> X(c).
    """

    base: FinCat
    sets: Mapping[ElemId, FinSet]
    actions: Mapping[ElemId, FinFun]

    def at(self, obj: ElemId) -> FinSet:
        try:
            return self.sets[obj]
        except KeyError:
            raise UnknownObject(f"object {obj} has no value set") from None

    def act(self, m: ElemId) -> FinFun:
        return self.actions[m]

    def total_size(self) -> int:
        return sum(len(s) for s in self.sets.values())


@dataclass(frozen=True)
class PsMorphism:
    source: Presheaf
    target: Presheaf
    components: Mapping[ElemId, FinFun]

    def at(self, obj: ElemId) -> FinFun:
        return self.components[obj]


@dataclass(frozen=True)
class PresheafModel:
    """A base category together with its orthogonality conditions."""

    base: FinCat
    conditions: tuple[PsMorphism, ...]
    condition_names: tuple[str, ...] = ()

    def name_of(self, index: int) -> str:
        if index < len(self.condition_names):
            return self.condition_names[index]
        return f"g{index}"


def same_base(*items) -> FinCat:
    base = None
    for it in items:
        b = it.base if isinstance(it, (Presheaf, PresheafModel)) else it
        if base is None:
            base = b
        elif base != b:
            raise BaseMismatch("structures live over different base categories")
    return base


def validate_presheaf(x: Presheaf) -> list[str]:
    out: list[str] = []
    cat = x.base
    for o in cat.objects:
        if o not in x.sets:
            out.append(f"missing value set at object {o}")
    for m in cat.morphisms:
        if m not in x.actions:
            out.append(f"missing action for morphism {m}")
    if out:
        return out
    for m in cat.morphisms:
        a = x.actions[m]
        if a.dom != x.sets[cat.tgt(m)] or a.cod != x.sets[cat.src(m)]:
            out.append(f"action of morphism {m} has wrong boundary")
    if out:
        return out
    for o in cat.objects:
        if x.actions[cat.ident(o)] != finset.identity(x.sets[o]):
            out.append(f"action of identity at object {o} is not the identity")
    for (f, g), h in cat.comp.items():
        # X(f then g) = X(f) o X(g), i.e. apply X(g) first
        lhs = x.actions[h]
        rhs = finset.compose(x.actions[g], x.actions[f])
        if lhs != rhs:
            out.append(f"functoriality fails on composite comp({f},{g})={h}")
    return out


def validate_morphism(m: PsMorphism) -> list[str]:
    out: list[str] = []
    if m.source.base != m.target.base:
        return ["source and target presheaves have different bases"]
    cat = m.source.base
    for o in cat.objects:
        if o not in m.components:
            out.append(f"missing component at object {o}")
    if out:
        return out
    for o in cat.objects:
        comp = m.components[o]
        if comp.dom != m.source.sets[o] or comp.cod != m.target.sets[o]:
            out.append(f"component at object {o} has wrong boundary")
    if out:
        return out
    for f in cat.non_identity_morphisms():
        c, c2 = cat.src(f), cat.tgt(f)
        # naturality: alpha_c o X(f) = Y(f) o alpha_c2  (maps X(c2) -> Y(c))
        lhs = finset.compose(m.source.actions[f], m.components[c])
        rhs = finset.compose(m.components[c2], m.target.actions[f])
        if lhs != rhs:
            out.append(f"naturality square fails at morphism {f}")
    return out


def identity_morphism(x: Presheaf) -> PsMorphism:
    return PsMorphism(x, x, {o: finset.identity(x.sets[o]) for o in x.base.objects})


def compose_morphisms(f: PsMorphism, g: PsMorphism) -> PsMorphism:
    """Diagrammatic composition: first f, then g."""
    if f.target != g.source:
        raise BaseMismatch("compose_morphisms: endpoints do not match")
    return PsMorphism(
        f.source,
        g.target,
        {o: finset.compose(f.components[o], g.components[o]) for o in f.source.base.objects},
    )


def is_iso(m: PsMorphism) -> bool:
    return all(finset.is_bijection(m.components[o]) for o in m.source.base.objects)


def empty_presheaf(base: FinCat) -> Presheaf:
    sets = {o: EMPTY for o in base.objects}
    actions = {m: FinFun(EMPTY, EMPTY, {}) for m in base.morphisms}
    return Presheaf(base, sets, actions)


def terminal_presheaf(base: FinCat) -> Presheaf:
    sets = {o: FinSet.fresh(1) for o in base.objects}
    actions = {}
    for m in base.morphisms:
        s, t = base.src(m), base.tgt(m)
        actions[m] = FinFun(sets[t], sets[s], {sets[t].elems[0]: sets[s].elems[0]})
    return Presheaf(base, sets, actions)


def yoneda(c: FinCat, obj: ElemId) -> Presheaf:
    """The representable presheaf hom(-, obj); actions precompose."""
    if obj not in c.objects:
        raise UnknownObject(f"object {obj} not in category")
    sets = {d: c.hom(d, obj) for d in c.objects}
    actions = {}
    for f in c.morphisms:
        d, d2 = c.src(f), c.tgt(f)
        actions[f] = FinFun(sets[d2], sets[d], {m: c.then(f, m) for m in sets[d2]})
    return Presheaf(c, sets, actions)


# -- natural transformation enumeration -------------------------------------


def enumerate_nat_trans(x: Presheaf, y: Presheaf) -> Iterator[PsMorphism]:
    """Yield every natural transformation x => y exactly once, deterministically.

    Components are chosen object by object in the base's object order.
    Values forced by naturality with already-assigned objects are filled in
    first; remaining elements enumerate candidates filtered per element, so
    families violating an already-checkable square are pruned early.
    """
    same_base(x, y)
    cat = x.base
    objs = list(cat.objects)
    pos = {o: i for i, o in enumerate(objs)}
    non_id = cat.non_identity_morphisms()
    # arrows f: c -> c2 grouped by the pair of levels their square involves
    by_levels: dict[tuple[int, int], list[ElemId]] = {}
    for f in non_id:
        key = (pos[cat.src(f)], pos[cat.tgt(f)])
        by_levels.setdefault(key, []).append(f)

    def extend(i: int, comps: dict[ElemId, FinFun]) -> Iterator[dict[ElemId, FinFun]]:
        if i == len(objs):
            yield dict(comps)
            return
        c = objs[i]
        xs, ys = x.sets[c], y.sets[c]
        forced: dict[ElemId, ElemId] = {}
        ok = True
        # squares where the component at c is applied after an action X(g): X(c2)->X(c)
        for (lc, lc2), fs in by_levels.items():
            if lc != i or lc2 >= i:
                continue
            # g: c -> c2 with c2 already assigned: alpha_c(X(g)(e)) = Y(g)(alpha_c2(e))
            c2 = objs[lc2]
            for g in fs:
                xg, yg = x.actions[g], y.actions[g]
                a2 = comps[c2]
                for e in x.sets[c2]:
                    k, v = xg(e), yg(a2(e))
                    if forced.setdefault(k, v) != v:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            return
        # per-element candidate filters from squares into already-assigned lower levels
        filters: list[tuple[FinFun, FinFun, FinFun]] = []
        for (lc, lc2), fs in by_levels.items():
            if lc2 != i or lc >= i:
                continue
            c1 = objs[lc]
            for g in fs:
                # g: c1 -> c with c1 assigned: alpha_c1(X(g)(e)) = Y(g)(alpha_c(e))
                filters.append((x.actions[g], y.actions[g], comps[c1]))

        def admissible(e: ElemId, v: ElemId) -> bool:
            for xg, yg, a1 in filters:
                if a1(xg(e)) != yg(v):
                    return False
            return True

        free = [e for e in xs if e not in forced]
        for k, v in forced.items():
            if not admissible(k, v):
                return
        candidates = []
        for e in free:
            cs = [v for v in ys if admissible(e, v)]
            if not cs:
                return
            candidates.append(cs)
        # also squares entirely inside level i (endomorphism-like arrows)
        inner = by_levels.get((i, i), [])
        for choice in itertools.product(*candidates):
            mapping = dict(forced)
            mapping.update(zip(free, choice))
            good = True
            for g in inner:
                xg, yg = x.actions[g], y.actions[g]
                for e in xs:
                    if mapping[xg(e)] != yg(mapping[e]):
                        good = False
                        break
                if not good:
                    break
            if not good:
                continue
            comps[c] = FinFun(xs, ys, mapping)
            yield from extend(i + 1, comps)
            del comps[c]

    for comps in extend(0, {}):
        yield PsMorphism(x, y, comps)


def count_nat_trans(x: Presheaf, y: Presheaf) -> int:
    return sum(1 for _ in enumerate_nat_trans(x, y))


# -- diagrams and colimits ---------------------------------------------------


@dataclass(frozen=True)
class Diagram:
    shape: FinCat
    nodes: Mapping[ElemId, Presheaf]
    edges: Mapping[ElemId, PsMorphism]  # per shape morphism, identities included

    def validate(self) -> list[str]:
        out = []
        for i in self.shape.objects:
            if i not in self.nodes:
                out.append(f"missing node at shape object {i}")
        for e in self.shape.morphisms:
            if e not in self.edges:
                out.append(f"missing edge at shape morphism {e}")
        if out:
            return out
        for e in self.shape.morphisms:
            m = self.edges[e]
            if m.source != self.nodes[self.shape.src(e)] or m.target != self.nodes[self.shape.tgt(e)]:
                out.append(f"edge at shape morphism {e} has wrong endpoints")
        for i in self.shape.objects:
            if self.edges[self.shape.ident(i)] != identity_morphism(self.nodes[i]):
                out.append(f"identity edge at {i} is not the identity")
        for (e1, e2), e3 in self.shape.comp.items():
            if self.shape.is_identity(e1) or self.shape.is_identity(e2):
                continue
            if compose_morphisms(self.edges[e1], self.edges[e2]) != self.edges[e3]:
                out.append(f"edges are not functorial on comp({e1},{e2})")
        return out


def make_shape(n_nodes: int, arrows: Sequence[tuple[int, int]]) -> tuple[FinCat, list[ElemId], list[ElemId]]:
    """A shape category on numbered nodes whose only composites involve identities.

    Every arrow must be "non-composable" with the others (no arrow ends where
    another starts); saturation diagrams, spans and parallel pairs all have
    this form.
    """
    starts = {a for a, _ in arrows}
    ends = {b for _, b in arrows}
    if starts & ends:
        raise ValueError("make_shape only supports shapes with no composable arrows")
    obj_ids = finset.fresh_many(n_nodes)
    arrow_ids = finset.fresh_many(len(arrows))
    id_ids = finset.fresh_many(n_nodes)
    objects = FinSet.of(obj_ids)
    morphisms = FinSet.of(arrow_ids + id_ids)
    src = {}
    tgt = {}
    for aid, (a, b) in zip(arrow_ids, arrows):
        src[aid] = obj_ids[a]
        tgt[aid] = obj_ids[b]
    for iid, o in zip(id_ids, obj_ids):
        src[iid] = o
        tgt[iid] = o
    ident = {o: i for o, i in zip(obj_ids, id_ids)}
    comp: dict[tuple[ElemId, ElemId], ElemId] = {}
    for m in morphisms:
        comp[(ident[src[m]], m)] = m
        comp[(m, ident[tgt[m]])] = m
    cat = FinCat(objects, morphisms, FinFun(morphisms, objects, src),
                 FinFun(morphisms, objects, tgt), FinFun(objects, morphisms, ident), comp)
    return cat, obj_ids, arrow_ids


@dataclass(frozen=True)
class ColimitResult:
    presheaf: Presheaf
    coprojections: Mapping[ElemId, PsMorphism]  # per shape object
    diagram: Diagram


def colimit(d: Diagram, base: FinCat | None = None) -> ColimitResult:
    """Pointwise colimit: per base object, coequalize the edge relations on the coproduct.

    The empty diagram yields the empty (initial) presheaf; the base must then
    be supplied explicitly.
    """
    if not d.nodes:
        if base is None:
            raise BaseMismatch("colimit of the empty diagram needs an explicit base")
        return ColimitResult(empty_presheaf(base), {}, d)
    base = same_base(*d.nodes.values())
    shape_objs = list(d.shape.objects)
    non_id_edges = [e for e in d.shape.morphisms if not d.shape.is_identity(e)]

    sets: dict[ElemId, FinSet] = {}
    quotients: dict[ElemId, FinFun] = {}
    injections: dict[ElemId, dict[ElemId, FinFun]] = {}
    for c in base.objects:
        parts = [d.nodes[i].sets[c] for i in shape_objs]
        cp = finset.coproduct(parts)
        inj = {i: f for i, f in zip(shape_objs, cp.injections)}
        # parallel pair out of the edge-indexed coproduct
        edge_parts = [d.nodes[d.shape.src(e)].sets[c] for e in non_id_edges]
        ecp = finset.coproduct(edge_parts)
        top: dict[ElemId, ElemId] = {}
        bot: dict[ElemId, ElemId] = {}
        for e, einj in zip(non_id_edges, ecp.injections):
            i, j = d.shape.src(e), d.shape.tgt(e)
            comp_c = d.edges[e].components[c]
            for xx in einj.dom:
                top[einj(xx)] = inj[i](xx)
                bot[einj(xx)] = inj[j](comp_c(xx))
        f_top = FinFun(ecp.total, cp.total, top)
        f_bot = FinFun(ecp.total, cp.total, bot)
        ce = finset.coequalizer(f_top, f_bot)
        sets[c] = ce.quotient_set
        quotients[c] = ce.quotient
        injections[c] = inj

    actions: dict[ElemId, FinFun] = {}
    for f in base.morphisms:
        c, c2 = base.src(f), base.tgt(f)
        mapping: dict[ElemId, ElemId] = {}
        for i in shape_objs:
            node = d.nodes[i]
            act = node.actions[f]
            for xx in node.sets[c2]:
                src_elem = quotients[c2](injections[c2][i](xx))
                tgt_elem = quotients[c](injections[c][i](act(xx)))
                prev = mapping.setdefault(src_elem, tgt_elem)
                if prev != tgt_elem:
                    raise NotACocone("diagram edges are not natural; colimit action ill-defined")
        actions[f] = FinFun(sets[c2], sets[c], mapping)

    result = Presheaf(base, sets, actions)
    coprojections = {}
    for i in shape_objs:
        comps = {c: finset.compose(injections[c][i], quotients[c]) for c in base.objects}
        coprojections[i] = PsMorphism(d.nodes[i], result, comps)
    return ColimitResult(result, coprojections, d)


def factor_cocone(col: ColimitResult, legs: Mapping[ElemId, PsMorphism]) -> PsMorphism:
    """The unique mediating morphism u with u o coprojection_i = legs_i."""
    d = col.diagram
    vals = list(legs.values())
    for l in vals[1:]:
        if l.target != vals[0].target:
            raise NotACocone("legs disagree on their target")
    w = vals[0].target
    for e in d.shape.morphisms:
        if d.shape.is_identity(e):
            continue
        i, j = d.shape.src(e), d.shape.tgt(e)
        if compose_morphisms(d.edges[e], legs[j]) != legs[i]:
            raise NotACocone(f"legs do not commute with diagram edge {e}")
    base = w.base
    comps: dict[ElemId, FinFun] = {}
    for c in base.objects:
        mapping: dict[ElemId, ElemId] = {}
        for i in d.shape.objects:
            proj = col.coprojections[i].components[c]
            leg = legs[i].components[c]
            for xx in d.nodes[i].sets[c]:
                k, v = proj(xx), leg(xx)
                if mapping.setdefault(k, v) != v:
                    raise NotACocone("legs are inconsistent on identified elements")
        comps[c] = FinFun(col.presheaf.sets[c], w.sets[c], mapping)
    return PsMorphism(col.presheaf, w, comps)


def _span_diagram(f: PsMorphism, g: PsMorphism) -> tuple[Diagram, ElemId, ElemId, ElemId]:
    if f.source != g.source:
        raise BaseMismatch("pushout: morphisms do not share a source")
    shape, objs, arrows = make_shape(3, [(0, 1), (0, 2)])
    a, xo, bo = objs
    d = Diagram(
        shape,
        {a: f.source, xo: f.target, bo: g.target},
        {
            arrows[0]: f,
            arrows[1]: g,
            shape.ident(a): identity_morphism(f.source),
            shape.ident(xo): identity_morphism(f.target),
            shape.ident(bo): identity_morphism(g.target),
        },
    )
    return d, a, xo, bo


@dataclass(frozen=True)
class PushoutResult:
    presheaf: Presheaf
    left: PsMorphism   # from f.target
    right: PsMorphism  # from g.target
    colim: ColimitResult
    apex: ElemId
    left_node: ElemId
    right_node: ElemId


def pushout(f: PsMorphism, g: PsMorphism) -> PushoutResult:
    d, a, xo, bo = _span_diagram(f, g)
    col = colimit(d)
    return PushoutResult(col.presheaf, col.coprojections[xo], col.coprojections[bo],
                         col, a, xo, bo)


@dataclass(frozen=True)
class CoequalizerPsResult:
    presheaf: Presheaf
    quotient: PsMorphism
    colim: ColimitResult
    pair_node: ElemId
    target_node: ElemId


def coequalizer_ps(h: PsMorphism, h2: PsMorphism) -> CoequalizerPsResult:
    if h.source != h2.source or h.target != h2.target:
        raise BaseMismatch("coequalizer_ps: not a parallel pair")
    shape, objs, arrows = make_shape(2, [(0, 1), (0, 1)])
    b, xo = objs
    d = Diagram(
        shape,
        {b: h.source, xo: h.target},
        {
            arrows[0]: h,
            arrows[1]: h2,
            shape.ident(b): identity_morphism(h.source),
            shape.ident(xo): identity_morphism(h.target),
        },
    )
    col = colimit(d)
    return CoequalizerPsResult(col.presheaf, col.coprojections[xo], col, b, xo)


@dataclass(frozen=True)
class CoproductPsResult:
    presheaf: Presheaf
    injections: tuple[PsMorphism, ...]


def coproduct_ps(parts: Sequence[Presheaf], base: FinCat | None = None) -> CoproductPsResult:
    if parts:
        base = same_base(*parts)
    if base is None:
        raise BaseMismatch("coproduct of no presheaves needs an explicit base")
    sets: dict[ElemId, FinSet] = {}
    injs: dict[ElemId, finset.Coproduct] = {}
    for c in base.objects:
        cp = finset.coproduct([p.sets[c] for p in parts])
        sets[c] = cp.total
        injs[c] = cp
    actions: dict[ElemId, FinFun] = {}
    for f in base.morphisms:
        c, c2 = base.src(f), base.tgt(f)
        mapping: dict[ElemId, ElemId] = {}
        for k, p in enumerate(parts):
            inj2 = injs[c2].injections[k]
            inj1 = injs[c].injections[k]
            act = p.actions[f]
            for xx in p.sets[c2]:
                mapping[inj2(xx)] = inj1(act(xx))
        actions[f] = FinFun(sets[c2], sets[c], mapping)
    result = Presheaf(base, sets, actions)
    morphs = []
    for k, p in enumerate(parts):
        comps = {c: injs[c].injections[k] for c in base.objects}
        morphs.append(PsMorphism(p, result, comps))
    return CoproductPsResult(result, tuple(morphs))


@dataclass(frozen=True)
class TensorResult:
    presheaf: Presheaf
    injections: tuple[PsMorphism, ...]


def tensor(x: Presheaf, n: int) -> TensorResult:
    """Coproduct of n fresh copies of x."""
    if n < 0:
        raise ValueError("tensor needs n >= 0")
    cp = coproduct_ps([x] * n, base=x.base)
    return TensorResult(cp.presheaf, cp.injections)


@dataclass(frozen=True)
class ProductResult:
    presheaf: Presheaf
    proj1: PsMorphism
    proj2: PsMorphism
    pair_ids: Mapping[ElemId, Mapping[tuple[ElemId, ElemId], ElemId]]

    def pairing(self, obj: ElemId, a: ElemId, b: ElemId) -> ElemId:
        return self.pair_ids[obj][(a, b)]


def product(x: Presheaf, y: Presheaf) -> ProductResult:
    """Pointwise product with componentwise actions and natural projections."""
    base = same_base(x, y)
    sets: dict[ElemId, FinSet] = {}
    pair_ids: dict[ElemId, dict[tuple[ElemId, ElemId], ElemId]] = {}
    for c in base.objects:
        ids: dict[tuple[ElemId, ElemId], ElemId] = {}
        for a in x.sets[c]:
            for b in y.sets[c]:
                ids[(a, b)] = finset.fresh()
        pair_ids[c] = ids
        sets[c] = FinSet.of(ids.values())
    actions: dict[ElemId, FinFun] = {}
    for f in base.morphisms:
        c, c2 = base.src(f), base.tgt(f)
        xa, ya = x.actions[f], y.actions[f]
        mapping = {
            pid: pair_ids[c][(xa(a), ya(b))]
            for (a, b), pid in pair_ids[c2].items()
        }
        actions[f] = FinFun(sets[c2], sets[c], mapping)
    result = Presheaf(base, sets, actions)
    p1 = {
        c: FinFun(sets[c], x.sets[c], {pid: a for (a, b), pid in pair_ids[c].items()})
        for c in base.objects
    }
    p2 = {
        c: FinFun(sets[c], y.sets[c], {pid: b for (a, b), pid in pair_ids[c].items()})
        for c in base.objects
    }
    return ProductResult(result, PsMorphism(result, x, p1), PsMorphism(result, y, p2), pair_ids)


# -- orthogonality -----------------------------------------------------------


@dataclass(frozen=True)
class OrthogonalityReport:
    orthogonal: bool
    witness: PsMorphism | None = None  # an f: A -> X with != 1 liftings
    lift_count: int | None = None

    def __bool__(self) -> bool:
        return self.orthogonal


def _precomposition_key(g: PsMorphism, h: PsMorphism) -> tuple:
    """Canonical key for h o g, identifying liftings with equal precompositions."""
    comp = compose_morphisms(g, h)
    return tuple((o, comp.components[o].pairs()) for o in sorted(g.source.base.objects))


def liftings_by_precomposition(g: PsMorphism, x: Presheaf) -> dict[tuple, list[PsMorphism]]:
    groups: dict[tuple, list[PsMorphism]] = {}
    for h in enumerate_nat_trans(g.target, x):
        groups.setdefault(_precomposition_key(g, h), []).append(h)
    return groups


def check_orthogonal(x: Presheaf, g: PsMorphism) -> OrthogonalityReport:
    """Unique lifting of every f: A -> x along g: A -> B; witness on failure."""
    same_base(x, g.source, g.target)
    groups = liftings_by_precomposition(g, x)
    for f in enumerate_nat_trans(g.source, x):
        key = tuple((o, f.components[o].pairs()) for o in sorted(g.source.base.objects))
        lifts = groups.get(key, [])
        if len(lifts) != 1:
            return OrthogonalityReport(False, witness=f, lift_count=len(lifts))
    return OrthogonalityReport(True)
