"""Kan models and left Kan extensions computed as coequalizers of coproducts.

A Kan model is a functor from a source base category into presheaves over a
target base, given by finite data.  Its extension along the Yoneda embedding
is computed on objects as the quotient of a coproduct of tensors, and on
morphisms by tracing quotient elements back to their generating slots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import finset
from .errors import BaseMismatch, UnknownObject
from .fincat import FinCat
from .finset import ElemId, FinFun, FinSet
from .presheaf import (
    Presheaf,
    PresheafModel,
    ProductResult,
    PsMorphism,
    TensorResult,
    compose_morphisms,
    coproduct_ps,
    coequalizer_ps,
    identity_morphism,
    product,
    same_base,
    tensor,
    validate_morphism,
    validate_presheaf,
    yoneda,
)


@dataclass(frozen=True)
class KanModel:
    source: FinCat
    target: FinCat
    obj_images: Mapping[ElemId, Presheaf]
    mor_images: Mapping[ElemId, PsMorphism]

    def at(self, c: ElemId) -> Presheaf:
        return self.obj_images[c]

    def map(self, f: ElemId) -> PsMorphism:
        return self.mor_images[f]


def validate_kan_model(F: KanModel) -> list[str]:
    out: list[str] = []
    for c in F.source.objects:
        if c not in F.obj_images:
            out.append(f"missing object image at {c}")
        elif F.obj_images[c].base != F.target:
            out.append(f"object image at {c} lives over the wrong base")
    for f in F.source.morphisms:
        if f not in F.mor_images:
            out.append(f"missing morphism image at {f}")
    if out:
        return out
    for c in F.source.objects:
        out.extend(f"object image at {c}: {v}" for v in validate_presheaf(F.obj_images[c]))
    for f in F.source.morphisms:
        m = F.mor_images[f]
        if m.source != F.obj_images[F.source.src(f)] or m.target != F.obj_images[F.source.tgt(f)]:
            out.append(f"morphism image at {f} has wrong endpoints")
            continue
        out.extend(f"morphism image at {f}: {v}" for v in validate_morphism(m))
    if out:
        return out
    for c in F.source.objects:
        if F.mor_images[F.source.ident(c)] != identity_morphism(F.obj_images[c]):
            out.append(f"image of identity at {c} is not the identity")
    for (f, g), h in F.source.comp.items():
        if compose_morphisms(F.mor_images[f], F.mor_images[g]) != F.mor_images[h]:
            out.append(f"functoriality fails on comp({f},{g})")
    return out


def yoneda_kan_model(c: FinCat) -> KanModel:
    """The Yoneda embedding viewed as a Kan model from c to presheaves over c."""
    obj_images = {o: yoneda(c, o) for o in c.objects}
    mor_images: dict[ElemId, PsMorphism] = {}
    for f in c.morphisms:
        d, d2 = c.src(f), c.tgt(f)
        comps = {
            e: FinFun(
                obj_images[d].sets[e],
                obj_images[d2].sets[e],
                {m: c.then(m, f) for m in obj_images[d].sets[e]},
            )
            for e in c.objects
        }
        mor_images[f] = PsMorphism(obj_images[d], obj_images[d2], comps)
    return KanModel(c, c, obj_images, mor_images)


@dataclass(frozen=True)
class LanResult:
    """The extension applied to one presheaf, with provenance bookkeeping.

    ``copy_inclusions[(c, x)]`` embeds the object image at c as the copy
    indexed by x into the result; ``provenance`` holds one generating triple
    (c, x, element-of-image) per result element.
    """

    presheaf: Presheaf
    coprojections: Mapping[ElemId, PsMorphism]
    tensors: Mapping[ElemId, TensorResult]
    copy_inclusions: Mapping[tuple[ElemId, ElemId], PsMorphism]
    provenance: Mapping[tuple[ElemId, ElemId], tuple[ElemId, ElemId, ElemId]]


def lan_apply(F: KanModel, x: Presheaf) -> LanResult:
    """Left Kan extension on objects: coequalize the two copairings into the
    coproduct of tensors F(c) (x) X(c)."""
    if x.base != F.source:
        raise BaseMismatch("lan_apply: presheaf is not over the model's source base")
    C, D = F.source, F.target
    tensors = {c: tensor(F.obj_images[c], len(x.sets[c])) for c in C.objects}
    slot = coproduct_ps([tensors[c].presheaf for c in C.objects], base=D)
    slot_inj = {c: slot.injections[i] for i, c in enumerate(C.objects)}
    total = slot.presheaf

    rel_sources: list[Presheaf] = []
    rel_top: list[PsMorphism] = []
    rel_bot: list[PsMorphism] = []
    for f in C.non_identity_morphisms():
        c, c2 = C.src(f), C.tgt(f)
        Ff = F.mor_images[f]
        rel = tensor(F.obj_images[c], len(x.sets[c2]))
        xf = x.actions[f]  # X(c2) -> X(c)
        top_comps: dict[ElemId, dict[ElemId, ElemId]] = {d: {} for d in D.objects}
        bot_comps: dict[ElemId, dict[ElemId, ElemId]] = {d: {} for d in D.objects}
        for k, x2 in enumerate(x.sets[c2]):
            inj = rel.injections[k]
            k_bot = x.sets[c].index(xf(x2))
            for d in D.objects:
                for e in F.obj_images[c].sets[d]:
                    src_elem = inj.components[d](e)
                    top_comps[d][src_elem] = slot_inj[c2].components[d](
                        tensors[c2].injections[k].components[d](Ff.components[d](e))
                    )
                    bot_comps[d][src_elem] = slot_inj[c].components[d](
                        tensors[c].injections[k_bot].components[d](e)
                    )
        rel_sources.append(rel.presheaf)
        rel_top.append(top_comps)
        rel_bot.append(bot_comps)

    big = coproduct_ps(rel_sources, base=D)
    top_map: dict[ElemId, dict[ElemId, ElemId]] = {d: {} for d in D.objects}
    bot_map: dict[ElemId, dict[ElemId, ElemId]] = {d: {} for d in D.objects}
    for inj, tc, bc in zip(big.injections, rel_top, rel_bot):
        for d in D.objects:
            for s_elem in inj.source.sets[d]:
                t_elem = inj.components[d](s_elem)
                top_map[d][t_elem] = tc[d][s_elem]
                bot_map[d][t_elem] = bc[d][s_elem]
    u = PsMorphism(big.presheaf, total,
                   {d: FinFun(big.presheaf.sets[d], total.sets[d], top_map[d]) for d in D.objects})
    v = PsMorphism(big.presheaf, total,
                   {d: FinFun(big.presheaf.sets[d], total.sets[d], bot_map[d]) for d in D.objects})
    ce = coequalizer_ps(u, v)
    lan, q = ce.presheaf, ce.quotient

    coprojections = {c: compose_morphisms(slot_inj[c], q) for c in C.objects}
    copy_inclusions: dict[tuple[ElemId, ElemId], PsMorphism] = {}
    provenance: dict[tuple[ElemId, ElemId], tuple[ElemId, ElemId, ElemId]] = {}
    for c in C.objects:
        for k, xe in enumerate(x.sets[c]):
            incl = compose_morphisms(tensors[c].injections[k], coprojections[c])
            copy_inclusions[(c, xe)] = incl
            for d in D.objects:
                for e in F.obj_images[c].sets[d]:
                    provenance.setdefault((d, incl.components[d](e)), (c, xe, e))
    return LanResult(lan, coprojections, tensors, copy_inclusions, provenance)


def lan_map(F: KanModel, m: PsMorphism) -> PsMorphism:
    """Left Kan extension on a presheaf morphism, by pushing provenance forward."""
    lx = lan_apply(F, m.source)
    ly = lan_apply(F, m.target)
    return lan_map_between(F, m, lx, ly)


def lan_map_between(F: KanModel, m: PsMorphism, lx: LanResult, ly: LanResult) -> PsMorphism:
    D = F.target
    comps: dict[ElemId, FinFun] = {}
    for d in D.objects:
        mapping: dict[ElemId, ElemId] = {}
        for c in F.source.objects:
            mc = m.components[c]
            for xe in m.source.sets[c]:
                inc_x = lx.copy_inclusions[(c, xe)].components[d]
                inc_y = ly.copy_inclusions[(c, mc(xe))].components[d]
                for e in F.obj_images[c].sets[d]:
                    src_elem = inc_x(e)
                    tgt_elem = inc_y(e)
                    prev = mapping.setdefault(src_elem, tgt_elem)
                    if prev != tgt_elem:
                        raise BaseMismatch("lan_map: inconsistent images; morphism not natural?")
        comps[d] = FinFun(lx.presheaf.sets[d], ly.presheaf.sets[d], mapping)
    return PsMorphism(lx.presheaf, ly.presheaf, comps)


def product_kan_model(model: PresheafModel, c: ElemId | None = None,
                      b: Presheaf | None = None) -> KanModel:
    """Kan model of a product functor over one presheaf model.

    With ``b`` given this is d |-> y(d) x b (the fixed-factor product
    functor); with ``b`` omitted it is d |-> y(c) x y(d), the form used by
    the cartesian-closure criterion at object c.
    """
    base = model.base
    if b is None:
        if c is None:
            raise UnknownObject("product_kan_model needs an object or a fixed factor")
        if c not in base.objects:
            raise UnknownObject(f"object {c} not in the model's base")
        fixed = yoneda(base, c)
        fixed_first = True
    else:
        same_base(base, b)
        fixed = b
        fixed_first = False
    yon = {d: yoneda(base, d) for d in base.objects}
    prods: dict[ElemId, ProductResult] = {}
    for d in base.objects:
        prods[d] = product(fixed, yon[d]) if fixed_first else product(yon[d], fixed)
    obj_images = {d: prods[d].presheaf for d in base.objects}
    mor_images: dict[ElemId, PsMorphism] = {}
    for f in base.morphisms:
        d, d2 = base.src(f), base.tgt(f)
        comps: dict[ElemId, FinFun] = {}
        for e in base.objects:
            mapping: dict[ElemId, ElemId] = {}
            for (aa, bb), pid in prods[d].pair_ids[e].items():
                if fixed_first:
                    mapping[pid] = prods[d2].pair_ids[e][(aa, base.then(bb, f))]
                else:
                    mapping[pid] = prods[d2].pair_ids[e][(base.then(aa, f), bb)]
            comps[e] = FinFun(obj_images[d].sets[e], obj_images[d2].sets[e], mapping)
        mor_images[f] = PsMorphism(obj_images[d], obj_images[d2], comps)
    return KanModel(base, base, obj_images, mor_images)


def density_comparison(x: Presheaf) -> PsMorphism:
    """The canonical morphism Lan_yoneda(x) -> x; an iso by density."""
    F = yoneda_kan_model(x.base)
    lx = lan_apply(F, x)
    base = x.base
    comps: dict[ElemId, FinFun] = {}
    for d in base.objects:
        mapping: dict[ElemId, ElemId] = {}
        for c in base.objects:
            for xe in x.sets[c]:
                inc = lx.copy_inclusions[(c, xe)].components[d]
                for e in F.obj_images[c].sets[d]:  # e: d -> c in the base
                    val = x.actions[e](xe)
                    prev = mapping.setdefault(inc(e), val)
                    if prev != val:
                        raise BaseMismatch("density comparison ill-defined")
        comps[d] = FinFun(lx.presheaf.sets[d], x.sets[d], mapping)
    return PsMorphism(lx.presheaf, x, comps)


def counit_comparison(F: KanModel, c: ElemId) -> PsMorphism:
    """The canonical morphism Lan F(y(c)) -> F(c); an iso for every c."""
    if c not in F.source.objects:
        raise UnknownObject(f"object {c} not in source base")
    yc = yoneda(F.source, c)
    lx = lan_apply(F, yc)
    comps: dict[ElemId, FinFun] = {}
    for d in F.target.objects:
        mapping: dict[ElemId, ElemId] = {}
        for c2 in F.source.objects:
            for xe in yc.sets[c2]:  # xe: c2 -> c in the source base
                inc = lx.copy_inclusions[(c2, xe)].components[d]
                img = F.mor_images[xe].components[d]
                for e in F.obj_images[c2].sets[d]:
                    val = img(e)
                    prev = mapping.setdefault(inc(e), val)
                    if prev != val:
                        raise BaseMismatch("counit comparison ill-defined")
        comps[d] = FinFun(lx.presheaf.sets[d], F.obj_images[c].sets[d], mapping)
    return PsMorphism(lx.presheaf, F.obj_images[c], comps)
