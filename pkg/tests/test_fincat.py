import pytest

from pswork import finset
from pswork.errors import BoundExceeded, IllFormedRelation, UnknownObject
from pswork.fincat import (
    ArrowSpec,
    CatPresentation,
    PathSpec,
    build_presented,
    from_presentation,
    hom_set,
    validate_category,
)
from pswork.finset import FinFun, FinSet
from pswork.presheaf import validate_presheaf, yoneda


def terminal_presentation():
    return CatPresentation(objects=("*",), arrows=(), relations=())


def setset_presentation():
    return CatPresentation(
        objects=("s_l", "s_r", "p"),
        arrows=(ArrowSpec("l", "s_l", "p"), ArrowSpec("r", "s_r", "p")),
        relations=(),
    )


def cat_presentation():
    # base for presheaves that look like small categories: objects /
    # morphisms / composable pairs with source, target, identity,
    # left/right projections and composition
    arrows = (
        ArrowSpec("src", "o", "m"),
        ArrowSpec("tgt", "o", "m"),
        ArrowSpec("ident", "m", "o"),
        ArrowSpec("comp", "m", "p"),
        ArrowSpec("left", "m", "p"),
        ArrowSpec("right", "m", "p"),
    )
    rel = (
        (PathSpec(("src", "ident")), PathSpec((), at="o")),
        (PathSpec(("tgt", "ident")), PathSpec((), at="o")),
        (PathSpec(("src", "comp")), PathSpec(("src", "left"))),
        (PathSpec(("tgt", "comp")), PathSpec(("tgt", "right"))),
        (PathSpec(("tgt", "left")), PathSpec(("src", "right"))),
    )
    return CatPresentation(objects=("o", "m", "p"), arrows=arrows, relations=rel)


def test_terminal_category_valid():
    c = from_presentation(terminal_presentation(), 1)
    assert validate_category(c) == []
    assert len(c.objects) == 1
    assert len(c.morphisms) == 1


def test_broken_unit_detected():
    pc = build_presented(setset_presentation(), 2)
    c = pc.cat
    l = pc.arrow_ids["l"]
    id_p = c.ident(pc.object_ids["p"])
    bad_comp = dict(c.comp)
    bad_comp[(l, id_p)] = id_p  # wrong: should be l
    from pswork.fincat import FinCat

    bad = FinCat(c.objects, c.morphisms, c.src, c.tgt, c.ident, bad_comp)
    violations = validate_category(bad)
    assert any("unit" in v or "boundary" in v for v in violations)


def test_setset_category_shape():
    c = from_presentation(setset_presentation(), 2)
    assert validate_category(c) == []
    assert len(c.objects) == 3
    assert len(c.morphisms) == 5


def test_setset_hom_sets():
    pc = build_presented(setset_presentation(), 2)
    c = pc.cat
    p = pc.object_ids["p"]
    sl = pc.object_ids["s_l"]
    assert len(hom_set(c, p, sl)) == 0
    assert len(hom_set(c, sl, p)) == 1
    with pytest.raises(UnknownObject):
        hom_set(c, 99999, p)


def test_cat_base_hom_cardinalities():
    pc = build_presented(cat_presentation(), 3)
    c = pc.cat
    assert validate_category(c) == []
    o, m, p = (pc.object_ids[n] for n in ("o", "m", "p"))
    assert len(hom_set(c, o, o)) == 1
    assert len(hom_set(c, o, m)) == 2
    assert len(hom_set(c, o, p)) == 3
    assert len(hom_set(c, m, o)) == 1
    assert len(hom_set(c, m, m)) == 3
    assert len(hom_set(c, m, p)) == 6
    assert len(hom_set(c, p, p)) == 1
    assert len(c.morphisms) == 17


def test_cat_base_relations_sound():
    pc = build_presented(cat_presentation(), 3)
    c = pc.cat
    src, tgt, ident = (pc.arrow_ids[n] for n in ("src", "tgt", "ident"))
    comp_a, left, right = (pc.arrow_ids[n] for n in ("comp", "left", "right"))
    o = pc.object_ids["o"]
    assert c.then(src, ident) == c.ident(o)
    assert c.then(tgt, ident) == c.ident(o)
    assert c.then(src, comp_a) == c.then(src, left)
    assert c.then(tgt, comp_a) == c.then(tgt, right)
    assert c.then(tgt, left) == c.then(src, right)


def test_idempotent_presentation():
    p = CatPresentation(
        objects=("x",),
        arrows=(ArrowSpec("e", "x", "x"),),
        relations=((PathSpec(("e", "e")), PathSpec(("e",))),),
    )
    c = from_presentation(p, 2)
    assert len(c.objects) == 1
    assert len(c.morphisms) == 2


def test_bound_exceeded_on_free_loop():
    p = CatPresentation(
        objects=("x",),
        arrows=(ArrowSpec("e", "x", "x"),),
        relations=(),
    )
    with pytest.raises(BoundExceeded):
        from_presentation(p, 3)


def test_ill_formed_relation_rejected():
    p = CatPresentation(
        objects=("a", "b"),
        arrows=(ArrowSpec("f", "a", "b"),),
        relations=((PathSpec(("f",)), PathSpec((), at="a")),),
    )
    with pytest.raises(IllFormedRelation):
        from_presentation(p, 2)


def test_yoneda_terminal_is_constant_singleton():
    c = from_presentation(terminal_presentation(), 1)
    y = yoneda(c, c.objects.elems[0])
    assert validate_presheaf(y) == []
    assert all(len(y.sets[o]) == 1 for o in c.objects)


def test_yoneda_setset_at_p():
    pc = build_presented(setset_presentation(), 2)
    y = yoneda(pc.cat, pc.object_ids["p"])
    assert validate_presheaf(y) == []
    sizes = {n: len(y.sets[oid]) for n, oid in pc.object_ids.items()}
    assert sizes == {"p": 1, "s_l": 1, "s_r": 1}


def test_yoneda_cat_at_o():
    pc = build_presented(cat_presentation(), 3)
    y = yoneda(pc.cat, pc.object_ids["o"])
    assert validate_presheaf(y) == []
    sizes = {n: len(y.sets[oid]) for n, oid in pc.object_ids.items()}
    assert sizes == {"o": 1, "m": 1, "p": 0}


def test_covariant_hom_at_o_gives_object_counts():
    # the object images of the objects-functor Kan model: hom(o, -)
    pc = build_presented(cat_presentation(), 3)
    c = pc.cat
    o = pc.object_ids["o"]
    sizes = {n: len(hom_set(c, o, oid)) for n, oid in pc.object_ids.items()}
    assert sizes == {"o": 1, "m": 2, "p": 3}


def test_yoneda_contravariant_functoriality_exhaustive():
    pc = build_presented(cat_presentation(), 3)
    c = pc.cat
    for obj in c.objects:
        y = yoneda(c, obj)
        assert validate_presheaf(y) == []


def test_unknown_object_in_yoneda():
    c = from_presentation(terminal_presentation(), 1)
    with pytest.raises(UnknownObject):
        yoneda(c, 424242)
