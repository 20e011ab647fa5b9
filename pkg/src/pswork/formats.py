"""Document formats: parsing and serialization for every workspace file kind.

Documents are JSON with named objects, arrows and elements; names are
interned to ids in a deterministic order on load (base declaration order for
objects and arrows, list order for elements), so loading the same document
in a fresh workspace always produces the same ids.  Every parsed structure
passes its module validator before it is returned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from . import finset
from .errors import ParseError, ValidationError
from .fincat import (
    ArrowSpec,
    CatPresentation,
    FinCat,
    PathSpec,
    PresentedCategory,
    build_presented,
    path_action,
    validate_category,
)
from .finset import ElemId, FinFun, FinSet
from .kan import KanModel, validate_kan_model
from .presheaf import (
    Presheaf,
    PresheafModel,
    PsMorphism,
    compose_morphisms,
    identity_morphism,
    validate_morphism,
    validate_presheaf,
)

FORMAT_VERSION = "1.0.0"
KINDS = ("presentation", "category", "presheaf", "morphism", "model", "kan_model", "trace")


def envelope(kind: str, payload: dict) -> dict:
    return {"format_version": FORMAT_VERSION, "kind": kind, "payload": payload}


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _expect(cond: bool, location: str, message: str) -> None:
    if not cond:
        raise ParseError(location, message)


def _check_envelope(doc: Any) -> tuple[str, dict]:
    _expect(isinstance(doc, dict), "$", "document must be a JSON object")
    _expect("format_version" in doc, "$.format_version", "missing")
    _expect("kind" in doc, "$.kind", "missing")
    _expect(doc["kind"] in KINDS, "$.kind", f"unknown kind {doc.get('kind')!r}")
    _expect(isinstance(doc.get("payload"), dict), "$.payload", "missing or not an object")
    major = str(doc["format_version"]).split(".")[0]
    _expect(major == FORMAT_VERSION.split(".")[0], "$.format_version",
            f"unsupported version {doc['format_version']!r}")
    return doc["kind"], doc["payload"]


# -- bases -------------------------------------------------------------------


@dataclass
class BaseBinding:
    cat: FinCat
    presented: PresentedCategory | None
    object_ids: dict[str, ElemId]
    object_names: dict[ElemId, str]
    arrow_ids: dict[str, ElemId]
    arrow_names: dict[ElemId, str]
    payload: dict  # canonical base payload for comparison / re-serialization

    def object_order(self) -> list[str]:
        return [self.object_names[o] for o in self.cat.objects]


def parse_presentation_payload(payload: dict, location: str = "$") -> CatPresentation:
    _expect(isinstance(payload.get("objects"), list), f"{location}.objects", "missing list")
    arrows = []
    for i, a in enumerate(payload.get("arrows", [])):
        for k in ("name", "src", "tgt"):
            _expect(k in a, f"{location}.arrows[{i}].{k}", "missing")
        arrows.append(ArrowSpec(a["name"], a["src"], a["tgt"]))

    def path(spec, loc) -> PathSpec:
        if isinstance(spec, dict):
            _expect("identity" in spec, loc, "path object must be {'identity': obj}")
            return PathSpec((), at=spec["identity"])
        _expect(isinstance(spec, list) and spec, loc, "path must be a nonempty list or identity")
        return PathSpec(tuple(spec))

    relations = []
    for i, r in enumerate(payload.get("relations", [])):
        _expect("lhs" in r and "rhs" in r, f"{location}.relations[{i}]", "needs lhs and rhs")
        relations.append((path(r["lhs"], f"{location}.relations[{i}].lhs"),
                          path(r["rhs"], f"{location}.relations[{i}].rhs")))
    return CatPresentation(tuple(payload["objects"]), tuple(arrows), tuple(relations))


def serialize_presentation(p: CatPresentation, max_path_len: int) -> dict:
    def path(spec: PathSpec):
        return {"identity": spec.at} if not spec.arrows else list(spec.arrows)

    return {
        "objects": list(p.objects),
        "arrows": [{"name": a.name, "src": a.src, "tgt": a.tgt} for a in p.arrows],
        "relations": [{"lhs": path(l), "rhs": path(r)} for l, r in p.relations],
        "max_path_len": max_path_len,
    }


def parse_base(payload: dict, location: str = "$.base") -> BaseBinding:
    _expect(isinstance(payload, dict), location, "base must be an object")
    if "presentation" in payload:
        pres_payload = payload["presentation"]
        pres = parse_presentation_payload(pres_payload, f"{location}.presentation")
        max_len = pres_payload.get("max_path_len", 3)
        pc = build_presented(pres, max_len)
        arrow_ids = dict(pc.arrow_ids)
        return BaseBinding(
            cat=pc.cat,
            presented=pc,
            object_ids=dict(pc.object_ids),
            object_names={v: k for k, v in pc.object_ids.items()},
            arrow_ids=arrow_ids,
            arrow_names={v: k for k, v in arrow_ids.items()},
            payload={"presentation": serialize_presentation(pres, max_len)},
        )
    if "category" in payload:
        cp = payload["category"]
        loc = f"{location}.category"
        _expect(isinstance(cp.get("objects"), list), f"{loc}.objects", "missing list")
        _expect(isinstance(cp.get("morphisms"), list), f"{loc}.morphisms", "missing list")
        object_ids = {name: finset.fresh() for name in cp["objects"]}
        morph_ids: dict[str, ElemId] = {}
        src: dict[ElemId, ElemId] = {}
        tgt: dict[ElemId, ElemId] = {}
        for i, m in enumerate(cp["morphisms"]):
            for k in ("name", "src", "tgt"):
                _expect(k in m, f"{loc}.morphisms[{i}].{k}", "missing")
            _expect(m["src"] in object_ids, f"{loc}.morphisms[{i}].src", "unknown object")
            _expect(m["tgt"] in object_ids, f"{loc}.morphisms[{i}].tgt", "unknown object")
            mid = finset.fresh()
            morph_ids[m["name"]] = mid
            src[mid] = object_ids[m["src"]]
            tgt[mid] = object_ids[m["tgt"]]
        idents = cp.get("identities", {})
        ident: dict[ElemId, ElemId] = {}
        for objname, oid in object_ids.items():
            _expect(objname in idents, f"{loc}.identities.{objname}", "missing identity")
            _expect(idents[objname] in morph_ids, f"{loc}.identities.{objname}", "unknown morphism")
            ident[oid] = morph_ids[idents[objname]]
        comp: dict[tuple[ElemId, ElemId], ElemId] = {}
        for i, entry in enumerate(cp.get("comp", [])):
            _expect(isinstance(entry, list) and len(entry) == 3, f"{loc}.comp[{i}]", "need [f, g, fg]")
            f, g, h = entry
            for name in (f, g, h):
                _expect(name in morph_ids, f"{loc}.comp[{i}]", f"unknown morphism {name!r}")
            comp[(morph_ids[f], morph_ids[g])] = morph_ids[h]
        objects = FinSet.of(object_ids.values())
        morphisms = FinSet.of(morph_ids.values())
        cat = FinCat(objects, morphisms, FinFun(morphisms, objects, src),
                     FinFun(morphisms, objects, tgt), FinFun(objects, morphisms, ident), comp)
        violations = validate_category(cat)
        if violations:
            raise ValidationError(violations)
        arrow_ids = {n: i for n, i in morph_ids.items() if not cat.is_identity(i)}
        return BaseBinding(
            cat=cat,
            presented=None,
            object_ids=object_ids,
            object_names={v: k for k, v in object_ids.items()},
            arrow_ids=arrow_ids,
            arrow_names={v: k for k, v in arrow_ids.items()},
            payload={"category": cp},
        )
    raise ParseError(location, "base needs a 'presentation' or 'category' entry")


# -- presheaves ---------------------------------------------------------------


@dataclass
class NamedPresheaf:
    presheaf: Presheaf
    base: BaseBinding
    elem_ids: dict[str, dict[str, ElemId]]  # objname -> elemname -> id
    elem_names: dict[ElemId, dict[ElemId, str]]  # obj id -> elem id -> name


def parse_presheaf_payload(payload: dict, base: BaseBinding,
                           location: str = "$") -> NamedPresheaf:
    sets_payload = payload.get("sets", {})
    _expect(isinstance(sets_payload, dict), f"{location}.sets", "missing object map")
    for objname in sets_payload:
        _expect(objname in base.object_ids, f"{location}.sets.{objname}", "unknown object")
    elem_ids: dict[str, dict[str, ElemId]] = {}
    sets: dict[ElemId, FinSet] = {}
    for objname in base.object_order():
        names = sets_payload.get(objname, [])
        _expect(isinstance(names, list), f"{location}.sets.{objname}", "must be a list")
        _expect(len(set(names)) == len(names), f"{location}.sets.{objname}", "duplicate element")
        ids = {n: finset.fresh() for n in names}
        elem_ids[objname] = ids
        sets[base.object_ids[objname]] = FinSet.of(ids.values())

    actions_payload = payload.get("actions", {})
    _expect(isinstance(actions_payload, dict), f"{location}.actions", "must be an object")
    gen_actions: dict[str, FinFun] = {}
    for arrowname, table in actions_payload.items():
        _expect(arrowname in base.arrow_ids, f"{location}.actions.{arrowname}", "unknown arrow")
        aid = base.arrow_ids[arrowname]
        cname = base.object_names[base.cat.src(aid)]
        c2name = base.object_names[base.cat.tgt(aid)]
        mapping: dict[ElemId, ElemId] = {}
        for k, v in table.items():
            _expect(k in elem_ids[c2name], f"{location}.actions.{arrowname}.{k}",
                    f"unknown element of {c2name}")
            _expect(v in elem_ids[cname], f"{location}.actions.{arrowname}.{k}",
                    f"image {v!r} is not an element of {cname}")
            mapping[elem_ids[c2name][k]] = elem_ids[cname][v]
        gen_actions[arrowname] = FinFun(sets[base.cat.tgt(aid)], sets[base.cat.src(aid)], mapping)
    for arrowname in base.arrow_ids:
        if arrowname not in gen_actions:
            aid = base.arrow_ids[arrowname]
            dom = sets[base.cat.tgt(aid)]
            _expect(len(dom) == 0, f"{location}.actions.{arrowname}",
                    "missing action table for arrow with nonempty domain")
            gen_actions[arrowname] = FinFun(dom, sets[base.cat.src(aid)], {})

    actions: dict[ElemId, FinFun] = {}
    if base.presented is not None:
        for mid in base.cat.morphisms:
            actions[mid] = path_action(base.presented, gen_actions, sets, mid)
    else:
        for name, aid in base.arrow_ids.items():
            actions[aid] = gen_actions[name]
        for o in base.cat.objects:
            actions[base.cat.ident(o)] = finset.identity(sets[o])
    x = Presheaf(base.cat, sets, actions)
    violations = validate_presheaf(x)
    if violations:
        raise ValidationError([f"{location}: {v}" for v in violations])
    elem_names = {
        base.object_ids[objname]: {i: n for n, i in ids.items()}
        for objname, ids in elem_ids.items()
    }
    return NamedPresheaf(x, base, elem_ids, elem_names)


def named_from_presheaf(x: Presheaf, base: BaseBinding) -> NamedPresheaf:
    """Synthesize stable element names (position-based) for a computed presheaf."""
    elem_ids: dict[str, dict[str, ElemId]] = {}
    elem_names: dict[ElemId, dict[ElemId, str]] = {}
    for objname in base.object_order():
        oid = base.object_ids[objname]
        names = {f"{objname}_{i}": e for i, e in enumerate(x.sets[oid])}
        elem_ids[objname] = names
        elem_names[oid] = {e: n for n, e in names.items()}
    return NamedPresheaf(x, base, elem_ids, elem_names)


def serialize_presheaf(np: NamedPresheaf) -> dict:
    base = np.base
    x = np.presheaf
    sets_payload = {}
    for objname in base.object_order():
        oid = base.object_ids[objname]
        sets_payload[objname] = [np.elem_names[oid][e] for e in x.sets[oid]]
    actions_payload = {}
    for arrowname, aid in base.arrow_ids.items():
        cname = base.object_names[base.cat.src(aid)]
        c2name = base.object_names[base.cat.tgt(aid)]
        act = x.actions[aid]
        oid2, oid1 = base.object_ids[c2name], base.object_ids[cname]
        actions_payload[arrowname] = {
            np.elem_names[oid2][e]: np.elem_names[oid1][act(e)] for e in x.sets[oid2]
        }
    return {"sets": sets_payload, "actions": actions_payload}


# -- morphisms ----------------------------------------------------------------


@dataclass
class NamedMorphism:
    morphism: PsMorphism
    base: BaseBinding
    source: NamedPresheaf
    target: NamedPresheaf


def parse_morphism_payload(payload: dict, base: BaseBinding,
                           location: str = "$") -> NamedMorphism:
    _expect("source" in payload, f"{location}.source", "missing")
    _expect("target" in payload, f"{location}.target", "missing")
    src = parse_presheaf_payload(payload["source"], base, f"{location}.source")
    tgt = parse_presheaf_payload(payload["target"], base, f"{location}.target")
    comps_payload = payload.get("components", {})
    comps: dict[ElemId, FinFun] = {}
    for objname in base.object_order():
        oid = base.object_ids[objname]
        table = comps_payload.get(objname, {})
        mapping: dict[ElemId, ElemId] = {}
        for k, v in table.items():
            _expect(k in src.elem_ids[objname], f"{location}.components.{objname}.{k}",
                    "unknown source element")
            _expect(v in tgt.elem_ids[objname], f"{location}.components.{objname}.{k}",
                    f"image {v!r} is not a target element")
            mapping[src.elem_ids[objname][k]] = tgt.elem_ids[objname][v]
        comps[oid] = FinFun(src.presheaf.sets[oid], tgt.presheaf.sets[oid], mapping)
    m = PsMorphism(src.presheaf, tgt.presheaf, comps)
    violations = validate_morphism(m)
    if violations:
        raise ValidationError([f"{location}: {v}" for v in violations])
    return NamedMorphism(m, base, src, tgt)


def serialize_morphism(nm: NamedMorphism) -> dict:
    base = nm.base
    comps_payload = {}
    for objname in base.object_order():
        oid = base.object_ids[objname]
        comp = nm.morphism.components[oid]
        table = {
            nm.source.elem_names[oid][e]: nm.target.elem_names[oid][comp(e)]
            for e in nm.morphism.source.sets[oid]
        }
        if table:
            comps_payload[objname] = table
    return {
        "source": serialize_presheaf(nm.source),
        "target": serialize_presheaf(nm.target),
        "components": comps_payload,
    }


# -- models -------------------------------------------------------------------


@dataclass
class ModelBinding:
    model: PresheafModel
    base: BaseBinding
    conditions: list[NamedMorphism]


def parse_model_payload(payload: dict, location: str = "$") -> ModelBinding:
    base = parse_base(payload.get("base", {}), f"{location}.base")
    conditions = []
    names = []
    for i, entry in enumerate(payload.get("conditions", [])):
        loc = f"{location}.conditions[{i}]"
        _expect("morphism" in entry, loc, "missing morphism")
        nm = parse_morphism_payload(entry["morphism"], base, loc)
        conditions.append(nm)
        names.append(entry.get("name", f"g{i}"))
    model = PresheafModel(base.cat, tuple(nm.morphism for nm in conditions), tuple(names))
    return ModelBinding(model, base, conditions)


def serialize_model(mb: ModelBinding) -> dict:
    return {
        "base": mb.base.payload,
        "conditions": [
            {"name": mb.model.name_of(i), "morphism": serialize_morphism(nm)}
            for i, nm in enumerate(mb.conditions)
        ],
    }


# -- kan models ---------------------------------------------------------------


@dataclass
class KanBinding:
    kan: KanModel
    source_base: BaseBinding
    target_base: BaseBinding
    object_images: dict[str, NamedPresheaf]


def parse_kan_payload(payload: dict, location: str = "$",
                      source_base: BaseBinding | None = None,
                      target_base: BaseBinding | None = None) -> KanBinding:
    if source_base is None:
        source_base = parse_base(payload.get("source_base", {}), f"{location}.source_base")
    elif "source_base" in payload:
        own = parse_base(payload["source_base"], f"{location}.source_base").payload
        _expect(own == source_base.payload, f"{location}.source_base",
                "kan model's source base differs from the supplied model's base")
    if target_base is None:
        target_base = parse_base(payload.get("target_base", {}), f"{location}.target_base")
    elif "target_base" in payload:
        own = parse_base(payload["target_base"], f"{location}.target_base").payload
        _expect(own == target_base.payload, f"{location}.target_base",
                "kan model's target base differs from the supplied model's base")

    images_payload = payload.get("object_images", {})
    obj_images: dict[ElemId, Presheaf] = {}
    named_images: dict[str, NamedPresheaf] = {}
    for objname in source_base.object_order():
        _expect(objname in images_payload, f"{location}.object_images.{objname}", "missing")
        np = parse_presheaf_payload(images_payload[objname], target_base,
                                    f"{location}.object_images.{objname}")
        named_images[objname] = np
        obj_images[source_base.object_ids[objname]] = np.presheaf

    arrows_payload = payload.get("arrow_images", {})
    gen_images: dict[str, PsMorphism] = {}
    for arrowname, aid in source_base.arrow_ids.items():
        loc = f"{location}.arrow_images.{arrowname}"
        table = arrows_payload.get(arrowname)
        _expect(table is not None, loc, "missing arrow image")
        cname = source_base.object_names[source_base.cat.src(aid)]
        c2name = source_base.object_names[source_base.cat.tgt(aid)]
        src_np, tgt_np = named_images[cname], named_images[c2name]
        comps: dict[ElemId, FinFun] = {}
        for tobj in target_base.object_order():
            toid = target_base.object_ids[tobj]
            obj_table = table.get(tobj, {})
            mapping: dict[ElemId, ElemId] = {}
            for k, v in obj_table.items():
                _expect(k in src_np.elem_ids[tobj], f"{loc}.{tobj}.{k}", "unknown element")
                _expect(v in tgt_np.elem_ids[tobj], f"{loc}.{tobj}.{k}", "unknown image element")
                mapping[src_np.elem_ids[tobj][k]] = tgt_np.elem_ids[tobj][v]
            comps[toid] = FinFun(src_np.presheaf.sets[toid], tgt_np.presheaf.sets[toid], mapping)
        m = PsMorphism(src_np.presheaf, tgt_np.presheaf, comps)
        violations = validate_morphism(m)
        if violations:
            raise ValidationError([f"{loc}: {v}" for v in violations])
        gen_images[arrowname] = m

    mor_images: dict[ElemId, PsMorphism] = {}
    cat = source_base.cat
    if source_base.presented is not None:
        for mid in cat.morphisms:
            path = source_base.presented.rep_paths[mid]
            if not path:
                mor_images[mid] = identity_morphism(obj_images[cat.src(mid)])
            else:
                img = gen_images[path[0]]
                for name in path[1:]:
                    img = compose_morphisms(img, gen_images[name])
                mor_images[mid] = img
    else:
        for name, aid in source_base.arrow_ids.items():
            mor_images[aid] = gen_images[name]
        for o in cat.objects:
            mor_images[cat.ident(o)] = identity_morphism(obj_images[o])

    kan = KanModel(cat, target_base.cat, obj_images, mor_images)
    violations = validate_kan_model(kan)
    if violations:
        raise ValidationError([f"{location}: {v}" for v in violations])
    return KanBinding(kan, source_base, target_base, named_images)


def serialize_kan(kb: KanBinding) -> dict:
    source_base, target_base = kb.source_base, kb.target_base
    images_payload = {
        objname: serialize_presheaf(np) for objname, np in kb.object_images.items()
    }
    arrows_payload: dict[str, dict] = {}
    for arrowname, aid in source_base.arrow_ids.items():
        m = kb.kan.mor_images[aid]
        cname = source_base.object_names[source_base.cat.src(aid)]
        c2name = source_base.object_names[source_base.cat.tgt(aid)]
        src_np, tgt_np = kb.object_images[cname], kb.object_images[c2name]
        table: dict[str, dict] = {}
        for tobj in target_base.object_order():
            toid = target_base.object_ids[tobj]
            entries = {
                src_np.elem_names[toid][e]: tgt_np.elem_names[toid][m.components[toid](e)]
                for e in m.source.sets[toid]
            }
            if entries:
                table[tobj] = entries
        arrows_payload[arrowname] = table
    return {
        "source_base": source_base.payload,
        "target_base": target_base.payload,
        "object_images": images_payload,
        "arrow_images": arrows_payload,
    }


# -- top-level dispatch -------------------------------------------------------


@dataclass
class ParsedDocument:
    kind: str
    value: object


def parse_document(doc: dict) -> ParsedDocument:
    kind, payload = _check_envelope(doc)
    if kind == "presentation":
        pres = parse_presentation_payload(payload, "$.payload")
        pc = build_presented(pres, payload.get("max_path_len", 3))
        return ParsedDocument(kind, pc)
    if kind == "category":
        return ParsedDocument(kind, parse_base({"category": payload}, "$.payload"))
    if kind == "presheaf":
        base = parse_base(payload.get("base", {}), "$.payload.base")
        return ParsedDocument(kind, parse_presheaf_payload(payload, base, "$.payload"))
    if kind == "morphism":
        base = parse_base(payload.get("base", {}), "$.payload.base")
        return ParsedDocument(kind, parse_morphism_payload(payload, base, "$.payload"))
    if kind == "model":
        return ParsedDocument(kind, parse_model_payload(payload, "$.payload"))
    if kind == "kan_model":
        return ParsedDocument(kind, parse_kan_payload(payload, "$.payload"))
    if kind == "trace":
        from .gametrace import parse_trace_payload

        return ParsedDocument(kind, parse_trace_payload(payload, "$.payload"))
    raise ParseError("$.kind", f"unhandled kind {kind!r}")


def load_document(path: str) -> ParsedDocument:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(path, f"invalid JSON: {e}") from None
    return parse_document(doc)
