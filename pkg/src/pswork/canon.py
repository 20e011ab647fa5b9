"""Canonical forms and digests.

Structures are relabelled positionally (objects and morphisms by their id
order in the base, elements by id order within each object) before hashing,
so digests agree across workspaces whenever the construction history does.
"""

from __future__ import annotations

import hashlib
import json

from .fincat import FinCat
from .presheaf import Presheaf, PsMorphism


def canon_cat(c: FinCat) -> dict:
    objs = list(c.objects)
    mors = list(c.morphisms)
    opos = {o: i for i, o in enumerate(objs)}
    mpos = {m: i for i, m in enumerate(mors)}
    return {
        "objects": len(objs),
        "morphisms": [[opos[c.src(m)], opos[c.tgt(m)]] for m in mors],
        "identities": [mpos[c.ident(o)] for o in objs],
        "comp": sorted([mpos[f], mpos[g], mpos[h]] for (f, g), h in c.comp.items()),
    }


def canon_presheaf(x: Presheaf) -> dict:
    base = x.base
    objs = list(base.objects)
    mors = list(base.morphisms)
    elem_pos = {o: {e: i for i, e in enumerate(x.sets[o])} for o in objs}
    actions = []
    for mi, m in enumerate(mors):
        c, c2 = base.src(m), base.tgt(m)
        act = x.actions[m]
        actions.append([mi, [elem_pos[c][act(e)] for e in x.sets[c2]]])
    return {"sizes": [len(x.sets[o]) for o in objs], "actions": actions}


def canon_components(m: PsMorphism) -> list:
    base = m.source.base
    out = []
    for oi, o in enumerate(base.objects):
        tgt_pos = {e: i for i, e in enumerate(m.target.sets[o])}
        out.append([oi, [tgt_pos[m.components[o](e)] for e in m.source.sets[o]]])
    return out


def canon_morphism(m: PsMorphism) -> dict:
    return {
        "source": canon_presheaf(m.source),
        "target": canon_presheaf(m.target),
        "components": canon_components(m),
    }


def _digest(obj) -> str:
    data = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(data).hexdigest()


def presheaf_digest(x: Presheaf) -> str:
    return _digest({"base": canon_cat(x.base), "presheaf": canon_presheaf(x)})


def morphism_digest(m: PsMorphism) -> str:
    return _digest({"base": canon_cat(m.source.base), "morphism": canon_morphism(m)})


def config_digest(model_conditions_digest: str, m: PsMorphism) -> str:
    return _digest({
        "base": canon_cat(m.source.base),
        "conditions": model_conditions_digest,
        "m": canon_morphism(m),
    })


def conditions_digest(conditions) -> str:
    return _digest([canon_morphism(g) for g in conditions])
