"""Regenerate the packaged data files.

Static documents come straight from `pswork.fixtures`; the times-2 Kan model,
the four game configurations and the three-move winning trace are computed.
Run from the repository root:  python3 scripts/gen_fixtures.py
"""

from __future__ import annotations

import copy
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from pswork import fixtures
from pswork.finset import fresh_workspace
from pswork.formats import (
    KanBinding,
    NamedMorphism,
    canonical_json,
    envelope,
    named_from_presheaf,
    serialize_kan,
    serialize_morphism,
)
from pswork.gametrace import trace_document_envelope
from pswork.kan import lan_map, product_kan_model
from pswork.reflection import GameConfig, MoveKind, auto_play

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "pswork" / "data"


def write(name: str, doc: dict) -> None:
    path = DATA_DIR / name
    path.write_text(canonical_json(doc))
    print(f"wrote {path}")


def computed_documents() -> dict[str, dict]:
    out: dict[str, dict] = {}
    with fresh_workspace():
        cm = fixtures.load_cat_model()
        two = fixtures.load_two(cm.base)
        f2 = product_kan_model(cm.model, b=two.presheaf)
        named_images = {
            objname: named_from_presheaf(f2.obj_images[oid], cm.base)
            for objname, oid in cm.base.object_ids.items()
        }
        kb = KanBinding(f2, cm.base, cm.base, named_images)
        out["f_times2.kan.json"] = envelope("kan_model", serialize_kan(kb))

        name_to_file = {"g^p": "gp", "g^lu": "glu", "g^ru": "gru", "g^ass": "gass"}
        configs = {}
        for i, g in enumerate(cm.model.conditions):
            m = lan_map(f2, g)
            nm = NamedMorphism(
                m, cm.base,
                named_from_presheaf(m.source, cm.base),
                named_from_presheaf(m.target, cm.base),
            )
            configs[cm.model.name_of(i)] = nm
            payload = {"base": copy.deepcopy(fixtures.CAT_BASE), **serialize_morphism(nm)}
            out[f"times2_{name_to_file[cm.model.name_of(i)]}.morphism.json"] = envelope(
                "morphism", payload)

        # the three winning unit-law moves, recorded as a replayable trace
        cfg = GameConfig(cm.model, configs["g^lu"].morphism)
        play = auto_play(cfg, "greedy", budget=100, kinds=[MoveKind.DOM_E], conditions=[1])
        assert play.won and len(play.trace.steps) == 3
        out["times2_glu_domE.trace.json"] = trace_document_envelope(
            cm, configs["g^lu"], play.trace)
    return out


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for name, doc in fixtures.STATIC_DOCS.items():
        write(name, doc)
    for name, doc in computed_documents().items():
        write(name, doc)


if __name__ == "__main__":
    main()
