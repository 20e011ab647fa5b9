"""Bundled example models and Kan models.

The documents here are the single source of truth: `scripts/gen_fixtures.py`
writes them (plus a few computed ones) into `pswork/data/`, and the loaders
below parse the packaged files.  Element tables are written out fully,
including the derived identity elements that the informal diagrams leave
implicit.
"""

from __future__ import annotations

import copy
import json
from importlib import resources

from .errors import BaseMismatch
from .formats import (
    BaseBinding,
    KanBinding,
    ModelBinding,
    NamedPresheaf,
    envelope,
    parse_document,
    parse_kan_payload,
    parse_presheaf_payload,
)

TERMINAL_BASE = {
    "presentation": {
        "objects": ["*"],
        "arrows": [],
        "relations": [],
        "max_path_len": 1,
    }
}

SETSET_BASE = {
    "presentation": {
        "objects": ["s_l", "s_r", "p"],
        "arrows": [
            {"name": "l", "src": "s_l", "tgt": "p"},
            {"name": "r", "src": "s_r", "tgt": "p"},
        ],
        "relations": [],
        "max_path_len": 2,
    }
}

CAT_BASE = {
    "presentation": {
        "objects": ["o", "m", "p"],
        "arrows": [
            {"name": "src", "src": "o", "tgt": "m"},
            {"name": "tgt", "src": "o", "tgt": "m"},
            {"name": "ident", "src": "m", "tgt": "o"},
            {"name": "comp", "src": "m", "tgt": "p"},
            {"name": "left", "src": "m", "tgt": "p"},
            {"name": "right", "src": "m", "tgt": "p"},
        ],
        "relations": [
            {"lhs": ["src", "ident"], "rhs": {"identity": "o"}},
            {"lhs": ["tgt", "ident"], "rhs": {"identity": "o"}},
            {"lhs": ["src", "comp"], "rhs": ["src", "left"]},
            {"lhs": ["tgt", "comp"], "rhs": ["tgt", "right"]},
            {"lhs": ["tgt", "left"], "rhs": ["src", "right"]},
        ],
        "max_path_len": 3,
    }
}

SET_MODEL_DOC = envelope("model", {"base": TERMINAL_BASE, "conditions": []})

# one pairing element must exist and be unique for every pair of points
_SETSET_GP = {
    "source": {
        "sets": {"s_l": ["al"], "s_r": ["ar"], "p": []},
        "actions": {"l": {}, "r": {}},
    },
    "target": {
        "sets": {"s_l": ["bl"], "s_r": ["br"], "p": ["bp"]},
        "actions": {"l": {"bp": "bl"}, "r": {"bp": "br"}},
    },
    "components": {"s_l": {"al": "bl"}, "s_r": {"ar": "br"}},
}

SETSET_MODEL_DOC = envelope("model", {
    "base": SETSET_BASE,
    "conditions": [{"name": "g^p", "morphism": _SETSET_GP}],
})

# composable pairs must have a unique pairing element
_CAT_GP = {
    "source": {
        "sets": {"o": ["a", "y", "d"], "m": ["u", "v", "ia", "iy", "idd"], "p": []},
        "actions": {
            "src": {"u": "a", "v": "y", "ia": "a", "iy": "y", "idd": "d"},
            "tgt": {"u": "y", "v": "d", "ia": "a", "iy": "y", "idd": "d"},
            "ident": {"a": "ia", "y": "iy", "d": "idd"},
            "comp": {}, "left": {}, "right": {},
        },
    },
    "target": {
        "sets": {"o": ["a", "y", "d"], "m": ["u", "v", "c", "ia", "iy", "idd"], "p": ["pp"]},
        "actions": {
            "src": {"u": "a", "v": "y", "c": "a", "ia": "a", "iy": "y", "idd": "d"},
            "tgt": {"u": "y", "v": "d", "c": "d", "ia": "a", "iy": "y", "idd": "d"},
            "ident": {"a": "ia", "y": "iy", "d": "idd"},
            "comp": {"pp": "c"}, "left": {"pp": "u"}, "right": {"pp": "v"},
        },
    },
    "components": {
        "o": {"a": "a", "y": "y", "d": "d"},
        "m": {"u": "u", "v": "v", "ia": "ia", "iy": "iy", "idd": "idd"},
    },
}

# composing with an identity on the left must give the right factor
_CAT_GLU = {
    "source": {
        "sets": {"o": ["x", "t"], "m": ["i", "u", "w", "it"], "p": ["pp"]},
        "actions": {
            "src": {"i": "x", "u": "x", "w": "x", "it": "t"},
            "tgt": {"i": "x", "u": "t", "w": "t", "it": "t"},
            "ident": {"x": "i", "t": "it"},
            "left": {"pp": "i"}, "right": {"pp": "u"}, "comp": {"pp": "w"},
        },
    },
    "target": {
        "sets": {"o": ["x", "t"], "m": ["i", "u", "it"], "p": ["pp"]},
        "actions": {
            "src": {"i": "x", "u": "x", "it": "t"},
            "tgt": {"i": "x", "u": "t", "it": "t"},
            "ident": {"x": "i", "t": "it"},
            "left": {"pp": "i"}, "right": {"pp": "u"}, "comp": {"pp": "u"},
        },
    },
    "components": {
        "o": {"x": "x", "t": "t"},
        "m": {"i": "i", "u": "u", "w": "u", "it": "it"},
        "p": {"pp": "pp"},
    },
}

# composing with an identity on the right must give the left factor
_CAT_GRU = {
    "source": {
        "sets": {"o": ["s", "x"], "m": ["u", "i", "w", "is"], "p": ["pp"]},
        "actions": {
            "src": {"u": "s", "i": "x", "w": "s", "is": "s"},
            "tgt": {"u": "x", "i": "x", "w": "x", "is": "s"},
            "ident": {"s": "is", "x": "i"},
            "left": {"pp": "u"}, "right": {"pp": "i"}, "comp": {"pp": "w"},
        },
    },
    "target": {
        "sets": {"o": ["s", "x"], "m": ["u", "i", "is"], "p": ["pp"]},
        "actions": {
            "src": {"u": "s", "i": "x", "is": "s"},
            "tgt": {"u": "x", "i": "x", "is": "s"},
            "ident": {"s": "is", "x": "i"},
            "left": {"pp": "u"}, "right": {"pp": "i"}, "comp": {"pp": "u"},
        },
    },
    "components": {
        "o": {"s": "s", "x": "x"},
        "m": {"u": "u", "i": "i", "w": "u", "is": "is"},
        "p": {"pp": "pp"},
    },
}

# the two bracketings of a composable triple must agree
_CAT_GASS = {
    "source": {
        "sets": {
            "o": ["a", "b", "c", "d"],
            "m": ["u", "v", "w", "c1", "c2", "c3", "c4", "ia", "ib", "ic", "idd"],
            "p": ["p1", "p2", "p3", "p4"],
        },
        "actions": {
            "src": {"u": "a", "v": "b", "w": "c", "c1": "a", "c2": "b", "c3": "a",
                    "c4": "a", "ia": "a", "ib": "b", "ic": "c", "idd": "d"},
            "tgt": {"u": "b", "v": "c", "w": "d", "c1": "c", "c2": "d", "c3": "d",
                    "c4": "d", "ia": "a", "ib": "b", "ic": "c", "idd": "d"},
            "ident": {"a": "ia", "b": "ib", "c": "ic", "d": "idd"},
            "left": {"p1": "u", "p2": "v", "p3": "c1", "p4": "u"},
            "right": {"p1": "v", "p2": "w", "p3": "w", "p4": "c2"},
            "comp": {"p1": "c1", "p2": "c2", "p3": "c3", "p4": "c4"},
        },
    },
    "target": {
        "sets": {
            "o": ["a", "b", "c", "d"],
            "m": ["u", "v", "w", "c1", "c2", "c34", "ia", "ib", "ic", "idd"],
            "p": ["p1", "p2", "p3", "p4"],
        },
        "actions": {
            "src": {"u": "a", "v": "b", "w": "c", "c1": "a", "c2": "b", "c34": "a",
                    "ia": "a", "ib": "b", "ic": "c", "idd": "d"},
            "tgt": {"u": "b", "v": "c", "w": "d", "c1": "c", "c2": "d", "c34": "d",
                    "ia": "a", "ib": "b", "ic": "c", "idd": "d"},
            "ident": {"a": "ia", "b": "ib", "c": "ic", "d": "idd"},
            "left": {"p1": "u", "p2": "v", "p3": "c1", "p4": "u"},
            "right": {"p1": "v", "p2": "w", "p3": "w", "p4": "c2"},
            "comp": {"p1": "c1", "p2": "c2", "p3": "c34", "p4": "c34"},
        },
    },
    "components": {
        "o": {"a": "a", "b": "b", "c": "c", "d": "d"},
        "m": {"u": "u", "v": "v", "w": "w", "c1": "c1", "c2": "c2", "c3": "c34",
              "c4": "c34", "ia": "ia", "ib": "ib", "ic": "ic", "idd": "idd"},
        "p": {"p1": "p1", "p2": "p2", "p3": "p3", "p4": "p4"},
    },
}

CAT_MODEL_DOC = envelope("model", {
    "base": CAT_BASE,
    "conditions": [
        {"name": "g^p", "morphism": _CAT_GP},
        {"name": "g^lu", "morphism": _CAT_GLU},
        {"name": "g^ru", "morphism": _CAT_GRU},
        {"name": "g^ass", "morphism": _CAT_GASS},
    ],
})

# the walking arrow, as category-like data over the Cat base
TWO_PRESHEAF_PAYLOAD = {
    "sets": {
        "o": ["n0", "n1"],
        "m": ["e00", "e01", "e11"],
        "p": ["q000", "q001", "q011", "q111"],
    },
    "actions": {
        "src": {"e00": "n0", "e01": "n0", "e11": "n1"},
        "tgt": {"e00": "n0", "e01": "n1", "e11": "n1"},
        "ident": {"n0": "e00", "n1": "e11"},
        "left": {"q000": "e00", "q001": "e00", "q011": "e01", "q111": "e11"},
        "right": {"q000": "e00", "q001": "e01", "q011": "e11", "q111": "e11"},
        "comp": {"q000": "e00", "q001": "e01", "q011": "e01", "q111": "e11"},
    },
}

TWO_PRESHEAF_DOC = envelope("presheaf", {"base": CAT_BASE, **TWO_PRESHEAF_PAYLOAD})

# the objects functor: covariant hom at o, valued in sets
F_OB_DOC = envelope("kan_model", {
    "source_base": CAT_BASE,
    "target_base": TERMINAL_BASE,
    "object_images": {
        "o": {"sets": {"*": ["ido"]}, "actions": {}},
        "m": {"sets": {"*": ["src", "tgt"]}, "actions": {}},
        "p": {"sets": {"*": ["src_comp", "tgt_comp", "tgt_left"]}, "actions": {}},
    },
    "arrow_images": {
        "src": {"*": {"ido": "src"}},
        "tgt": {"*": {"ido": "tgt"}},
        "ident": {"*": {"src": "ido", "tgt": "ido"}},
        "comp": {"*": {"src": "src_comp", "tgt": "tgt_comp"}},
        "left": {"*": {"src": "src_comp", "tgt": "tgt_left"}},
        "right": {"*": {"src": "tgt_left", "tgt": "tgt_comp"}},
    },
})

# the pairing functor: covariant hom at p over the Set x Set model
F_PROD_DOC = envelope("kan_model", {
    "source_base": SETSET_BASE,
    "target_base": TERMINAL_BASE,
    "object_images": {
        "s_l": {"sets": {"*": []}, "actions": {}},
        "s_r": {"sets": {"*": []}, "actions": {}},
        "p": {"sets": {"*": ["idp"]}, "actions": {}},
    },
    "arrow_images": {
        "l": {},
        "r": {},
    },
})

STATIC_DOCS = {
    "set.model.json": SET_MODEL_DOC,
    "setset.model.json": SETSET_MODEL_DOC,
    "cat.model.json": CAT_MODEL_DOC,
    "two.presheaf.json": TWO_PRESHEAF_DOC,
    "f_ob.kan.json": F_OB_DOC,
    "f_prod.kan.json": F_PROD_DOC,
}


def data_document(name: str) -> dict:
    text = resources.files("pswork").joinpath("data").joinpath(name).read_text()
    return json.loads(text)


def load_set_model() -> ModelBinding:
    return parse_document(copy.deepcopy(SET_MODEL_DOC)).value


def load_setset_model() -> ModelBinding:
    return parse_document(copy.deepcopy(SETSET_MODEL_DOC)).value


def load_cat_model() -> ModelBinding:
    return parse_document(copy.deepcopy(CAT_MODEL_DOC)).value


def load_two(base: BaseBinding) -> NamedPresheaf:
    return parse_presheaf_payload(copy.deepcopy(TWO_PRESHEAF_PAYLOAD), base)


def load_f_ob(source: BaseBinding | None = None,
              target: BaseBinding | None = None) -> KanBinding:
    return parse_kan_payload(copy.deepcopy(F_OB_DOC["payload"]), "$",
                             source_base=source, target_base=target)


def load_f_prod(source: BaseBinding | None = None,
                target: BaseBinding | None = None) -> KanBinding:
    return parse_kan_payload(copy.deepcopy(F_PROD_DOC["payload"]), "$",
                             source_base=source, target_base=target)
