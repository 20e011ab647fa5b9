"""Workbench for finite presheaf models.

Encodes finitely presented base categories and finite presheaves over them,
computes finite colimits and left Kan extensions, reflects presheaves into
orthogonal classes, and decides or assists the left-adjointness and
cartesian-closure criteria through a playable rewriting game.
"""

from .criterion import check_cartesian_closed, check_left_adjoint
from .fincat import CatPresentation, FinCat, from_presentation
from .finset import FinFun, FinSet, Workspace, fresh_workspace
from .kan import KanModel, lan_apply, lan_map, product_kan_model, yoneda_kan_model
from .presheaf import (
    Presheaf,
    PresheafModel,
    PsMorphism,
    check_orthogonal,
    colimit,
    enumerate_nat_trans,
    is_iso,
    product,
    pushout,
    tensor,
    yoneda,
)
from .reflection import (
    GameConfig,
    Move,
    MoveKind,
    Trace,
    apply_move,
    auto_play,
    enumerate_moves,
    reflect,
    saturation_step,
)

__all__ = [
    "CatPresentation",
    "FinCat",
    "FinFun",
    "FinSet",
    "GameConfig",
    "KanModel",
    "Move",
    "MoveKind",
    "Presheaf",
    "PresheafModel",
    "PsMorphism",
    "Trace",
    "Workspace",
    "apply_move",
    "auto_play",
    "check_cartesian_closed",
    "check_left_adjoint",
    "check_orthogonal",
    "colimit",
    "enumerate_moves",
    "enumerate_nat_trans",
    "fresh_workspace",
    "from_presentation",
    "is_iso",
    "lan_apply",
    "lan_map",
    "product",
    "product_kan_model",
    "pushout",
    "reflect",
    "saturation_step",
    "tensor",
    "yoneda",
    "yoneda_kan_model",
]

__version__ = "0.1.0"
