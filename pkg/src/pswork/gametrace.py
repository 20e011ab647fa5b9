"""Serialization and replay of game traces.

Witnesses inside a trace are stored positionally (object position in the
base, element position in each value set), because elements created during
play have no user-facing names; deterministic construction makes positions
stable across replays in fresh workspaces.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .formats import (
    ModelBinding,
    NamedMorphism,
    envelope,
    parse_model_payload,
    parse_morphism_payload,
    serialize_model,
    serialize_morphism,
)
from .presheaf import compose_morphisms, colimit
from .reflection import (
    GameConfig,
    Move,
    MoveKind,
    Trace,
    _domain_step_fibered,
    _domain_step_playable,
    _saturation_diagram,
    apply_move,
    config_digest,
    j_sets,
    witness_from_positions,
    witness_positions,
)


@dataclass
class TraceStepDoc:
    digest: str
    kind: str | None = None         # move kind value when a move step
    condition: int | None = None
    witnesses: dict | None = None   # name -> {object position -> [element positions]}
    side: str | None = None         # saturation side otherwise


@dataclass
class TraceDocument:
    model: ModelBinding
    initial: NamedMorphism
    steps: list[TraceStepDoc]

    def initial_config(self) -> GameConfig:
        return GameConfig(self.model.model, self.initial.morphism)


def _encode_positions(positions: dict[int, list[int]]) -> dict:
    return {str(k): list(v) for k, v in positions.items()}


def _decode_positions(payload: dict, location: str) -> dict[int, list[int]]:
    try:
        return {int(k): [int(i) for i in v] for k, v in payload.items()}
    except (ValueError, AttributeError, TypeError):
        raise ParseError(location, "witness positions must map indices to lists") from None


def serialize_trace(model: ModelBinding, initial: NamedMorphism, trace: Trace) -> dict:
    steps = []
    for step in trace.steps:
        if step.move is not None:
            witnesses = {}
            for name, w in (("f", step.move.f), ("h", step.move.h), ("h2", step.move.h2)):
                if w is not None:
                    witnesses[name] = _encode_positions(witness_positions(w))
            steps.append({
                "type": "move",
                "kind": step.move.kind.value,
                "condition": step.move.condition,
                "witnesses": witnesses,
                "digest": step.digest,
            })
        else:
            steps.append({
                "type": "saturate",
                "side": step.saturation_side,
                "digest": step.digest,
            })
    return {
        "model": serialize_model(model),
        "initial": serialize_morphism(initial),
        "steps": steps,
    }


def trace_document_envelope(model: ModelBinding, initial: NamedMorphism, trace: Trace) -> dict:
    return envelope("trace", serialize_trace(model, initial, trace))


def parse_trace_payload(payload: dict, location: str = "$") -> TraceDocument:
    if "model" not in payload:
        raise ParseError(f"{location}.model", "missing")
    model = parse_model_payload(payload["model"], f"{location}.model")
    if "initial" not in payload:
        raise ParseError(f"{location}.initial", "missing")
    initial = parse_morphism_payload(payload["initial"], model.base, f"{location}.initial")
    steps: list[TraceStepDoc] = []
    for i, s in enumerate(payload.get("steps", [])):
        loc = f"{location}.steps[{i}]"
        if s.get("type") == "move":
            kind = s.get("kind")
            if kind not in [k.value for k in MoveKind]:
                raise ParseError(f"{loc}.kind", f"unknown move kind {kind!r}")
            if not isinstance(s.get("condition"), int):
                raise ParseError(f"{loc}.condition", "must be an integer index")
            if s["condition"] >= len(model.model.conditions) or s["condition"] < 0:
                raise ParseError(f"{loc}.condition", "condition index out of range")
            witnesses = {
                name: _decode_positions(table, f"{loc}.witnesses.{name}")
                for name, table in s.get("witnesses", {}).items()
            }
            steps.append(TraceStepDoc(digest=s.get("digest", ""), kind=kind,
                                      condition=s["condition"], witnesses=witnesses))
        elif s.get("type") == "saturate":
            side = s.get("side")
            if side not in ("domain", "codomain", "domain_playable"):
                raise ParseError(f"{loc}.side",
                                 "must be 'domain', 'codomain' or 'domain_playable'")
            steps.append(TraceStepDoc(digest=s.get("digest", ""), side=side))
        else:
            raise ParseError(f"{loc}.type", "must be 'move' or 'saturate'")
    return TraceDocument(model, initial, steps)


def _move_from_step(step: TraceStepDoc, cfg: GameConfig) -> Move:
    kind = MoveKind(step.kind)
    g = cfg.model.conditions[step.condition]
    w = step.witnesses or {}

    def get(name, source, target):
        if name not in w:
            return None
        return witness_from_positions(source, target, w[name])

    if kind is MoveKind.DOM_E:
        return Move(kind, step.condition, f=get("f", g.source, cfg.x),
                    h=get("h", g.target, cfg.y))
    if kind is MoveKind.DOM_U:
        return Move(kind, step.condition, h=get("h", g.target, cfg.x),
                    h2=get("h2", g.target, cfg.x))
    if kind is MoveKind.COD_E:
        return Move(kind, step.condition, f=get("f", g.source, cfg.y))
    return Move(kind, step.condition, h=get("h", g.target, cfg.y),
                h2=get("h2", g.target, cfg.y))


def replay_document(doc: TraceDocument) -> tuple[bool, GameConfig, list[str]]:
    """Replay a parsed trace document, checking each step's digest."""
    cfg = doc.initial_config()
    problems: list[str] = []
    for i, step in enumerate(doc.steps):
        if step.kind is not None:
            cfg = apply_move(cfg, _move_from_step(step, cfg))
        elif step.side == "codomain":
            je, ju = j_sets(cfg.y, cfg.model)
            d, objs = _saturation_diagram(cfg.y, cfg.model, je, ju)
            col = colimit(d)
            cfg = GameConfig(cfg.model, compose_morphisms(cfg.m, col.coprojections[objs[0]]))
        elif step.side == "domain_playable":
            je, ju = j_sets(cfg.x, cfg.model)
            stepped = _domain_step_playable(cfg, je, ju)
            if stepped is None:
                problems.append(f"step {i}: no playable instances on replay")
                break
            cfg, _ = stepped
        else:
            je, ju = j_sets(cfg.x, cfg.model)
            cfg, _ = _domain_step_fibered(cfg, je, ju)
        got = config_digest(cfg)
        if step.digest and got != step.digest:
            problems.append(f"step {i}: digest mismatch (got {got[:12]}…)")
            break
    return (not problems, cfg, problems)
