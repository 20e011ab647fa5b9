"""The reflection game: move enumeration, move application, saturation,
bounded reflection, and automated play.

A configuration is a presheaf morphism m: X -> Y over a model's base; the
four move kinds rewrite X (domain side) or Y (codomain side) by pushouts and
coequalizers against the model's conditions.  Saturation handles all missing
or duplicated liftings of one side at once as a single colimit; iterating it
is the reflection construction, stopped when a step becomes an isomorphism
or a budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Mapping, Sequence

from . import canon
from .errors import StaleMove
from .presheaf import (
    Diagram,
    Presheaf,
    PresheafModel,
    PsMorphism,
    colimit,
    compose_morphisms,
    coequalizer_ps,
    enumerate_nat_trans,
    factor_cocone,
    identity_morphism,
    is_iso,
    liftings_by_precomposition,
    make_shape,
    pushout,
    same_base,
)


class MoveKind(str, Enum):
    DOM_E = "DomE"
    DOM_U = "DomU"
    COD_E = "CodE"
    COD_U = "CodU"


DOMAIN_KINDS = (MoveKind.DOM_E, MoveKind.DOM_U)
GREEDY_KIND_ORDER = (MoveKind.DOM_U, MoveKind.COD_U, MoveKind.DOM_E, MoveKind.COD_E)


@dataclass(frozen=True)
class GameConfig:
    model: PresheafModel
    m: PsMorphism

    @property
    def x(self) -> Presheaf:
        return self.m.source

    @property
    def y(self) -> Presheaf:
        return self.m.target

    def total_size(self) -> int:
        return self.x.total_size() + self.y.total_size()

    def won(self) -> bool:
        return is_iso(self.m)


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    condition: int
    f: PsMorphism | None = None   # DomE: A -> X; CodE: A -> Y
    h: PsMorphism | None = None   # DomE: B -> Y; DomU/CodU: first lifting
    h2: PsMorphism | None = None  # DomU/CodU: second lifting


@dataclass(frozen=True)
class TraceStep:
    digest: str
    move: Move | None = None
    saturation_side: str | None = None  # "domain" | "codomain"


@dataclass
class Trace:
    initial: GameConfig
    steps: list[TraceStep] = field(default_factory=list)


def config_digest(cfg: GameConfig) -> str:
    conds = canon.conditions_digest(cfg.model.conditions)
    return canon.config_digest(conds, cfg.m)


def _witness_canon(m: PsMorphism) -> list:
    return canon.canon_components(m)


def move_digest(cfg: GameConfig, mv: Move) -> str:
    parts: dict = {
        "config": config_digest(cfg),
        "kind": mv.kind.value,
        "condition": mv.condition,
    }
    for name, w in (("f", mv.f), ("h", mv.h), ("h2", mv.h2)):
        if w is not None:
            parts[name] = _witness_canon(w)
    return canon._digest(parts)


# -- enumeration ---------------------------------------------------------------


def enumerate_moves(
    cfg: GameConfig,
    kinds: Sequence[MoveKind] | None = None,
    conditions: Sequence[int] | None = None,
    productive_only: bool = False,
) -> Iterator[Move]:
    """All currently legal moves, in a deterministic order.

    ``productive_only`` restricts the existential kinds to instances whose
    f admits no lifting on its own side (the saturation side condition);
    without it any f with valid side witnesses is enumerated, matching the
    game's definition.
    """
    kindset = tuple(kinds) if kinds is not None else tuple(MoveKind)
    x, y, m = cfg.x, cfg.y, cfg.m
    for ci, g in enumerate(cfg.model.conditions):
        if conditions is not None and ci not in conditions:
            continue
        a, b = g.source, g.target
        lifts_x = None
        lifts_y = None
        if MoveKind.DOM_E in kindset:
            if productive_only:
                lifts_x = liftings_by_precomposition(g, x)
            lifts_y = liftings_by_precomposition(g, y)
            for f in enumerate_nat_trans(a, x):
                if productive_only and _morphism_key(f) in lifts_x:
                    continue
                key = _morphism_key(compose_morphisms(f, m))
                for h in lifts_y.get(key, []):
                    yield Move(MoveKind.DOM_E, ci, f=f, h=h)
        if MoveKind.DOM_U in kindset:
            if lifts_x is None:
                lifts_x = liftings_by_precomposition(g, x)
            for group in lifts_x.values():
                for i in range(len(group)):
                    for j in range(i + 1, len(group)):
                        h, h2 = group[i], group[j]
                        if compose_morphisms(h, m) == compose_morphisms(h2, m):
                            yield Move(MoveKind.DOM_U, ci, h=h, h2=h2)
        if MoveKind.COD_E in kindset:
            if lifts_y is None and productive_only:
                lifts_y = liftings_by_precomposition(g, y)
            for f in enumerate_nat_trans(a, y):
                if productive_only and _morphism_key(f) in lifts_y:
                    continue
                yield Move(MoveKind.COD_E, ci, f=f)
        if MoveKind.COD_U in kindset:
            if lifts_y is None:
                lifts_y = liftings_by_precomposition(g, y)
            for group in lifts_y.values():
                for i in range(len(group)):
                    for j in range(i + 1, len(group)):
                        yield Move(MoveKind.COD_U, ci, h=group[i], h2=group[j])


def _morphism_key(m: PsMorphism) -> tuple:
    return tuple((o, m.components[o].pairs()) for o in sorted(m.source.base.objects))


# -- application ---------------------------------------------------------------


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise StaleMove(message)


def _apply_full(cfg: GameConfig, mv: Move) -> tuple[GameConfig, str, PsMorphism]:
    """Apply a move; returns (new config, side, step morphism on that side)."""
    model, m = cfg.model, cfg.m
    _require(0 <= mv.condition < len(model.conditions), "unknown condition index")
    g = model.conditions[mv.condition]
    x, y = cfg.x, cfg.y
    if mv.kind is MoveKind.DOM_E:
        _require(mv.f is not None and mv.h is not None, "DomE needs witnesses f and h")
        _require(mv.f.source == g.source and mv.f.target == x, "stale witness f")
        _require(mv.h.source == g.target and mv.h.target == y, "stale witness h")
        _require(compose_morphisms(g, mv.h) == compose_morphisms(mv.f, m),
                 "side condition h o g = m o f fails")
        po = pushout(mv.f, g)
        legs = {po.apex: compose_morphisms(mv.f, m), po.left_node: m, po.right_node: mv.h}
        m2 = factor_cocone(po.colim, legs)
        return GameConfig(model, m2), "domain", po.left
    if mv.kind is MoveKind.DOM_U:
        _require(mv.h is not None and mv.h2 is not None, "DomU needs witnesses h and h2")
        _require(mv.h != mv.h2, "DomU witnesses must differ")
        for w in (mv.h, mv.h2):
            _require(w.source == g.target and w.target == x, "stale witness")
        _require(compose_morphisms(g, mv.h) == compose_morphisms(g, mv.h2),
                 "side condition h o g = h' o g fails")
        _require(compose_morphisms(mv.h, m) == compose_morphisms(mv.h2, m),
                 "side condition m o h = m o h' fails")
        ce = coequalizer_ps(mv.h, mv.h2)
        legs = {ce.pair_node: compose_morphisms(mv.h, m), ce.target_node: m}
        m2 = factor_cocone(ce.colim, legs)
        return GameConfig(model, m2), "domain", ce.quotient
    if mv.kind is MoveKind.COD_E:
        _require(mv.f is not None, "CodE needs witness f")
        _require(mv.f.source == g.source and mv.f.target == y, "stale witness f")
        po = pushout(mv.f, g)
        return GameConfig(model, compose_morphisms(m, po.left)), "codomain", po.left
    if mv.kind is MoveKind.COD_U:
        _require(mv.h is not None and mv.h2 is not None, "CodU needs witnesses h and h2")
        _require(mv.h != mv.h2, "CodU witnesses must differ")
        for w in (mv.h, mv.h2):
            _require(w.source == g.target and w.target == y, "stale witness")
        _require(compose_morphisms(g, mv.h) == compose_morphisms(g, mv.h2),
                 "side condition h o g = h' o g fails")
        ce = coequalizer_ps(mv.h, mv.h2)
        return GameConfig(model, compose_morphisms(m, ce.quotient)), "codomain", ce.quotient
    raise StaleMove(f"unknown move kind {mv.kind!r}")


def apply_move(cfg: GameConfig, mv: Move) -> GameConfig:
    return _apply_full(cfg, mv)[0]


# -- saturation and reflection ---------------------------------------------------


def j_sets(x: Presheaf, model: PresheafModel):
    """The per-step instance sets: missing liftings and duplicated liftings."""
    j_e: list[tuple[int, PsMorphism]] = []
    j_u: list[tuple[int, PsMorphism, PsMorphism]] = []
    for ci, g in enumerate(model.conditions):
        groups = liftings_by_precomposition(g, x)
        for f in enumerate_nat_trans(g.source, x):
            if _morphism_key(f) not in groups:
                j_e.append((ci, f))
        for group in groups.values():
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    j_u.append((ci, group[i], group[j]))
    return j_e, j_u


def _saturation_diagram(x: Presheaf, model: PresheafModel, j_e, j_u):
    """The one-step diagram handling every instance at once.

    Node 0 is x; each missing-lifting instance contributes a condition
    source node with its two legs (into x and into the condition target);
    each duplicate pair contributes the condition target with two parallel
    legs into x.
    """
    n_nodes = 1 + 2 * len(j_e) + len(j_u)
    arrows: list[tuple[int, int]] = []
    for k in range(len(j_e)):
        a_node = 1 + 2 * k
        b_node = 2 + 2 * k
        arrows.append((a_node, 0))
        arrows.append((a_node, b_node))
    u_base = 1 + 2 * len(j_e)
    for k in range(len(j_u)):
        arrows.append((u_base + k, 0))
        arrows.append((u_base + k, 0))
    shape, objs, arrow_ids = make_shape(n_nodes, arrows)
    nodes = {objs[0]: x}
    edges = {}
    ai = 0
    for k, (ci, f) in enumerate(j_e):
        g = model.conditions[ci]
        a_node, b_node = objs[1 + 2 * k], objs[2 + 2 * k]
        nodes[a_node] = g.source
        nodes[b_node] = g.target
        edges[arrow_ids[ai]] = f
        edges[arrow_ids[ai + 1]] = g
        ai += 2
    for k, (ci, h, h2) in enumerate(j_u):
        g = model.conditions[ci]
        b_node = objs[u_base + k]
        nodes[b_node] = g.target
        edges[arrow_ids[ai]] = h
        edges[arrow_ids[ai + 1]] = h2
        ai += 2
    for o in objs:
        edges[shape.ident(o)] = identity_morphism(nodes[o])
    return Diagram(shape, nodes, edges), objs


def saturation_step(x: Presheaf, model: PresheafModel) -> tuple[Presheaf, PsMorphism]:
    """One reflection step: returns the new presheaf and the step morphism."""
    same_base(x, model)
    j_e, j_u = j_sets(x, model)
    d, objs = _saturation_diagram(x, model, j_e, j_u)
    col = colimit(d)
    return col.presheaf, col.coprojections[objs[0]]


@dataclass(frozen=True)
class ReflectOutcome:
    status: str  # "converged" | "budget_exhausted"
    result: Presheaf
    unit: PsMorphism
    steps_used: int

    @property
    def converged(self) -> bool:
        return self.status == "converged"


def reflect(x: Presheaf, model: PresheafModel, max_steps: int = 100,
            max_elements: int | None = 400) -> ReflectOutcome:
    """Iterate saturation until the step is an isomorphism or the budget ends.

    A step is an isomorphism exactly when both instance sets are empty, so
    convergence is detected without building the extra colimit.  Both guards
    are checked before enumerating instances: enumeration cost explodes well
    before memory does on diverging inputs, so a result that has already
    spent its budget is returned as-is rather than paying for one more
    convergence check.
    """
    same_base(x, model)
    cur = x
    unit = identity_morphism(x)
    steps = 0
    while True:
        if max_elements is not None and cur.total_size() > max_elements:
            return ReflectOutcome("budget_exhausted", cur, unit, steps)
        j_e, j_u = j_sets(cur, model)
        if not j_e and not j_u:
            return ReflectOutcome("converged", cur, unit, steps)
        if steps >= max_steps:
            return ReflectOutcome("budget_exhausted", cur, unit, steps)
        d, objs = _saturation_diagram(cur, model, j_e, j_u)
        col = colimit(d)
        step = col.coprojections[objs[0]]
        unit = compose_morphisms(unit, step)
        cur = col.presheaf
        steps += 1


# -- automated play ---------------------------------------------------------------


class PlayStatus(str, Enum):
    WON = "won"
    INCONCLUSIVE = "inconclusive"


@dataclass
class PlayOutcome:
    status: PlayStatus
    trace: Trace
    final: GameConfig
    rounds_used: int
    domain_converged: bool | None = None
    codomain_converged: bool | None = None
    guard: str | None = None

    @property
    def won(self) -> bool:
        return self.status is PlayStatus.WON


def _transport_move(mv: Move, t_x: PsMorphism, t_y: PsMorphism) -> Move | None:
    """Recompose a move's witnesses along accumulated step morphisms.

    Unicity moves whose witnesses become equal are dropped (they would be
    no-ops); existential witnesses stay valid because the side conditions
    are preserved by composition with the step morphisms.
    """
    if mv.kind is MoveKind.DOM_E:
        return Move(mv.kind, mv.condition,
                    f=compose_morphisms(mv.f, t_x), h=compose_morphisms(mv.h, t_y))
    if mv.kind is MoveKind.DOM_U:
        h, h2 = compose_morphisms(mv.h, t_x), compose_morphisms(mv.h2, t_x)
        if h == h2:
            return None
        return Move(mv.kind, mv.condition, h=h, h2=h2)
    if mv.kind is MoveKind.COD_E:
        return Move(mv.kind, mv.condition, f=compose_morphisms(mv.f, t_y))
    h, h2 = compose_morphisms(mv.h, t_y), compose_morphisms(mv.h2, t_y)
    if h == h2:
        return None
    return Move(mv.kind, mv.condition, h=h, h2=h2)


def auto_play(
    cfg: GameConfig,
    strategy: str = "greedy",
    budget: int = 100,
    kinds: Sequence[MoveKind] | None = None,
    conditions: Sequence[int] | None = None,
    max_elements: int | None = None,
    max_moves_per_round: int = 400,
    schedule: str = "codomain_first",
) -> PlayOutcome:
    """Play the game automatically.

    greedy: per round, enumerate and apply all currently available moves of
    each kind in the order DomU, CodU, DomE, CodE, with the productive-only
    filter on the existential kinds; kind/condition restrictions apply.

    exhaustive: all instances handled at once per step. The default
    "codomain_first" schedule saturates the codomain to its reflection and
    then the domain fibered over it; the "interleaved" schedule alternates
    one codomain batch and one playable-moves domain batch per round. When
    both sides converge (no instances remain) the final configuration is the
    fully reflected morphism either way. The exhaustive default size guard
    is much tighter because all-at-once steps grow configurations far faster
    than single moves do.

    Exceeding a guard is reported as an Inconclusive outcome with the guard
    named; it is never a negative verdict.
    """
    if strategy == "greedy":
        if max_elements is None:
            max_elements = 400
        return _greedy_play(cfg, budget, kinds, conditions, max_elements, max_moves_per_round)
    if strategy == "exhaustive":
        if max_elements is None:
            max_elements = 120
        if schedule == "codomain_first":
            return _exhaustive_play(cfg, budget, max_elements)
        if schedule == "interleaved":
            return _interleaved_play(cfg, budget, max_elements)
        raise ValueError(f"unknown schedule {schedule!r}")
    raise ValueError(f"unknown strategy {strategy!r}")


def _greedy_play(cfg, budget, kinds, conditions, max_elements, max_moves_per_round):
    trace = Trace(cfg)
    if cfg.won():
        return PlayOutcome(PlayStatus.WON, trace, cfg, 0)
    kind_order = [k for k in GREEDY_KIND_ORDER if kinds is None or k in kinds]
    for rnd in range(budget):
        progressed = False
        for kind in kind_order:
            if cfg.total_size() > max_elements:
                return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, rnd,
                                   guard="size guard exceeded")
            moves = []
            for mv in enumerate_moves(cfg, kinds=[kind], conditions=conditions,
                                      productive_only=kind in (MoveKind.DOM_E, MoveKind.COD_E)):
                moves.append(mv)
                if len(moves) > max_moves_per_round:
                    return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, rnd,
                                       guard="move guard exceeded")
            t_x = identity_morphism(cfg.x)
            t_y = identity_morphism(cfg.y)
            for mv in moves:
                mv2 = _transport_move(mv, t_x, t_y)
                if mv2 is None:
                    continue
                cfg, side, step = _apply_full(cfg, mv2)
                progressed = True
                trace.steps.append(TraceStep(config_digest(cfg), move=mv2))
                if side == "domain":
                    t_x = compose_morphisms(t_x, step)
                else:
                    t_y = compose_morphisms(t_y, step)
                if cfg.won():
                    return PlayOutcome(PlayStatus.WON, trace, cfg, rnd + 1)
                if cfg.total_size() > max_elements:
                    return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, rnd,
                                       guard="size guard exceeded")
        if not progressed:
            return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, rnd,
                               guard="no moves available")
    return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, budget)


def _domain_step_fibered(cfg: GameConfig, j_e, j_u) -> tuple[GameConfig, PsMorphism]:
    """One domain-side saturation step whose legs land in the (orthogonal) codomain."""
    model, m = cfg.model, cfg.m
    d, objs = _saturation_diagram(cfg.x, model, j_e, j_u)
    col = colimit(d)
    legs = {objs[0]: m}
    lifts_cache: dict[int, dict] = {}
    for k, (ci, f) in enumerate(j_e):
        g = model.conditions[ci]
        if ci not in lifts_cache:
            lifts_cache[ci] = liftings_by_precomposition(g, cfg.y)
        key = _morphism_key(compose_morphisms(f, m))
        lifts = lifts_cache[ci].get(key, [])
        if len(lifts) != 1:
            raise StaleMove("codomain is not orthogonal; unique lifting missing")
        legs[objs[2 + 2 * k]] = lifts[0]
        legs[objs[1 + 2 * k]] = compose_morphisms(f, m)
    u_base = 1 + 2 * len(j_e)
    for k, (ci, h, h2) in enumerate(j_u):
        legs[objs[u_base + k]] = compose_morphisms(h, m)
    m2 = factor_cocone(col, legs)
    return GameConfig(model, m2), col.coprojections[objs[0]]


def _domain_step_playable(cfg: GameConfig, j_e, j_u):
    """A domain batch restricted to instances that are playable game moves:
    existential instances with at least one lifting into the current codomain
    (the first in enumeration order is chosen), unicity instances whose pair
    the codomain cannot distinguish.  Returns None when nothing is playable."""
    model, m = cfg.model, cfg.m
    lifts_cache: dict[int, dict] = {}
    playable_e = []
    chosen_lifts = []
    for ci, f in j_e:
        g = model.conditions[ci]
        if ci not in lifts_cache:
            lifts_cache[ci] = liftings_by_precomposition(g, cfg.y)
        lifts = lifts_cache[ci].get(_morphism_key(compose_morphisms(f, m)), [])
        if lifts:
            playable_e.append((ci, f))
            chosen_lifts.append(lifts[0])
    playable_u = [
        (ci, h, h2) for ci, h, h2 in j_u
        if compose_morphisms(h, m) == compose_morphisms(h2, m)
    ]
    if not playable_e and not playable_u:
        return None
    d, objs = _saturation_diagram(cfg.x, model, playable_e, playable_u)
    col = colimit(d)
    legs = {objs[0]: m}
    for k, (ci, f) in enumerate(playable_e):
        legs[objs[1 + 2 * k]] = compose_morphisms(f, m)
        legs[objs[2 + 2 * k]] = chosen_lifts[k]
    u_base = 1 + 2 * len(playable_e)
    for k, (ci, h, h2) in enumerate(playable_u):
        legs[objs[u_base + k]] = compose_morphisms(h, m)
    m2 = factor_cocone(col, legs)
    return GameConfig(model, m2), col.coprojections[objs[0]]


def _exhaustive_play(cfg, budget, max_elements):
    trace = Trace(cfg)
    model = cfg.model
    rounds = 0
    codomain_converged = False
    domain_converged = False
    # phase 1: reflect the codomain
    while rounds < budget:
        if cfg.total_size() > max_elements:
            return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, rounds,
                               codomain_converged=False, guard="size guard exceeded")
        j_e, j_u = j_sets(cfg.y, model)
        if not j_e and not j_u:
            codomain_converged = True
            break
        d, objs = _saturation_diagram(cfg.y, model, j_e, j_u)
        col = colimit(d)
        eps = col.coprojections[objs[0]]
        cfg = GameConfig(model, compose_morphisms(cfg.m, eps))
        trace.steps.append(TraceStep(config_digest(cfg), saturation_side="codomain"))
        rounds += 1
    if not codomain_converged:
        return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, rounds,
                           codomain_converged=False, guard="budget exhausted")
    # phase 2: reflect the domain, fibered over the reflected codomain
    while rounds < budget:
        if cfg.total_size() > max_elements:
            return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, rounds,
                               codomain_converged=True, domain_converged=False,
                               guard="size guard exceeded")
        j_e, j_u = j_sets(cfg.x, model)
        if not j_e and not j_u:
            domain_converged = True
            break
        cfg, _ = _domain_step_fibered(cfg, j_e, j_u)
        trace.steps.append(TraceStep(config_digest(cfg), saturation_side="domain"))
        rounds += 1
    if not domain_converged:
        return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, rounds,
                           codomain_converged=True, domain_converged=False,
                           guard="budget exhausted")
    status = PlayStatus.WON if cfg.won() else PlayStatus.INCONCLUSIVE
    return PlayOutcome(status, trace, cfg, rounds,
                       domain_converged=True, codomain_converged=True)


def _interleaved_play(cfg, budget, max_elements):
    trace = Trace(cfg)
    model = cfg.model
    if cfg.won():
        return PlayOutcome(PlayStatus.WON, trace, cfg, 0)
    for rnd in range(budget):
        if cfg.total_size() > max_elements:
            return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, rnd,
                               guard="size guard exceeded")
        progressed = False
        je_y, ju_y = j_sets(cfg.y, model)
        if je_y or ju_y:
            d, objs = _saturation_diagram(cfg.y, model, je_y, ju_y)
            col = colimit(d)
            cfg = GameConfig(model, compose_morphisms(cfg.m, col.coprojections[objs[0]]))
            trace.steps.append(TraceStep(config_digest(cfg), saturation_side="codomain"))
            progressed = True
            if cfg.won():
                return PlayOutcome(PlayStatus.WON, trace, cfg, rnd + 1)
        if cfg.total_size() > max_elements:
            return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, rnd,
                               guard="size guard exceeded")
        je_x, ju_x = j_sets(cfg.x, model)
        stepped = _domain_step_playable(cfg, je_x, ju_x)
        if stepped is not None:
            cfg, _ = stepped
            trace.steps.append(TraceStep(config_digest(cfg), saturation_side="domain_playable"))
            progressed = True
            if cfg.won():
                return PlayOutcome(PlayStatus.WON, trace, cfg, rnd + 1)
        if not progressed:
            # no instances were playable; convergence flags are exact J-set facts
            dom_conv = not je_x and not ju_x
            cod_conv = not je_y and not ju_y
            status = PlayStatus.WON if (dom_conv and cod_conv and cfg.won()) \
                else PlayStatus.INCONCLUSIVE
            return PlayOutcome(status, trace, cfg, rnd,
                               domain_converged=dom_conv, codomain_converged=cod_conv,
                               guard=None if (dom_conv and cod_conv) else "no playable instances")
    return PlayOutcome(PlayStatus.INCONCLUSIVE, trace, cfg, budget, guard="budget exhausted")


def witness_positions(m: PsMorphism) -> dict[int, list[int]]:
    """Positional encoding of a witness: per source object (by position in
    the base's object order), the list of image positions in the target.

    Positions survive re-running a construction in another workspace, since
    canonical element order is id order and ids are allocated
    deterministically."""
    base = m.source.base
    out: dict[int, list[int]] = {}
    for oi, o in enumerate(base.objects):
        tgt_pos = {e: i for i, e in enumerate(m.target.sets[o])}
        out[oi] = [tgt_pos[m.components[o](e)] for e in m.source.sets[o]]
    return out


def witness_from_positions(source: Presheaf, target: Presheaf,
                           positions: Mapping[int, Sequence[int]]) -> PsMorphism:
    base = source.base
    comps = {}
    for oi, o in enumerate(base.objects):
        tgt = list(target.sets[o])
        src = list(source.sets[o])
        images = positions.get(oi, [])
        if len(images) != len(src):
            raise StaleMove(f"witness arity mismatch at object position {oi}")
        try:
            mapping = {e: tgt[k] for e, k in zip(src, images)}
        except IndexError:
            raise StaleMove("witness image position out of range") from None
        from .finset import FinFun

        comps[o] = FinFun(source.sets[o], target.sets[o], mapping)
    return PsMorphism(source, target, comps)


def rebind_move(mv: Move, cfg: GameConfig) -> Move:
    """Re-express a move's witnesses against a structurally equal configuration.

    Needed whenever a trace is replayed: the replay allocates fresh ids, so
    the recorded witness objects are re-encoded positionally and decoded
    against the replayed configuration."""
    g = cfg.model.conditions[mv.condition]

    def rb(w: PsMorphism | None, source: Presheaf, target: Presheaf):
        if w is None:
            return None
        return witness_from_positions(source, target, witness_positions(w))

    if mv.kind is MoveKind.DOM_E:
        return Move(mv.kind, mv.condition,
                    f=rb(mv.f, g.source, cfg.x), h=rb(mv.h, g.target, cfg.y))
    if mv.kind is MoveKind.DOM_U:
        return Move(mv.kind, mv.condition,
                    h=rb(mv.h, g.target, cfg.x), h2=rb(mv.h2, g.target, cfg.x))
    if mv.kind is MoveKind.COD_E:
        return Move(mv.kind, mv.condition, f=rb(mv.f, g.source, cfg.y))
    return Move(mv.kind, mv.condition,
                h=rb(mv.h, g.target, cfg.y), h2=rb(mv.h2, g.target, cfg.y))


def replay_trace(trace: Trace) -> tuple[bool, GameConfig, list[str]]:
    """Re-run a trace from its initial configuration, checking every digest."""
    cfg = trace.initial
    problems: list[str] = []
    for i, step in enumerate(trace.steps):
        if step.move is not None:
            cfg = apply_move(cfg, rebind_move(step.move, cfg))
        elif step.saturation_side == "codomain":
            j_e, j_u = j_sets(cfg.y, cfg.model)
            d, objs = _saturation_diagram(cfg.y, cfg.model, j_e, j_u)
            col = colimit(d)
            cfg = GameConfig(cfg.model, compose_morphisms(cfg.m, col.coprojections[objs[0]]))
        elif step.saturation_side == "domain":
            j_e, j_u = j_sets(cfg.x, cfg.model)
            cfg, _ = _domain_step_fibered(cfg, j_e, j_u)
        elif step.saturation_side == "domain_playable":
            j_e, j_u = j_sets(cfg.x, cfg.model)
            stepped = _domain_step_playable(cfg, j_e, j_u)
            if stepped is None:
                problems.append(f"step {i}: no playable instances on replay")
                break
            cfg, _ = stepped
        else:
            problems.append(f"step {i}: neither a move nor a saturation marker")
            break
        got = config_digest(cfg)
        if got != step.digest:
            problems.append(f"step {i}: digest mismatch")
            break
    return (not problems, cfg, problems)
