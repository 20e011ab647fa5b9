"""The left-adjointness criterion and the cartesian-closure criterion.

Both are sufficient-only: a report can hold, fail, or stay inconclusive.
Failure is only ever asserted when it is exact — either the target model has
no conditions (so the extension is not reflected at all), or both endpoint
reflections converged and the fully reflected morphism is not an
isomorphism.  An inconclusive game is never reported as a failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .errors import BaseMismatch
from .finset import ElemId
from .kan import KanModel, lan_map, product_kan_model
from .presheaf import PresheafModel, PsMorphism, is_iso
from .reflection import GameConfig, PlayStatus, Trace, auto_play


class VerdictStatus(str, Enum):
    ISO_ALREADY = "iso_already"
    WON_BY_GAME = "won_by_game"
    DECIDED_NOT_ISO = "decided_not_iso"
    INCONCLUSIVE = "inconclusive"


class Summary(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ConditionVerdict:
    condition_index: int
    condition_name: str
    status: VerdictStatus
    lan_image: PsMorphism
    domain_sizes: dict[ElemId, int]
    codomain_sizes: dict[ElemId, int]
    trace: Trace | None = None
    guard: str | None = None


@dataclass
class CriterionReport:
    verdicts: list[ConditionVerdict]
    summary: Summary

    @property
    def holds(self) -> bool:
        return self.summary is Summary.HOLDS


def _summarize(verdicts: Sequence[ConditionVerdict]) -> Summary:
    if any(v.status is VerdictStatus.DECIDED_NOT_ISO for v in verdicts):
        return Summary.FAILS
    if all(v.status in (VerdictStatus.ISO_ALREADY, VerdictStatus.WON_BY_GAME)
           for v in verdicts):
        return Summary.HOLDS
    return Summary.INCONCLUSIVE


def check_left_adjoint(
    kan: KanModel,
    source: PresheafModel,
    target: PresheafModel,
    strategy: str = "greedy",
    budget: int = 100,
    max_elements: int | None = None,
) -> CriterionReport:
    """Check that the extension of the Kan model reflects every source
    condition to an isomorphism.

    Holding is sufficient for the modeled functor to be a left adjoint;
    failing is only reported when exact (see module docstring)."""
    if kan.source != source.base or kan.target != target.base:
        raise BaseMismatch("kan model's bases do not match the given models")
    verdicts: list[ConditionVerdict] = []
    for ci, g in enumerate(source.conditions):
        m = lan_map(kan, g)
        dom_sizes = {o: len(m.source.sets[o]) for o in target.base.objects}
        cod_sizes = {o: len(m.target.sets[o]) for o in target.base.objects}
        if is_iso(m):
            status, trace, guard = VerdictStatus.ISO_ALREADY, None, None
        elif not target.conditions:
            # no reflection happens on the target side, so the verdict is exact
            status, trace, guard = VerdictStatus.DECIDED_NOT_ISO, None, None
        else:
            play = auto_play(GameConfig(target, m), strategy=strategy, budget=budget,
                             max_elements=max_elements)
            trace, guard = play.trace, play.guard
            if play.status is PlayStatus.WON:
                status = VerdictStatus.WON_BY_GAME
            elif (strategy == "exhaustive" and play.domain_converged
                  and play.codomain_converged and not play.final.won()):
                # both reflections were fully computed, so the reflected
                # morphism itself failed to be an isomorphism
                status = VerdictStatus.DECIDED_NOT_ISO
            else:
                status = VerdictStatus.INCONCLUSIVE
        verdicts.append(ConditionVerdict(
            condition_index=ci,
            condition_name=source.name_of(ci),
            status=status,
            lan_image=m,
            domain_sizes=dom_sizes,
            codomain_sizes=cod_sizes,
            trace=trace,
            guard=guard,
        ))
    return CriterionReport(verdicts, _summarize(verdicts))


@dataclass
class ClosureReport:
    per_object: dict[ElemId, CriterionReport]
    summary: Summary


def check_cartesian_closed(
    model: PresheafModel,
    strategy: str = "greedy",
    budget: int = 100,
    max_elements: int | None = None,
) -> ClosureReport:
    """Run the left-adjointness criterion for the product Kan model at every
    base object; all of them holding is sufficient for cartesian closure."""
    per_object: dict[ElemId, CriterionReport] = {}
    for c in model.base.objects:
        kan = product_kan_model(model, c=c)
        per_object[c] = check_left_adjoint(kan, model, model, strategy=strategy,
                                           budget=budget, max_elements=max_elements)
    if all(rep.summary is Summary.HOLDS for rep in per_object.values()):
        summary = Summary.HOLDS
    elif any(rep.summary is Summary.FAILS for rep in per_object.values()):
        summary = Summary.FAILS
    else:
        summary = Summary.INCONCLUSIVE
    return ClosureReport(per_object, summary)
