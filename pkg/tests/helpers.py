"""Shared independent oracles and small builders used across the test suite.

The oracles here deliberately avoid the package's own union-find and
enumeration machinery so they stay an independent check.
"""

from __future__ import annotations

import itertools

from pswork import finset
from pswork.finset import FinFun, FinSet
from pswork.presheaf import Presheaf, PsMorphism


def naive_equiv_classes(elems, pairs):
    """Smallest equivalence relation containing the pairs, by naive merging."""
    classes = [{e} for e in elems]
    for a, b in pairs:
        ca = next(c for c in classes if a in c)
        cb = next(c for c in classes if b in c)
        if ca is not cb:
            classes.remove(ca)
            classes.remove(cb)
            classes.append(ca | cb)
    return {frozenset(c) for c in classes}


def all_families(x: Presheaf, y: Presheaf):
    """Every per-object family of functions X(c) -> Y(c), no pruning."""
    objs = list(x.base.objects)
    per_obj = [list(finset.all_functions(x.sets[c], y.sets[c])) for c in objs]
    for combo in itertools.product(*per_obj):
        yield dict(zip(objs, combo))


def is_natural_family(x: Presheaf, y: Presheaf, comps) -> bool:
    for f in x.base.morphisms:
        c, c2 = x.base.src(f), x.base.tgt(f)
        for e in x.sets[c2]:
            if comps[c](x.actions[f](e)) != y.actions[f](comps[c2](e)):
                return False
    return True


def brute_force_nat_trans(x: Presheaf, y: Presheaf):
    """Independent (exponential) enumeration of natural transformations."""
    for comps in all_families(x, y):
        if is_natural_family(x, y, comps):
            yield PsMorphism(x, y, comps)


def brute_force_lift_count(x: Presheaf, g: PsMorphism, f: PsMorphism) -> int:
    """Number of h: B -> x with h o g = f, by brute force."""
    n = 0
    for h in brute_force_nat_trans(g.target, x):
        if all(
            h.components[c](g.components[c](a)) == f.components[c](a)
            for c in x.base.objects
            for a in g.source.sets[c]
        ):
            n += 1
    return n
