"""Saturation fixpoints and the first-order separability decision.

Three equivalent rules drive the fixpoint on downset-closed families:

  omega   add T^w | T^(w+1) for every maximal set T
  group   add the union of every maximal subgroup of the semigroup
          generated by the current maximal sets
  hclass  add the union of every H-class of that semigroup

Each round multiplies all pairs of maximal sets, applies the variant rule,
and renormalizes the antichain; the fixpoint is reached when a full round
adds nothing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import automata
from .errors import ResourceLimitError
from .fologic import eval_sentence
from .semigroups import FiniteSemigroup, h_classes
from .subsets import (
    DEFAULT_SUBSET_CAP,
    SubsetFamily,
    _Antichain,
    elements_of,
    set_omega_closure,
    set_product,
    subsemigroup_closure,
)

VARIANTS = ("omega", "group", "hclass")


@dataclass
class SaturationResult:
    family: SubsetFamily
    variant: str
    rounds: int
    rule_trace: list | None = None


@dataclass(frozen=True)
class SeparabilityVerdict:
    """Outcome of the separability test.

    When not separable, `witness_pair` is the least pair (t1, t2) of accepted
    elements that no first-order language can split, and `witness_set` is a
    maximal saturated set exhibiting it.
    """

    separable: bool
    witness_pair: tuple | None = None
    witness_set: int | None = None


def saturate_family(sg, seeds, variant="omega", *, max_antichain=DEFAULT_SUBSET_CAP,
                    trace=False):
    """Least downset-closed family containing `seeds`, closed under set
    products and the variant rule."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown saturation variant {variant!r}")
    acc = _Antichain()
    trace_log = [] if trace else None
    for s in seeds:
        acc.add(s)
    prod_seen = set()
    omega_seen = set()
    rounds = 0
    while True:
        rounds += 1
        changed = False
        current = sorted(acc.maximal)
        for t1, t2 in itertools.product(current, current):
            key = (t1, t2)
            if key in prod_seen:
                continue
            prod_seen.add(key)
            p = set_product(sg, t1, t2)
            if acc.add(p):
                changed = True
                if trace_log is not None:
                    trace_log.append(("product", (t1, t2), p))
        if variant == "omega":
            for t in sorted(acc.maximal):
                if t in omega_seen:
                    continue
                omega_seen.add(t)
                c = set_omega_closure(sg, t)
                if acc.add(c):
                    changed = True
                    if trace_log is not None:
                        trace_log.append(("omega", (t,), c))
        else:
            for rule, operands, produced in _variant_unions(sg, sorted(acc.maximal),
                                                            variant, max_antichain):
                if acc.add(produced):
                    changed = True
                    if trace_log is not None:
                        trace_log.append((rule, operands, produced))
        if len(acc.maximal) > max_antichain:
            raise ResourceLimitError(
                f"antichain exceeded {max_antichain} sets "
                f"(variant {variant}, round {rounds})",
                limit=max_antichain, context=(variant, rounds))
        if not changed:
            break
    return SaturationResult(
        family=acc.snapshot(sg.size), variant=variant, rounds=rounds,
        rule_trace=trace_log)


def _variant_unions(sg, maximal, variant, cap):
    """Union sets contributed by the group/hclass rule for one round.

    The rule ranges over the subsemigroup of 2^S generated by the current
    maximal sets (products of non-maximal members are dominated by these).
    """
    closure = subsemigroup_closure(sg, maximal, cap=cap)
    if not closure:
        return
    index = {m: i for i, m in enumerate(closure)}
    n = len(closure)
    table = [0] * (n * n)
    for i, x in enumerate(closure):
        row = i * n
        for j, y in enumerate(closure):
            table[row + j] = index[set_product(sg, x, y)]
    fam_sg = FiniteSemigroup(n, table, check=False)
    part = h_classes(fam_sg)
    for cls, is_group in zip(part.classes, part.is_group):
        if variant == "group" and not is_group:
            continue
        union = 0
        for i in cls:
            union |= closure[i]
        rule = "group" if variant == "group" else "hclass"
        yield rule, tuple(closure[i] for i in cls), union


def saturate(morphism, variant="omega", *, max_antichain=DEFAULT_SUBSET_CAP,
             trace=False):
    """Saturation of a recognizing morphism: seeds are the singletons of all
    elements (the morphism is surjective)."""
    seeds = [1 << s for s in range(morphism.semigroup.size)]
    return saturate_family(morphism.semigroup, seeds, variant,
                           max_antichain=max_antichain, trace=trace)


def is_fo_separable(morphism, f1_mask, f2_mask, variant="omega", *,
                    saturation=None, max_antichain=DEFAULT_SUBSET_CAP):
    """Decide first-order separability of the two languages recognized by
    `morphism` with accepting sets `f1_mask` and `f2_mask`.

    Not separable iff some pair {t1, t2} with t1 accepted by the first
    language and t2 by the second lies in the saturated family.
    """
    if saturation is None:
        saturation = saturate(morphism, variant, max_antichain=max_antichain)
    family = saturation.family
    for t1 in elements_of(f1_mask):
        for t2 in elements_of(f2_mask):
            pair = (1 << t1) | (1 << t2)
            dom = family.dominating(pair)
            if dom is not None:
                return SeparabilityVerdict(
                    separable=False, witness_pair=(t1, t2), witness_set=dom)
    return SeparabilityVerdict(separable=True)


def is_fo_definable(nfa, *, element_cap=None):
    """Schutzenberger's criterion: definable iff the syntactic semigroup is
    aperiodic."""
    kwargs = {} if element_cap is None else {"element_cap": element_cap}
    morphism, _ = automata.syntactic_semigroup(nfa, **kwargs)
    return morphism.semigroup.is_aperiodic()


def imprint_of_partition(morphism, blocks, bound):
    """Bounded-sample imprint of a formula partition on a morphism.

    Each block contributes the image of its members among words of length at
    most `bound`; the family is the downset generated by these images.  An
    under-approximation of the true imprint, converging from below.
    """
    if bound < 1:
        raise ValueError("sample bound must be >= 1")
    alphabet = tuple(morphism.alphabet)
    images = [0] * len(blocks)
    for length in range(1, bound + 1):
        for tup in itertools.product(alphabet, repeat=length):
            word = "".join(tup)
            img = morphism.image_of_word(word)
            for i, phi in enumerate(blocks):
                if eval_sentence(phi, word):
                    images[i] |= 1 << img
    return SubsetFamily.from_sets(morphism.semigroup.size, images)
