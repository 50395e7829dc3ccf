"""Separator synthesis: the constructive optimal partition and the separator
formula built from it.

The partition of B+ is built by recursion on (index of the generated subset
semigroup, alphabet size):

  unary     one letter: blocks {b}, ..., {b^(m-1)}, {b^j : j >= m} with m the
            idempotent exponent of the letter image
  tame      every letter image stabilizes the union on both sides: one block B+
  non-tame  pick the least unstable letter b, partition prefixes (C+ by
            alphabet recursion), suffixes (b+ by the unary case) and infixes
            ((b+C+)+ through an abstraction alphabet of image unions, by index
            recursion), then assemble the seven concatenation shapes

Each block carries the formula that defines it and an image union that
belongs to the saturated family and contains the image of every member word.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import FosepError, NotSeparableError, ResourceLimitError
from .fologic import (
    FALSE,
    TRUE,
    And,
    Equal,
    Exists,
    Forall,
    LetterAtom,
    Less,
    Not,
    conj,
    disj,
    eval_sentence,
    formula_letters,
    implies,
    mirror,
    rank,
    relativize,
    simplify,
    transform_abstract,
    var_le,
)
from .saturation import is_fo_separable, saturate
from .subsets import (
    elements_of,
    set_cycle_union,
    set_power,
    set_product,
    subsemigroup_closure,
)

DEFAULT_RECURSION_CAP = 64
_BUDGET_INDEX_LIMIT = 32


@dataclass(frozen=True)
class PartitionBlock:
    formula: object
    image_union: int
    provenance: str


@dataclass(frozen=True)
class FoPartition:
    blocks: tuple
    alphabet: tuple


@dataclass
class SynthesisResult:
    formula: object
    rank: int
    rank_bound: int
    block_count: int
    case_trace: tuple
    partition: FoPartition


@dataclass
class VerifyReport:
    ok: bool
    rank: int
    rank_bound: int | None
    max_len: int
    missed_words: list      # first-language words falsifying the formula
    leaked_words: list      # second-language words satisfying the formula


# --- formula templates ---------------------------------------------------------

def length_at_least(i):
    """Nested existential chain asserting i pairwise ordered positions."""
    body = conj(Less(j, j - 1) for j in range(i - 1, 0, -1))
    for _ in range(i):
        body = Exists(body)
    return body


def all_letters_in(letters):
    return Forall(disj(LetterAtom(0, a) for a in letters))


def first_letter_in(letters):
    return Forall(implies(Not(Exists(Less(0, 1))),
                          disj(LetterAtom(0, a) for a in letters)))


def last_letter_in(letters):
    return Forall(implies(Not(Exists(Less(1, 0))),
                          disj(LetterAtom(0, a) for a in letters)))


def concat_pair(f1, f2):
    """Language concatenation: an existentially chosen cut position, with
    both factor formulas relativized to their side and the suffix forced
    nonempty."""
    left = relativize(f1, lambda d: var_le(0, d + 1))
    right = relativize(f2, lambda d: Less(d + 1, 0))
    return Exists(And((Exists(Less(1, 0)), left, right)))


def concat_formulas(formulas):
    formulas = list(formulas)
    out = formulas[-1]
    for f in reversed(formulas[:-1]):
        out = concat_pair(f, out)
    return out


def _in_b_run(zi, xi, b):
    """Positions z..x (inclusive) all labeled b, with z = Var(zi), x = Var(xi)."""
    return And((
        var_le(zi, xi),
        Forall(implies(And((var_le(zi + 1, 0), var_le(0, xi + 1))),
                       LetterAtom(0, b))),
    ))


def b_run_at_least(j, b):
    """The maximal b-run ending at the free position Var 0 has length >= j."""
    parts = [Less(k, k - 1) for k in range(j - 1, 0, -1)]
    parts += [_in_b_run(k, j, b) for k in range(j)]
    body = conj(parts)
    for _ in range(j):
        body = Exists(body)
    return body


def b_run_formula(entry, b):
    """Membership of the maximal b-run ending at Var 0 in one unary block."""
    if entry.is_tail:
        return b_run_at_least(entry.exponent, b)
    return And((b_run_at_least(entry.exponent, b),
                Not(b_run_at_least(entry.exponent + 1, b))))


def c_run_formula(block_formula, c_letters):
    """Membership of the maximal C-run starting right after Var 0 in the
    block defined by block_formula."""

    def guard(depth):
        xi = depth + 1
        return And((
            Less(xi, 0),
            Forall(implies(And((Less(xi + 1, 0), var_le(0, 1))),
                           disj(LetterAtom(0, c) for c in c_letters))),
        ))

    return relativize(block_formula, guard)


def distinguished_guard(b, c_letters):
    """Var 0 is labeled b and its successor position has a label in C."""
    succ_in_c = Exists(And((
        Less(1, 0),
        Not(Exists(And((Less(2, 0), Less(0, 1))))),
        disj(LetterAtom(0, c) for c in c_letters),
    )))
    g = And((LetterAtom(0, b), succ_in_c))
    return lambda depth: g


# --- partition construction ------------------------------------------------------

@dataclass(frozen=True)
class _UnaryEntry:
    block: PartitionBlock
    exponent: int
    is_tail: bool


def _rank_budget(n_letters, index):
    if index > _BUDGET_INDEX_LIMIT:
        return None
    return n_letters * (1 << (index * index))


def _letter_name(letter):
    if isinstance(letter, str):
        return letter
    return "{" + ",".join(str(e) for e in elements_of(letter)) + "}"


class _Builder:
    def __init__(self, sg, max_depth, trace):
        self.sg = sg
        self.max_depth = max_depth
        self.trace = trace

    def note(self, msg):
        if self.trace is not None:
            self.trace.append(msg)

    def build(self, letters, images, depth):
        if depth > self.max_depth:
            raise ResourceLimitError(
                f"partition recursion exceeded depth {self.max_depth}",
                limit=self.max_depth, context="build_partition")
        sg = self.sg
        closure = subsemigroup_closure(sg, [images[a] for a in letters])
        union = 0
        for m in closure:
            union |= m
        index = union.bit_count()
        letter_names = ",".join(_letter_name(a) for a in letters)

        if len(letters) == 1:
            b = letters[0]
            entries = self.unary_blocks(b, images[b])
            self.note(f"unary: B=[{letter_names}] index={index} "
                      f"blocks={len(entries)}")
            blocks = [e.block for e in entries]
        elif self.is_tame(letters, images, union):
            self.note(f"tame: B=[{letter_names}] index={index}")
            blocks = [PartitionBlock(
                formula=all_letters_in(letters),
                image_union=union,
                provenance="tame")]
        else:
            b = self.pick_unstable(letters, images, union)
            if b is None:
                self.note(f"mirror: B=[{letter_names}] index={index}")
                rev = _Builder(sg.reversed(), self.max_depth, self.trace)
                rev_blocks = rev.build(letters, images, depth + 1)
                blocks = [
                    PartitionBlock(
                        formula=mirror(blk.formula),
                        image_union=blk.image_union,
                        provenance=f"mirror({blk.provenance})")
                    for blk in rev_blocks
                ]
            else:
                self.note(f"non-tame: B=[{letter_names}] index={index} "
                          f"split on {_letter_name(b)}")
                blocks = self.non_tame(letters, images, union, b, depth)
        self.check_budget(len(letters), index, blocks, letter_names)
        return blocks

    def check_budget(self, n_letters, index, blocks, letter_names):
        budget = _rank_budget(n_letters, index)
        if budget is None:
            return
        worst = max((rank(b.formula) for b in blocks), default=0)
        if worst > budget:
            self.note(f"rank-budget-exceeded: B=[{letter_names}] "
                      f"rank {worst} > {budget}")

    def unary_blocks(self, b, image):
        sg = self.sg
        m, tail_union = set_cycle_union(sg, image)
        entries = []
        power = image
        for i in range(1, m):
            formula = And((
                length_at_least(i),
                Not(length_at_least(i + 1)),
                all_letters_in((b,)),
            ))
            entries.append(_UnaryEntry(
                block=PartitionBlock(formula, power, f"unary-exact:{i}"),
                exponent=i, is_tail=False))
            power = set_product(sg, power, image)
        tail_formula = And((length_at_least(m), all_letters_in((b,))))
        entries.append(_UnaryEntry(
            block=PartitionBlock(tail_formula, tail_union, f"unary-tail:{m}"),
            exponent=m, is_tail=True))
        return entries

    def is_tame(self, letters, images, union):
        sg = self.sg
        for a in letters:
            if set_product(sg, images[a], union) != union:
                return False
            if set_product(sg, union, images[a]) != union:
                return False
        return True

    def pick_unstable(self, letters, images, union):
        """Least letter whose image fails left stability, or None if only
        right stability fails (the mirror path handles that)."""
        for a in letters:
            if set_product(self.sg, images[a], union) != union:
                return a
        return None

    def non_tame(self, letters, images, union, b, depth):
        sg = self.sg
        c_letters = tuple(a for a in letters if a != b)

        prefix_blocks = self.build(
            c_letters, {a: images[a] for a in c_letters}, depth + 1)
        suffix_entries = self.unary_blocks(b, images[b])

        # Abstraction alphabet: one letter per distinct image union of a
        # suffix-prefix pair HL.
        pair_letter = {}
        for he in suffix_entries:
            for lb in prefix_blocks:
                pair_letter[(he, lb)] = set_product(
                    sg, he.block.image_union, lb.image_union)
        abstract_letters = tuple(sorted(set(pair_letter.values())))
        gamma_images = {m: m for m in abstract_letters}

        t_closure = subsemigroup_closure(sg, list(abstract_letters))
        t_union = 0
        for m in t_closure:
            t_union |= m
        if t_union.bit_count() >= union.bit_count():
            raise FosepError(
                "internal error: abstraction did not shrink the index")

        infix_abstract = self.build(abstract_letters, gamma_images, depth + 1)

        # Translate abstract blocks into formulas over the current alphabet.
        bbar = {}
        for letter_mask in abstract_letters:
            alternatives = [
                And((b_run_formula(he, b), c_run_formula(lb.formula, c_letters)))
                for (he, lb), mask in pair_letter.items()
                if mask == letter_mask
            ]
            bbar[letter_mask] = disj(alternatives)
        shape = And((first_letter_in((b,)), last_letter_in(c_letters),
                     all_letters_in(letters)))
        guard = distinguished_guard(b, c_letters)
        infix_blocks = []
        for blk in infix_abstract:
            core = transform_abstract(blk.formula, guard, bbar)
            infix_blocks.append(PartitionBlock(
                formula=And((shape, core)),
                image_union=blk.image_union,
                provenance=f"infix({blk.provenance})"))

        suffix_blocks = [e.block for e in suffix_entries]
        blocks = []
        for lb, kb, hb in itertools.product(prefix_blocks, infix_blocks,
                                            suffix_blocks):
            blocks.append(self.concat_block((lb, kb, hb), "LKH"))
        for kb, hb in itertools.product(infix_blocks, suffix_blocks):
            blocks.append(self.concat_block((kb, hb), "KH"))
        for lb, hb in itertools.product(prefix_blocks, suffix_blocks):
            blocks.append(self.concat_block((lb, hb), "LH"))
        for lb, kb in itertools.product(prefix_blocks, infix_blocks):
            blocks.append(self.concat_block((lb, kb), "LK"))
        blocks.extend(prefix_blocks)
        blocks.extend(infix_blocks)
        blocks.extend(suffix_blocks)
        return blocks

    def concat_block(self, parts, shape_tag):
        image = parts[0].image_union
        for p in parts[1:]:
            image = set_product(self.sg, image, p.image_union)
        return PartitionBlock(
            formula=concat_formulas([p.formula for p in parts]),
            image_union=image,
            provenance=f"concat:{shape_tag}")


def build_partition(sg, letter_images, *, max_depth=DEFAULT_RECURSION_CAP,
                    trace=None):
    """Partition of B+ (B = the keys of letter_images) into definable blocks
    whose image unions live in the saturated family of the generated subset
    semigroup."""
    letters = tuple(sorted(letter_images))
    if not letters:
        raise FosepError("cannot partition words over an empty alphabet")
    builder = _Builder(sg, max_depth, trace)
    blocks = builder.build(letters, dict(letter_images), 0)
    return FoPartition(blocks=tuple(blocks), alphabet=letters)


def pseudo_group_core(sg, family):
    """Shrink a pseudo-group to a group with the same union by iterated
    one-sided translations; a correctness witness for the tame case."""
    current = sorted(set(family))
    while True:
        cur_set = set(current)
        shrink = None
        for r in current:
            left = {set_product(sg, r, x) for x in current}
            if left != cur_set:
                shrink = sorted(left)
                break
            right = {set_product(sg, x, r) for x in current}
            if right != cur_set:
                shrink = sorted(right)
                break
        if shrink is None:
            return current
        current = shrink


# --- separator synthesis ----------------------------------------------------------

def rank_bound_for(alphabet_size, semigroup_size):
    return alphabet_size * (1 << (semigroup_size * semigroup_size))


def synthesize_separator(morphism, f0_mask, f1_mask, variant="omega", *,
                         simplify_formula=True, max_depth=DEFAULT_RECURSION_CAP):
    """Build a sentence that holds on every word of the first language and on
    none of the second; raises NotSeparableError (with the witness pair) when
    no separator exists."""
    verdict = is_fo_separable(morphism, f0_mask, f1_mask, variant)
    if not verdict.separable:
        t0, t1 = verdict.witness_pair
        raise NotSeparableError(
            verdict.witness_pair,
            witness_words=(morphism.witness[t0], morphism.witness[t1]))
    trace = []
    letter_images = {a: 1 << s for a, s in morphism.letter_image.items()}
    partition = build_partition(morphism.semigroup, letter_images,
                                max_depth=max_depth, trace=trace)
    chosen = [blk.formula for blk in partition.blocks
              if blk.image_union & f0_mask]
    formula = disj(chosen)
    if simplify_formula:
        simplified = simplify(formula)
        if rank(simplified) <= rank(formula):
            formula = simplified
    bound = rank_bound_for(len(morphism.alphabet), morphism.semigroup.size)
    r = rank(formula)
    if r > bound:
        raise FosepError(
            f"synthesized rank {r} exceeds the guaranteed bound {bound}")
    extra = formula_letters(formula) - set(morphism.alphabet)
    if extra:
        raise FosepError(f"internal error: abstract letters {extra} leaked")
    return SynthesisResult(
        formula=formula, rank=r, rank_bound=bound,
        block_count=len(partition.blocks), case_trace=tuple(trace),
        partition=partition)


def verify_separator(formula, nfa0, nfa1, max_len, rank_bound=None):
    """Exhaustively check the separator on all words up to max_len: every
    word of the first language must satisfy it, none of the second may."""
    alphabet = tuple(sorted(set(nfa0.alphabet) | set(nfa1.alphabet)))
    missed = []
    leaked = []
    for length in range(1, max_len + 1):
        for tup in itertools.product(alphabet, repeat=length):
            w = "".join(tup)
            value = eval_sentence(formula, w)
            if not value and nfa0.accepts(w):
                missed.append(w)
            if value and nfa1.accepts(w):
                leaked.append(w)
    return VerifyReport(
        ok=not missed and not leaked,
        rank=rank(formula),
        rank_bound=rank_bound,
        max_len=max_len,
        missed_words=missed,
        leaked_words=leaked,
    )
