"""Seeded random inputs for cross-checking experiments and the test suite."""

from __future__ import annotations

import random

from .automata import Nfa
from .semigroups import FiniteSemigroup, RecognizingMorphism, generate


def random_nfa(rng, max_states=4, alphabet=("a", "b"), density=1.2,
               ensure_nonempty=False):
    """A random NFA with 1..max_states states; `density` is the expected
    number of outgoing edges per (state, letter)."""
    while True:
        n = rng.randint(1, max_states)
        transitions = set()
        for p in range(n):
            for a in alphabet:
                k = 0
                while rng.random() < density / (k + 1):
                    transitions.add((p, a, rng.randrange(n)))
                    k += 1
        initial = frozenset(
            s for s in range(n) if rng.random() < 0.5) or frozenset({0})
        final = frozenset(s for s in range(n) if rng.random() < 0.5)
        nfa = Nfa(n, tuple(alphabet), frozenset(transitions), initial, final)
        if not ensure_nonempty or any(
                nfa.accepts(w) for w in nfa.language_upto(max_states)):
            return nfa


def random_semigroup(rng, size):
    """A random associative table of exactly `size` elements, by rejection
    over transformation semigroups: compose random maps until the closure of
    a few generators has the requested size."""
    for _ in range(10000):
        n_states = rng.randint(1, max(2, size))
        maps = {}
        for i in range(rng.randint(1, 3)):
            maps[chr(ord("a") + i)] = tuple(
                rng.randrange(n_states) for _ in range(n_states))

        def compose(f, g):
            return tuple(g[f[q]] for q in range(len(f)))

        sg, morphism, _ = generate(maps, compose, check=False)
        if sg.size == size:
            return sg, morphism
    raise RuntimeError(f"no random semigroup of size {size} found")


def random_small_morphism(rng, max_size=3, alphabet=("a", "b")):
    """A surjective morphism from words over `alphabet` onto a random
    semigroup with at most max_size elements (rejection sampling over
    associative tables restricted to the generated part)."""
    while True:
        n = rng.randint(1, max_size)
        table = [rng.randrange(n) for _ in range(n * n)]
        if not _is_associative(table, n):
            continue
        letter_to_elt = {a: rng.randrange(n) for a in alphabet}

        def mul(x, y, table=table, n=n):
            return table[x * n + y]

        sg, morphism, _ = generate(letter_to_elt, mul, check=False)
        if sg.size <= max_size:
            return morphism


def _is_associative(table, n):
    for x in range(n):
        for y in range(n):
            xy = table[x * n + y]
            for z in range(n):
                if table[xy * n + z] != table[x * n + table[y * n + z]]:
                    return False
    return True
