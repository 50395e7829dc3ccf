"""Regular-language frontend: regexes, epsilon-free NFAs, transition and
syntactic semigroups.

Languages live in A+ throughout; a regex whose language contains the empty
word has it dropped (with a warning).  NFAs are recognized through boolean
state-relation semigroups, which coincide with partial-map composition on
deterministic automata.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

from .errors import EpsilonDroppedWarning, FormatError, RegexSyntaxError
from .semigroups import DEFAULT_ELEMENT_CAP, generate


# --- regex ASTs -------------------------------------------------------------

@dataclass(frozen=True)
class Letter:
    char: str


@dataclass(frozen=True)
class Concat:
    parts: tuple


@dataclass(frozen=True)
class Union:
    parts: tuple


@dataclass(frozen=True)
class Star:
    inner: object


@dataclass(frozen=True)
class Plus:
    inner: object


def parse_regex(text):
    """Parse `|` alternation, juxtaposition, postfix `*`/`+`, parentheses;
    letters are single ASCII alphanumerics."""
    pos = 0
    n = len(text)

    def peek():
        return text[pos] if pos < n else None

    def parse_union():
        nonlocal pos
        parts = [parse_concat()]
        while peek() == "|":
            pos += 1
            parts.append(parse_concat())
        return parts[0] if len(parts) == 1 else Union(tuple(parts))

    def parse_concat():
        nonlocal pos
        parts = []
        while True:
            c = peek()
            if c is None or c in "|)":
                break
            parts.append(parse_postfix())
        if not parts:
            raise RegexSyntaxError("expected a letter or group", pos)
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def parse_postfix():
        nonlocal pos
        node = parse_base()
        while peek() in ("*", "+"):
            node = Star(node) if text[pos] == "*" else Plus(node)
            pos += 1
        return node

    def parse_base():
        nonlocal pos
        c = peek()
        if c == "(":
            opened = pos
            pos += 1
            node = parse_union()
            if peek() != ")":
                raise RegexSyntaxError("unclosed parenthesis", opened)
            pos += 1
            return node
        if c is not None and c.isascii() and c.isalnum():
            pos += 1
            return Letter(c)
        raise RegexSyntaxError(f"unexpected character {c!r}", pos)

    ast = parse_union()
    if pos != n:
        raise RegexSyntaxError(f"unexpected character {text[pos]!r}", pos)
    return ast


def regex_letters(ast):
    if isinstance(ast, Letter):
        return {ast.char}
    if isinstance(ast, (Concat, Union)):
        out = set()
        for p in ast.parts:
            out |= regex_letters(p)
        return out
    return regex_letters(ast.inner)


def regex_nullable(ast):
    if isinstance(ast, Letter):
        return False
    if isinstance(ast, Concat):
        return all(regex_nullable(p) for p in ast.parts)
    if isinstance(ast, Union):
        return any(regex_nullable(p) for p in ast.parts)
    if isinstance(ast, Star):
        return True
    return regex_nullable(ast.inner)


# --- NFAs -------------------------------------------------------------------

@dataclass(frozen=True)
class Nfa:
    state_count: int
    alphabet: tuple
    transitions: frozenset
    initial: frozenset
    final: frozenset

    def __post_init__(self):
        letters = set(self.alphabet)
        for p, a, q in self.transitions:
            if not (0 <= p < self.state_count and 0 <= q < self.state_count):
                raise FormatError(f"transition ({p},{a},{q}) uses a bad state")
            if a not in letters:
                raise FormatError(f"transition letter {a!r} not in alphabet")
        for s in self.initial | self.final:
            if not (0 <= s < self.state_count):
                raise FormatError(f"state {s} out of range")

    def accepts(self, word):
        current = set(self.initial)
        step = {}
        for p, a, q in self.transitions:
            step.setdefault((p, a), set()).add(q)
        for a in word:
            nxt = set()
            for p in current:
                nxt |= step.get((p, a), set())
            current = nxt
            if not current:
                return False
        return bool(current & self.final)

    def language_upto(self, max_len, alphabet=None):
        """All accepted nonempty words of length <= max_len (test helper)."""
        import itertools
        alphabet = tuple(alphabet or self.alphabet)
        out = []
        for length in range(1, max_len + 1):
            for tup in itertools.product(alphabet, repeat=length):
                w = "".join(tup)
                if self.accepts(w):
                    out.append(w)
        return out

    def to_json(self):
        return {
            "states": self.state_count,
            "alphabet": list(self.alphabet),
            "initial": sorted(self.initial),
            "final": sorted(self.final),
            "transitions": sorted([p, a, q] for p, a, q in self.transitions),
        }

    @classmethod
    def from_json(cls, data):
        try:
            return cls(
                state_count=int(data["states"]),
                alphabet=tuple(sorted(set(data["alphabet"]))),
                transitions=frozenset(
                    (int(p), str(a), int(q)) for p, a, q in data["transitions"]),
                initial=frozenset(int(s) for s in data["initial"]),
                final=frozenset(int(s) for s in data["final"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad NFA JSON: {exc}") from None


def load_nfa(path):
    with open(path, "r", encoding="utf-8") as fh:
        return Nfa.from_json(json.load(fh))


def regex_to_nfa(ast):
    """Glushkov construction: one state per letter occurrence plus an initial
    state; epsilon-free by design.  If the regex denotes the empty word it is
    dropped with a warning (languages live in A+)."""
    positions = []

    def number(node):
        if isinstance(node, Letter):
            positions.append(node.char)
            return ("pos", len(positions) - 1)
        if isinstance(node, (Concat, Union)):
            return (type(node), tuple(number(p) for p in node.parts))
        return (type(node), number(node.inner))

    root = number(ast)

    def analyze(node):
        """(nullable, first, last, follow-pairs) over position ids."""
        kind = node[0]
        if kind == "pos":
            p = node[1]
            return False, {p}, {p}, set()
        if kind is Concat:
            nullable, first, last, follow = True, set(), set(), set()
            for child in node[1]:
                cn, cf, cl, cfo = analyze(child)
                follow |= cfo
                follow |= {(p, q) for p in last for q in cf}
                if nullable:
                    first |= cf
                last = cl | (last if cn else set())
                nullable = nullable and cn
            return nullable, first, last, follow
        if kind is Union:
            nullable, first, last, follow = False, set(), set(), set()
            for child in node[1]:
                cn, cf, cl, cfo = analyze(child)
                nullable = nullable or cn
                first |= cf
                last |= cl
                follow |= cfo
            return nullable, first, last, follow
        cn, cf, cl, cfo = analyze(node[1])
        loop = {(p, q) for p in cl for q in cf}
        if kind is Star:
            return True, cf, cl, cfo | loop
        return cn, cf, cl, cfo | loop  # Plus

    nullable, first, last, follow = analyze(root)
    if nullable:
        warnings.warn(
            "regex denotes the empty word; it is dropped (languages live in A+)",
            EpsilonDroppedWarning, stacklevel=2)
    m = len(positions)
    transitions = set()
    for q in first:
        transitions.add((0, positions[q], q + 1))
    for p, q in follow:
        transitions.add((p + 1, positions[q], q + 1))
    return Nfa(
        state_count=m + 1,
        alphabet=tuple(sorted(set(positions))),
        transitions=frozenset(transitions),
        initial=frozenset({0}),
        final=frozenset(q + 1 for q in last),
    )


# --- relation semigroups ----------------------------------------------------

def _letter_relations(nfa, alphabet):
    """Boolean relation of each letter as a tuple of row bitmasks; letters
    absent from the automaton get the empty relation."""
    rels = {a: [0] * nfa.state_count for a in alphabet}
    for p, a, q in nfa.transitions:
        rels[a][p] |= 1 << q
    return {a: tuple(rows) for a, rows in rels.items()}


def _compose(r1, r2):
    out = []
    for row in r1:
        acc = 0
        rest = row
        while rest:
            low = rest & -rest
            acc |= r2[low.bit_length() - 1]
            rest ^= low
        out.append(acc)
    return tuple(out)


def _accepting_mask(elements, initial, final):
    fmask = 0
    for q in final:
        fmask |= 1 << q
    out = 0
    for i, rel in enumerate(elements):
        if any(rel[p] & fmask for p in initial):
            out |= 1 << i
    return out


def transition_semigroup(nfa, element_cap=DEFAULT_ELEMENT_CAP):
    """Relation semigroup generated by the letter relations.

    Returns (morphism, accepting_mask): the morphism alpha maps words to
    state relations, and alpha^-1(accepting_mask) is L(nfa) within A+.
    """
    if not nfa.alphabet:
        raise FormatError("NFA has an empty alphabet")
    rels = _letter_relations(nfa, nfa.alphabet)
    _, morphism, elements = generate(rels, _compose,
                                     element_cap=element_cap, check=False)
    return morphism, _accepting_mask(elements, nfa.initial, nfa.final)


def pair_to_morphism(nfa0, nfa1, element_cap=DEFAULT_ELEMENT_CAP):
    """One morphism recognizing both languages, with their accepting sets.

    Transition semigroup of the disjoint-union automaton over the union
    alphabet (equivalently, the generated subsemigroup of the product of the
    two transition semigroups); a letter missing from one automaton acts as
    the empty relation on that side.
    """
    alphabet = tuple(sorted(set(nfa0.alphabet) | set(nfa1.alphabet)))
    n0 = nfa0.state_count
    rels0 = _letter_relations(nfa0, alphabet)
    rels1 = _letter_relations(nfa1, alphabet)
    rels = {
        a: rels0[a] + tuple(rows << n0 for rows in rels1[a])
        for a in alphabet
    }
    _, morphism, elements = generate(rels, _compose,
                                     element_cap=element_cap, check=False)
    f0 = _accepting_mask(elements, nfa0.initial, nfa0.final)
    f1 = _accepting_mask(
        elements, {s + n0 for s in nfa1.initial}, {s + n0 for s in nfa1.final})
    return morphism, f0, f1


# --- determinization, minimization, syntactic semigroup ----------------------

@dataclass(frozen=True)
class Dfa:
    """Complete DFA: delta[s*len(alphabet)+ai] is the successor state."""

    state_count: int
    alphabet: tuple
    delta: tuple
    initial: int
    final: frozenset

    def accepts(self, word):
        s = self.initial
        k = len(self.alphabet)
        ai = {a: i for i, a in enumerate(self.alphabet)}
        for a in word:
            s = self.delta[s * k + ai[a]]
        return s in self.final


def determinize(nfa, alphabet=None):
    """Subset construction; the result is complete (a sink absorbs dead sets)."""
    alphabet = tuple(sorted(alphabet or nfa.alphabet))
    rels = _letter_relations(nfa, alphabet)
    init = 0
    for s in nfa.initial:
        init |= 1 << s
    fmask = 0
    for s in nfa.final:
        fmask |= 1 << s
    index = {init: 0}
    order = [init]
    delta = []
    head = 0
    while head < len(order):
        cur = order[head]
        head += 1
        for a in alphabet:
            rows = rels[a]
            nxt = 0
            rest = cur
            while rest:
                low = rest & -rest
                nxt |= rows[low.bit_length() - 1]
                rest ^= low
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            delta.append(index[nxt])
    final = frozenset(i for i, subset in enumerate(order) if subset & fmask)
    return Dfa(len(order), alphabet, tuple(delta), 0, final)


def minimize(dfa):
    """Moore partition refinement; all states of a determinized DFA are
    reachable, so the result is the minimal complete DFA."""
    n = dfa.state_count
    k = len(dfa.alphabet)
    block = [1 if s in dfa.final else 0 for s in range(n)]
    while True:
        keys = {}
        new_block = [0] * n
        for s in range(n):
            key = (block[s],) + tuple(
                block[dfa.delta[s * k + i]] for i in range(k))
            if key not in keys:
                keys[key] = len(keys)
            new_block[s] = keys[key]
        if new_block == block:
            break
        block = new_block
    m = max(block) + 1
    delta = [0] * (m * k)
    seen = [False] * m
    for s in range(n):
        b = block[s]
        if seen[b]:
            continue
        seen[b] = True
        for i in range(k):
            delta[b * k + i] = block[dfa.delta[s * k + i]]
    final = frozenset(block[s] for s in dfa.final)
    return Dfa(m, dfa.alphabet, tuple(delta), block[dfa.initial], final)


def syntactic_semigroup(nfa, element_cap=DEFAULT_ELEMENT_CAP):
    """Syntactic semigroup of L(nfa) within A+: the transition semigroup of
    the minimal complete DFA.  Returns (morphism, accepting_mask)."""
    dfa = minimize(determinize(nfa))
    k = len(dfa.alphabet)
    maps = {
        a: tuple(dfa.delta[s * k + i] for s in range(dfa.state_count))
        for i, a in enumerate(dfa.alphabet)
    }

    def compose(f, g):
        return tuple(g[f[s]] for s in range(len(f)))

    _, morphism, elements = generate(maps, compose,
                                     element_cap=element_cap, check=False)
    accepting = 0
    for i, f in enumerate(elements):
        if f[dfa.initial] in dfa.final:
            accepting |= 1 << i
    return morphism, accepting


def complement_nfa(nfa, alphabet=None):
    """Complement within A+ over the given (default: own) alphabet, as an NFA."""
    dfa = determinize(nfa, alphabet=alphabet)
    k = len(dfa.alphabet)
    transitions = frozenset(
        (s, dfa.alphabet[i], dfa.delta[s * k + i])
        for s in range(dfa.state_count) for i in range(k))
    final = frozenset(s for s in range(dfa.state_count) if s not in dfa.final)
    return Nfa(dfa.state_count, dfa.alphabet, transitions,
               frozenset({dfa.initial}), final)
