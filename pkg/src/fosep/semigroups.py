"""Finite semigroup algebra.

Elements are dense integer ids 0..n-1 and the multiplication table is a flat
row-major list, so products are a single list lookup.  Construction from
generators (any hashable carrier with an associative product rule) assigns ids
in breadth-first order over words, shortest first with ties broken by alphabet
order, which makes every derived output deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError, ResourceLimitError

DEFAULT_ELEMENT_CAP = 1 << 16

_ASSOC_EXHAUSTIVE_LIMIT = 64
_ASSOC_SAMPLE_COUNT = 4096


class FiniteSemigroup:
    """A finite semigroup given by its multiplication table.

    `table` is flat row-major: table[x*size + y] = x*y.  The optional
    `generators` records distinguished elements with letter labels, as
    (letter, element) pairs in alphabet order.
    """

    __slots__ = ("size", "table", "generators")

    def __init__(self, size, table, generators=None, check=True):
        table = list(table)
        if size <= 0:
            raise FormatError("semigroup must have at least one element")
        if len(table) != size * size:
            raise FormatError(
                f"table has {len(table)} entries, expected {size * size}")
        for v in table:
            if not (0 <= v < size):
                raise FormatError(f"table entry {v} out of range 0..{size - 1}")
        self.size = size
        self.table = table
        self.generators = tuple(generators) if generators else None
        if check:
            self._check_associativity()

    def _check_associativity(self):
        n = self.size
        t = self.table
        if n <= _ASSOC_EXHAUSTIVE_LIMIT:
            triples = (
                (x, y, z) for x in range(n) for y in range(n) for z in range(n))
        else:
            # Deterministic sample: a fixed LCG walk over triples.
            def sampled():
                state = 0x2545F4914F6CDD1D
                for _ in range(_ASSOC_SAMPLE_COUNT):
                    state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
                    x = (state >> 33) % n
                    y = (state >> 17) % n
                    z = state % n
                    yield (x, y, z)
            triples = sampled()
        for x, y, z in triples:
            if t[t[x * n + y] * n + z] != t[x * n + t[y * n + z]]:
                raise FormatError(
                    f"multiplication table is not associative at ({x},{y},{z})")

    def mul(self, x, y):
        return self.table[x * self.size + y]

    def product_of(self, elements):
        """Product of a nonempty sequence of element ids, left to right."""
        it = iter(elements)
        try:
            acc = next(it)
        except StopIteration:
            raise ValueError("product of empty sequence in a semigroup") from None
        n = self.size
        t = self.table
        for x in it:
            acc = t[acc * n + x]
        return acc

    def power(self, x, k):
        if k <= 0:
            raise ValueError("semigroup powers need exponent >= 1")
        acc = x
        for _ in range(k - 1):
            acc = self.mul(acc, x)
        return acc

    def idempotent_power(self, s):
        """Return (k, e) where e = s^k is the unique idempotent power of s.

        k is the smallest exponent whose power is idempotent.
        """
        seen = {s: 1}
        powers = [s]
        cur = s
        while True:
            cur = self.mul(cur, s)
            if cur in seen:
                mu = seen[cur]
                lam = len(powers) + 1 - mu
                break
            powers.append(cur)
            seen[cur] = len(powers)
        # Idempotent exponent: smallest multiple of lam that is >= mu.
        k = lam * ((mu + lam - 1) // lam)
        e = powers[k - 1]
        assert self.mul(e, e) == e
        return k, e

    def cycle_of(self, s):
        """Exponent m of the idempotent power plus the list of cycle powers.

        Returns (m, [s^m, s^(m+1), ..., s^(m+lam-1)]) where lam is the period.
        """
        m, e = self.idempotent_power(s)
        cycle = [e]
        cur = self.mul(e, s)
        while cur != e:
            cycle.append(cur)
            cur = self.mul(cur, s)
        return m, cycle

    def idempotents(self):
        return [x for x in range(self.size) if self.mul(x, x) == x]

    def is_aperiodic(self):
        """True iff s^w = s^(w+1) for every element s."""
        for s in range(self.size):
            _, e = self.idempotent_power(s)
            if self.mul(e, s) != e:
                return False
        return True

    def reversed(self):
        """The opposite semigroup (transposed table); used by mirror constructions."""
        n = self.size
        t = self.table
        rev = [0] * (n * n)
        for x in range(n):
            for y in range(n):
                rev[x * n + y] = t[y * n + x]
        return FiniteSemigroup(n, rev, generators=self.generators, check=False)


@dataclass
class RecognizingMorphism:
    """A surjective morphism from words over `alphabet` onto `semigroup`.

    `witness[s]` is the shortest word (ties broken by alphabet order) whose
    image is s; every element has one.
    """

    alphabet: tuple
    semigroup: FiniteSemigroup
    letter_image: dict
    witness: tuple

    def image_of_word(self, word):
        img = None
        n = self.semigroup.size
        t = self.semigroup.table
        for a in word:
            x = self.letter_image.get(a)
            if x is None:
                raise FormatError(f"letter {a!r} is not in the alphabet")
            img = x if img is None else t[img * n + x]
        if img is None:
            raise FormatError("the empty word has no image in a semigroup")
        return img

    def image_mask_of_language(self, words):
        mask = 0
        for w in words:
            mask |= 1 << self.image_of_word(w)
        return mask


def generate(letter_elements, mul, element_cap=DEFAULT_ELEMENT_CAP, check=True):
    """Close a set of labeled generators under an associative product.

    `letter_elements` maps letters to hashable carrier values; `mul` is the
    product rule on the carrier.  Returns (semigroup, morphism, elements)
    where elements[i] is the carrier value of id i.

    Ids follow breadth-first discovery over words (shortest witness first,
    alphabet order within a length).  Raises ResourceLimitError past the cap.
    """
    alphabet = tuple(sorted(letter_elements))
    if not alphabet:
        raise FormatError("cannot generate a semigroup from an empty alphabet")
    index = {}
    elements = []
    witness = []
    queue = []
    for a in alphabet:
        v = letter_elements[a]
        if v not in index:
            index[v] = len(elements)
            elements.append(v)
            witness.append(a)
            queue.append(v)
    head = 0
    while head < len(queue):
        v = queue[head]
        w = witness[index[v]]
        head += 1
        for a in alphabet:
            nv = mul(v, letter_elements[a])
            if nv not in index:
                if len(elements) >= element_cap:
                    raise ResourceLimitError(
                        f"semigroup closure exceeded the element cap {element_cap}",
                        limit=element_cap, context="generate")
                index[nv] = len(elements)
                elements.append(nv)
                witness.append(w + a)
                queue.append(nv)
    n = len(elements)
    table = [0] * (n * n)
    for x in range(n):
        vx = elements[x]
        row = x * n
        for y in range(n):
            table[row + y] = index[mul(vx, elements[y])]
    gens = tuple((a, index[letter_elements[a]]) for a in alphabet)
    sg = FiniteSemigroup(n, table, generators=gens, check=check)
    morphism = RecognizingMorphism(
        alphabet=alphabet,
        semigroup=sg,
        letter_image={a: index[letter_elements[a]] for a in alphabet},
        witness=tuple(witness),
    )
    return sg, morphism, elements


@dataclass(frozen=True)
class HClassPartition:
    """Partition of a semigroup into Green H-classes."""

    class_index: tuple
    classes: tuple
    is_group: tuple

    def class_of(self, s):
        return self.classes[self.class_index[s]]


def h_classes(sg):
    """H-classes: s H s' iff s = s' or they are mutually reachable by both
    left and right translations.  A class is a group iff it holds an idempotent.
    """
    n = sg.size
    t = sg.table
    rkey = [0] * n
    lkey = [0] * n
    for s in range(n):
        rm = 1 << s
        row = s * n
        for x in range(n):
            rm |= 1 << t[row + x]
        rkey[s] = rm
    for s in range(n):
        lm = 1 << s
        for x in range(n):
            lm |= 1 << t[x * n + s]
        lkey[s] = lm
    class_of_key = {}
    class_index = [0] * n
    members = []
    for s in range(n):
        key = (rkey[s], lkey[s])
        ci = class_of_key.get(key)
        if ci is None:
            ci = len(members)
            class_of_key[key] = ci
            members.append([])
        class_index[s] = ci
        members[ci].append(s)
    classes = tuple(tuple(c) for c in members)
    is_group = tuple(
        any(t[e * n + e] == e for e in c) for c in classes)
    return HClassPartition(tuple(class_index), classes, is_group)


def maximal_subgroups(sg):
    """The H-classes that contain an idempotent; these are the maximal subgroups."""
    part = h_classes(sg)
    return [list(c) for c, g in zip(part.classes, part.is_group) if g]


def product_semigroup(s0, s1):
    """Cartesian product with componentwise multiplication.

    Pair (x0, x1) gets id x0*|S1| + x1.
    """
    n0, n1 = s0.size, s1.size
    n = n0 * n1
    table = [0] * (n * n)
    t0, t1 = s0.table, s1.table
    for x0 in range(n0):
        for x1 in range(n1):
            x = x0 * n1 + x1
            row = x * n
            for y0 in range(n0):
                p0 = t0[x0 * n0 + y0] * n1
                base = y0 * n1
                for y1 in range(n1):
                    table[row + base + y1] = p0 + t1[x1 * n1 + y1]
    return FiniteSemigroup(n, table, check=False)


def pair_morphism(m0, m1, element_cap=DEFAULT_ELEMENT_CAP):
    """Paired morphism w -> (a0(w), a1(w)) into the generated subsemigroup
    of the product; both inputs must share an alphabet.
    """
    if tuple(m0.alphabet) != tuple(m1.alphabet):
        raise FormatError(
            f"alphabet mismatch: {m0.alphabet} vs {m1.alphabet}")
    t0, t1 = m0.semigroup.table, m1.semigroup.table
    n0, n1 = m0.semigroup.size, m1.semigroup.size

    def mul(p, q):
        return (t0[p[0] * n0 + q[0]], t1[p[1] * n1 + q[1]])

    letter_elems = {
        a: (m0.letter_image[a], m1.letter_image[a]) for a in m0.alphabet}
    sg, morphism, elements = generate(
        letter_elems, mul, element_cap=element_cap, check=False)
    return sg, morphism, elements


def parse_semigroup_text(text):
    """Parse the plain-text table format.

    First line `semigroup n`, then n rows of n ids, then an optional
    `generators` section with `letter id` lines.  Returns
    (semigroup, morphism or None).
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty semigroup file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "semigroup":
        raise FormatError("first line must be 'semigroup n'")
    try:
        n = int(head[1])
    except ValueError:
        raise FormatError(f"bad element count {head[1]!r}") from None
    if len(lines) < 1 + n:
        raise FormatError(f"expected {n} table rows, found {len(lines) - 1}")
    table = []
    for i in range(n):
        row = lines[1 + i].split()
        if len(row) != n:
            raise FormatError(f"table row {i} has {len(row)} entries, expected {n}")
        try:
            table.extend(int(v) for v in row)
        except ValueError:
            raise FormatError(f"non-integer entry in table row {i}") from None
    rest = lines[1 + n:]
    gens = None
    if rest:
        if rest[0] != "generators":
            raise FormatError(f"unexpected line {rest[0]!r} after the table")
        gens = []
        for ln in rest[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise FormatError(f"bad generator line {ln!r}")
            letter, sid = parts[0], parts[1]
            try:
                gens.append((letter, int(sid)))
            except ValueError:
                raise FormatError(f"bad generator id in {ln!r}") from None
        if not gens:
            raise FormatError("empty generators section")
    sg = FiniteSemigroup(n, table, generators=gens)
    morphism = None
    if gens:
        for letter, sid in gens:
            if not (0 <= sid < n):
                raise FormatError(f"generator id {sid} out of range")
        morphism = _morphism_from_generators(sg, gens)
    return sg, morphism


def _morphism_from_generators(sg, gens):
    letter_image = {a: s for a, s in gens}
    alphabet = tuple(sorted(letter_image))
    witness = [None] * sg.size
    queue = []
    for a in alphabet:
        s = letter_image[a]
        if witness[s] is None:
            witness[s] = a
            queue.append(s)
    head = 0
    while head < len(queue):
        s = queue[head]
        head += 1
        for a in alphabet:
            ns = sg.mul(s, letter_image[a])
            if witness[ns] is None:
                witness[ns] = witness[s] + a
                queue.append(ns)
    missing = [s for s in range(sg.size) if witness[s] is None]
    if missing:
        raise FormatError(
            f"generators do not reach elements {missing}; morphism not surjective")
    return RecognizingMorphism(
        alphabet=alphabet, semigroup=sg,
        letter_image=letter_image, witness=tuple(witness))


def format_semigroup_text(sg):
    n = sg.size
    out = [f"semigroup {n}"]
    for x in range(n):
        out.append(" ".join(str(v) for v in sg.table[x * n:(x + 1) * n]))
    if sg.generators:
        out.append("generators")
        for letter, sid in sg.generators:
            out.append(f"{letter} {sid}")
    return "\n".join(out) + "\n"
