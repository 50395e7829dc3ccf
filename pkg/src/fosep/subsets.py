"""The semigroup of subsets 2^S and downset-closed families of subsets.

Subsets of the ambient semigroup are plain int bitmasks (bit s = element s).
A downset-closed family is stored by its maximal antichain only: membership
of T means T is below some maximal set.  The empty set is implicitly a member
of every family.
"""

from __future__ import annotations

from .errors import ResourceLimitError

DEFAULT_SUBSET_CAP = 1 << 20


def mask_of(elements):
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask):
    out = []
    s = 0
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def set_product(sg, t1, t2):
    """Elementwise product set {x*y : x in t1, y in t2}."""
    if not t1 or not t2:
        return 0
    n = sg.size
    table = sg.table
    out = 0
    ys = elements_of(t2)
    for x in iter_bits(t1):
        row = x * n
        for y in ys:
            out |= 1 << table[row + y]
    return out


def set_power(sg, t, k):
    if k <= 0:
        raise ValueError("set powers need exponent >= 1")
    acc = t
    for _ in range(k - 1):
        acc = set_product(sg, acc, t)
    return acc


def set_idempotent_power(sg, t):
    """(k, E) with E = T^k the unique idempotent power of T in 2^S.

    Cycle detection over iterated products; at most |2^S| distinct powers.
    """
    seen = {t: 1}
    powers = [t]
    cur = t
    while True:
        cur = set_product(sg, cur, t)
        if cur in seen:
            mu = seen[cur]
            lam = len(powers) + 1 - mu
            break
        powers.append(cur)
        seen[cur] = len(powers)
    k = lam * ((mu + lam - 1) // lam)
    return k, powers[k - 1]


def set_omega_closure(sg, t):
    """T^w | T^(w+1), the closure rule specific to first-order logic."""
    _, e = set_idempotent_power(sg, t)
    return e | set_product(sg, e, t)


def set_cycle_union(sg, t):
    """(m, U) where U is the union of all powers T^j for j >= m, with m the
    idempotent exponent of T.  Used by the unary partition case."""
    m, e = set_idempotent_power(sg, t)
    union = e
    cur = set_product(sg, e, t)
    while cur != e:
        union |= cur
        cur = set_product(sg, cur, t)
    return m, union


def subsemigroup_closure(sg, seeds, cap=DEFAULT_SUBSET_CAP):
    """Closure of a list of subsets under set products, in discovery order."""
    seeds = [s for s in seeds if s]
    index = {}
    out = []
    for s in seeds:
        if s not in index:
            index[s] = len(out)
            out.append(s)
    head = 0
    while head < len(out):
        x = out[head]
        head += 1
        for i in range(len(seeds)):
            p = set_product(sg, x, seeds[i])
            if p not in index:
                if len(out) >= cap:
                    raise ResourceLimitError(
                        f"subset-semigroup closure exceeded cap {cap}",
                        limit=cap, context="subsemigroup_closure")
                index[p] = len(out)
                out.append(p)
    return out


class _Antichain:
    """Mutable maximal-antichain accumulator used inside fixpoints."""

    __slots__ = ("maximal",)

    def __init__(self, masks=()):
        self.maximal = []
        for m in masks:
            self.add(m)

    def add(self, mask):
        """Insert the downset of `mask`; True iff the family grew."""
        if mask == 0:
            return False
        maximal = self.maximal
        for m in maximal:
            if mask | m == m:
                return False
        self.maximal = [m for m in maximal if m | mask != mask]
        self.maximal.append(mask)
        return True

    def contains(self, mask):
        if mask == 0:
            return True
        for m in self.maximal:
            if mask | m == m:
                return True
        return False

    def snapshot(self, universe_size):
        return SubsetFamily(universe_size, tuple(sorted(self.maximal)))


class SubsetFamily:
    """Immutable downset-closed family of subsets, by maximal antichain.

    The antichain is kept sorted by bitmask value so equal families compare
    equal and all iteration orders are reproducible.
    """

    __slots__ = ("universe_size", "maximal")

    def __init__(self, universe_size, maximal):
        self.universe_size = universe_size
        self.maximal = tuple(maximal)

    @classmethod
    def from_sets(cls, universe_size, masks):
        acc = _Antichain(masks)
        return acc.snapshot(universe_size)

    def contains(self, mask):
        if mask == 0:
            return True
        for m in self.maximal:
            if mask | m == m:
                return True
        return False

    def insert(self, mask):
        """Functional insert; returns (family, changed)."""
        acc = _Antichain(self.maximal)
        changed = acc.add(mask)
        if not changed:
            return self, False
        return acc.snapshot(self.universe_size), True

    def union_mask(self):
        u = 0
        for m in self.maximal:
            u |= m
        return u

    def index(self):
        """Size of the union of all members."""
        return self.union_mask().bit_count()

    def dominating(self, mask):
        """The first maximal set containing `mask`, or None."""
        for m in self.maximal:
            if mask | m == m:
                return m
        return None

    def to_lists(self):
        """Sorted list of sorted element-id lists (maximal sets only)."""
        return [elements_of(m) for m in self.maximal]

    def expand(self):
        """Every member of the downset, smallest mask first.  Exponential;
        meant for cross-checks on tiny ambients."""
        out = {0}
        for m in self.maximal:
            subs = [0]
            for b in elements_of(m):
                subs += [s | (1 << b) for s in subs]
            out.update(subs)
        return sorted(out)

    def __eq__(self, other):
        return (isinstance(other, SubsetFamily)
                and self.universe_size == other.universe_size
                and self.maximal == other.maximal)

    def __hash__(self):
        return hash((self.universe_size, self.maximal))

    def __repr__(self):
        return f"SubsetFamily({self.universe_size}, {self.to_lists()})"


def family_contains(family, mask):
    return family.contains(mask)


def family_insert(family, mask):
    return family.insert(mask)


def family_union_of(family):
    return family.union_mask()
