"""Infinite words: Wilke algebras, the infinity saturation, and the
separability decision for omega-languages.

A finite omega-semigroup is a pair (S+, Sinf) with a mixed product
S+ x Sinf -> Sinf and an infinity power s -> s^inf that fully determines the
infinite product.  Input is the algebra itself (JSON); building it from a
Buchi automaton is out of scope.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import FormatError, InvalidAlgebraError
from .semigroups import FiniteSemigroup
from .subsets import SubsetFamily, _Antichain, elements_of, iter_bits
from .saturation import SeparabilityVerdict, saturate_family

_COHERENCE_POWERS = 4


class OmegaSemigroup:
    """Finite Wilke algebra (S+, Sinf, mixed product, infinity power)."""

    __slots__ = ("finite", "infinite_size", "mixed", "inf_power")

    def __init__(self, finite, infinite_size, mixed, inf_power, check=True):
        self.finite = finite
        self.infinite_size = infinite_size
        self.mixed = list(mixed)
        self.inf_power = tuple(inf_power)
        n, k = finite.size, infinite_size
        if k <= 0:
            raise FormatError("omega-semigroup needs at least one infinite element")
        if len(self.mixed) != n * k:
            raise FormatError(
                f"mixed table has {len(self.mixed)} entries, expected {n * k}")
        if any(not (0 <= v < k) for v in self.mixed):
            raise FormatError("mixed table entry out of range")
        if len(self.inf_power) != n or any(
                not (0 <= v < k) for v in self.inf_power):
            raise FormatError("infinity power must map S+ into Sinf")
        if check:
            self.validate()

    def mix(self, s, x):
        return self.mixed[s * self.infinite_size + x]

    def validate(self):
        """Coherence of the infinite product: mixed associativity,
        s.s^inf = s^inf, (s^n)^inf = s^inf for small n, and
        (st)^inf = s.(ts)^inf.  Rejects with the failing instance."""
        sg = self.finite
        n = sg.size
        for s in range(n):
            for t in range(n):
                for x in range(self.infinite_size):
                    if self.mix(sg.mul(s, t), x) != self.mix(s, self.mix(t, x)):
                        raise InvalidAlgebraError(
                            "mixed product is not associative",
                            failing=(s, t, x))
        for s in range(n):
            if self.mix(s, self.inf_power[s]) != self.inf_power[s]:
                raise InvalidAlgebraError(
                    "s . s^inf differs from s^inf", failing=(s,))
            p = s
            for exp in range(2, _COHERENCE_POWERS + 1):
                p = sg.mul(p, s)
                if self.inf_power[p] != self.inf_power[s]:
                    raise InvalidAlgebraError(
                        f"(s^{exp})^inf differs from s^inf", failing=(s, exp))
        for s in range(n):
            for t in range(n):
                if (self.inf_power[sg.mul(s, t)]
                        != self.mix(s, self.inf_power[sg.mul(t, s)])):
                    raise InvalidAlgebraError(
                        "(st)^inf differs from s.(ts)^inf", failing=(s, t))


@dataclass
class OmegaMorphism:
    """Letter images into S+; omega-images follow as alpha(u).(alpha(v))^inf."""

    omega: OmegaSemigroup
    alphabet: tuple
    letter_image: dict

    def word_image(self, word):
        """Image in S+ of a nonempty finite word."""
        return _word_image(self, word)

    def omega_image(self, prefix, period):
        """Image of the ultimately periodic word prefix . period^inf."""
        om = self.omega
        v = _word_image(self, period)
        x = om.inf_power[v]
        if prefix:
            x = om.mix(_word_image(self, prefix), x)
        return x


def _word_image(m, word):
    img = None
    for a in word:
        s = m.letter_image.get(a)
        if s is None:
            raise FormatError(f"letter {a!r} not in the omega alphabet")
        img = s if img is None else m.omega.finite.mul(img, s)
    if img is None:
        raise FormatError("empty word has no image")
    return img


def set_infinity(omega, t_mask):
    """T^inf: the set of infinite products of sequences over T.

    Computed by linked pairs over the subsemigroup generated by T: collect
    u.e^inf for u, e in the closure with e idempotent and u.e = u.
    """
    if not t_mask:
        return 0
    sg = omega.finite
    closure = _element_closure(sg, list(iter_bits(t_mask)))
    out = 0
    for e in closure:
        if sg.mul(e, e) != e:
            continue
        einf = omega.inf_power[e]
        for u in closure:
            if sg.mul(u, e) == u:
                out |= 1 << omega.mix(u, einf)
    return out


def set_infinity_bruteforce(omega, t_mask):
    """Oracle for T^inf: every ultimately periodic product p.q^inf with p, q
    products of T-sequences (any infinite T-product equals one of these)."""
    if not t_mask:
        return 0
    sg = omega.finite
    closure = _element_closure(sg, list(iter_bits(t_mask)))
    out = 0
    for q in closure:
        qinf = omega.inf_power[q]
        out |= 1 << qinf
        for p in closure:
            out |= 1 << omega.mix(p, qinf)
    return out


def _element_closure(sg, elements):
    seen = list(dict.fromkeys(elements))
    index = set(seen)
    head = 0
    while head < len(seen):
        x = seen[head]
        head += 1
        for g in elements:
            y = sg.mul(x, g)
            if y not in index:
                index.add(y)
                seen.append(y)
    return seen


def mixed_set_product(omega, t_mask, x_mask):
    """{s.x : s in T, x in X} inside Sinf."""
    out = 0
    xs = elements_of(x_mask)
    for s in iter_bits(t_mask):
        for x in xs:
            out |= 1 << omega.mix(s, x)
    return out


def saturate_infinity(finite_family, omega):
    """Least downset-closed family over Sinf containing T^inf for every T in
    the finite family and closed under mixed products with its members."""
    acc = _Antichain()
    for t in finite_family.maximal:
        acc.add(set_infinity(omega, t))
    finite_maximal = sorted(finite_family.maximal)
    seen = set()
    while True:
        changed = False
        for t in finite_maximal:
            for x in sorted(acc.maximal):
                key = (t, x)
                if key in seen:
                    continue
                seen.add(key)
                if acc.add(mixed_set_product(omega, t, x)):
                    changed = True
        if not changed:
            break
    return acc.snapshot(omega.infinite_size)


def saturate_infinity_bruteforce(finite_family, omega):
    """Full-downset fixpoint over all subsets of Sinf (oracle for tiny Sinf)."""
    members = set()
    finite_members = set()
    for m in finite_family.maximal:
        for sub in _all_subsets(m):
            finite_members.add(sub)
    for t in finite_members:
        members.add(set_infinity_bruteforce(omega, t))
    members.add(0)
    while True:
        new = set()
        for t in finite_members:
            for x in members:
                p = mixed_set_product(omega, t, x)
                if p not in members:
                    new.add(p)
        for x in members:
            for sub in _all_subsets(x):
                if sub not in members:
                    new.add(sub)
        if not new:
            break
        members |= new
    return SubsetFamily.from_sets(omega.infinite_size, members)


def _all_subsets(mask):
    bits = elements_of(mask)
    subs = [0]
    for b in bits:
        subs += [s | (1 << b) for s in subs]
    return subs


def omega_separable(morphism, f0_mask, f1_mask, variant="omega"):
    """Separability of two omega-languages given by accepting sets in Sinf."""
    om = morphism.omega
    image = _element_closure(om.finite, sorted(set(morphism.letter_image.values())))
    seeds = [1 << s for s in image]
    sat_plus = saturate_family(om.finite, seeds, variant)
    family_inf = saturate_infinity(sat_plus.family, om)
    for t1 in elements_of(f0_mask):
        for t2 in elements_of(f1_mask):
            pair = (1 << t1) | (1 << t2)
            dom = family_inf.dominating(pair)
            if dom is not None:
                return SeparabilityVerdict(
                    separable=False, witness_pair=(t1, t2), witness_set=dom)
    return SeparabilityVerdict(separable=True)


def is_fo_definable_omega(omega, accepting_mask=None):
    """Perrin's criterion: definable iff the finite part is aperiodic.

    The caller supplies the syntactic omega-semigroup of the language; the
    accepting set is irrelevant to the test and accepted for symmetry.
    """
    return omega.finite.is_aperiodic()


# --- JSON format -------------------------------------------------------------

def omega_from_json(data):
    """{finite: {size, table}, infiniteSize, mixed, infinityPower, letters,
    accepting0, accepting1} -> (OmegaMorphism, f0_mask, f1_mask)."""
    try:
        fin = data["finite"]
        sg = FiniteSemigroup(int(fin["size"]),
                             [v for row in fin["table"] for v in row])
        k = int(data["infiniteSize"])
        mixed = [v for row in data["mixed"] for v in row]
        om = OmegaSemigroup(sg, k, mixed, data["infinityPower"])
        letters = {str(a): int(s) for a, s in data["letters"].items()}
        f0 = 0
        for x in data["accepting0"]:
            f0 |= 1 << int(x)
        f1 = 0
        for x in data["accepting1"]:
            f1 |= 1 << int(x)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad omega-semigroup JSON: {exc}") from None
    for a, s in letters.items():
        if not (0 <= s < sg.size):
            raise FormatError(f"letter {a!r} maps outside S+")
    if f0 >> k or f1 >> k:
        raise FormatError("accepting sets reference elements outside Sinf")
    morphism = OmegaMorphism(
        omega=om, alphabet=tuple(sorted(letters)), letter_image=letters)
    return morphism, f0, f1


def load_omega(path):
    with open(path, "r", encoding="utf-8") as fh:
        return omega_from_json(json.load(fh))
