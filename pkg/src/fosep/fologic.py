"""First-order logic over finite words.

Formulas use de Bruijn indices: Var k refers to the k-th enclosing quantifier
(0 = innermost).  The surface syntax names variables x1, x2, ... by binder
depth, e.g. `E x1. (a(x1) & A x2. (x2<x1 -> b(x2)))`.

Also provides the rank-k Ehrenfeucht-Fraisse equivalence, both as canonical
nested type signatures (the workhorse) and as an explicit game search (an
independent cross-check).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import FormulaError, ResourceLimitError


# --- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class TrueConst:
    pass


@dataclass(frozen=True)
class FalseConst:
    pass


@dataclass(frozen=True)
class LetterAtom:
    var: int
    letter: object


@dataclass(frozen=True)
class Less:
    left: int
    right: int


@dataclass(frozen=True)
class Equal:
    left: int
    right: int


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Exists:
    body: object


@dataclass(frozen=True)
class Forall:
    body: object


TRUE = TrueConst()
FALSE = FalseConst()


def conj(parts):
    parts = tuple(parts)
    if not parts:
        return TRUE
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts):
    parts = tuple(parts)
    if not parts:
        return FALSE
    return parts[0] if len(parts) == 1 else Or(parts)


def implies(a, b):
    return Or((Not(a), b))


def var_le(i, j):
    """Var i <= Var j."""
    return Or((Less(i, j), Equal(i, j)))


# --- structural functions ----------------------------------------------------

def rank(phi):
    """Quantifier rank: maximal quantifier nesting depth."""
    memo = {}

    def go(f):
        key = id(f)
        if key in memo:
            return memo[key]
        if isinstance(f, (Exists, Forall)):
            r = 1 + go(f.body)
        elif isinstance(f, Not):
            r = go(f.body)
        elif isinstance(f, (And, Or)):
            r = max((go(p) for p in f.parts), default=0)
        else:
            r = 0
        memo[key] = r
        return r

    return go(phi)


def max_free_var(phi):
    """Largest free de Bruijn index, or -1 for a sentence."""
    memo = {}

    def go(f, depth):
        key = (id(f), depth)
        if key in memo:
            return memo[key]
        if isinstance(f, LetterAtom):
            r = f.var - depth
        elif isinstance(f, (Less, Equal)):
            r = max(f.left, f.right) - depth
        elif isinstance(f, Not):
            r = go(f.body, depth)
        elif isinstance(f, (And, Or)):
            r = max((go(p, depth) for p in f.parts), default=-1)
        elif isinstance(f, (Exists, Forall)):
            r = go(f.body, depth + 1)
        else:
            r = -1
        memo[key] = r
        return r

    return go(phi, 0)


def is_sentence(phi):
    return max_free_var(phi) < 0


def formula_letters(phi):
    out = set()

    def go(f):
        if isinstance(f, LetterAtom):
            out.add(f.letter)
        elif isinstance(f, Not):
            go(f.body)
        elif isinstance(f, (And, Or)):
            for p in f.parts:
                go(p)
        elif isinstance(f, (Exists, Forall)):
            go(f.body)

    go(phi)
    return out


def eval_formula(phi, word, env=()):
    """Standard semantics on positions 0..len(word)-1; env is the stack of
    bound positions, innermost last."""

    def go(f, env):
        if isinstance(f, TrueConst):
            return True
        if isinstance(f, FalseConst):
            return False
        if isinstance(f, LetterAtom):
            return word[_lookup(f.var, env)] == f.letter
        if isinstance(f, Less):
            return _lookup(f.left, env) < _lookup(f.right, env)
        if isinstance(f, Equal):
            return _lookup(f.left, env) == _lookup(f.right, env)
        if isinstance(f, Not):
            return not go(f.body, env)
        if isinstance(f, And):
            return all(go(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(go(p, env) for p in f.parts)
        if isinstance(f, Exists):
            return any(go(f.body, env + (p,)) for p in range(len(word)))
        if isinstance(f, Forall):
            return all(go(f.body, env + (p,)) for p in range(len(word)))
        raise FormulaError(f"unknown formula node {f!r}")

    return go(phi, tuple(env))


def _lookup(var, env):
    if var < 0 or var >= len(env):
        raise FormulaError(f"unbound variable index {var}")
    return env[-1 - var]


def eval_sentence(phi, word):
    if not word:
        raise FormulaError("words are nonempty (languages live in A+)")
    if not is_sentence(phi):
        raise FormulaError("formula has free variables; a sentence is required")
    return eval_formula(phi, word)


# --- transforms ---------------------------------------------------------------

def shift_free(phi, d, cutoff=0):
    """Add d to every variable with index >= cutoff (a free-variable shift)."""
    if d == 0:
        return phi

    def adj(v, cut):
        return v + d if v >= cut else v

    def go(f, cut):
        if isinstance(f, LetterAtom):
            return LetterAtom(adj(f.var, cut), f.letter)
        if isinstance(f, Less):
            return Less(adj(f.left, cut), adj(f.right, cut))
        if isinstance(f, Equal):
            return Equal(adj(f.left, cut), adj(f.right, cut))
        if isinstance(f, Not):
            return Not(go(f.body, cut))
        if isinstance(f, And):
            return And(tuple(go(p, cut) for p in f.parts))
        if isinstance(f, Or):
            return Or(tuple(go(p, cut) for p in f.parts))
        if isinstance(f, Exists):
            return Exists(go(f.body, cut + 1))
        if isinstance(f, Forall):
            return Forall(go(f.body, cut + 1))
        return f

    return go(phi, cutoff)


def relativize(phi, guard_fn):
    """Restrict every quantifier of phi to positions satisfying a guard.

    guard_fn(depth) must return the guard formula for a binder that has
    `depth` other phi-binders above it (depth 0 for phi's outermost
    quantifiers).  Inside the guard, Var 0 is the guarded binder and a
    variable that was free in phi at index j is Var(j + depth + 1).
    """

    def go(f, depth):
        if isinstance(f, Exists):
            return Exists(And((guard_fn(depth), go(f.body, depth + 1))))
        if isinstance(f, Forall):
            return Forall(implies(guard_fn(depth), go(f.body, depth + 1)))
        if isinstance(f, Not):
            return Not(go(f.body, depth))
        if isinstance(f, And):
            return And(tuple(go(p, depth) for p in f.parts))
        if isinstance(f, Or):
            return Or(tuple(go(p, depth) for p in f.parts))
        return f

    return go(phi, 0)


def substitute_letters(phi, mapping):
    """Replace letter atoms l(x) by mapping[l] instantiated at x.

    Each template in `mapping` is a formula whose single free variable is
    Var 0 (the tested position).  Atoms whose letter is not mapped stay.
    """

    def go(f):
        if isinstance(f, LetterAtom):
            tpl = mapping.get(f.letter)
            if tpl is None:
                return f
            return shift_free(tpl, f.var)
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, And):
            return And(tuple(go(p) for p in f.parts))
        if isinstance(f, Or):
            return Or(tuple(go(p) for p in f.parts))
        if isinstance(f, Exists):
            return Exists(go(f.body))
        if isinstance(f, Forall):
            return Forall(go(f.body))
        return f

    return go(phi)


def transform_abstract(phi, guard_fn, mapping):
    """Reinterpret a formula over an abstraction alphabet on the concrete word:
    one pass that both relativizes every quantifier (as `relativize`) and
    replaces every letter atom by its template (as `substitute_letters`).

    Guards and templates are inserted verbatim and never revisited, so letter
    values appearing both in `mapping` keys and inside guards or templates
    cannot clash.
    """

    def go(f, depth):
        if isinstance(f, LetterAtom):
            tpl = mapping.get(f.letter)
            return f if tpl is None else shift_free(tpl, f.var)
        if isinstance(f, Not):
            return Not(go(f.body, depth))
        if isinstance(f, And):
            return And(tuple(go(p, depth) for p in f.parts))
        if isinstance(f, Or):
            return Or(tuple(go(p, depth) for p in f.parts))
        if isinstance(f, Exists):
            return Exists(And((guard_fn(depth), go(f.body, depth + 1))))
        if isinstance(f, Forall):
            return Forall(implies(guard_fn(depth), go(f.body, depth + 1)))
        return f

    return go(phi, 0)


def mirror(phi):
    """Swap the arguments of every order atom; w satisfies mirror(phi) iff
    the reversed word satisfies phi."""

    def go(f):
        if isinstance(f, Less):
            return Less(f.right, f.left)
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, And):
            return And(tuple(go(p) for p in f.parts))
        if isinstance(f, Or):
            return Or(tuple(go(p) for p in f.parts))
        if isinstance(f, Exists):
            return Exists(go(f.body))
        if isinstance(f, Forall):
            return Forall(go(f.body))
        return f

    return go(phi)


def simplify(phi):
    """Constant folding and And/Or flattening.  Never increases rank.

    Folding quantifiers over constants uses the nonemptiness of words:
    E true = A true = true, E false = A false = false on A+.
    """

    def go(f):
        if isinstance(f, Not):
            b = go(f.body)
            if isinstance(b, TrueConst):
                return FALSE
            if isinstance(b, FalseConst):
                return TRUE
            if isinstance(b, Not):
                return b.body
            return Not(b)
        if isinstance(f, (And, Or)):
            is_and = isinstance(f, And)
            absorber = FalseConst if is_and else TrueConst
            unit = TrueConst if is_and else FalseConst
            parts = []
            for p in f.parts:
                q = go(p)
                if isinstance(q, absorber):
                    return FALSE if is_and else TRUE
                if isinstance(q, unit):
                    continue
                if isinstance(q, And if is_and else Or):
                    parts.extend(q.parts)
                else:
                    parts.append(q)
            return conj(parts) if is_and else disj(parts)
        if isinstance(f, (Exists, Forall)):
            b = go(f.body)
            if isinstance(b, (TrueConst, FalseConst)):
                return b
            return Exists(b) if isinstance(f, Exists) else Forall(b)
        return f

    return go(phi)


# --- surface syntax ------------------------------------------------------------

def format_formula(phi):
    """Print with x1, x2, ... named by binder depth."""

    def name(var, depth):
        idx = depth - 1 - var
        if idx < 0:
            raise FormulaError(f"unbound variable index {var} while printing")
        return f"x{idx + 1}"

    def go(f, depth):
        if isinstance(f, TrueConst):
            return "true"
        if isinstance(f, FalseConst):
            return "false"
        if isinstance(f, LetterAtom):
            if not (isinstance(f.letter, str) and len(f.letter) == 1):
                raise FormulaError(
                    f"cannot print abstract letter {f.letter!r}")
            return f"{f.letter}({name(f.var, depth)})"
        if isinstance(f, Less):
            return f"{name(f.left, depth)}<{name(f.right, depth)}"
        if isinstance(f, Equal):
            return f"{name(f.left, depth)}={name(f.right, depth)}"
        if isinstance(f, Not):
            return f"!{go_atom(f.body, depth)}"
        if isinstance(f, And):
            return " & ".join(go_atom(p, depth) for p in f.parts)
        if isinstance(f, Or):
            return " | ".join(go_atom(p, depth) for p in f.parts)
        if isinstance(f, Exists):
            return f"E x{depth + 1}. {go_atom(f.body, depth + 1)}"
        if isinstance(f, Forall):
            return f"A x{depth + 1}. {go_atom(f.body, depth + 1)}"
        raise FormulaError(f"unknown node {f!r}")

    def go_atom(f, depth):
        s = go(f, depth)
        if isinstance(f, (TrueConst, FalseConst, LetterAtom, Less, Equal, Not)):
            return s
        return f"({s})"

    return go(phi, 0)


class _Tokens:
    def __init__(self, text):
        self.toks = []
        i = 0
        n = len(text)
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if text.startswith("->", i):
                self.toks.append(("op", "->"))
                i += 2
                continue
            if c in "()&|!<=.":
                self.toks.append(("op", c))
                i += 1
                continue
            if c.isalnum() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("word", text[i:j]))
                i = j
                continue
            raise FormulaError(f"bad character {c!r} in formula at {i}")
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, kind, value=None):
        k, v = self.next()
        if k != kind or (value is not None and v != value):
            raise FormulaError(f"expected {value or kind}, got {v!r}")
        return v


def parse_formula(text):
    """Parse the surface grammar back into de Bruijn form."""
    toks = _Tokens(text)

    def parse_impl(scope):
        left = parse_or(scope)
        if toks.peek() == ("op", "->"):
            toks.next()
            right = parse_impl(scope)
            return implies(left, right)
        return left

    def parse_or(scope):
        parts = [parse_and(scope)]
        while toks.peek() == ("op", "|"):
            toks.next()
            parts.append(parse_and(scope))
        return disj(parts)

    def parse_and(scope):
        parts = [parse_unary(scope)]
        while toks.peek() == ("op", "&"):
            toks.next()
            parts.append(parse_unary(scope))
        return conj(parts)

    def parse_unary(scope):
        k, v = toks.peek()
        if (k, v) == ("op", "!"):
            toks.next()
            return Not(parse_unary(scope))
        return parse_atom(scope)

    def lookup(scope, name):
        for depth_from_top, nm in enumerate(reversed(scope)):
            if nm == name:
                return depth_from_top
        raise FormulaError(f"unbound variable {name!r}")

    def parse_atom(scope):
        k, v = toks.next()
        if (k, v) == ("op", "("):
            inner = parse_impl(scope)
            toks.expect("op", ")")
            return inner
        if k != "word":
            raise FormulaError(f"unexpected token {v!r}")
        if v == "true":
            return TRUE
        if v == "false":
            return FALSE
        if v in ("E", "A") and toks.peek()[0] == "word":
            _, name = toks.next()
            toks.expect("op", ".")
            body = parse_unary(scope + [name])
            return Exists(body) if v == "E" else Forall(body)
        nk, nv = toks.peek()
        if (nk, nv) == ("op", "("):
            if len(v) != 1:
                raise FormulaError(f"letter predicates are single characters, got {v!r}")
            toks.next()
            _, var = toks.next()
            toks.expect("op", ")")
            return LetterAtom(lookup(scope, var), v)
        if nk == "op" and nv in ("<", "="):
            toks.next()
            _, var2 = toks.next()
            li, ri = lookup(scope, v), lookup(scope, var2)
            return Less(li, ri) if nv == "<" else Equal(li, ri)
        raise FormulaError(f"unexpected token after {v!r}")

    phi = parse_impl([])
    if toks.peek() != (None, None):
        raise FormulaError(f"trailing tokens starting at {toks.peek()[1]!r}")
    return phi


# --- Ehrenfeucht-Fraisse equivalence -------------------------------------------

EF_MAX_RANK = 4
EF_MAX_LEN = 14

_type_intern = {}


def _intern(sig):
    tid = _type_intern.get(sig)
    if tid is None:
        tid = len(_type_intern)
        _type_intern[sig] = tid
    return tid


def _atomic_signature(word, pebbles):
    labels = tuple(word[p] for p in pebbles)
    order = []
    for i in range(len(pebbles)):
        for j in range(i + 1, len(pebbles)):
            a, b = pebbles[i], pebbles[j]
            order.append(-1 if a < b else (0 if a == b else 1))
    return ("atom", labels, tuple(order))


def rank_type(word, k):
    """Canonical rank-k type id of a word (Hintikka-style nested sets)."""
    n = len(word)
    memo = {}

    def go(pebbles, depth):
        key = (pebbles, depth)
        tid = memo.get(key)
        if tid is not None:
            return tid
        if depth == 0:
            tid = _intern(_atomic_signature(word, pebbles))
        else:
            children = frozenset(
                go(pebbles + (p,), depth - 1) for p in range(n))
            tid = _intern(("set", children))
        memo[key] = tid
        return tid

    return go((), k)


def ef_equivalent(u, v, k):
    """True iff u and v satisfy the same sentences of quantifier rank <= k."""
    if not u or not v:
        raise FormulaError("EF equivalence is defined on nonempty words")
    if k < 0:
        raise ValueError("rank must be >= 0")
    return rank_type(u, k) == rank_type(v, k)


def ef_game_equivalent(u, v, k):
    """The same relation by explicit k-round game search (cross-check)."""
    memo = {}

    def atomic(pu, pv):
        for i in range(len(pu)):
            if u[pu[i]] != v[pv[i]]:
                return False
            for j in range(i + 1, len(pu)):
                if (pu[i] < pu[j]) != (pv[i] < pv[j]):
                    return False
                if (pu[i] == pu[j]) != (pv[i] == pv[j]):
                    return False
        return True

    def win(pu, pv, rounds):
        key = (pu, pv, rounds)
        res = memo.get(key)
        if res is not None:
            return res
        if not atomic(pu, pv):
            res = False
        elif rounds == 0:
            res = True
        else:
            res = (
                all(any(win(pu + (a,), pv + (b,), rounds - 1)
                        for b in range(len(v))) for a in range(len(u)))
                and all(any(win(pu + (a,), pv + (b,), rounds - 1)
                            for a in range(len(u))) for b in range(len(v))))
        memo[key] = res
        return res

    return win((), (), k)


@dataclass(frozen=True)
class EfTypeTable:
    """Partition of bounded-length words into rank-k classes."""

    k: int
    max_len: int
    alphabet: tuple
    classes: dict

    def blocks(self):
        out = {}
        for w, cid in self.classes.items():
            out.setdefault(cid, []).append(w)
        return out


def ef_classes(alphabet, max_len, k):
    """Classes of rank-k equivalence over all nonempty words of length at
    most max_len.  Guarded: k <= 4 and max_len <= 14."""
    if k > EF_MAX_RANK or max_len > EF_MAX_LEN:
        raise ResourceLimitError(
            f"EF table bounds exceeded (k <= {EF_MAX_RANK}, "
            f"max_len <= {EF_MAX_LEN})",
            limit=(EF_MAX_RANK, EF_MAX_LEN), context="ef_classes")
    alphabet = tuple(sorted(alphabet))
    classes = {}
    ids = {}
    for length in range(1, max_len + 1):
        for tup in itertools.product(alphabet, repeat=length):
            w = "".join(tup)
            t = rank_type(w, k)
            if t not in ids:
                ids[t] = len(ids)
            classes[w] = ids[t]
    return EfTypeTable(k=k, max_len=max_len, alphabet=alphabet, classes=classes)
