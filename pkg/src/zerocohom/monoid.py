"""Finite monoids with zero, stored as multiplication tables.

Elements are the dense ids ``0 .. m-1``; names are only kept for input and
output.  Besides validation this module builds the monoids the rest of the
package works with: adjoining a zero or an identity, finite Rees truncations
of free monoids, and a small set of named examples.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence


class MonoidError(ValueError):
    """Base class for invalid monoid input."""


class TableError(MonoidError):
    pass


class NotAssociative(MonoidError):
    def __init__(self, a: str, b: str, c: str):
        super().__init__(f"not associative: ({a}*{b})*{c} != {a}*({b}*{c})")
        self.witness = (a, b, c)


class BadIdentity(MonoidError):
    def __init__(self, a: str):
        super().__init__(f"identity does not act trivially on {a}")
        self.witness = a


class BadZero(MonoidError):
    def __init__(self, a: str):
        super().__init__(f"zero does not absorb {a}")
        self.witness = a


class IdentityEqualsZero(MonoidError):
    def __init__(self):
        super().__init__("identity and zero coincide")


class InfiniteInput(MonoidError):
    pass


class NotFactorClosed(MonoidError):
    def __init__(self, word: str, factor: str):
        super().__init__(f"word {word!r} is allowed but its factor {factor!r} is not")
        self.word = word
        self.factor = factor


@dataclass(frozen=True)
class MonoidWithZero:
    elements: tuple[str, ...]
    identity: int
    zero: int
    table: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(a for a in range(self.size) if a != self.zero)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def prod(self, seq: Iterable[int]) -> int:
        p = self.identity
        for a in seq:
            p = self.table[p][a]
        return p

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r}") from None

    def name(self, a: int) -> str:
        return self.elements[a]

    def is_commutative(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.size) for b in range(a))

    def to_document(self) -> dict:
        names = self.elements
        return {
            "elements": list(names),
            "identity": names[self.identity],
            "zero": names[self.zero],
            "table": [[names[x] for x in row] for row in self.table],
        }


@dataclass(frozen=True)
class FiniteMonoid:
    """A monoid table that need not have a zero yet."""

    elements: tuple[str, ...]
    identity: int
    table: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class WordTruncationSpec:
    """Alphabet plus a finite factor-closed set of allowed words.

    Words are tuples of letters.  ``allowed_words=None`` stands for the
    whole free monoid and is rejected by :func:`zero_free`.
    """

    alphabet: tuple[str, ...]
    allowed_words: frozenset[tuple[str, ...]] | None


def _check_table(m: int, table: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    if len(table) != m:
        raise TableError(f"table has {len(table)} rows, expected {m}")
    for i, row in enumerate(table):
        if len(row) != m:
            raise TableError(f"table row {i} has {len(row)} entries, expected {m}")
        for x in row:
            if not (isinstance(x, int) and 0 <= x < m):
                raise TableError(f"table row {i} has invalid entry {x!r}")
    return tuple(tuple(row) for row in table)


def find_nonassociative(table: Sequence[Sequence[int]]) -> tuple[int, int, int] | None:
    m = len(table)
    for a, b in product(range(m), repeat=2):
        ab = table[a][b]
        row_ab = table[ab]
        for c in range(m):
            if row_ab[c] != table[a][table[b][c]]:
                return a, b, c
    return None


def validate(elements: Sequence[str], identity: int, zero: int,
             table: Sequence[Sequence[int]]) -> MonoidWithZero:
    """Check every monoid-with-zero law and return the monoid.

    Raises the first violation found, naming a witness.
    """
    elements = tuple(str(e) for e in elements)
    m = len(elements)
    if len(set(elements)) != m:
        raise TableError("duplicate element names")
    if m < 2:
        raise TableError("a monoid with zero needs at least two elements")
    table = _check_table(m, table)
    for x, what in ((identity, "identity"), (zero, "zero")):
        if not 0 <= x < m:
            raise TableError(f"{what} id {x} out of range")
    if identity == zero:
        raise IdentityEqualsZero()
    for a in range(m):
        if table[identity][a] != a or table[a][identity] != a:
            raise BadIdentity(elements[a])
    for a in range(m):
        if table[zero][a] != zero or table[a][zero] != zero:
            raise BadZero(elements[a])
    bad = find_nonassociative(table)
    if bad is not None:
        raise NotAssociative(*(elements[x] for x in bad))
    return MonoidWithZero(elements, identity, zero, table)


def from_named_table(elements: Sequence[str], identity: str, zero: str,
                     table: Sequence[Sequence[str]]) -> MonoidWithZero:
    idx = {e: i for i, e in enumerate(elements)}
    try:
        ids = [[idx[x] for x in row] for row in table]
        return validate(elements, idx[identity], idx[zero], ids)
    except KeyError as exc:
        raise TableError(f"unknown element name {exc.args[0]!r}") from None


def adjoin_zero(M: FiniteMonoid, zero_name: str = "0") -> MonoidWithZero:
    """Append a fresh absorbing element to a finite monoid."""
    m = len(M.elements)
    if zero_name in M.elements:
        raise TableError(f"name {zero_name!r} already used")
    table = _check_table(m, M.table)
    new = [list(row) + [m] for row in table]
    new.append([m] * (m + 1))
    return validate(M.elements + (zero_name,), M.identity, m, new)


def adjoin_identity(elements: Sequence[str], table: Sequence[Sequence[int]],
                    identity_name: str = "1") -> FiniteMonoid:
    """Put a fresh two-sided identity in front of a semigroup table.

    The identity is added even when the semigroup already has one.  The new
    element gets id 0 and old ids shift up by one.
    """
    elements = tuple(str(e) for e in elements)
    if identity_name in elements:
        raise TableError(f"name {identity_name!r} already used")
    m = len(elements)
    table = _check_table(m, table)
    bad = find_nonassociative(table)
    if bad is not None:
        raise NotAssociative(*(elements[x] for x in bad))
    new = [list(range(m + 1))]
    for a, row in enumerate(table):
        new.append([a + 1] + [x + 1 for x in row])
    return FiniteMonoid((identity_name,) + elements, 0, tuple(map(tuple, new)))


def with_zero(M: FiniteMonoid, zero_name: str) -> MonoidWithZero:
    """Validate a monoid table whose zero is already present."""
    return validate(M.elements, M.identity, M.elements.index(zero_name), M.table)


def _word_name(word: tuple[str, ...]) -> str:
    if not word:
        return "1"
    out = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        k = j - i
        out.append(word[i] if k == 1 else f"{word[i]}^{k}")
        i = j
    return "".join(out)


def zero_free(spec: WordTruncationSpec) -> MonoidWithZero:
    """Rees quotient of the free monoid by the complement of ``allowed_words``.

    Products are concatenations when the result is allowed and zero
    otherwise.  Elements are ordered by length, then lexicographically by
    letter position in the alphabet.
    """
    if spec.allowed_words is None:
        raise InfiniteInput("the free monoid with zero is infinite; give a finite "
                            "factor-closed word set")
    letters = {x: i for i, x in enumerate(spec.alphabet)}
    words = {tuple(w) for w in spec.allowed_words}
    for w in words:
        for x in w:
            if x not in letters:
                raise TableError(f"letter {x!r} not in alphabet")
    if () not in words:
        raise TableError("allowed words must contain the empty word")
    for w in sorted(words, key=len):
        for i in range(len(w)):
            for j in range(i + 1, len(w) + 1):
                if (i, j) != (0, len(w)) and w[i:j] not in words:
                    raise NotFactorClosed(_word_name(w), _word_name(w[i:j]))
    order = sorted(words, key=lambda w: (len(w), [letters[x] for x in w]))
    idx = {w: i for i, w in enumerate(order)}
    zero = len(order)
    table = []
    for u in order:
        table.append([idx.get(u + v, zero) for v in order] + [zero])
    table.append([zero] * (zero + 1))
    names = [_word_name(w) for w in order] + ["0"]
    if len(set(names)) != len(names):
        names = ["".join(w) or "1" for w in order] + ["0"]
    return validate(names, idx[()], zero, table)


def words_up_to(alphabet: Sequence[str], max_len: int) -> frozenset[tuple[str, ...]]:
    return frozenset(w for k in range(max_len + 1) for w in product(alphabet, repeat=k))


@dataclass(frozen=True)
class CancellationWitness:
    a: int
    b: int
    x: int
    side: str  # "right": a*x == b*x, "left": x*a == x*b

    def describe(self, M: MonoidWithZero) -> str:
        a, b, x = (M.name(t) for t in (self.a, self.b, self.x))
        if self.side == "right":
            lhs, rhs, val = f"{a}*{x}", f"{b}*{x}", M.mul(self.a, self.x)
        else:
            lhs, rhs, val = f"{x}*{a}", f"{x}*{b}", M.mul(self.x, self.a)
        return f"{lhs} = {rhs} = {M.name(val)} != 0 but {a} != {b}"


def is_zero_cancellative(M: MonoidWithZero) -> tuple[bool, CancellationWitness | None]:
    """``ax = bx != 0 => a = b`` and ``xa = xb != 0 => a = b``."""
    t, z, m = M.table, M.zero, M.size
    for x in range(m):
        for a in range(m):
            for b in range(a + 1, m):
                if t[a][x] == t[b][x] != z:
                    return False, CancellationWitness(a, b, x, "right")
                if t[x][a] == t[x][b] != z:
                    return False, CancellationWitness(a, b, x, "left")
    return True, None


def permuted(M: MonoidWithZero, perm: Sequence[int]) -> MonoidWithZero:
    """Isomorphic copy in which old element ``a`` gets id ``perm[a]``."""
    m = M.size
    inv = [0] * m
    for a, p in enumerate(perm):
        inv[p] = a
    elements = [M.elements[inv[p]] for p in range(m)]
    table = [[perm[M.table[inv[p]][inv[q]]] for q in range(m)] for p in range(m)]
    return validate(elements, perm[M.identity], perm[M.zero], table)


# ---------------------------------------------------------------------------
# named examples


def cyclic_group(n: int) -> FiniteMonoid:
    names = ["1"] + (["g"] if n == 2 else [f"g^{k}" if k > 1 else "g" for k in range(1, n)])
    return FiniteMonoid(tuple(names), 0,
                        tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def example_uvw() -> MonoidWithZero:
    """Commutative ``{u, v, w, 0}`` with ``u^2 = v^2 = uv = w`` and ``uw = vw = 0``,
    with an identity adjoined."""
    names = ["u", "v", "w", "0"]
    u, v, w, z = range(4)
    prod_ = {(u, u): w, (u, v): w, (v, u): w, (v, v): w}
    table = [[prod_.get((a, b), z) for b in range(4)] for a in range(4)]
    return with_zero(adjoin_identity(names, table), "0")


def trivial() -> MonoidWithZero:
    return adjoin_zero(cyclic_group(1))


def z2_with_zero() -> MonoidWithZero:
    return adjoin_zero(cyclic_group(2))


def m3() -> MonoidWithZero:
    """``{1, x, x^2, 0}``: words in one letter of length at most two."""
    return zero_free(WordTruncationSpec(("x",), words_up_to(("x",), 2)))


def free2_len1() -> MonoidWithZero:
    """``{1, x, y, 0}``: words in two letters of length at most one."""
    return zero_free(WordTruncationSpec(("x", "y"), words_up_to(("x", "y"), 1)))


BUILTIN_MONOIDS = {
    "trivial": trivial,
    "z2-with-zero": z2_with_zero,
    "example-uvw": example_uvw,
    "m3": m3,
    "free2-len1": free2_len1,
}


def builtin(name: str) -> MonoidWithZero:
    try:
        return BUILTIN_MONOIDS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin monoid {name!r}") from None
