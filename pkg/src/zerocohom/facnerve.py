"""The category of factorizations of a monoid with zero, and its nerve.

Objects are the nonzero elements.  A morphism ``a -> b`` is a triple
``(alpha, a, beta)`` with ``alpha * a * beta == b``; distinct triples are
distinct morphisms even when they have the same endpoints.  All
enumerations run in lexicographic order of element ids so that every matrix
built from them is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .monoid import MonoidWithZero


class ZeroObject(ValueError):
    pass


class NotComposable(ValueError):
    pass


@dataclass(frozen=True, order=True)
class FacMorphism:
    alpha: int
    a: int
    beta: int
    target: int


def morphism(M: MonoidWithZero, alpha: int, a: int, beta: int) -> FacMorphism:
    if a == M.zero:
        raise ZeroObject("0 is not an object")
    b = M.mul(M.mul(alpha, a), beta)
    if b == M.zero:
        raise ZeroObject(f"{M.name(alpha)}*{M.name(a)}*{M.name(beta)} is zero")
    return FacMorphism(alpha, a, beta, b)


def morphisms(M: MonoidWithZero, a: int, b: int) -> list[FacMorphism]:
    """``Mor(a, b)``: all ``(alpha, beta)`` with ``alpha a beta = b``."""
    if a == M.zero or b == M.zero:
        raise ZeroObject("0 is not an object")
    t = M.table
    return [FacMorphism(al, a, be, b) for al in M.nonzero for be in M.nonzero
            if t[t[al][a]][be] == b]


@lru_cache(maxsize=None)
def all_morphisms(M: MonoidWithZero) -> tuple[FacMorphism, ...]:
    t, z = M.table, M.zero
    out = []
    for a in M.nonzero:
        for al in M.nonzero:
            la = t[al][a]
            if la == z:
                continue
            for be in M.nonzero:
                b = t[la][be]
                if b != z:
                    out.append(FacMorphism(al, a, be, b))
    return tuple(out)


def compose(M: MonoidWithZero, m2: FacMorphism, m1: FacMorphism) -> FacMorphism:
    """``m2 . m1`` = ``(alpha2 alpha1, a1, beta1 beta2)``."""
    if m1.target != m2.a:
        raise NotComposable(f"target {M.name(m1.target)} != source {M.name(m2.a)}")
    return morphism(M, M.mul(m2.alpha, m1.alpha), m1.a, M.mul(m1.beta, m2.beta))


@lru_cache(maxsize=None)
def nerve(M: MonoidWithZero, n: int) -> tuple[tuple[int, ...], ...]:
    """``Ner_n``: n-tuples with nonzero product; ``Ner_0`` is the empty tuple."""
    if n < 0:
        raise ValueError("negative degree")
    t, z = M.table, M.zero
    out: list[tuple[int, ...]] = []

    def extend(prefix, p):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for a in M.nonzero:
            q = t[p][a]
            if q != z:
                prefix.append(a)
                extend(prefix, q)
                prefix.pop()

    extend([], M.identity)
    return tuple(out)


@lru_cache(maxsize=None)
def factorizations(M: MonoidWithZero, a: int, length: int) -> tuple[tuple[int, ...], ...]:
    """All ``length``-tuples whose product is ``a``, lexicographically."""
    if length == 0:
        return ((),) if a == M.identity else ()
    return tuple(s for s in nerve(M, length) if M.prod(s) == a)
