"""Roots as half-spaces of W, keyed by their vectors in the canonical basis."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .coxeter import CoxeterSystem, Element, minimal_gallery
from .qfield import INF, ONE, ZERO, FieldElem, SQRT2, SQRT3

__all__ = [
    "Root",
    "SameWallError",
    "OrderAnomalyError",
    "ChamberSearch",
    "root_from_expr",
    "simple_root",
    "parse_root",
    "is_positive",
    "phi_w",
    "reflection_order",
    "is_prenilpotent",
    "find_chamber",
    "roots_up_to_depth",
    "DEFAULT_DEPTH",
]

DEFAULT_DEPTH = 12

# 4 cos^2(pi/k) for every finite order reachable with labels in {2, 3, 4, 6}
_ORDER_TABLE = (
    (FieldElem(0), 2),
    (FieldElem(1), 3),
    (FieldElem(2), 4),
    (FieldElem(3), 6),
    (FieldElem(2) + SQRT2, 8),
    (FieldElem(2) + SQRT3, 12),
)


class SameWallError(ValueError):
    """Both roots share a wall (alpha = +-beta)."""


class OrderAnomalyError(ArithmeticError):
    """Pairing value below 4 that matches no dihedral order."""


@dataclass(frozen=True, eq=False)
class Root:
    """The half-space ``(-1)^negated * w.alpha_s``.

    Equality and hashing use only the canonical-basis key; the witness
    expression is one of many that describe the same root.
    """

    system: CoxeterSystem
    key: tuple[FieldElem, ...]
    word: tuple[int, ...]
    s: int
    negated: bool = False

    def __eq__(self, other):
        return isinstance(other, Root) and other.system is self.system and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __neg__(self) -> Root:
        return Root(self.system, tuple(-x for x in self.key), self.word, self.s, not self.negated)

    @cached_property
    def w(self) -> Element:
        """Witness element, reduced on demand; ``word`` itself need not be reduced."""
        return self.system.reduce(self.word)

    @cached_property
    def sign(self) -> int:
        for x in self.key:
            sg = x.sign()
            if sg:
                return sg
        raise AssertionError("zero root key")

    @property
    def is_positive(self) -> bool:
        return self.sign > 0

    @cached_property
    def key_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.key])

    def act(self, u: Element) -> Root:
        """The translate u.alpha."""
        sysm = self.system
        return Root(sysm, sysm.act(u.word, self.key), u.word + self.word, self.s, self.negated)

    @cached_property
    def reflection(self) -> Element:
        """r_alpha = w s w^{-1}."""
        word = self.w.word
        return self.system.reduce(word + (self.s,) + word[::-1])

    @cached_property
    def canonical(self) -> tuple[tuple[int, ...], int, bool]:
        """A deterministic witness ``(word, s, negated)`` of minimal length.

        Walks the positive root down by simple reflections with positive
        pairing (smallest label first) until it becomes simple.
        """
        sysm = self.system
        v = self.key if self.sign > 0 else tuple(-x for x in self.key)
        letters = []
        while True:
            nz = [i for i, x in enumerate(v) if x]
            if len(nz) == 1 and v[nz[0]] == ONE:
                return tuple(letters), nz[0], self.sign < 0
            q = next(i for i in range(sysm.rank) if sysm.pairing(v, sysm.unit(i)).sign() > 0)
            letters.append(q)
            v = sysm.reflect(q, v)

    @property
    def depth(self) -> int:
        """Minimal gallery distance from 1 to a chamber separated by the wall, i.e. |word| + 1."""
        return len(self.canonical[0]) + 1

    @property
    def expr(self) -> str:
        word, s, neg = self.canonical
        labels = self.system.labels
        body = " ".join(labels[i] for i in word) if word else "e"
        return ("- " if neg else "") + f"{body} : {labels[s]}"

    def witness_expr(self) -> str:
        labels = self.system.labels
        body = str(self.w)
        return ("- " if self.negated else "") + f"{body} : {labels[self.s]}"

    def __str__(self):
        return self.expr

    def __repr__(self):
        return f"Root({self.expr!r})"

    def sort_key(self):
        word, s, neg = self.canonical
        return (len(word), neg, word, s)

    def contains(self, chamber: Element) -> bool:
        return self.system.contains(chamber, self.key)


def root_from_expr(system: CoxeterSystem, w, s, negated: bool = False) -> Root:
    """The root ``+-w.alpha_s``; ``w`` may be an Element or any word."""
    word = w.word if isinstance(w, Element) else system.parse_word(w)
    si = s if isinstance(s, int) else system.index(s)
    key = system.act(word, system.unit(si))
    if negated:
        key = tuple(-x for x in key)
    return Root(system, key, word, si, bool(negated))


def simple_root(system: CoxeterSystem, s) -> Root:
    return root_from_expr(system, system.identity(), s)


def parse_root(system: CoxeterSystem, text: str) -> Root:
    """Parse ``[-] word : label``; the word may be ``e`` for the identity."""
    body = text.strip()
    negated = False
    if body.startswith("-"):
        negated = True
        body = body[1:]
    if body.count(":") != 1:
        raise ValueError(f"root expression needs exactly one ':' in {text!r}")
    word, label = (part.strip() for part in body.split(":"))
    if not label:
        raise ValueError(f"missing simple label in {text!r}")
    return root_from_expr(system, system.reduce(word), system.index(label), negated)


def is_positive(alpha: Root) -> bool:
    return alpha.is_positive


def phi_w(system: CoxeterSystem, w: Element) -> frozenset[Root]:
    """Positive roots not containing the chamber w."""
    return frozenset(minimal_gallery(system, w).roots)


def _pairing(alpha: Root, beta: Root) -> FieldElem:
    if alpha.system is not beta.system:
        raise ValueError("roots belong to different Coxeter systems")
    return alpha.system.pairing(alpha.key, beta.key)


def reflection_order(alpha: Root, beta: Root):
    """Order of r_alpha r_beta: an int, or ``INF``."""
    if alpha == beta or alpha == -beta:
        raise SameWallError("roots share a wall")
    c = _pairing(alpha, beta)
    q = 4 * c * c
    if q >= 4:
        return INF
    for value, k in _ORDER_TABLE:
        if q == value:
            return k
    raise OrderAnomalyError(f"4c^2 = {q} matches no supported dihedral order")


def is_prenilpotent(alpha: Root, beta: Root) -> bool:
    """Pairing criterion B(alpha, beta) > -1 on norm-one canonical keys."""
    return _pairing(alpha, beta) > -1


@dataclass(frozen=True)
class ChamberSearch:
    """Result of a bounded chamber search; ``chamber`` is None when nothing was found."""

    chamber: Element | None
    bound: int

    @property
    def found(self) -> bool:
        return self.chamber is not None

    def __bool__(self):
        return self.found


def find_chamber(
    alpha: Root, beta: Root, signs: Sequence[int] = (1, 1), depth: int = DEFAULT_DEPTH
) -> ChamberSearch:
    """ShortLex-least chamber w with w on side ``signs[0]`` of alpha and ``signs[1]`` of beta."""
    return search_chamber([(alpha, signs[0]), (beta, signs[1])], depth)


def search_chamber(conditions: Iterable[tuple[Root, int]], depth: int = DEFAULT_DEPTH) -> ChamberSearch:
    conditions = list(conditions)
    if not conditions:
        raise ValueError("search_chamber needs at least one condition")
    system = conditions[0][0].system
    # level by level, so shallow hits do not pay for deep enumeration
    start = 0
    for k in range(depth + 1):
        count = system.ensure_chambers(k)
        if count == start:
            break  # finite group exhausted
        ok = np.ones(count - start, dtype=bool)
        for root, sg in conditions:
            ok &= system.side_signs(root.key, k, root.key_float, start) == (1 if sg > 0 else -1)
        hits = np.nonzero(ok)[0]
        if hits.size:
            return ChamberSearch(system.chambers(k)[start + int(hits[0])], depth)
        start = count
    return ChamberSearch(None, depth)


def roots_up_to_depth(system: CoxeterSystem, depth: int, negatives: bool = True) -> list[Root]:
    """All roots in the union of Phi_w and -Phi_w over l(w) <= depth, sorted deterministically."""
    seen: dict[tuple, Root] = {}
    # every positive root of depth k is the last root crossed by some gallery of length k
    for w in system.chambers(depth)[1:]:
        r = root_from_expr(system, Element(system, w.word[:-1]), w.word[-1])
        seen.setdefault(r.key, r)
    pos = sorted(seen.values(), key=Root.sort_key)
    if not negatives:
        return pos
    return sorted(pos + [-r for r in pos], key=Root.sort_key)
