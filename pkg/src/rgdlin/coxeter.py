"""Coxeter matrices, group elements in ShortLex normal form, and chambers.

All word problems are solved through the canonical linear representation.
Every element ``w`` is tracked by its *dual point* ``p_w``, the functional
``v -> f(w^{-1} v)`` where ``f`` takes the value 1 on every simple root.  The
left descents of ``w`` are exactly the generators ``s`` with ``p_w[s] < 0``,
and the chamber ``w`` lies in the half-space of a root with key ``k`` iff
``sum_j k_j p_w[j] > 0``.
"""
from __future__ import annotations

import threading
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .qfield import INF, ONE, ZERO, FieldElem, UnsupportedLabelError, cos_value

__all__ = [
    "CoxeterMatrix",
    "CoxeterSystem",
    "Element",
    "Gallery",
    "UnknownLabelError",
    "reduce_word",
    "descent_set",
    "minimal_gallery",
    "system_for",
]

SUPPORTED_LABELS = (2, 3, 4, 6, INF)


class UnknownLabelError(KeyError):
    pass


def _parse_m(token) -> float | int:
    if isinstance(token, str):
        token = token.strip().lower()
        if token in ("inf", "infinity", "oo", "∞"):
            return INF
        token = int(token)
    if token == INF:
        return INF
    if token not in SUPPORTED_LABELS:
        raise UnsupportedLabelError(f"unsupported Coxeter label {token!r}")
    return int(token)


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric Coxeter matrix with off-diagonal entries in {2, 3, 4, 6, inf}."""

    labels: tuple[str, ...]
    m: tuple[tuple, ...]

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise ValueError("a Coxeter matrix needs at least one generator")
        if len(set(self.labels)) != n:
            raise ValueError("generator labels must be distinct")
        if any(not lab or ":" in lab or "-" in lab or " " in lab for lab in self.labels):
            raise ValueError("labels must be non-empty and free of ':', '-' and spaces")
        rows = tuple(tuple(_parse_m(x) if i != j else x for j, x in enumerate(row))
                     for i, row in enumerate(self.m))
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError("matrix shape does not match the number of labels")
        for i in range(n):
            if rows[i][i] != 2:
                raise ValueError("diagonal entries must equal 2")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Coxeter matrix must be symmetric")
        object.__setattr__(self, "m", rows)

    @classmethod
    def from_upper(cls, labels: Sequence[str], upper: dict) -> CoxeterMatrix:
        """Build from ``{(s, t): m_st}`` keyed by label pairs; missing pairs default to 2."""
        labels = tuple(labels)
        idx = {lab: i for i, lab in enumerate(labels)}
        m = [[2] * len(labels) for _ in labels]
        for (s, t), val in upper.items():
            m[idx[s]][idx[t]] = m[idx[t]][idx[s]] = _parse_m(val)
        return cls(labels, tuple(tuple(r) for r in m))

    @classmethod
    def universal(cls, labels: Sequence[str] = ("r", "s", "t")) -> CoxeterMatrix:
        labels = tuple(labels)
        n = len(labels)
        return cls(labels, tuple(tuple(2 if i == j else INF for j in range(n)) for i in range(n)))

    @classmethod
    def type444(cls, labels: Sequence[str] = ("r", "s", "t")) -> CoxeterMatrix:
        return cls(tuple(labels), ((2, 4, 4), (4, 2, 4), (4, 4, 2)))

    @classmethod
    def dihedral(cls, m, labels: Sequence[str] = ("s", "t")) -> CoxeterMatrix:
        m = _parse_m(m)
        return cls(tuple(labels), ((2, m), (m, 2)))

    @classmethod
    def builtin(cls, tag: str) -> CoxeterMatrix:
        """Expand a built-in tag: universal3, type444, dihedral:<m>, affineA1."""
        tag = tag.strip()
        if tag == "universal3":
            return cls.universal()
        if tag == "type444":
            return cls.type444()
        if tag == "affineA1":
            return cls.dihedral(INF)
        if tag.startswith("dihedral:"):
            return cls.dihedral(tag.split(":", 1)[1])
        raise ValueError(f"unknown built-in Coxeter matrix {tag!r}")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabelError(label) from None

    def entry(self, s: str, t: str):
        return self.m[self.index(s)][self.index(t)]

    @property
    def is_universal(self) -> bool:
        n = self.rank
        return all(self.m[i][j] == INF for i in range(n) for j in range(n) if i != j)

    @property
    def is_444(self) -> bool:
        return self.rank == 3 and all(self.m[i][j] == 4 for i in range(3) for j in range(3) if i != j)

    # file format ------------------------------------------------------
    def to_text(self) -> str:
        lines = [" ".join([str(self.rank), *self.labels])]
        for i in range(self.rank - 1):
            lines.append(" ".join("inf" if x == INF else str(x) for x in self.m[i][i + 1:]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CoxeterMatrix:
        """Line 1: rank and labels.  Following lines: upper triangle rows, ``inf`` for infinity."""
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ValueError("empty Coxeter matrix file")
        head = lines[0].split()
        n = int(head[0])
        labels = tuple(head[1:])
        if len(labels) != n:
            raise ValueError("rank does not match the number of labels")
        m = [[2] * n for _ in range(n)]
        rows = lines[1:]
        if len(rows) != n - 1:
            raise ValueError(f"expected {n - 1} upper-triangle rows, got {len(rows)}")
        for i, row in enumerate(rows):
            vals = row.split()
            if len(vals) != n - 1 - i:
                raise ValueError(f"upper-triangle row {i + 1} has {len(vals)} entries")
            for k, tok in enumerate(vals):
                j = i + 1 + k
                m[i][j] = m[j][i] = _parse_m(tok)
        return cls(labels, tuple(tuple(r) for r in m))

    @classmethod
    def load(cls, path) -> CoxeterMatrix:
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


@dataclass(frozen=True, eq=False)
class Element:
    """A group element stored as its ShortLex normal form (generator indices)."""

    system: CoxeterSystem
    word: tuple[int, ...]

    def __eq__(self, other):
        return isinstance(other, Element) and other.system is self.system and other.word == self.word

    def __hash__(self):
        return hash(self.word)

    def __lt__(self, other: Element):
        return (len(self.word), self.word) < (len(other.word), other.word)

    @property
    def length(self) -> int:
        return len(self.word)

    def __len__(self):
        return len(self.word)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.system.labels[i] for i in self.word)

    def __str__(self):
        return " ".join(self.labels) if self.word else "e"

    def __repr__(self):
        return f"Element({str(self)!r})"

    def __mul__(self, other: Element) -> Element:
        return self.system.reduce(self.word + other.word)

    def inverse(self) -> Element:
        return self.system.reduce(self.word[::-1])

    @property
    def dual_point(self) -> tuple[FieldElem, ...]:
        return self.system.dual_point_cached(self)

    def descents(self) -> frozenset[str]:
        return descent_set(self)

    def support(self) -> frozenset[str]:
        return frozenset(self.labels)


@dataclass(frozen=True)
class Gallery:
    """Minimal gallery from 1 of a given type, with its crossed roots."""

    type: tuple[str, ...]
    chambers: tuple[Element, ...]
    roots: tuple  # tuple[Root, ...]

    def __len__(self):
        return len(self.type)


class CoxeterSystem:
    """A Coxeter matrix together with its canonical representation.

    The Cartan matrix is ``A[i][j] = <alpha_i, alpha_j^vee> = 2 (alpha_i, alpha_j)``
    with ``(alpha_s, alpha_t) = -cos(pi/m_st)`` (and -1 for m_st = inf).
    """

    def __init__(self, matrix: CoxeterMatrix):
        self.matrix = matrix
        self.labels = matrix.labels
        self.rank = matrix.rank
        n = self.rank
        self.form = tuple(
            tuple(ONE if i == j else -cos_value(matrix.m[i][j]) for j in range(n)) for i in range(n)
        )
        self.cartan = tuple(tuple(2 * x for x in row) for row in self.form)
        self._f = tuple(ONE for _ in range(n))
        self._lock = threading.Lock()
        self._levels: list[list[Element]] = []
        self._dual_index: dict[tuple, tuple[int, ...]] = {}
        self._word_dual: dict[tuple[int, ...], tuple] = {}
        self._chamber_list: list[Element] = []
        self._chamber_dual: list[tuple[FieldElem, ...]] = []
        self._chamber_float = np.zeros((0, n))

    def __repr__(self):
        return f"CoxeterSystem({self.matrix.labels!r})"

    def __getstate__(self):
        return {"matrix": self.matrix}

    def __setstate__(self, state):
        self.__init__(state["matrix"])

    # labels and words -------------------------------------------------
    def index(self, label: str) -> int:
        return self.matrix.index(label)

    def parse_word(self, word) -> tuple[int, ...]:
        """Accept label sequences, space separated strings, or concatenated one-letter labels."""
        if isinstance(word, str):
            text = word.strip()
            if text in ("", "e", "1") and "e" not in self.labels:
                return ()
            tokens = text.split()
            if len(tokens) == 1 and tokens[0] not in self.labels:
                tokens = list(tokens[0])
            word = tokens
        out = []
        for x in word:
            if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
                if not 0 <= x < self.rank:
                    raise UnknownLabelError(x)
                out.append(int(x))
            else:
                out.append(self.index(x))
        return tuple(out)

    # representations --------------------------------------------------
    def reflect(self, s: int, v: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
        """Simple reflection on V: v -> v - <v, alpha_s^vee> alpha_s."""
        return reflect_vector(self.cartan, s, v)

    def act(self, word: Iterable[int], v: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
        """Left action of the product of ``word`` on a vector of V."""
        return act_vector(self.cartan, word, v)

    def dual_reflect(self, s: int, p: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
        col = self.cartan
        ps = p[s]
        return tuple(p[j] - col[j][s] * ps if col[j][s] else p[j] for j in range(len(p)))

    def dual_point(self, word: Iterable[int]) -> tuple[FieldElem, ...]:
        p = self._f
        for s in reversed(tuple(word)):
            p = self.dual_reflect(s, p)
        return p

    def unit(self, s: int) -> tuple[FieldElem, ...]:
        return tuple(ONE if i == s else ZERO for i in range(self.rank))

    def pairing(self, x: Sequence[FieldElem], y: Sequence[FieldElem]) -> FieldElem:
        """Canonical symmetric bilinear form B(x, y)."""
        total = ZERO
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.form[i]
            for j, yj in enumerate(y):
                if yj and row[j]:
                    total = total + xi * row[j] * yj
        return total

    # word problem -----------------------------------------------------
    def reduce(self, word) -> Element:
        w = self.parse_word(word)
        p = self.dual_point(w)
        out = []
        while True:
            d = next((s for s in range(self.rank) if p[s].sign() < 0), None)
            if d is None:
                break
            out.append(d)
            p = self.dual_reflect(d, p)
        return Element(self, tuple(out))

    def identity(self) -> Element:
        return Element(self, ())

    def generator(self, label) -> Element:
        return Element(self, self.parse_word([label]))

    # chamber enumeration ---------------------------------------------
    def _grow(self) -> None:
        n = self.rank
        if not self._levels:
            self._levels.append([self.identity()])
            self._dual_index[self._f] = ()
            self._word_dual[()] = self._f
            self._chamber_list.append(self.identity())
            self._chamber_dual.append(self._f)
            self._chamber_float = np.array([[float(x) for x in self._f]])
            return
        prev = self._levels[-1]
        found: dict[tuple, tuple[int, ...]] = {}
        for u in prev:
            pu = self.dual_point_cached(u)
            for s in range(n):
                if pu[s].sign() < 0:
                    continue
                q = self.dual_reflect(s, pu)
                if q in found:
                    continue
                d = next(i for i in range(n) if q[i].sign() < 0)
                tail = self._dual_index[self.dual_reflect(d, q)]
                found[q] = (d,) + tail
        level = sorted(found.items(), key=lambda kv: kv[1])
        elems = [Element(self, w) for _, w in level]
        for q, w in level:
            self._dual_index[q] = w
            self._word_dual[w] = q
        self._levels.append(elems)
        self._chamber_list.extend(elems)
        self._chamber_dual.extend(q for q, _ in level)
        new = np.array([[float(x) for x in q] for q, _ in level]).reshape(len(level), n)
        self._chamber_float = np.vstack([self._chamber_float, new])

    def dual_point_cached(self, u: Element) -> tuple[FieldElem, ...]:
        p = self._word_dual.get(u.word)
        return p if p is not None else self.dual_point(u.word)

    def ensure_chambers(self, length: int) -> int:
        """Enumerate chambers up to ``length``; returns how many there are."""
        with self._lock:
            while len(self._levels) <= length:
                if len(self._levels) > 1 and not self._levels[-1]:
                    break  # finite group exhausted
                self._grow()
            return sum(len(lv) for lv in self._levels[: length + 1])

    def chambers(self, length: int) -> list[Element]:
        """All elements of length <= ``length`` in ShortLex order."""
        count = self.ensure_chambers(length)
        return self._chamber_list[:count]

    def chamber_data(self, length: int):
        """Elements, exact dual points and float dual points up to ``length``."""
        count = self.ensure_chambers(length)
        return self._chamber_list[:count], self._chamber_dual[:count], self._chamber_float[:count]

    def level(self, k: int) -> list[Element]:
        self.ensure_chambers(k)
        return list(self._levels[k]) if k < len(self._levels) else []

    def side_signs(self, key: Sequence[FieldElem], length: int, key_float=None, start: int = 0) -> np.ndarray:
        """Signs (+1/-1) saying whether each chamber up to ``length`` lies in the root ``key``.

        Only chambers from index ``start`` on are evaluated.  Floating dot
        products decide clear cases; anything within a relative margin of zero
        is recomputed exactly.
        """
        elems, duals, P = self.chamber_data(length)
        P = P[start:]
        kf = np.array([float(x) for x in key]) if key_float is None else key_float
        vals = P @ kf
        scale = np.abs(P) @ np.abs(kf)
        signs = np.sign(vals).astype(np.int8)
        unsure = np.nonzero(np.abs(vals) <= 1e-10 * scale + 1e-300)[0]
        for i in unsure:
            p = duals[start + i]
            exact = ZERO
            for kj, pj in zip(key, p):
                if kj:
                    exact = exact + kj * pj
            signs[i] = exact.sign()
        return signs

    def contains(self, chamber: Element, key: Sequence[FieldElem]) -> bool:
        p = self.dual_point(chamber.word)
        total = ZERO
        for kj, pj in zip(key, p):
            if kj:
                total = total + kj * pj
        return total.sign() > 0


def reflect_vector(cartan, s: int, v: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
    coeff = ZERO
    for i, vi in enumerate(v):
        a = cartan[i][s]
        if vi and a:
            coeff = coeff + vi * a
    if not coeff:
        return tuple(v)
    out = list(v)
    out[s] = v[s] - coeff
    return tuple(out)


def act_vector(cartan, word: Iterable[int], v: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
    v = tuple(v)
    for s in reversed(tuple(word)):
        v = reflect_vector(cartan, s, v)
    return v


@lru_cache(maxsize=None)
def system_for(matrix: CoxeterMatrix) -> CoxeterSystem:
    """Shared system per matrix, so elements built from the same matrix compare equal."""
    return CoxeterSystem(matrix)


def _as_system(m) -> CoxeterSystem:
    return m if isinstance(m, CoxeterSystem) else system_for(m)


def reduce_word(system, word) -> Element:
    """ShortLex normal form of ``word``; ``system`` may also be a CoxeterMatrix.

    Raises UnknownLabelError for labels not in the system.
    """
    return _as_system(system).reduce(word)


def descent_set(w: Element) -> frozenset[str]:
    """Left descents {s : l(sw) < l(w)}."""
    p = w.dual_point
    return frozenset(w.system.labels[s] for s in range(w.system.rank) if p[s].sign() < 0)


def minimal_gallery(system, w) -> Gallery:
    """Gallery from 1 to ``w`` along its normal form, with the roots it crosses."""
    from .roots import root_from_expr

    system = _as_system(system)
    if not isinstance(w, Element):
        w = system.reduce(w)
    word = w.word
    chambers = tuple(Element(system, word[:i]) for i in range(len(word) + 1))
    roots = tuple(
        root_from_expr(system, Element(system, word[:i]), word[i]) for i in range(len(word))
    )
    return Gallery(tuple(system.labels[i] for i in word), chambers, roots)
