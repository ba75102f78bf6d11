"""Independent reference computations used by the tests.

Nothing here goes through FieldElem or the library's word problem: dihedral
groups are modelled directly, and rank-3 groups through a 60-digit floating
reflection representation.
"""
from __future__ import annotations

import math

import mpmath

mpmath.mp.dps = 60


# -- dihedral groups as rotations and flips --------------------------------
#
# An element r^a s^f acts on the plane; s is the flip (0, 1) and t = (1, 1).
# m = None is the infinite dihedral group, where a ranges over Z.

class Dihedral:
    def __init__(self, m):
        self.m = m

    def _norm(self, a):
        return a if self.m is None else a % self.m

    def mul(self, x, y):
        (a, f), (b, g) = x, y
        return (self._norm(a + (b if f == 0 else -b)), f ^ g)

    def gen(self, i):
        return (0, 1) if i == 0 else (self._norm(1), 1)

    def word(self, w):
        x = (0, 0)
        for i in w:
            x = self.mul(x, self.gen(i))
        return x

    def inverse(self, x):
        a, f = x
        return (self._norm(-a), 0) if f == 0 else x

    def length(self, x):
        a, f = x
        if self.m is None:
            if f == 0:
                return 2 * abs(a)
            return 2 * a - 1 if a >= 1 else 2 * abs(a) + 1
        return self._lengths()[x]

    def _lengths(self):
        if not hasattr(self, "_len"):
            self._len = {(0, 0): 0}
            frontier = [(0, 0)]
            while frontier:
                nxt = []
                for x in frontier:
                    for i in (0, 1):
                        y = self.mul(x, self.gen(i))
                        if y not in self._len:
                            self._len[y] = self._len[x] + 1
                            nxt.append(y)
                frontier = nxt
        return self._len

    def elements(self, max_len):
        if self.m is not None:
            return list(self._lengths())
        out = [(0, 0)]
        for a in range(-max_len, max_len + 1):
            for f in (0, 1):
                x = (a, f)
                if x != (0, 0) and self.length(x) <= max_len:
                    out.append(x)
        return out

    def in_root(self, x, w, s):
        """x in w.alpha_s  iff  l(s w^-1 x) > l(w^-1 x)."""
        y = self.mul(self.inverse(w), x)
        return self.length(self.mul(self.gen(s), y)) > self.length(y)

    def half(self, word, s, negated, window):
        w = self.word(word)
        return frozenset(x for x in window if self.in_root(x, w, s) != negated)

    def interval(self, a, b, window):
        """Signatures (on the window) of all roots gamma in [a, b]; a and b are (word, s, negated)."""
        A, B = self.half(*a, window), self.half(*b, window)
        full = frozenset(window)
        out = set()
        for x in window:
            for s in (0, 1):
                for neg in (False, True):
                    # every root is x.alpha_s for some chamber x
                    G = frozenset(y for y in window if self.in_root(y, x, s) != neg)
                    if A & B <= G and (full - A) & (full - B) <= full - G:
                        out.add(G)
        return out


# -- numeric reflection representation ------------------------------------

def _cos(m):
    if m == math.inf:
        return mpmath.mpf(1)
    return mpmath.cos(mpmath.pi / m)


class NumericCoxeter:
    """Geometric representation with 60-digit entries; roots as numeric vectors."""

    def __init__(self, mmatrix):
        self.n = len(mmatrix)
        self.B = [[-_cos(mmatrix[i][j]) if i != j else mpmath.mpf(1) for j in range(self.n)] for i in range(self.n)]

    def reflect(self, s, v):
        c = 2 * sum(v[i] * self.B[i][s] for i in range(self.n))
        out = list(v)
        out[s] -= c
        return out

    def act(self, word, v):
        for s in reversed(word):
            v = self.reflect(s, v)
        return v

    def root(self, word, s, negated=False):
        v = [mpmath.mpf(1) if i == s else mpmath.mpf(0) for i in range(self.n)]
        v = self.act(word, v)
        return [-x for x in v] if negated else v

    def contains(self, x_word, root_vec):
        """x lies in the root iff x^-1 applied to it stays positive."""
        v = self.act(tuple(reversed(x_word)), root_vec)
        for c in v:
            if abs(c) > mpmath.mpf(10) ** -40:
                return c > 0
        raise AssertionError("zero vector")

    def length(self, word):
        """l(w), built letter by letter: l(us) > l(u) iff u.alpha_s is positive."""
        red = []
        for s in word:
            v = self.root(tuple(red), s)
            if self._is_negative(v):
                red = self._reduce(red + [s])
            else:
                red.append(s)
        return len(red)

    def _is_negative(self, v):
        for c in v:
            if abs(c) > mpmath.mpf(10) ** -40:
                return c < 0
        raise AssertionError("zero vector")

    def _reduce(self, word):
        # exchange condition: find i with s_1..s_{i-1} alpha_{s_i} equal to the offending root and drop both
        *head, s = word
        target = self.root(tuple(head), s)
        neg = [-x for x in target]
        for i in range(len(head)):
            v = self.root(tuple(head[:i]), head[i])
            if all(abs(a - b) < mpmath.mpf(10) ** -40 for a, b in zip(v, neg)):
                return head[:i] + head[i + 1 :]
        raise AssertionError("exchange failed")
