"""Root bases presented by Cartan matrices, and the map phi to vector roots.

Pi is always taken linearly independent, so V is the free span of the simple
roots and the positivity functional of the third root-basis axiom is
automatic.  Vectors are coordinate tuples indexed like the labels.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .coxeter import CoxeterMatrix, CoxeterSystem, Element, act_vector, reflect_vector
from .qfield import INF, ONE, ZERO, FieldElem
from .roots import _ORDER_TABLE, Root, root_from_expr

__all__ = [
    "RootBasis",
    "AxiomReport",
    "NotARootError",
    "GCMError",
    "check_axioms",
    "canonical_basis",
    "gcm_basis",
    "sample_basis",
    "basis_act",
    "phi",
    "phi_inv",
]


class NotARootError(ValueError):
    pass


class GCMError(ValueError):
    pass


def _order_from_product(prod: FieldElem):
    """o(r_a r_b) from A_ab * A_ba, or None if the product is not admissible."""
    if prod >= 4:
        return INF
    for value, k in _ORDER_TABLE:
        if prod == value:
            return k
    return None


@dataclass(frozen=True, eq=False)
class RootBasis:
    """Root basis B = (V, Pi, Pi^vee) given by ``cartan[a][b] = <alpha_a, alpha_b^vee>``."""

    labels: tuple[str, ...]
    cartan: tuple[tuple[FieldElem, ...], ...]
    matrix: CoxeterMatrix | None = None
    name: str = "basis"

    def __post_init__(self):
        rows = tuple(tuple(FieldElem.coerce(x) for x in row) for row in self.cartan)
        n = len(self.labels)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("Cartan matrix shape does not match labels")
        object.__setattr__(self, "cartan", rows)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def pairing(self, v: Sequence[FieldElem], b: int) -> FieldElem:
        """<v, alpha_b^vee>."""
        total = ZERO
        for i, vi in enumerate(v):
            a = self.cartan[i][b]
            if vi and a:
                total = total + vi * a
        return total

    def reflect(self, s: int, v):
        return reflect_vector(self.cartan, s, v)

    def unit(self, s: int) -> tuple[FieldElem, ...]:
        return tuple(ONE if i == s else ZERO for i in range(self.rank))

    def orders(self) -> dict[tuple[str, str], object]:
        out = {}
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                out[(self.labels[i], self.labels[j])] = _order_from_product(
                    self.cartan[i][j] * self.cartan[j][i]
                )
        return out

    @property
    def is_reduced(self) -> bool:
        return check_axioms(self).reduced

    # file format ------------------------------------------------------
    def to_text(self) -> str:
        lines = [str(self.rank), " ".join(self.labels)]
        lines += [" ; ".join(str(x) for x in row) for row in self.cartan]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, matrix: CoxeterMatrix | None = None) -> RootBasis:
        """Rank line, label line, then one row per line with ``;``-separated field elements.

        Rows of plain integers may also be whitespace separated.
        """
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        n = int(lines[0])
        labels = tuple(lines[1].split())
        if len(labels) != n or len(lines) != n + 2:
            raise ValueError("malformed basis file")
        rows = []
        for ln in lines[2:]:
            cells = ln.split(";") if ";" in ln else ln.split()
            rows.append(tuple(FieldElem.parse(c) for c in cells))
        return cls(labels, tuple(rows), matrix)

    @classmethod
    def load(cls, path, matrix: CoxeterMatrix | None = None) -> RootBasis:
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read(), matrix)


@dataclass
class AxiomReport:
    rb1: bool = True
    rb2: bool = True
    rb3: bool = True
    reduced: bool = True
    associated: bool | None = None
    orders: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.rb1 and self.rb2 and self.rb3 and self.associated is not False


def check_axioms(basis: RootBasis, matrix: CoxeterMatrix | None = None) -> AxiomReport:
    """Check RB1, RB2, reducedness and (if a Coxeter matrix is known) association."""
    matrix = matrix or basis.matrix
    rep = AxiomReport()
    A, labels = basis.cartan, basis.labels
    for i, lab in enumerate(labels):
        if A[i][i] != 2:
            rep.rb1 = False
            rep.failures.append(f"RB1: <alpha_{lab}, alpha_{lab}^vee> = {A[i][i]}")
    for i in range(basis.rank):
        for j in range(i + 1, basis.rank):
            a, b = A[i][j], A[j][i]
            pair = (labels[i], labels[j])
            if not a and not b:
                rep.orders[pair] = 2
                continue
            if a.sign() >= 0 or b.sign() >= 0:
                rep.rb2 = False
                rep.failures.append(f"RB2: pairings of {pair} are ({a}, {b})")
                rep.orders[pair] = None
                continue
            k = _order_from_product(a * b)
            rep.orders[pair] = k
            if k is None:
                rep.rb2 = False
                rep.failures.append(f"RB2: product {a * b} for {pair} is not admissible")
            elif k != INF and k % 2 == 1 and a != b:
                rep.reduced = False
                rep.failures.append(f"reduced: odd order {k} for {pair} but {a} != {b}")
    if matrix is not None:
        rep.associated = tuple(matrix.labels) == tuple(labels)
        if not rep.associated:
            rep.failures.append("associated: label sets differ")
        else:
            for (s, t), k in rep.orders.items():
                if k != matrix.entry(s, t):
                    rep.associated = False
                    rep.failures.append(f"associated: o({s}{t}) = {k} but m_{s}{t} = {matrix.entry(s, t)}")
    return rep


def canonical_basis(matrix: CoxeterMatrix) -> RootBasis:
    """B(W, S): A_ts = 2 (alpha_t, alpha_s) = -2 cos(pi/m_st), and -2 for m_st = inf."""
    system = CoxeterSystem(matrix)
    return RootBasis(matrix.labels, system.cartan, matrix, name="canonical")


def gcm_basis(A, labels: Sequence[str] | None = None, matrix: CoxeterMatrix | None = None) -> RootBasis:
    """B(A) for a generalized Cartan matrix: <alpha_j, alpha_i^vee> = a_ij.

    The coroot pairing is transposed relative to ``A``: our ``cartan[j][i]``
    stores ``a_ij``.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise GCMError("generalized Cartan matrix must be square")
    for i in range(n):
        if A[i][i] != 2:
            raise GCMError(f"diagonal entry a_{i}{i} = {A[i][i]} != 2")
        for j in range(n):
            if i == j:
                continue
            if int(A[i][j]) != A[i][j] or A[i][j] > 0:
                raise GCMError(f"off-diagonal entry a_{i}{j} = {A[i][j]} is not a nonpositive integer")
            if (A[i][j] == 0) != (A[j][i] == 0):
                raise GCMError(f"a_{i}{j} = 0 but a_{j}{i} != 0")
    if labels is None:
        labels = matrix.labels if matrix is not None else tuple("rst"[:n] if n <= 3 else (f"s{i}" for i in range(n)))
    cartan = tuple(tuple(FieldElem(A[i][j]) for i in range(n)) for j in range(n))
    basis = RootBasis(tuple(labels), cartan, matrix, name="gcm")
    if matrix is None:
        # the Coxeter matrix realised by B(A)
        m = [[2] * n for _ in range(n)]
        for (s, t), k in basis.orders().items():
            i, j = basis.labels.index(s), basis.labels.index(t)
            m[i][j] = m[j][i] = k
        basis = RootBasis(basis.labels, cartan, CoxeterMatrix(basis.labels, tuple(map(tuple, m))), name="gcm")
    return basis


_PRODUCTS = {2: Fraction(0), 3: Fraction(1), 4: Fraction(2), 6: Fraction(3)}


def sample_basis(matrix: CoxeterMatrix, rng: random.Random | int, name: str | None = None) -> RootBasis:
    """Random reduced root basis associated with ``matrix``.

    Off-diagonal pairs are negative rationals whose product is 4cos^2(pi/m)
    for finite m (both -1 when m = 3, as reducedness requires) and at least 4
    when m = inf.
    """
    if isinstance(rng, int):
        seed = rng
        rng = random.Random(rng)
        name = name or f"sample:{seed}"
    n = matrix.rank
    A = [[FieldElem(2 if i == j else 0) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m = matrix.m[i][j]
            if m == 2:
                continue
            if m == 3:
                A[i][j] = A[j][i] = FieldElem(-1)
                continue
            p = Fraction(rng.randint(1, 12), rng.randint(1, 6))
            if m == INF:
                prod = 4 + Fraction(rng.randint(0, 9), rng.randint(1, 4))
            else:
                prod = _PRODUCTS[m]
            A[i][j] = FieldElem(-p)
            A[j][i] = FieldElem(-prod / p)
    return RootBasis(matrix.labels, tuple(map(tuple, A)), matrix, name=name or "sample")


def basis_act(basis: RootBasis, w, v: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
    """Left action of w (Element or index word) on a vector of V."""
    word = w.word if isinstance(w, Element) else tuple(w)
    return act_vector(basis.cartan, word, tuple(FieldElem.coerce(x) for x in v))


def _check_compatible(basis: RootBasis, system: CoxeterSystem) -> None:
    if tuple(basis.labels) != tuple(system.labels):
        raise ValueError("basis labels do not match the Coxeter system")
    if basis.matrix is not None and basis.matrix != system.matrix:
        raise ValueError("basis is associated with a different Coxeter matrix")


def phi(basis: RootBasis, alpha: Root) -> tuple[FieldElem, ...]:
    """phi(+-w alpha_s) = +-w(alpha_s) in V."""
    _check_compatible(basis, alpha.system)
    v = basis_act(basis, alpha.word, basis.unit(alpha.s))
    return tuple(-x for x in v) if alpha.negated else v


def phi_inv(basis: RootBasis, system: CoxeterSystem, v: Sequence[FieldElem], max_steps: int = 10_000) -> Root:
    """Inverse of phi: read a witness off a descent walk.

    Raises NotARootError if ``v`` is not in Phi(B).
    """
    _check_compatible(basis, system)
    v = tuple(FieldElem.coerce(x) for x in v)
    signs = {x.sign() for x in v} - {0}
    if len(signs) != 1:
        raise NotARootError("vector is zero or has mixed signs")
    negated = signs == {-1}
    if negated:
        v = tuple(-x for x in v)
    start = v
    letters = []
    for _ in range(max_steps):
        nz = [i for i, x in enumerate(v) if x]
        if len(nz) == 1:
            if v[nz[0]] != ONE:
                raise NotARootError("vector is a non-unit multiple of a simple root")
            root = root_from_expr(system, system.reduce(tuple(letters)), nz[0], negated)
            if phi(basis, -root if negated else root) != start:
                raise NotARootError("descent walk did not reproduce the vector")
            return root
        q = next((i for i in range(basis.rank) if basis.pairing(v, i).sign() > 0), None)
        if q is None:
            raise NotARootError("no simple reflection lowers the vector")
        letters.append(q)
        v = basis.reflect(q, v)
        if any(x.sign() < 0 for x in v):
            raise NotARootError("descent walk left the positive cone")
    raise NotARootError(f"descent walk exceeded {max_steps} steps")
