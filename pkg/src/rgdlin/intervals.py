"""Geometric and algebraic intervals of prenilpotent pairs, and divergence scans.

Both interval kinds draw their candidates from the same finite set: after
translating the pair so that both roots are positive, any chamber ``c`` lying
outside both roots gives ``[alpha, beta] <= Phi_c``.  Algebraic membership is
then an exact cone test.  Geometric membership is exact for pairs that can be
moved into a rank-2 residue and is otherwise certified by a bounded search for
counterexample chambers.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bases import RootBasis, phi
from .coxeter import CoxeterSystem, Element, Gallery, minimal_gallery
from .qfield import INF, ONE, ZERO, FieldElem
from .roots import (
    DEFAULT_DEPTH,
    Root,
    is_prenilpotent,
    root_from_expr,
    roots_up_to_depth,
    search_chamber,
)

__all__ = [
    "DEFAULT_RADIUS",
    "NotPrenilpotentError",
    "DegeneratePairError",
    "ChamberNotFoundError",
    "IntervalResult",
    "ConeResult",
    "DivergenceRecord",
    "geometric_interval",
    "rank2_interval",
    "cone_membership",
    "algebraic_interval",
    "divergence_scan",
    "interval_frame",
]

DEFAULT_RADIUS = 8
EXACT = "exact"


class NotPrenilpotentError(ValueError):
    pass


class DegeneratePairError(ValueError):
    """alpha = +-beta where two independent cone generators are required."""


class ChamberNotFoundError(RuntimeError):
    pass


def verified_at(radius: int) -> str:
    return f"verified-at-radius-{radius}"


@dataclass(frozen=True)
class ConeResult:
    """Outcome of solving phi(gamma) = a phi(alpha) + b phi(beta)."""

    member: bool
    a: FieldElem | None = None
    b: FieldElem | None = None
    reason: str = ""

    def __bool__(self):
        return self.member


@dataclass
class IntervalResult:
    alpha: Root
    beta: Root
    kind: str
    members: tuple[Root, ...]
    status: dict = field(default_factory=dict)
    positive_chamber: Element | None = None
    negative_chamber: Element | None = None
    candidates: tuple[Root, ...] = ()
    coefficients: dict = field(default_factory=dict)

    @property
    def member_set(self) -> frozenset[Root]:
        return frozenset(self.members)

    @property
    def open(self) -> frozenset[Root]:
        return self.member_set - {self.alpha, self.beta}

    @property
    def exact(self) -> bool:
        return all(v == EXACT for v in self.status.values())

    def __contains__(self, root):
        return root in self.member_set


@dataclass(frozen=True)
class Frame:
    """Normalising data for a prenilpotent pair.

    ``u`` is a chamber in alpha & beta and ``c`` a chamber in (-alpha) & (-beta),
    both in the original frame.  ``candidates`` lists u.Phi_{u^-1 c} in gallery order.
    """

    u: Element
    c: Element
    candidates: tuple[Root, ...]


def _constructive_chambers(roots: Sequence[Root]) -> list[Element]:
    out = []
    for r in roots:
        word, s, _ = r.canonical
        x = r.system.reduce(word)
        out += [x, r.system.reduce(word + (s,))]
    return out


def _chamber_on_sides(conditions, depth: int) -> Element:
    hit = search_chamber(conditions, depth)
    if hit.found:
        return hit.chamber
    # walls of the roots themselves border chambers on every side combination we need
    roots = [r for r, _ in conditions]
    for cand in sorted(set(_constructive_chambers(roots))):
        if all(r.contains(cand) == (sg > 0) for r, sg in conditions):
            return cand
    raise ChamberNotFoundError(f"no chamber on the requested sides within length {depth}")


def interval_frame(alpha: Root, beta: Root, depth: int = DEFAULT_DEPTH) -> Frame:
    system = alpha.system
    u = _chamber_on_sides([(alpha, 1), (beta, 1)], depth)
    ui = u.inverse()
    a1, b1 = alpha.act(ui), beta.act(ui)
    w = _chamber_on_sides([(a1, -1), (b1, -1)], depth)
    cands = tuple(r.act(u) for r in minimal_gallery(system, w).roots)
    return Frame(u, u * w, cands)


# -- exact rank-2 route ---------------------------------------------------

def _support(v) -> set[int]:
    return {i for i, x in enumerate(v) if x}


def _rank2_reduction(alpha: Root, beta: Root, max_steps: int = 500):
    """Letters q_1..q_k with q_k...q_1 moving both roots into some Phi(<s,t>)."""
    system = alpha.system
    x = alpha.key if alpha.sign > 0 else tuple(-v for v in alpha.key)
    y = beta.key if beta.sign > 0 else tuple(-v for v in beta.key)
    letters = []
    for _ in range(max_steps):
        supp = _support(x) | _support(y)
        if len(supp) <= 2:
            return letters, supp
        step = None
        for q in range(system.rank):
            e = system.unit(q)
            if x == e or y == e:
                continue
            px = system.pairing(x, e).sign()
            py = system.pairing(y, e).sign()
            if px >= 0 and py >= 0 and (px > 0 or py > 0):
                step = q
                break
        if step is None:
            return None
        letters.append(step)
        x, y = system.reflect(step, x), system.reflect(step, y)
    return None


def _alternating(s: int, t: int, n: int) -> tuple[int, ...]:
    return tuple(s if i % 2 == 0 else t for i in range(n))


def _dihedral_bound(m, *keys) -> int:
    """Longest alternating gallery worth walking in <s,t>."""
    if m != INF:
        return m
    # in the infinite dihedral group the k-th gallery root has coefficients k and k - 1
    return int(max(abs(float(x)) for key in keys for x in key)) + 2


def _gallery_keys(system: CoxeterSystem, first: int, second: int, count: int) -> list[tuple]:
    """Keys of first.., the roots crossed by the alternating gallery of type (first, second, ...).

    Uses b_{k+1} = 2c b_k - b_{k-1} with b_0 = -alpha_second, b_1 = alpha_first.
    """
    two_c = -system.cartan[first][second]
    prev = tuple(-x for x in system.unit(second))
    cur = system.unit(first)
    out = []
    for k in range(count):
        out.append(cur)
        prev, cur = cur, tuple(two_c * x - y for x, y in zip(cur, prev))
    return out


def _inside(system: CoxeterSystem, word: tuple[int, ...], *keys) -> bool:
    p = system.dual_point(word)
    for key in keys:
        total = ZERO
        for kj, pj in zip(key, p):
            if kj and pj:
                total = total + kj * pj
        if total.sign() <= 0:
            return False
    return True


def _rank2_members(alpha: Root, beta: Root) -> tuple[Root, ...] | None:
    """Exact interval for a pair movable into a rank-2 residue, else None."""
    system = alpha.system
    red = _rank2_reduction(alpha, beta)
    if red is None:
        return None
    letters, supp = red
    if len(supp) < 2:
        return None
    s, t = sorted(supp)
    m = system.matrix.m[s][t]
    g = tuple(reversed(letters))
    ka, kb = system.act(g, alpha.key), system.act(g, beta.key)
    bound = _dihedral_bound(m, ka, kb)
    # z: a chamber of <s,t> lying in both translated roots
    z = None
    for n in range(bound + 1):
        for first, second in ((s, t), (t, s)):
            word = _alternating(first, second, n)
            if _inside(system, word, ka, kb):
                z = word
                break
            if n == 0:
                break
        if z is not None:
            break
    if z is None:
        return None
    zi = z[::-1]
    ka, kb = system.act(zi, ka), system.act(zi, kb)
    bound = _dihedral_bound(m, ka, kb)
    # both roots now contain 1, so they are positive roots of <s,t>
    for first, second in ((s, t), (t, s)):
        keys = _gallery_keys(system, first, second, bound)
        try:
            i, j = sorted((keys.index(ka), keys.index(kb)))
        except ValueError:
            continue
        prefix = system.reduce(tuple(letters) + z)
        out = []
        for k in range(i, j + 1):
            word = prefix.word + _alternating(first, second, k)
            out.append(Root(system, system.act(prefix.word, keys[k]), word, second if k % 2 else first))
        return tuple(out)
    return None


def rank2_interval(gallery: Gallery, i: int, j: int) -> frozenset[Root]:
    """{alpha_i, ..., alpha_j} for a gallery living in a rank-2 system (1-based, i <= j)."""
    k = len(gallery.roots)
    if not (1 <= i <= j <= k):
        raise IndexError(f"need 1 <= i <= j <= {k}, got i={i}, j={j}")
    if len(set(gallery.type)) > 2:
        raise ValueError("gallery type uses more than two generators")
    return frozenset(gallery.roots[i - 1 : j])


# -- bounded verification --------------------------------------------------

def _verify(frame: Frame, alpha: Root, beta: Root, cands: Sequence[Root], radius: int) -> list[bool]:
    """For each candidate: True if no counterexample chamber was found near u or c."""
    system = alpha.system
    keep = [True] * len(cands)
    for centre in (frame.u, frame.c):
        ci = centre.inverse()
        a, b = alpha.act(ci), beta.act(ci)
        sa = system.side_signs(a.key, radius, a.key_float)
        sb = system.side_signs(b.key, radius, b.key_float)
        both_in = (sa > 0) & (sb > 0)
        both_out = (sa < 0) & (sb < 0)
        for n, g in enumerate(cands):
            if not keep[n]:
                continue
            gc = g.act(ci)
            sg = system.side_signs(gc.key, radius, gc.key_float)
            if np.any(both_in & (sg < 0)) or np.any(both_out & (sg > 0)):
                keep[n] = False
    return keep


def _check_pair(alpha: Root, beta: Root) -> None:
    if alpha.system is not beta.system:
        raise ValueError("roots belong to different Coxeter systems")
    if not is_prenilpotent(alpha, beta):
        raise NotPrenilpotentError(f"{{{alpha}, {beta}}} is not prenilpotent")


def geometric_interval(
    alpha: Root,
    beta: Root,
    radius: int = DEFAULT_RADIUS,
    depth: int = DEFAULT_DEPTH,
    exact_rank2: bool = True,
) -> IntervalResult:
    """[alpha, beta] = {gamma : alpha & beta <= gamma, (-alpha) & (-beta) <= -gamma}.

    With ``exact_rank2`` pairs that move into a rank-2 residue are answered
    exactly; everything else is filtered by counterexample search in the balls
    of the given radius around the two witness chambers.
    """
    _check_pair(alpha, beta)
    if alpha == beta:
        return IntervalResult(alpha, beta, "geometric", (alpha,), {alpha: EXACT}, candidates=(alpha,))
    frame = interval_frame(alpha, beta, depth)
    members = _rank2_members(alpha, beta) if exact_rank2 else None
    if members is not None:
        status = {r: EXACT for r in members}
    else:
        keep = _verify(frame, alpha, beta, frame.candidates, radius)
        members = tuple(g for g, k in zip(frame.candidates, keep) if k)
        status = {r: verified_at(radius) for r in members}
    return IntervalResult(alpha, beta, "geometric", tuple(members), status, frame.u, frame.c, frame.candidates)


# -- algebraic side --------------------------------------------------------

def _solve_cone(g, a, b) -> ConeResult:
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            det = a[i] * b[j] - a[j] * b[i]
            if det:
                x = (g[i] * b[j] - g[j] * b[i]) / det
                y = (a[i] * g[j] - a[j] * g[i]) / det
                for k in range(n):
                    if x * a[k] + y * b[k] != g[k]:
                        return ConeResult(False, reason=f"inconsistent in coordinate {k}")
                if x.sign() < 0:
                    return ConeResult(False, x, y, reason="negative coefficient a")
                if y.sign() < 0:
                    return ConeResult(False, x, y, reason="negative coefficient b")
                return ConeResult(True, x, y)
    raise DegeneratePairError("phi(alpha) and phi(beta) are linearly dependent")


def cone_membership(basis: RootBasis, gamma: Root, alpha: Root, beta: Root) -> ConeResult:
    """Is phi(gamma) in R>=0 phi(alpha) + R>=0 phi(beta)?"""
    if alpha == beta or alpha == -beta:
        raise DegeneratePairError("cone membership needs alpha != +-beta")
    return _solve_cone(phi(basis, gamma), phi(basis, alpha), phi(basis, beta))


def algebraic_interval(
    basis: RootBasis, alpha: Root, beta: Root, radius: int = DEFAULT_RADIUS, depth: int = DEFAULT_DEPTH
) -> IntervalResult:
    _check_pair(alpha, beta)
    if alpha == beta:
        return IntervalResult(alpha, beta, "algebraic", (alpha,), {alpha: EXACT}, candidates=(alpha,))
    frame = interval_frame(alpha, beta, depth)
    pa, pb = phi(basis, alpha), phi(basis, beta)
    coeffs = {}
    members = []
    for g in frame.candidates:
        res = _solve_cone(phi(basis, g), pa, pb)
        coeffs[g] = res
        if res.member:
            members.append(g)
    return IntervalResult(
        alpha, beta, "algebraic", tuple(members), {r: EXACT for r in members},
        frame.u, frame.c, frame.candidates, coeffs,
    )


# -- divergence scan -------------------------------------------------------

@dataclass(frozen=True)
class DivergenceRecord:
    alpha: Root
    beta: Root
    missing: tuple[Root, ...]
    status: tuple[str, ...]
    cone: tuple[ConeResult, ...]

    @property
    def pair(self) -> tuple[Root, Root]:
        return (self.alpha, self.beta)


def _scan_pair(basis: RootBasis, alpha: Root, beta: Root, radius: int, depth: int) -> DivergenceRecord | None:
    frame = interval_frame(alpha, beta, depth)
    pa, pb = phi(basis, alpha), phi(basis, beta)
    failing = []
    for g in frame.candidates:
        if g == alpha or g == beta:
            continue
        res = _solve_cone(phi(basis, g), pa, pb)
        if not res.member:
            failing.append((g, res))
    if not failing:
        return None
    exact = _rank2_members(alpha, beta)
    if exact is not None:
        geo = set(exact)
        missing = [(g, res, EXACT) for g, res in failing if g in geo]
    else:
        keep = _verify(frame, alpha, beta, [g for g, _ in failing], radius)
        missing = [(g, res, verified_at(radius)) for (g, res), k in zip(failing, keep) if k]
    if not missing:
        return None
    return DivergenceRecord(
        alpha, beta,
        tuple(m[0] for m in missing), tuple(m[2] for m in missing), tuple(m[1] for m in missing),
    )


def scan_pairs(system: CoxeterSystem, length: int) -> list[tuple[Root, Root]]:
    roots = roots_up_to_depth(system, length)
    pairs = []
    for i, a in enumerate(roots):
        for b in roots[i + 1 :]:
            if a == -b:
                continue
            if is_prenilpotent(a, b):
                pairs.append((a, b))
    return pairs


_WORKER_STATE: dict = {}


def _root_state(r: Root) -> tuple:
    return (r.key, r.word, r.s, r.negated)


def _scan_chunk(indices):
    st = _WORKER_STATE
    out = []
    for n in indices:
        a, b = st["pairs"][n]
        rec = _scan_pair(st["basis"], a, b, st["radius"], st["depth"])
        if rec is not None:
            out.append((n, [_root_state(g) for g in rec.missing], rec.status, rec.cone))
    return out


def divergence_scan(
    system: CoxeterSystem,
    basis: RootBasis,
    length: int,
    radius: int = DEFAULT_RADIUS,
    depth: int = DEFAULT_DEPTH,
    workers: int = 1,
    pairs: Sequence[tuple[Root, Root]] | None = None,
) -> list[DivergenceRecord]:
    """Prenilpotent pairs of roots of depth <= ``length`` where some geometric
    interval member is missing from the algebraic interval.

    An explicit ``pairs`` list replaces the enumeration (``length`` is then unused).
    """
    if pairs is None:
        pairs = scan_pairs(system, length)
    else:
        pairs = list(pairs)
        for a, b in pairs:
            _check_pair(a, b)
    if workers <= 1 or len(pairs) < 2:
        records = (_scan_pair(basis, a, b, radius, depth) for a, b in pairs)
        return [r for r in records if r is not None]
    # workers send plain root data back; records are rebuilt here in canonical order
    import multiprocessing

    _WORKER_STATE.update(pairs=pairs, basis=basis, radius=radius, depth=depth)
    chunks = [list(range(k, len(pairs), workers)) for k in range(workers)]
    ctx = multiprocessing.get_context("fork")
    try:
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            found = sorted(item for chunk in pool.map(_scan_chunk, chunks) for item in chunk)
    finally:
        _WORKER_STATE.clear()
    records = []
    for n, missing, status, cone in found:
        a, b = pairs[n]
        roots = tuple(Root(system, *state) for state in missing)
        records.append(DivergenceRecord(a, b, roots, tuple(status), tuple(cone)))
    return records
