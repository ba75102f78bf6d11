"""Commutation tables over F2 for the two D(K) families, plus the checkers and
certificates that turn a nontrivial commutator factor into a non-linearity proof.

Over F2 every root group has two elements, so a relation is recorded as the
set of roots whose factor is nontrivial.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bases import RootBasis
from .coxeter import CoxeterMatrix, CoxeterSystem
from .intervals import DEFAULT_RADIUS, ConeResult, cone_membership, geometric_interval
from .qfield import INF
from .roots import (
    DEFAULT_DEPTH,
    Root,
    SameWallError,
    find_chamber,
    parse_root,
    reflection_order,
    root_from_expr,
    search_chamber,
    simple_root,
)

__all__ = [
    "FamilyError",
    "MalformedCertificateError",
    "TableEntry",
    "RelationTable",
    "blueprint_universal",
    "blueprint_444",
    "trivial_table",
    "universal_roots",
    "roots_444",
    "Verdict",
    "check_not_linear",
    "check_nc",
    "check_rgd1",
    "SupportExclusion",
    "PairExclusion",
    "CertificateResult",
    "verify_certificate",
    "support_exclusion_for",
    "pair_exclusion_for",
    "certificate_to_json",
    "certificate_from_json",
    "NEST_RADIUS",
]

NEST_RADIUS = 10

UNIVERSAL = "universal-D(K)"
TYPE444 = "444-D(K)"
TRIVIAL = "trivial"


class FamilyError(ValueError):
    """Parameters that do not define a member of the requested family."""


class MalformedCertificateError(ValueError):
    pass


def _system(m) -> CoxeterSystem:
    return m if isinstance(m, CoxeterSystem) else CoxeterSystem(m)


# -- tables ----------------------------------------------------------------

@dataclass(frozen=True)
class TableEntry:
    alpha: Root
    beta: Root
    factors: frozenset[Root]
    n: int | None = None

    @property
    def pair(self) -> tuple[Root, Root]:
        return (self.alpha, self.beta)

    def record(self, family: str) -> dict:
        return {
            "alpha": self.alpha.expr,
            "beta": self.beta.expr,
            "factors": sorted(g.expr for g in self.factors),
            "family": family,
            "n": self.n,
        }


@dataclass(frozen=True)
class RelationTable:
    """Finite window of a commutation table; pairs not listed commute."""

    system: CoxeterSystem
    entries: tuple[TableEntry, ...]
    family: str
    K: frozenset[int] = frozenset()
    n_max: int = 0

    @property
    def matrix(self) -> CoxeterMatrix:
        return self.system.matrix

    def __post_init__(self):
        for e in self.entries:
            if e.alpha == e.beta:
                raise ValueError("table keys need alpha != beta")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def factors(self, alpha: Root, beta: Root) -> frozenset[Root]:
        for e in self.entries:
            if e.pair == (alpha, beta):
                return e.factors
        return frozenset()

    def nontrivial(self) -> list[TableEntry]:
        return [e for e in self.entries if e.factors]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.record(self.family), sort_keys=True) + "\n" for e in self.entries)

    @classmethod
    def from_jsonl(cls, system: CoxeterSystem, text: str, K: Iterable[int] = (), n_max: int | None = None) -> RelationTable:
        entries, family = [], TRIVIAL
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            family = rec.get("family", family)
            entries.append(TableEntry(
                parse_root(system, rec["alpha"]),
                parse_root(system, rec["beta"]),
                frozenset(parse_root(system, g) for g in rec["factors"]),
                rec.get("n"),
            ))
        ns = [e.n for e in entries if e.n is not None]
        return cls(system, tuple(entries), family, frozenset(K), n_max if n_max is not None else max(ns, default=0))


def universal_roots(system: CoxeterSystem, n: int) -> tuple[Root, Root, Root]:
    """(-alpha_r, alpha_n, alpha_s) with alpha_n = (st)^n s alpha_t; r, s, t are the first three labels."""
    r, s, t = 0, 1, 2
    a_n = root_from_expr(system, (s, t) * n + (s,), t)
    return -simple_root(system, r), a_n, simple_root(system, s)


def roots_444(system: CoxeterSystem, n: int) -> tuple[Root, Root, Root, Root]:
    """(alpha_r, beta_n, gamma, gamma') with beta_n = (rstst)^n alpha_r."""
    r, s, t = 0, 1, 2
    beta = root_from_expr(system, (r, s, t, s, t) * n, r)
    gamma = root_from_expr(system, (r, s, t, s, t, r, s), t)
    gamma2 = root_from_expr(system, (r, s, t, s, t, r, t), s)
    return simple_root(system, r), beta, gamma, gamma2


def blueprint_universal(matrix, K: Iterable[int], n_max: int) -> RelationTable:
    system = _system(matrix)
    m = system.matrix
    if m.rank != 3 or not m.is_universal:
        raise FamilyError("the universal family needs a universal Coxeter matrix of rank 3")
    K = frozenset(K)
    if n_max < 0 or any(n < 0 or n > n_max for n in K):
        raise FamilyError(f"K must lie in 0..{n_max}")
    entries = []
    for n in range(n_max + 1):
        minus_r, a_n, a_s = universal_roots(system, n)
        entries.append(TableEntry(minus_r, a_n, frozenset({a_s}) if n in K else frozenset(), n))
    return RelationTable(system, tuple(entries), UNIVERSAL, K, n_max)


def blueprint_444(matrix, K: Iterable[int], n_max: int) -> RelationTable:
    system = _system(matrix)
    if not system.matrix.is_444:
        raise FamilyError("the (4,4,4) family needs the (4,4,4) Coxeter matrix")
    K = frozenset(K)
    bad = sorted(n for n in K if n < 3 or n > n_max)
    if bad:
        raise FamilyError(f"K must be a subset of {{3, ..., {n_max}}}; got {bad}")
    entries = []
    for n in range(1, n_max + 1):
        a_r, b_n, g, g2 = roots_444(system, n)
        entries.append(TableEntry(a_r, b_n, frozenset({g, g2}) if n in K else frozenset(), n))
    return RelationTable(system, tuple(entries), TYPE444, K, n_max)


def trivial_table(matrix, entries: Sequence[tuple[Root, Root]] = ()) -> RelationTable:
    system = _system(matrix)
    return RelationTable(system, tuple(TableEntry(a, b, frozenset()) for a, b in entries), TRIVIAL)


# -- checkers --------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """``not-linear`` with a witness, or ``no-witness-found`` (which proves nothing)."""

    status: str
    pair: tuple[Root, Root] | None = None
    witness: Root | None = None
    cone: ConeResult | None = None
    geometric: bool | None = None

    @property
    def not_linear(self) -> bool:
        return self.status == "not-linear"

    def record(self) -> dict:
        rec = {"status": self.status}
        if self.pair is not None:
            rec.update(
                alpha=self.pair[0].expr,
                beta=self.pair[1].expr,
                witness=self.witness.expr,
                reason=self.cone.reason,
                geometric_member=self.geometric,
            )
        return rec


def check_not_linear(table: RelationTable, basis: RootBasis, radius: int | None = DEFAULT_RADIUS) -> Verdict:
    """First nontrivial factor outside the cone of its pair.

    With a radius, the verdict also reports whether the witness survives the
    geometric-interval check at that radius.
    """
    for e in table.entries:
        for g in sorted(e.factors, key=Root.sort_key):
            res = cone_membership(basis, g, e.alpha, e.beta)
            if not res.member:
                geo = None
                if radius is not None:
                    geo = g in geometric_interval(e.alpha, e.beta, radius).member_set
                return Verdict("not-linear", e.pair, g, res, geo)
    return Verdict("no-witness-found")


def check_nc(table: RelationTable, length: int | None = None) -> bool:
    """(nc) on the table window: infinite-order pairs carry no nontrivial factor.

    With ``length``, only pairs whose roots both have depth <= length count.
    """
    for e in table.entries:
        if not e.factors:
            continue
        if length is not None and max(e.alpha.depth, e.beta.depth) > length:
            continue
        if reflection_order(e.alpha, e.beta) == INF:
            return False
    return True


def check_rgd1(table: RelationTable, radius: int = DEFAULT_RADIUS) -> list[tuple[TableEntry, Root]]:
    """Factors that fail to lie in the open geometric interval of their pair."""
    bad = []
    for e in table.entries:
        if not e.factors:
            continue
        opened = geometric_interval(e.alpha, e.beta, radius).open
        bad.extend((e, g) for g in sorted(e.factors, key=Root.sort_key) if g not in opened)
    return bad


# -- certificates ----------------------------------------------------------

@dataclass(frozen=True)
class SupportExclusion:
    """The witness is a simple root of J, beta lives in the parabolic of J, and
    alpha = +-alpha_r with r outside J."""

    J: frozenset[str]
    r: str
    alpha: Root
    beta: Root
    witness: Root


@dataclass(frozen=True)
class PairExclusion:
    """gamma and gamma' cannot both lie in the cone of (alpha, beta)."""

    alpha: Root
    beta: Root
    gamma: Root
    gamma_prime: Root


@dataclass(frozen=True)
class CertificateResult:
    accepted: bool
    reason: str = ""
    bounded: tuple[str, ...] = field(default=())

    def __bool__(self):
        return self.accepted


def _reject(reason: str) -> CertificateResult:
    return CertificateResult(False, reason)


def _unit_index(root: Root) -> int | None:
    nz = [i for i, x in enumerate(root.key) if x]
    if len(nz) == 1 and root.key[nz[0]] == 1:
        return nz[0]
    return None


def _same_system(*roots: Root) -> CoxeterSystem:
    if not all(isinstance(x, Root) for x in roots):
        raise MalformedCertificateError("certificate fields must be roots")
    system = roots[0].system
    if any(x.system is not system for x in roots):
        raise MalformedCertificateError("certificate roots belong to different systems")
    return system


def _verify_support(c: SupportExclusion) -> CertificateResult:
    system = _same_system(c.alpha, c.beta, c.witness)
    labels = set(system.labels)
    J = set(c.J)
    if not J <= labels or c.r not in labels:
        raise MalformedCertificateError("unknown label in certificate")
    if J == labels:
        return _reject("J is not a proper subset of S")
    if c.r in J:
        return _reject(f"{c.r} lies in J")
    ri = system.index(c.r)
    if ri not in (_unit_index(c.alpha), _unit_index(-c.alpha)):
        return _reject(f"alpha is not +-alpha_{c.r}")
    j0 = _unit_index(c.witness)
    if j0 is None or system.labels[j0] not in J:
        return _reject("witness is not a simple root of J")
    if c.beta == c.witness or c.beta == -c.witness:
        return _reject("beta = +-witness")
    word, s, _ = c.beta.canonical
    support = {system.labels[i] for i in word} | {system.labels[s]}
    if not support <= J:
        return _reject(f"beta has canonical support {sorted(support)} outside J")
    if not c.beta.reflection.support() <= J:
        return _reject("r_beta does not lie in the parabolic subgroup of J")
    return CertificateResult(True)


def _nested(alpha: Root, gamma: Root, radius: int) -> tuple[str | None, str]:
    """Check alpha strictly inside gamma; returns (failure or None, bounded note)."""
    c = alpha.system.pairing(alpha.key, gamma.key)
    if c < 1:
        return f"B({alpha}, {gamma}) = {c} < 1, walls meet", ""
    if not find_chamber(alpha, gamma, (1, 1), DEFAULT_DEPTH):
        return f"no chamber found in {alpha} & {gamma}", ""
    if not find_chamber(alpha, gamma, (-1, 1), DEFAULT_DEPTH):
        return f"no chamber found in {gamma} minus {alpha}", ""
    if search_chamber([(alpha, 1), (gamma, -1)], radius):
        return f"{alpha} is not contained in {gamma}", ""
    return None, f"no chamber in {alpha} & -({gamma}) up to length {radius}"


def _verify_pair(c: PairExclusion, radius: int) -> CertificateResult:
    _same_system(c.alpha, c.beta, c.gamma, c.gamma_prime)
    if c.gamma == c.gamma_prime:
        return _reject("gamma = gamma'")
    if c.alpha in (c.gamma, c.gamma_prime):
        return _reject("alpha coincides with gamma or gamma'")
    if _unit_index(c.alpha) is None:
        return _reject("alpha is not a positive simple root")
    if not c.beta.is_positive:
        return _reject("beta is not positive")
    try:
        order = reflection_order(c.gamma, c.gamma_prime)
    except SameWallError:
        return _reject("gamma = -gamma'")
    if order == INF:
        return _reject("o(r_gamma r_gamma') is infinite")
    notes = []
    # the case split swaps gamma and gamma', so both nestings are used
    for g in (c.gamma, c.gamma_prime):
        fail, note = _nested(c.alpha, g, radius)
        if fail:
            return _reject(fail)
        notes.append(note)
    return CertificateResult(True, bounded=tuple(notes))


def verify_certificate(cert, radius: int = NEST_RADIUS) -> CertificateResult:
    """Check the structural preconditions under which the certificate's
    conclusion holds for every reduced associated basis."""
    if isinstance(cert, SupportExclusion):
        return _verify_support(cert)
    if isinstance(cert, PairExclusion):
        return _verify_pair(cert, radius)
    raise MalformedCertificateError(f"unknown certificate type {type(cert).__name__}")


def support_exclusion_for(system: CoxeterSystem, n: int) -> SupportExclusion:
    minus_r, a_n, a_s = universal_roots(system, n)
    labels = system.labels
    return SupportExclusion(frozenset(labels[1:3]), labels[0], minus_r, a_n, a_s)


def pair_exclusion_for(system: CoxeterSystem, n: int) -> PairExclusion:
    return PairExclusion(*roots_444(system, n))


def certificate_to_json(cert) -> str:
    if isinstance(cert, SupportExclusion):
        rec = {
            "variant": "SupportExclusion",
            "J": sorted(cert.J),
            "r": cert.r,
            "alpha": cert.alpha.expr,
            "beta": cert.beta.expr,
            "witness": cert.witness.expr,
        }
    elif isinstance(cert, PairExclusion):
        rec = {
            "variant": "PairExclusion",
            "alpha": cert.alpha.expr,
            "beta": cert.beta.expr,
            "gamma": cert.gamma.expr,
            "gamma_prime": cert.gamma_prime.expr,
        }
    else:
        raise MalformedCertificateError(f"unknown certificate type {type(cert).__name__}")
    return json.dumps(rec, sort_keys=True)


def certificate_from_json(system: CoxeterSystem, text: str):
    try:
        rec = json.loads(text)
        variant = rec["variant"]
        if variant == "SupportExclusion":
            return SupportExclusion(
                frozenset(rec["J"]), rec["r"],
                parse_root(system, rec["alpha"]), parse_root(system, rec["beta"]), parse_root(system, rec["witness"]),
            )
        if variant == "PairExclusion":
            return PairExclusion(*(parse_root(system, rec[k]) for k in ("alpha", "beta", "gamma", "gamma_prime")))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedCertificateError(str(exc)) from exc
    raise MalformedCertificateError(f"unknown certificate variant {variant!r}")
