"""Batch front-end: intervals, divergence scans, D(K) witnesses and certificate files.

Every command writes JSON lines: a versioned header, one record per item and a
summary.  Output contains no timestamps, so identical configs give identical bytes.

Exit codes: 0 success, 2 parse or configuration error, 3 precondition violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import __version__
from .bases import RootBasis, canonical_basis, check_axioms, gcm_basis, sample_basis
from .coxeter import CoxeterMatrix, CoxeterSystem, UnknownLabelError
from .intervals import (
    DEFAULT_RADIUS,
    NotPrenilpotentError,
    algebraic_interval,
    divergence_scan,
    geometric_interval,
    scan_pairs,
)
from .qfield import UnsupportedLabelError
from .roots import DEFAULT_DEPTH, parse_root
from .witness import (
    FamilyError,
    MalformedCertificateError,
    blueprint_444,
    blueprint_universal,
    certificate_from_json,
    check_nc,
    check_not_linear,
    pair_exclusion_for,
    support_exclusion_for,
    verify_certificate,
)

FORMAT = "rgdlin-records"
FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3

ENV_PREFIX = "RGDLIN_"


class ConfigError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    matrix: str
    basis: str
    radius: int
    length: int
    depth: int
    seed: int
    out: str | None
    workers: int = 1

    def record(self) -> dict:
        return {
            "matrix": self.matrix,
            "basis": self.basis,
            "radius": self.radius,
            "length": self.length,
            "depth": self.depth,
            "seed": self.seed,
        }


def load_matrix(spec: str) -> CoxeterMatrix:
    """A built-in tag or a path to a Coxeter matrix file."""
    try:
        return CoxeterMatrix.builtin(spec)
    except ValueError as exc:
        if os.path.exists(spec):
            return CoxeterMatrix.load(spec)
        raise ConfigError(f"{spec!r} is neither a built-in tag nor a readable file") from exc


def load_bases(spec: str, matrix: CoxeterMatrix) -> list[RootBasis]:
    """canonical | gcm:<path> | sample:<seed>,<count> | file:<path>"""
    if spec == "canonical":
        return [canonical_basis(matrix)]
    kind, _, arg = spec.partition(":")
    if kind == "gcm" and arg:
        with open(arg, encoding="utf-8") as fh:
            rows = [[int(x) for x in ln.replace(",", " ").split()] for ln in fh if ln.split("#", 1)[0].strip()]
        basis = gcm_basis(rows, matrix.labels, matrix)
        rep = check_axioms(basis)
        if not rep.ok:
            raise ConfigError("GCM basis is not associated with the matrix: " + "; ".join(rep.failures))
        return [basis]
    if kind == "sample" and arg:
        try:
            seed, count = (int(x) for x in arg.split(","))
        except ValueError:
            raise ConfigError(f"sample basis spec needs 'sample:seed,count', got {spec!r}") from None
        return [sample_basis(matrix, seed + k) for k in range(count)]
    if kind == "file" and arg:
        return [RootBasis.load(arg, matrix)]
    raise ConfigError(f"unknown basis spec {spec!r}")


def _positive(name: str, value: int) -> int:
    if value <= 0:
        raise ConfigError(f"--{name} must be positive")
    return value


def _env_default(name: str, fallback):
    return os.environ.get(ENV_PREFIX + name.upper(), fallback)


def _common(p: argparse.ArgumentParser, matrix_default: str | None = "universal3") -> None:
    p.add_argument("--matrix", default=_env_default("matrix", matrix_default), help="built-in tag or matrix file")
    p.add_argument("--basis", default=_env_default("basis", "canonical"), help="canonical | gcm:PATH | sample:SEED,COUNT | file:PATH")
    p.add_argument("--radius", type=int, default=int(_env_default("radius", DEFAULT_RADIUS)))
    p.add_argument("--length", type=int, default=int(_env_default("length", 4)))
    p.add_argument("--depth", type=int, default=int(_env_default("depth", DEFAULT_DEPTH)))
    p.add_argument("--seed", type=int, default=int(_env_default("seed", 0)))
    p.add_argument("--out", default=_env_default("out", None), help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rgdlin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rgdlin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interval", help="geometric and algebraic interval of a root pair")
    _common(p)
    p.add_argument("alpha", help="root expression, e.g. '- e : r'")
    p.add_argument("beta", help="root expression, e.g. 's : t'")

    p = sub.add_parser("scan", help="pairs whose algebraic interval misses geometric members")
    _common(p)
    p.add_argument("--workers", type=int, default=int(_env_default("workers", 1)))

    p = sub.add_parser("witness", help="D(K) table, non-linearity verdicts and certificates")
    _common(p, matrix_default=None)
    p.add_argument("--family", choices=("universal", "type444"), required=True)
    p.add_argument("--K", dest="K", default="", help="comma-separated naturals, empty for the trivial table")
    p.add_argument("--n-max", type=int, default=None)

    p = sub.add_parser("certify", help="check certificates from a JSON-lines file")
    _common(p)
    p.add_argument("path")
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        matrix=args.matrix,
        basis=args.basis,
        radius=_positive("radius", args.radius),
        length=_positive("length", args.length),
        depth=_positive("depth", args.depth),
        seed=args.seed,
        out=args.out,
        workers=max(1, getattr(args, "workers", 1)),
    )


def _header(command: str, config: RunConfig, **extra) -> dict:
    rec = {"format": FORMAT, "version": FORMAT_VERSION, "command": command, "config": config.record()}
    rec.update(extra)
    return rec


def _member_records(result) -> list[dict]:
    return [{"root": g.expr, "status": result.status[g]} for g in result.members]


def _cone_record(res) -> dict:
    if res.member:
        return {"member": True, "a": str(res.a), "b": str(res.b)}
    rec = {"member": False, "reason": res.reason}
    if res.a is not None:
        rec.update(a=str(res.a), b=str(res.b))
    return rec


def cmd_interval(config: RunConfig, alpha_text: str, beta_text: str) -> list[dict]:
    matrix = load_matrix(config.matrix)
    system = CoxeterSystem(matrix)
    bases = load_bases(config.basis, matrix)
    try:
        alpha, beta = parse_root(system, alpha_text), parse_root(system, beta_text)
    except (ValueError, UnknownLabelError) as exc:
        raise ConfigError(f"cannot parse root: {exc}") from exc
    try:
        geo = geometric_interval(alpha, beta, config.radius, config.depth)
    except NotPrenilpotentError as exc:
        raise PreconditionError(str(exc)) from exc
    out = [_header("interval", config)]
    for basis in bases:
        alg = algebraic_interval(basis, alpha, beta, config.radius, config.depth)
        missing = [g for g in geo.members if g not in alg.member_set]
        out.append({
            "type": "interval",
            "basis": basis.name,
            "alpha": alpha.expr,
            "beta": beta.expr,
            "geometric": _member_records(geo),
            "algebraic": _member_records(alg),
            "candidates": [{"root": g.expr, **_cone_record(alg.coefficients[g])} for g in alg.candidates]
            if alg.coefficients else [],
            "missing": [g.expr for g in missing],
            "strict": bool(missing),
            "equal": not missing and alg.member_set == geo.member_set,
        })
    return out


def cmd_scan(config: RunConfig) -> list[dict]:
    matrix = load_matrix(config.matrix)
    system = CoxeterSystem(matrix)
    bases = load_bases(config.basis, matrix)
    npairs = len(scan_pairs(system, config.length))
    out = [_header("scan", config)]
    total = 0
    for basis in bases:
        records = divergence_scan(system, basis, config.length, config.radius, config.depth, config.workers)
        total += len(records)
        for rec in records:
            out.append({
                "type": "divergence",
                "basis": basis.name,
                "alpha": rec.alpha.expr,
                "beta": rec.beta.expr,
                "missing": [
                    {"root": g.expr, "status": st, **_cone_record(c)}
                    for g, st, c in zip(rec.missing, rec.status, rec.cone)
                ],
            })
    out.append({"type": "summary", "pairs": npairs, "bases": len(bases), "divergences": total})
    return out


def _parse_K(text: str) -> frozenset[int]:
    text = text.strip().strip("{}")
    if not text:
        return frozenset()
    try:
        return frozenset(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"K must be a comma-separated list of naturals, got {text!r}") from None


def cmd_witness(config: RunConfig, family: str, K_text: str, n_max: int | None) -> list[dict]:
    K = _parse_K(K_text)
    tag = config.matrix or ("universal3" if family == "universal" else "type444")
    matrix = load_matrix(tag)
    system = CoxeterSystem(matrix)
    bases = load_bases(config.basis, matrix)
    if n_max is None:
        n_max = max(K, default=0) if family == "universal" else max(3, *K)
    try:
        if family == "universal":
            table = blueprint_universal(system, K, n_max)
            certs = [support_exclusion_for(system, n) for n in sorted(K)]
        else:
            table = blueprint_444(system, K, n_max)
            certs = [pair_exclusion_for(system, n) for n in sorted(K)]
    except FamilyError as exc:
        raise PreconditionError(str(exc)) from exc
    out = [_header("witness", config, family=family, K=sorted(K), n_max=n_max)]
    out += [{"type": "table", **e.record(table.family)} for e in table.entries]
    verdicts = []
    for basis in bases:
        v = check_not_linear(table, basis, config.radius)
        verdicts.append(v)
        out.append({"type": "verdict", "basis": basis.name, **v.record()})
    nc = check_nc(table)
    out.append({"type": "nc", "nc": nc})
    results = []
    for cert in certs:
        res = verify_certificate(cert)
        results.append(res)
        out.append({
            "type": "certificate",
            "variant": type(cert).__name__,
            "alpha": cert.alpha.expr,
            "beta": cert.beta.expr,
            "accepted": res.accepted,
            "reason": res.reason,
            "bounded": list(res.bounded),
        })
    if certs and all(results):
        overall = "not linearizable (certified)"
    elif nc:
        overall = "linearizable (nc)"
    elif any(v.not_linear for v in verdicts):
        overall = "not linear w.r.t. the tested bases"
    else:
        overall = "undetermined"
    out.append({"type": "summary", "verdict": overall})
    return out


def cmd_certify(config: RunConfig, path: str) -> list[dict]:
    system = CoxeterSystem(load_matrix(config.matrix))
    out = [_header("certify", config)]
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip()]
    accepted = 0
    for ln in lines:
        try:
            cert = certificate_from_json(system, ln)
        except MalformedCertificateError as exc:
            raise ConfigError(f"malformed certificate: {exc}") from exc
        res = verify_certificate(cert)
        accepted += res.accepted
        out.append({"type": "certificate", "variant": type(cert).__name__, "accepted": res.accepted,
                    "reason": res.reason, "bounded": list(res.bounded)})
    out.append({"type": "summary", "certificates": len(lines), "accepted": accepted})
    return out


def _emit(records: list[dict], out: str | None) -> None:
    text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ValueError as exc:
        print(f"rgdlin: bad environment default: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = config_from_args(args)
        if args.command == "interval":
            records = cmd_interval(config, args.alpha, args.beta)
        elif args.command == "scan":
            records = cmd_scan(config)
        elif args.command == "witness":
            records = cmd_witness(config, args.family, args.K, args.n_max)
        else:
            records = cmd_certify(config, args.path)
    except PreconditionError as exc:
        print(f"rgdlin: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ConfigError, UnsupportedLabelError, UnknownLabelError, OSError, ValueError) as exc:
        print(f"rgdlin: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(records, config.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
