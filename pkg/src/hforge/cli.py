"""Command-line interface: ``hforge <command> ...``.

Exit status: 0 on success, 1 when a mathematical check fails (or a budget is
exhausted), 2 on usage errors.  Float comparisons use an absolute tolerance of
1e-9 on entries (scaled by n for row inner products) and a relative gap of
1e-8 when clustering minor values.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import chm as chm_mod
from ._engine import Budget, BudgetExceeded, default_workers
from .chm import ComplexHadamardMatrix, detect_butson, is_regular, verify_chm
from .construct import (
    Infeasible,
    classify_two_entry,
    conference_to_chm,
    induce_from_design,
    sym_hadamard_to_chm,
)
from .designs import (
    hadamard_core_design,
    load_matrix,
    paley_conference,
    paley_design,
    BadResidueClass,
    NotADesign,
    NotNormalized,
    NotSymmetric,
    normalize_real_hadamard,
    paley2_hadamard,
    sylvester_hadamard,
    verify_2design,
)
from .equivalence import certify_inequivalent
from .finite_field import NotPrime
from .invariants import DualityViolation, duality_check, fingerprint, haagerup_set, sample_minor_census


@dataclass(frozen=True)
class CommandConfig:
    command: str
    output: Path | None = None
    fmt: str = "json"
    sign: str = "+"
    dmax: int | None = None
    budget: Budget | None = None
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        b = self.budget
        if b is not None and ((b.max_minors is not None and b.max_minors <= 0) or (b.seconds is not None and b.seconds <= 0)):
            raise ValueError("budget must be positive")


# name -> (description, builder)
CATALOGUE = {
    "F3": ("Fourier-equivalent, induced by the Paley 2-(3,1,0) design", lambda: induce_from_design(paley_design(3), "+")),
    "C7A": ("induced by the Paley 2-(7,3,1) design, sign +", lambda: induce_from_design(paley_design(7), "+")),
    "C7B": ("induced by the Paley 2-(7,3,1) design, sign -", lambda: induce_from_design(paley_design(7), "-")),
    "C11A": ("induced by the Paley 2-(11,5,2) design, sign +", lambda: induce_from_design(paley_design(11), "+")),
    "C11B": ("induced by the Paley 2-(11,5,2) design, sign -", lambda: induce_from_design(paley_design(11), "-")),
    "U15": ("induced by the Sylvester 2-(15,7,3) design, a = -7/8 + i*sqrt(15)/8", lambda: chm_mod.fixture("U15")),
    "V15": ("Sylvester H16 core with b = -5/6 + i*sqrt(11)/6", lambda: chm_mod.fixture("V15")),
    "P7": ("Sylvester H8 core with b = omega", lambda: chm_mod.fixture("P7")),
    "W9A": ("Paley conference matrix of order 10, c = 1/4 + i*sqrt(15)/4", lambda: chm_mod.fixture("W9A")),
    "W9B": ("Paley conference matrix of order 10, sign - (Butson, cube roots)", lambda: conference_to_chm(paley_conference(9), "-")),
    "W13A": ("Paley conference matrix of order 14, sign + (circulant, float)", lambda: conference_to_chm(paley_conference(13), "+")),
    "W13B": ("Paley conference matrix of order 14, sign - (circulant, float)", lambda: conference_to_chm(paley_conference(13), "-")),
}


def _load_chm(path: str) -> ComplexHadamardMatrix:
    return ComplexHadamardMatrix.load(path)


def _emit(cfg: CommandConfig, payload: dict | None, text: str | None = None) -> None:
    if cfg.fmt == "text" and text is not None:
        out = text + "\n"
    else:
        out = json.dumps(payload, sort_keys=False) + "\n"
    if cfg.output is not None:
        cfg.output.write_text(out)
    else:
        sys.stdout.write(out)


def _matrix_summary(h: ComplexHadamardMatrix) -> str:
    v = verify_chm(h)
    lines = [repr(h), f"complex Hadamard: {'yes' if v else 'no (' + v.reason + f', pair {v.pair})'}"]
    if v:
        lines.append(f"regular: {bool(is_regular(h))}")
        lines.append(f"Butson order: {detect_butson(h)}")
    return "\n".join(lines)


# -- commands -------------------------------------------------------------------------
def cmd_construct(args, cfg: CommandConfig) -> int:
    kind = args.kind
    if kind == "theorem1":
        if args.design:
            design = verify_2design(load_matrix(args.design))
        elif args.sylvester:
            design = hadamard_core_design(sylvester_hadamard(args.sylvester))
        elif args.q:
            design = paley_design(args.q)
        else:
            raise _Usage("theorem1 needs --q, --sylvester or --design")
        h = induce_from_design(design, cfg.sign)
    elif kind == "induce":
        if not args.design:
            raise _Usage("induce needs --design")
        h = induce_from_design(verify_2design(load_matrix(args.design)), cfg.sign)
    elif kind == "theorem2":
        if args.conference:
            c = load_matrix(args.conference)
        elif args.q:
            c = paley_conference(args.q)
        else:
            raise _Usage("theorem2 needs --q or --conference")
        h = conference_to_chm(c, cfg.sign)
    elif kind == "theorem3":
        if args.hadamard:
            src = load_matrix(args.hadamard)
        elif args.sylvester:
            src = sylvester_hadamard(args.sylvester)
        elif args.q:
            src = normalize_real_hadamard(paley2_hadamard(args.q))
        else:
            raise _Usage("theorem3 needs --sylvester, --q (Paley-II) or --hadamard")
        h = sym_hadamard_to_chm(src, cfg.sign)
    elif kind == "sylvester":
        h = ComplexHadamardMatrix.from_real(sylvester_hadamard(args.t or args.sylvester or 1), "H")
    elif kind == "fourier":
        if not args.n:
            raise _Usage("fourier needs --n")
        h = chm_mod.fourier(args.n)
    else:  # pragma: no cover - argparse restricts choices
        raise _Usage(kind)
    _emit(cfg, h.to_json(), _matrix_summary(h))
    return 0


def cmd_verify(args, cfg: CommandConfig) -> int:
    h = _load_chm(args.matrix)
    v = verify_chm(h)
    payload = {"ok": v.ok, "n": h.n, "backend": h.backend}
    if v.ok:
        payload.update(regular=bool(is_regular(h)), butson=detect_butson(h))
        cls = classify_two_entry(h)
        payload["two_entry"] = cls.kind
        if cls.design is not None:
            payload["design"] = list(cls.design.params)
    else:
        payload.update(reason=v.reason, pair=list(v.pair) if v.pair else None, residual=v.residual)
    _emit(cfg, payload, _matrix_summary(h))
    return 0 if v.ok else 1


def cmd_invariant(args, cfg: CommandConfig) -> int:
    h = _load_chm(args.matrix)
    if args.which == "haagerup":
        s = haagerup_set(h)
        _emit(cfg, s.to_json(), "\n".join(str(z) for z in s.values))
        return 0
    fp = fingerprint(h, cfg.dmax, cfg.budget, cfg.workers)
    _emit(cfg, fp.to_json(), fp.text())
    return 0


def cmd_compare(args, cfg: CommandConfig) -> int:
    h1, h2 = _load_chm(args.first), _load_chm(args.second)
    res = certify_inequivalent(h1, h2, cfg.dmax, cfg.budget, cfg.workers)
    _emit(cfg, res.to_json(), res.text())
    return 0


def cmd_census(args, cfg: CommandConfig) -> int:
    mat = _load_chm(args.matrix)
    count = None if args.exhaustive else args.count
    census = sample_minor_census(mat, args.d, count, cfg.seed, cfg.workers)
    text = "\n".join(f"|det| = {k}: {v}" for k, v in census.histogram.items())
    _emit(cfg, census.to_json(), text)
    return 0


def cmd_duality(args, cfg: CommandConfig) -> int:
    h = _load_chm(args.matrix)
    try:
        rep = duality_check(h, args.d, cfg.budget, cfg.workers)
    except DualityViolation as exc:
        rep = exc.report
    payload = {
        "n": rep.n,
        "d": rep.d,
        "scale_sq": f"{rep.scale_sq.numerator}/{rep.scale_sq.denominator}",
        "ok": rep.ok,
        "lower": rep.lower.to_json(),
        "upper": rep.upper.to_json(),
    }
    text = f"duality d={rep.d} <-> {rep.n - rep.d}: {'ok' if rep.ok else 'VIOLATED'}\n{rep.lower.text()}\n{rep.upper.text()}"
    _emit(cfg, payload, text)
    return 0 if rep.ok else 1


def cmd_catalogue(args, cfg: CommandConfig) -> int:
    if args.export:
        if args.export not in CATALOGUE:
            raise _Usage(f"unknown catalogue entry {args.export!r}; choose from {', '.join(CATALOGUE)}")
        h = CATALOGUE[args.export][1]()
        h.name = args.export
        _emit(cfg, h.to_json(), _matrix_summary(h))
        return 0
    rows = [{"name": k, "description": d, "fixture": k in chm_mod.FIXTURE_NAMES} for k, (d, _) in CATALOGUE.items()]
    _emit(cfg, {"entries": rows}, "\n".join(f"{r['name']:6s} {r['description']}" for r in rows))
    return 0


class _Usage(Exception):
    pass


# input matrices that parse but violate a construction's hypotheses
_HYPOTHESIS_FAILURES = (NotADesign, NotSymmetric, NotNormalized, BadResidueClass, NotPrime, Infeasible)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", type=Path, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json", dest="fmt")
    common.add_argument("--workers", type=int, default=None, help="worker processes (default: $HFORGE_WORKERS or CPU count)")
    common.add_argument("--budget-minors", type=int, default=None, help="refuse enumerations larger than this many minors")
    common.add_argument("--budget-seconds", type=float, default=None, help="abort enumerations after this many seconds")

    p = argparse.ArgumentParser(
        prog="hforge",
        description="Construct, verify and compare complex Hadamard matrices.",
        epilog="Float tolerance: 1e-9 absolute on entries (times n for row inner products); minor values cluster at relative gap 1e-8.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build a matrix from a design")
    c.add_argument("kind", choices=("theorem1", "theorem2", "theorem3", "induce", "sylvester", "fourier"))
    c.add_argument("--sign", choices=("+", "-"), default="+")
    c.add_argument("--q", type=int, help="prime power for Paley constructions (theorem3: Paley-II of order 2(q+1))")
    c.add_argument("--sylvester", type=int, help="Sylvester exponent t (order 2^t)")
    c.add_argument("--t", type=int, help="alias of --sylvester for 'construct sylvester'")
    c.add_argument("--n", type=int, help="order for 'construct fourier'")
    c.add_argument("--design", help="0/1 incidence matrix JSON")
    c.add_argument("--conference", help="conference matrix JSON")
    c.add_argument("--hadamard", help="real Hadamard matrix JSON")

    v = sub.add_parser("verify", parents=[common], help="check H H* = nI")
    v.add_argument("matrix")

    i = sub.add_parser("invariant", parents=[common], help="Haagerup set or fingerprint")
    i.add_argument("which", choices=("haagerup", "fingerprint"))
    i.add_argument("matrix")
    i.add_argument("--dmax", type=int, default=None)

    cmp_ = sub.add_parser("compare", parents=[common], help="try to certify inequivalence")
    cmp_.add_argument("first")
    cmp_.add_argument("second")
    cmp_.add_argument("--dmax", type=int, default=None)

    ce = sub.add_parser("census", parents=[common], help="sampled |det| histogram of d x d minors")
    ce.add_argument("--matrix", required=True)
    ce.add_argument("--d", type=int, required=True)
    ce.add_argument("--count", type=int, default=100000)
    ce.add_argument("--seed", type=int, default=0)
    ce.add_argument("--exhaustive", action="store_true", help="enumerate every minor instead of sampling")

    du = sub.add_parser("duality", parents=[common], help="check the d <-> n-d minor duality")
    du.add_argument("matrix")
    du.add_argument("--d", type=int, required=True)

    ca = sub.add_parser("catalogue", parents=[common], help="list or export named matrices")
    ca.add_argument("--export", metavar="NAME")
    return p


HANDLERS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "invariant": cmd_invariant,
    "compare": cmd_compare,
    "census": cmd_census,
    "duality": cmd_duality,
    "catalogue": cmd_catalogue,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    budget = None
    if args.budget_minors is not None or args.budget_seconds is not None:
        budget = Budget(args.budget_minors, args.budget_seconds)
    try:
        cfg = CommandConfig(
            command=args.command,
            output=args.output,
            fmt=args.fmt,
            sign=getattr(args, "sign", "+"),
            dmax=getattr(args, "dmax", None),
            budget=budget,
            seed=getattr(args, "seed", 0),
            workers=args.workers if args.workers is not None else default_workers(),
        )
        return HANDLERS[args.command](args, cfg)
    except _HYPOTHESIS_FAILURES as exc:
        print(f"hforge: {exc}", file=sys.stderr)
        return 1
    except (_Usage, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"hforge: error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"hforge: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
