"""Command-line interface: ``superspin <verb> [options]``.

Verbs: ``verify``, ``determining``, ``algebra``, ``gauge``, ``limit``.
Exit status is 0 when every check passes, 1 on a failed check and 2 on a
usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import secrets
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import catalog, determining, liealg
from .coeffring import Expression, ParseError, context_2d, parameter, parse_expr
from .coeffring.expr import RHO2

__all__ = ["main", "main_entry", "report_schema", "Report", "Check", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def report_schema() -> dict:
    """JSON schema that every ``--format json`` report satisfies."""
    from importlib.resources import files

    return json.loads(files("superspin.data").joinpath("report.schema.json").read_text())


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class Report:
    command: str
    system: str
    checks: list = field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "system": self.system,
            "checks": [c.as_dict() for c in self.checks],
            "elapsed_ms": int(self.elapsed_ms),
        }


class UsageError(Exception):
    pass


class Runner:
    """Runs named checks in name order and streams text lines as they finish."""

    def __init__(self, report: Report, fmt: str, quiet: bool, out):
        self.report = report
        self.fmt = fmt
        self.quiet = quiet
        self.out = out
        self.pending: list = []

    def add(self, name: str, fn):
        self.pending.append((name, fn))

    def info(self, text: str):
        if self.fmt == "text" and not self.quiet:
            print(text, file=self.out, flush=True)

    def run(self):
        for name, fn in sorted(self.pending, key=lambda t: t[0]):
            try:
                ok, detail = fn()
            except Exception as exc:  # a crashing check is a failed check
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            check = Check(name, "pass" if ok else "fail", detail)
            self.report.checks.append(check)
            if self.fmt == "text" and (not self.quiet or not ok):
                tag = "PASS" if ok else "FAIL"
                print(f"{tag} {name}" + (f": {detail}" if detail else ""), file=self.out, flush=True)
        self.pending = []


# verbs ----------------------------------------------------------------------


def _parse(text: str, ctx=None) -> Expression:
    try:
        return parse_expr(text, ctx)
    except ParseError as exc:
        raise UsageError(str(exc)) from None


def _first_coefficient(P) -> str:
    s, c, d = P.triples()[0]
    return f"{s} {d or '1'}: {c}"


def cmd_verify(args, runner: Runner, rng: random.Random):
    ctx2 = context_2d(declare_unknown=True)
    gamma = _parse(args.gamma, ctx2) if args.gamma is not None else None
    v0_extra = None
    if args.v0_extra is not None:
        ctx = ctx2 if args.system.startswith("2d") else None
        v0_extra = _parse(args.v0_extra, ctx)
    try:
        spec = catalog.build_system(args.system, gamma=gamma, hbar=args.hbar, verify=False, v0_extra=v0_extra)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    runner.info(f"# system {spec.name}: V0 = {spec.potentials[0]}, V1 = {spec.potentials[1]}")
    runner.add("hermitian H", lambda: (spec.hermitian(), "H equals its formal adjoint" if spec.hermitian()
                                       else "H differs from its adjoint"))

    def commutes(H, X, label):
        def run():
            from .spinop import commutator

            R = commutator(H, X)
            if R.is_zero():
                return True, "exactly zero"
            return False, f"nonzero residual, first coefficient {_first_coefficient(R)}"
        return run

    for n, X in spec.integrals.items():
        runner.add(f"commutator [H, {n}]", commutes(spec.hamiltonian, X, n))
    if spec.mode == "2d":
        for n, X in catalog.sigma3_doubles(spec).items():
            runner.add(f"doubling [H, {n}]", commutes(spec.hamiltonian, X, n))
    if args.numeric_probe:
        seed = rng.randrange(2**63)
        for i, (n, X) in enumerate(spec.integrals.items()):
            def probe(X=X, s=seed + i):
                r = catalog.numeric_probe(spec.hamiltonian, X, random.Random(s),
                                          spinors=args.numeric_probe, points=args.probe_points)
                detail = f"{r.evaluations} evaluations, {len(r.failures)} mismatches (seed {s})"
                return r.ok, detail
            runner.add(f"probe [H, {n}]", probe)
    return spec.name


EXPECTED_COUNTS = {
    ("2d", "second"): ("principal", 6),
    ("2d", "first"): ("principal", 4),
    ("2d", "zeroth"): ("principal", 2),
    ("2d", "all"): ("principal", 12),
    ("3d", "second"): ("spin", 18),
    ("3d", "first"): ("phi+phi0", 12),
    ("3d", "zeroth"): ("total", 8),
}


def _count(systems, what: str) -> int:
    if what == "principal":
        return sum(len(s.principal()) for s in systems)
    if what == "total":
        return sum(len(s) for s in systems)
    if what == "phi+phi0":
        return sum(len(s.block("phi")) + len(s.block("phi0")) for s in systems)
    return sum(len(s.block(what)) for s in systems)


def cmd_determining(args, runner: Runner, rng):
    space, stage = args.space, args.stage
    if space == "3d" and stage == "all":
        raise UsageError("--stage all is only defined for --space 2d; pick second, first or zeroth")
    stages = determining.STAGES if stage == "all" else (stage,)
    systems = [determining.generate(space, st) for st in stages]
    for s in systems:
        if runner.fmt == "text" and not runner.quiet:
            runner.info(s.to_text())
    what, expected = EXPECTED_COUNTS[(space, stage)]
    got = _count(systems, what)
    blocks = "; ".join(f"{s.stage}: " + ", ".join(f"{k} {v}" for k, v in s.blocks().items()) for s in systems)
    runner.add(f"count {space} {stage}: {got} {what} equations (expected {expected})",
               lambda: (got == expected, blocks))
    if space == "3d" and stage == "first":
        phi, phi0 = len(systems[0].block("phi")), len(systems[0].block("phi0"))
        runner.add(f"count 3d first blocks: {phi} phi + {phi0} phi0",
                   lambda: ((phi, phi0) == (9, 3), f"{len(systems[0].consequences())} phi-free consequences"))
    if args.match:
        comparisons = []
        if space == "2d":
            if set(stages) >= {"first", "zeroth"}:
                comparisons = determining.reference_comparison("2d")
        else:
            wanted = {"second": ("spin",), "first": ("phi", "phi0"), "zeroth": ()}[stage]
            comparisons = [c for c in determining.reference_comparison("3d") if c[0] in wanted]
        if not comparisons:
            runner.add(f"match {space} {stage}: no reference", lambda: (True, "informational; no golden block"))
        for name, gen, ref in comparisons:
            def m(gen=gen, ref=ref):
                rep = determining.match_reference(gen, ref)
                return rep.ok, rep.summary()
            runner.add(f"match {space} block {name} ({len(gen)} equations)", m)
    return f"{space}/{stage}"


def cmd_algebra(args, runner: Runner, rng):
    if args.system == "2d":
        spec = catalog.build_superintegrable_2d(verify=False)
        gens = liealg.GeneratorSet.from_dict(spec.integrals, central=("I+", "I-"))
    else:
        spec = catalog.build_superintegrable_3d(verify=False)
        gens = liealg.GeneratorSet.from_dict(spec.integrals)
    table = liealg.commutation_table(gens, strict=False)
    runner.info(table.to_text())
    runner.add("closure of the commutation table",
               lambda: (table.closed, "all brackets in span" if table.closed else f"open: {table.open_pairs()}"))
    runner.add("antisymmetry of structure constants", lambda: (table.antisymmetric(), ""))
    runner.add("jacobi identity", lambda: (table.closed and table.jacobi(), ""))
    if args.relations:
        if args.system == "2d":
            rep = liealg.verify_relations(table, liealg.relations_2d(spec.potentials[1]))
        else:
            basis = liealg.GeneratorSet.from_dict(liealg.generators_3d_relations_basis(spec.integrals))
            rep = liealg.verify_relations(liealg.commutation_table(basis, strict=False), liealg.relations_3d())
        for fam, ok in sorted(rep.families().items()):
            bad = [f"{r} got {got}" for r, o, got in rep.results if r.family == fam and not o]
            runner.add(f"relations {fam}", lambda ok=ok, bad=bad: (ok, "; ".join(bad) or "all pass"))
        if rep.surplus:
            runner.info("# surplus brackets: " + "; ".join(rep.surplus))
    if args.casimir:
        if args.system != "2d":
            raise UsageError("--casimir is defined for --system 2d")
        rep = liealg.casimir_check(spec)
        for name, R in sorted(rep.brackets.items()):
            runner.add(f"casimir {name} = 0", lambda R=R: (R.is_zero(), "" if R.is_zero() else _first_coefficient(R)))
        runner.add("casimir H - (C+ + C-)/8 = 0", lambda: (rep.hamiltonian_residual.is_zero(), ""))
        runner.add("casimir [C+, C-] = 0", lambda: (rep.casimir_bracket.is_zero(), ""))
    return f"{args.system}-superintegrable"


def _gauge_context():
    ctx = context_2d(declare_unknown=True)
    x, y = ctx.resolve("x"), ctx.resolve("y")
    return ctx.with_alias("xi", y * x.inverse())


def _random_alpha_dot(rng: random.Random) -> Expression:
    """Random rational function of ``xi = y/x`` that stays in the expression class."""
    ctx = _gauge_context()
    xi = ctx.resolve("xi")
    num = sum((Fraction(rng.randint(-5, 5), rng.randint(1, 4)) * xi**k for k in range(3)), Expression())
    # 1/(1 + xi^2) = x^2/(x^2 + y^2) is the admissible denominator
    k = rng.randint(0, 2)
    return num * (Expression(RHO2).inverse() * ctx.resolve("x") ** 2) ** k


def cmd_gauge(args, runner: Runner, rng: random.Random):
    ctx = _gauge_context()
    alpha = _parse(args.alpha_dot, ctx)
    V0 = _parse(args.v0, ctx)
    V1 = _parse(args.v1, ctx)
    new_v0, new_v1 = catalog.apply_gauge(V0, V1, alpha)
    runner.info(f"V0~ = {new_v0}")
    runner.info(f"V1~ = {new_v1}")
    before, after = catalog.gauge_invariant(V0, V1), catalog.gauge_invariant(new_v0, new_v1)
    runner.add("gauge invariant V0 - (x^2+y^2) V1^2 / 2 unchanged",
               lambda: (before == after, f"V0~ = {new_v0}; V1~ = {new_v1}; invariant = {after}"))
    trials = args.random_trials
    if trials:
        seed = rng.randrange(2**63)
        r = random.Random(seed)

        def random_checks():
            for _ in range(trials):
                a = _random_alpha_dot(r)
                n0, n1 = catalog.apply_gauge(V0, V1, a)
                if catalog.gauge_invariant(n0, n1) != before:
                    return False, f"invariant changed for alpha_dot = {a} (seed {seed})"
            return True, f"{trials} random alpha_dot values (seed {seed})"
        runner.add(f"gauge invariant under {trials} random alpha_dot", random_checks)
    return "2d-gauge"


def cmd_limit(args, runner: Runner, rng):
    hbar = parameter("hbar")
    if args.system == "3d-superintegrable":
        spec = catalog.build_superintegrable_3d("tracked", verify=False)
        for name, V in zip(("V0", "V1"), spec.potentials):
            lim = V.substitute({hbar: 0})
            runner.add(f"limit {name} -> 0 as hbar -> 0",
                       lambda name=name, V=V, lim=lim: (not lim, f"{name} = {V}; at hbar = 0: {lim}"))
        expected = parse_expr("hbar^2/(x^2+y^2+z^2)"), parse_expr("hbar/(x^2+y^2+z^2)")
        runner.add("limit potentials equal hbar^2/r^2 and hbar/r^2",
                   lambda: (tuple(spec.potentials) == expected, ""))
        names = list(spec.integrals)
        runner.add(f"limit hbar-dressed commutators vanish ({len(names)})",
                   lambda: (not spec.failures(), "failing: " + ", ".join(spec.failures()) if spec.failures() else "all zero"))
    elif args.system == "2d-superintegrable":
        spec = catalog.build_superintegrable_2d(hbar=True, verify=False)
        for name, V in zip(("V0", "V1"), spec.potentials):
            runner.add(f"limit {name} independent of hbar",
                       lambda V=V: (hbar not in V.symbols() and V.substitute({hbar: 0}) == V, f"{V}"))
        runner.add(f"limit hbar-dressed commutators vanish ({len(spec.integrals)})",
                   lambda: (not spec.failures(), ", ".join(spec.failures()) or "all zero"))
    else:
        raise UsageError(f"limit is defined for 3d-superintegrable and 2d-superintegrable, not {args.system}")
    return args.system


VERBS = {
    "verify": cmd_verify,
    "determining": cmd_determining,
    "algebra": cmd_algebra,
    "gauge": cmd_gauge,
    "limit": cmd_limit,
}


# parser ---------------------------------------------------------------------


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("text", "json"), default=d("text"), help="report format")
    p.add_argument("--seed", type=int, default=d(None), help="seed for randomized checks")
    p.add_argument("--quiet", action="store_true", default=d(False), help="print failures and summary only")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superspin",
        description="Exact verification of first-order integrals of Pauli Hamiltonians with spin-orbit coupling.",
        parents=[_global_options(False)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_global_options(True)]

    v = sub.add_parser("verify", parents=common, help="check [H, X] = 0 for a catalog system")
    v.add_argument("system", choices=catalog.SYSTEM_IDS)
    v.add_argument("--gamma", help="coupling of the 2D superintegrable system (default: formal)")
    v.add_argument("--hbar", action="store_true", help="track Planck's constant")
    v.add_argument("--numeric-probe", type=int, default=0, metavar="N",
                   help="also probe each integral on N random spinors")
    v.add_argument("--probe-points", type=int, default=100, metavar="M", help="points per probed spinor")
    v.add_argument("--v0-extra", help="perturbation added to V0 (negative control)")

    d = sub.add_parser("determining", parents=common, help="generate determining equations")
    d.add_argument("--space", choices=("2d", "3d"), required=True)
    d.add_argument("--stage", choices=("second", "first", "zeroth", "all"), default=None)
    d.add_argument("--match", action="store_true", help="compare with the golden reference blocks")

    a = sub.add_parser("algebra", parents=common, help="structure constants, relations, Casimirs")
    a.add_argument("--system", choices=("2d", "3d"), required=True)
    a.add_argument("--casimir", action="store_true")
    a.add_argument("--relations", action="store_true")

    g = sub.add_parser("gauge", parents=common, help="apply the diagonal phase gauge to 2D potentials")
    g.add_argument("--alpha-dot", required=True, help="d alpha / d xi as an expression in xi = y/x (or x, y)")
    g.add_argument("--v0", default="gamma^2*(x^2+y^2)/2")
    g.add_argument("--v1", default="gamma")
    g.add_argument("--random-trials", type=int, default=0, metavar="N",
                   help="also check the invariant for N random alpha_dot")

    lim = sub.add_parser("limit", parents=common, help="classical limit hbar -> 0 of the potentials")
    lim.add_argument("--system", default="3d-superintegrable",
                     choices=("3d-superintegrable", "2d-superintegrable"))
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    if args.command == "determining" and args.stage is None:
        args.stage = "all" if args.space == "2d" else "second"
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    rng = random.Random(seed)
    report = Report(args.command, "")
    runner = Runner(report, args.format, args.quiet, out)
    runner.info(f"# superspin {args.command} (seed {seed})")
    start = time.perf_counter()
    try:
        report.system = VERBS[args.command](args, runner, rng)
        runner.run()
    except UsageError as exc:
        print(f"superspin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    if args.format == "json":
        print(json.dumps(report.as_dict(), indent=2), file=out)
    else:
        passed = sum(c.status == "pass" for c in report.checks)
        print(f"{'OK' if report.ok else 'FAILED'}: {passed}/{len(report.checks)} checks passed "
              f"in {report.elapsed_ms} ms", file=out)
    return EXIT_OK if report.ok else EXIT_FAIL


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
