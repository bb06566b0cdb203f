"""Batch command-line front end.

Exit codes: 0 ok, 2 parse/usage error, 3 math-domain error, 4 non-symmetry.
"""

from __future__ import annotations

import argparse
import sys

from .discrete import discrete_euler_lagrange, discrete_first_integral
from .errors import (
    DomainError,
    NotAConservationLawError,
    NotASymmetryError,
    ParseError,
    VarCalcError,
)
from .jet import evolutionary_representative
from .noether import (
    Triviality,
    classify_triviality,
    conservation_residual,
    noether_current,
    noether_identity,
)
from .problem import ProblemFile, load_problem
from .variational import euler_lagrange
from .verify import DEFAULT_TRIALS, certify_zero

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_NOT_SYMMETRY = 4


class Report:
    """Ordered key/value report rendered as text or key=value records."""

    def __init__(self, command: str):
        self.command = command
        self.rows = [("command", command)]

    def add(self, key, value):
        self.rows.append((key, str(value)))

    def render(self, fmt: str) -> str:
        if fmt == "records":
            return "".join(f"{k}={v}\n" for k, v in self.rows)
        width = max(len(k) for k, _ in self.rows[1:]) if len(self.rows) > 1 else 0
        lines = [f"== {self.command} =="]
        lines += [f"{k.ljust(width)} : {v}" for k, v in self.rows[1:]]
        return "\n".join(lines) + "\n"


def parse_records(text: str) -> list:
    """Inverse of the records rendering: list of (key, value) pairs."""
    rows = []
    for line in text.splitlines():
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"not a key=value record: {line!r}")
        rows.append((key, value))
    return rows


def _indexed(prefix, names, values, report):
    for name, value in zip(names, values):
        report.add(f"{prefix}[{name}]", value)


def _certificate(report, tree, args):
    verdict = certify_zero(tree, trials=args.trials, seed=args.seed)
    report.add("certificate", verdict)
    report.add("trials", args.trials)
    report.add("seed", args.seed)
    return verdict


def cmd_euler_lagrange(prob: ProblemFile, args, report: Report) -> int:
    f = prob.get("lagrangians", args.lagrangian)
    report.add("lagrangian", args.lagrangian)
    psi = euler_lagrange(f, prob.space)
    _indexed("psi", prob.space.fields, psi, report)
    report.add("status", "ok")
    return EXIT_OK


def cmd_current(prob: ProblemFile, args, report: Report) -> int:
    sp = prob.space
    f = prob.get("lagrangians", args.lagrangian)
    s = prob.get("symmetries", args.symmetry)
    normal = prob.get("normals", args.normal) if args.normal else None
    report.add("lagrangian", args.lagrangian)
    report.add("symmetry", args.symmetry)
    Z = evolutionary_representative(s)
    _indexed("Q", sp.fields, Z, report)
    try:
        B = noether_current(f, s)
    except NotASymmetryError as exc:
        report.add("residual", exc.residual)
        report.add("status", "not-a-symmetry")
        return EXIT_NOT_SYMMETRY
    _indexed("B", sp.independent, B, report)
    psi = euler_lagrange(f, sp)
    verdict = _certificate(report, conservation_residual(B, psi, Z), args)
    if normal is not None:
        report.add("normal", args.normal)
        report.add("verdict", classify_triviality(B, normal).kind.value)
    report.add("status", "ok" if verdict else "certificate-failed")
    return EXIT_OK if verdict else EXIT_DOMAIN


def cmd_identity(prob: ProblemFile, args, report: Report) -> int:
    sp = prob.space
    f = prob.get("lagrangians", args.lagrangian)
    g = prob.get("gauges", args.gauge)
    report.add("lagrangian", args.lagrangian)
    report.add("gauge", args.gauge)
    ident = noether_identity(f, g)
    _indexed("adjoint", sp.fields, ident.terms, report)
    report.add("identity", ident.expression)
    report.add("verified", str(ident.verified).lower())
    _certificate(report, ident.tree(), args)
    if not ident.verified:
        report.add("status", "not-a-symmetry")
        return EXIT_NOT_SYMMETRY
    report.add("status", "ok")
    return EXIT_OK


def cmd_classify(prob: ProblemFile, args, report: Report) -> int:
    sp = prob.space
    B, hint = prob.get("currents", args.current)
    normal = prob.get("normals", args.normal)
    report.add("current", args.current)
    report.add("normal", args.normal)
    _indexed("B", sp.independent, B, report)
    try:
        verdict = classify_triviality(B, normal, hint)
    except NotAConservationLawError as exc:
        report.add("residual", exc.residual)
        report.add("status", "not-a-conservation-law")
        return EXIT_DOMAIN
    report.add("divergence", verdict.divergence)
    report.add("verdict", verdict.kind.value)
    if verdict.kind is Triviality.MIXED:
        _indexed("first_kind", sp.independent, verdict.first_kind, report)
        _indexed("second_kind", sp.independent, verdict.second_kind, report)
    report.add("status", "ok")
    return EXIT_OK


def cmd_discrete(prob: ProblemFile, args, report: Report) -> int:
    L = prob.get("discretes", args.problem)
    Q = prob.get("dsymmetries", args.symmetry)
    report.add("problem", args.problem)
    report.add("symmetry", args.symmetry)
    report.add("E", discrete_euler_lagrange(L))
    report.add("Q", Q.Q)
    try:
        fi = discrete_first_integral(L, Q)
    except NotASymmetryError as exc:
        report.add("residual", exc.residual)
        report.add("status", "not-a-symmetry")
        return EXIT_NOT_SYMMETRY
    report.add("I", fi.value)
    verdict = _certificate(report, fi.tree(), args)
    report.add("status", "ok" if verdict else "certificate-failed")
    return EXIT_OK if verdict else EXIT_DOMAIN


COMMANDS = {
    "euler-lagrange": cmd_euler_lagrange,
    "current": cmd_current,
    "identity": cmd_identity,
    "classify": cmd_classify,
    "discrete": cmd_discrete,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized certificates")
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="random evaluation points")
    common.add_argument("--max-order", type=int, default=None, help="override the derivative headroom")
    common.add_argument("--format", choices=("text", "records"), default="text")

    parser = argparse.ArgumentParser(prog="varcalc", description="Noether-theorem calculations on problem files.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("euler-lagrange", parents=[common], help="Lagrangian expressions psi_i")
    p.add_argument("file")
    p.add_argument("lagrangian")

    p = sub.add_parser("current", parents=[common], help="conserved current of a divergence symmetry")
    p.add_argument("file")
    p.add_argument("lagrangian")
    p.add_argument("symmetry")
    p.add_argument("--normal", default=None, help="also classify the current against this normal form")

    p = sub.add_parser("identity", parents=[common], help="Noether identity of a gauge family")
    p.add_argument("file")
    p.add_argument("lagrangian")
    p.add_argument("gauge")

    p = sub.add_parser("classify", parents=[common], help="triviality of a declared current")
    p.add_argument("file")
    p.add_argument("current")
    p.add_argument("normal")

    p = sub.add_parser("discrete", parents=[common], help="discrete first integral")
    p.add_argument("file")
    p.add_argument("problem")
    p.add_argument("symmetry")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.trials < 1:
        print("error: --trials must be >= 1", file=stderr)
        return EXIT_PARSE
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    report = Report(args.command)
    try:
        prob = load_problem(text, args.max_order)
        if args.command != "discrete" and prob.space is None:
            raise ParseError("problem file has no 'independent' declaration")
        code = COMMANDS[args.command](prob, args, report)
    except ParseError as exc:
        where = f"{args.file}:{exc}" if exc.line is not None else f"{args.file}: error: {exc}"
        print(where, file=stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"{args.file}: domain error: {exc}", file=stderr)
        return EXIT_DOMAIN
    except VarCalcError as exc:
        print(f"{args.file}: error: {exc}", file=stderr)
        return EXIT_DOMAIN
    stdout.write(report.render(args.format))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
