"""Command-line front end.

Exit status: 0 on success, 1 when a checked property is falsified (a witness
is printed), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import random
import sys
from typing import Callable, Sequence

from dualcox import absolute_order as ao
from dualcox import complex as cplx
from dualcox import dual_monoid as dm
from dualcox import presentations as pr
from dualcox.signed_perm import (
    GroupType,
    ParseError,
    SignedPermutation,
    coxeter_element,
    decompose,
    fixed_space_dim,
    format_element,
    is_member,
    parse_element,
    reflection_length,
    transposition_length,
)


class UsageError(Exception):
    pass


class Falsified(Exception):
    pass


Output = list[str]


def _group(args: argparse.Namespace) -> GroupType:
    try:
        return GroupType(args.type, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _element(args: argparse.Namespace, text: str) -> SignedPermutation:
    gt = _group(args)
    a = parse_element(text, gt.n)
    if not is_member(a, gt):
        raise UsageError(f"{format_element(a)} is not an element of {gt}")
    return a


def _interval(args: argparse.Namespace) -> ao.Interval:
    gt = _group(args)
    gamma = _element(args, args.gamma) if args.gamma else None
    return ao.interval(gt, gamma)


def _in_interval(iv: ao.Interval, args: argparse.Namespace, text: str) -> int:
    a = _element(args, text)
    x = iv.find(a)
    if x is None:
        raise UsageError(f"{format_element(a)} is not below {format_element(iv.gamma)}")
    return x


def _monoid(args: argparse.Namespace) -> dm.DualMonoid:
    iv = _interval(args)
    cert = iv.lattice
    if not cert.certified:
        raise Falsified(f"not-a-lattice {cert.witness}")
    return dm.DualMonoid(iv)


def _bool(b: bool) -> str:
    return "true" if b else "false"


# --- commands -----------------------------------------------------------------

def cmd_len(args: argparse.Namespace, out: Output) -> None:
    a = _element(args, args.element)
    if not args.details:
        out.append(str(reflection_length(a)))
        return
    gt = _group(args)
    d = decompose(a)
    fields = {
        "element": format_element(a),
        "length": reflection_length(a),
        "fixed_space_dim": fixed_space_dim(a),
        "transposition_length": transposition_length(a),
        "paired": len(d.paired),
        "balanced": len(d.balanced),
        "cycles": " ".join(str(c) for c in d.cycles),
        "member_D": _bool(is_member(a, GroupType("D", gt.n)) if gt.n >= 2 else False),
        "oriented": _bool(ao.is_consistently_oriented(a)),
        "noncrossing": _bool(ao.is_noncrossing(a)),
        "below_gamma_C": _bool(ao.below_coxeter_C(a)),
        "precedes_ok": _bool(ao.satisfies_precedes(a, gt)),
    }
    if args.json:
        out.append(json.dumps(fields, sort_keys=True))
    else:
        out.extend(f"{k}={v}" for k, v in fields.items())


def cmd_leq(args: argparse.Namespace, out: Output) -> None:
    u, w = _element(args, args.u), _element(args, args.w)
    result = ao.leq(u, w)
    if reflection_length(u) == 1:
        below = ao.reflection_below(u, w)
        if below != result:
            raise Falsified(f"reflection test disagrees with leq for {format_element(u)} <= {format_element(w)}")
    out.append(_bool(result))


def cmd_interval(args: argparse.Namespace, out: Output) -> None:
    iv = _interval(args)
    if args.json:
        doc = iv.to_json()
        if args.ncp:
            doc["ncp"] = [str(ao.to_ncp(iv, x)) for x in range(len(iv))]
        out.append(json.dumps(doc, sort_keys=True))
        return
    out.append(f"elements={len(iv)} rank={iv.rank} gamma={format_element(iv.gamma)}")
    for x, label in enumerate(iv.labels):
        line = f"{x} {iv.lengths[x]} {label}"
        if args.ncp:
            line += f" ncp={ao.to_ncp(iv, x)}"
        out.append(line)


def cmd_lattice_check(args: argparse.Namespace, out: Output) -> None:
    iv = _interval(args)
    if args.structured and (iv.group.tag != "D" or iv.gamma != coxeter_element(iv.group)):
        raise UsageError("--structured needs type D and its Coxeter element")
    cert = iv.lattice
    if not cert.certified:
        raise Falsified(f"not-a-lattice {cert.witness}")
    out.append(f"certified elements={len(iv)}")
    if args.structured:
        mismatches = [
            (a, b) for a in range(len(iv)) for b in range(len(iv))
            if ao.meet_d_structured(iv, a, b) != cert.meet[a][b]
        ]
        out.append(f"structured_meet_mismatches={len(mismatches)}")
        if mismatches:
            a, b = mismatches[0]
            raise Falsified(f"structured meet differs at {iv.labels[a]} {iv.labels[b]}")
    if args.monoid_checks:
        m = dm.DualMonoid(iv)
        rng = random.Random(args.seed)
        small = len(iv) <= 8
        reports = [
            dm.check_cancellation(m, 2) if small else dm.check_cancellation(m, 3, samples=args.samples, rng=rng),
            dm.check_nine_element_lemma(m) if small else dm.check_nine_element_lemma(m, samples=args.samples, rng=rng),
        ]
        out.extend(str(r) for r in reports)
        bad = [r for r in reports if not r.ok]
        if bad:
            raise Falsified(f"{bad[0].name} violation {bad[0].violations[0]}")


def _bound(args: argparse.Namespace, out: Output, below: bool) -> None:
    iv = _interval(args)
    a, b = _in_interval(iv, args, args.a), _in_interval(iv, args, args.b)
    try:
        x = ao.meet(iv, a, b) if below else ao.join(iv, a, b)
    except ao.NotALattice as exc:
        raise Falsified(f"not-a-lattice {exc}") from None
    if below and args.structured:
        if iv.group.tag != "D" or iv.gamma != coxeter_element(iv.group):
            raise UsageError("--structured needs type D and its Coxeter element")
        y = ao.meet_d_structured(iv, a, b)
        if y != x:
            raise Falsified(f"structured meet {iv.labels[y]} differs from {iv.labels[x]}")
    out.append(iv.labels[x])


def cmd_meet(args: argparse.Namespace, out: Output) -> None:
    _bound(args, out, below=True)


def cmd_join(args: argparse.Namespace, out: Output) -> None:
    _bound(args, out, below=False)


def cmd_factorizations(args: argparse.Namespace, out: Output) -> None:
    gt = _group(args)
    w = _element(args, args.element) if args.element else (
        _element(args, args.gamma) if args.gamma else coxeter_element(gt)
    )
    facts = ao.reduced_factorizations(w, gt, parallel=args.parallel)
    if not args.count:
        for f in facts:
            line = ".".join(f"({r})" for r in f)
            if args.profile:
                try:
                    prof = ao.balanced_cycle_profile(f, gt.n)
                except ao.ProfileViolation as exc:
                    raise Falsified(f"{line}: {exc}") from None
                line += " profile=" + ",".join(map(str, prof))
            out.append(line)
    out.append(f"count={len(facts)}")


def cmd_nf(args: argparse.Namespace, out: Output) -> None:
    m = _monoid(args)
    word = m.parse_word(args.word)
    out.append(m.format_word(dm.greedy_normal_form(word, m).letters))


def cmd_wp(args: argparse.Namespace, out: Output) -> None:
    m = _monoid(args)
    a, b = m.parse_word(args.a), m.parse_word(args.b)
    equal = dm.word_problem(a, b, m)
    line = "equal" if equal else "not-equal"
    if args.oracle:
        truth = dm.positively_equal(a, b, m, method="atoms")
        line += " oracle=" + ("equal" if truth else "not-equal")
        if truth != equal:
            out.append(line)
            raise Falsified("normal form disagrees with the closure oracle")
    out.append(line)


def cmd_complex(args: argparse.Namespace, out: Output) -> None:
    cx = cplx.build_complex(_interval(args))
    if args.json:
        out.append(json.dumps(cx.to_json(), sort_keys=True))
        return
    out.append(f"face_vector={','.join(map(str, cx.face_vector))} euler={cplx.euler_characteristic(cx)}")
    for k in range(2, cx.dimension + 1):
        bad = cplx.compose_boundaries(cx, k)
        if bad:
            raise Falsified(f"boundary composite d{k - 1}d{k} has entry {bad[0]}")
    out.append("boundary_squared=0")


def cmd_homology(args: argparse.Namespace, out: Output) -> None:
    cx = cplx.build_complex(_interval(args))
    groups = cplx.homology(cx, args.up_to)
    if args.json:
        out.append(json.dumps({f"H{k}": {"rank": g.rank, "torsion": list(g.torsion)} for k, g in enumerate(groups)}))
    else:
        out.append(" ".join(f"H{k}={g}" for k, g in enumerate(groups)))


def cmd_present(args: argparse.Namespace, out: Output) -> None:
    if args.kind == "artin":
        try:
            p = pr.artin_presentation(_group(args))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    elif args.kind == "reflection":
        p = pr.reflection_presentation(_interval(args))
    else:
        p = pr.poset_presentation(_interval(args))
    out.append(p.to_text().rstrip("\n"))
    if args.abelianize:
        out.append(f"abelianization={pr.abelianization(p)}")


def _report(report: pr.VerificationReport, out: Output) -> None:
    out.append(str(report))
    if report.failures:
        out.extend(f"failed: {f}" for f in report.failures)
        raise Falsified(f"{report.name}: {report.failures[0]}")


def _coxeter_monoid(args: argparse.Namespace) -> tuple[GroupType, dm.DualMonoid]:
    if args.gamma:
        raise UsageError("identity batteries use the Coxeter element; drop --gamma")
    gt = _group(args)
    return gt, _monoid(args)


def cmd_verify_phi(args: argparse.Namespace, out: Output) -> None:
    gt, m = _coxeter_monoid(args)
    report = pr.verify_phi(gt, m)
    out.append("witnessed=" + " ".join("{" + w + "}" for w in report.witnessed))
    _report(report, out)


def cmd_verify_theta(args: argparse.Namespace, out: Output) -> None:
    gt, m = _coxeter_monoid(args)
    _report(pr.conjugation_closure(gt), out)
    _report(pr.verify_theta_identities(gt, m), out)


def cmd_counts(args: argparse.Namespace, out: Output) -> None:
    iv = _interval(args)
    facts = ao.reduced_factorizations(iv.gamma, iv.group, parallel=args.parallel)
    out.append(f"interval={len(iv)} factorizations={len(facts)} chains_max={ao.maximal_chain_count(iv)}")


# --- parser -------------------------------------------------------------------

def _configure(name: str, p: argparse.ArgumentParser) -> None:
    if name == "len":
        p.add_argument("element")
        p.add_argument("--details", action="store_true", help="decomposition and order predicates")
    elif name == "leq":
        p.add_argument("u")
        p.add_argument("w")
    elif name == "interval":
        p.add_argument("--ncp", action="store_true", help="noncrossing partition of each element")
    elif name == "lattice-check":
        p.add_argument("--monoid-checks", action="store_true", help="also run cancellation and nine-element checks")
        p.add_argument("--structured", action="store_true", help="compare the type-D meet construction on all pairs")
        p.add_argument("--samples", type=int, default=10_000)
        p.add_argument("--seed", type=int, default=0)
    elif name in ("meet", "join"):
        p.add_argument("a")
        p.add_argument("b")
        if name == "meet":
            p.add_argument("--structured", action="store_true", help="cross-check with the type-D construction")
    elif name == "factorizations":
        p.add_argument("element", nargs="?", help="defaults to gamma")
        p.add_argument("--profile", action="store_true", help="balanced-cycle counts of prefixes")
        p.add_argument("--count", action="store_true", help="only print the count")
    elif name == "nf":
        p.add_argument("word")
    elif name == "wp":
        p.add_argument("a")
        p.add_argument("b")
        p.add_argument("--oracle", action="store_true", help="also run the closure oracle")
    elif name == "homology":
        p.add_argument("--up-to", type=int, default=2, choices=(0, 1, 2))
    elif name == "present":
        p.add_argument("--kind", choices=("poset", "reflection", "artin"), default="poset")
        p.add_argument("--abelianize", action="store_true")


COMMANDS: dict[str, tuple[Callable[[argparse.Namespace, Output], None], str]] = {
    "len": (cmd_len, "reflection length of an element"),
    "leq": (cmd_leq, "absolute order test u <= w"),
    "interval": (cmd_interval, "list the interval [I, gamma]"),
    "lattice-check": (cmd_lattice_check, "certify that the interval is a lattice"),
    "meet": (cmd_meet, "greatest lower bound in the interval"),
    "join": (cmd_join, "least upper bound in the interval"),
    "factorizations": (cmd_factorizations, "reduced reflection factorizations"),
    "nf": (cmd_nf, "normal form of a positive word"),
    "wp": (cmd_wp, "decide equality of two positive words"),
    "complex": (cmd_complex, "face vector and cells of the quotient complex"),
    "homology": (cmd_homology, "integral homology up to dimension 2"),
    "present": (cmd_present, "print a group presentation"),
    "verify-phi": (cmd_verify_phi, "check the Artin-to-interval generator map"),
    "verify-theta": (cmd_verify_theta, "check the identities for the inverse map"),
    "counts": (cmd_counts, "interval size, factorization and chain counts"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", choices=("C", "D"), default="C")
    common.add_argument("--n", type=int, required=True)
    common.add_argument("--gamma", help="top element (default: the Coxeter element)")
    common.add_argument("--json", action="store_true")
    common.add_argument("--parallel", action="store_true")
    common.add_argument("--output", help="write output to this file")
    parser = argparse.ArgumentParser(prog="dualcox", description="Noncrossing-partition tools for types C and D.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        _configure(name, sub.add_parser(name, parents=[common], help=help_text))
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Run one command; returns ``(exit_code, stdout_text, stderr_text)``."""
    parser = build_parser()
    usage = io.StringIO()
    try:
        with contextlib.redirect_stderr(usage), contextlib.redirect_stdout(usage):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        code = int(exc.code or 0)
        return (code, usage.getvalue(), "") if code == 0 else (code, "", usage.getvalue().rstrip("\n"))
    out: Output = []
    code, err = 0, ""
    try:
        COMMANDS[args.command][0](args, out)
    except Falsified as exc:
        code, err = 1, f"falsified: {exc}"
    except (UsageError, ParseError, ValueError) as exc:
        code, err = 2, f"error: {exc}"
    except (dm.ResourceLimitExceeded, cplx.MatrixTooLarge) as exc:
        code, err = 2, f"error: resource limit: {exc}"
    text = "".join(line + "\n" for line in out)
    if args.output and code != 2:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        text = ""
    return code, text, err


def main(argv: Sequence[str] | None = None) -> int:
    code, text, err = run(argv)
    sys.stdout.write(text)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
