"""Command-line entry point: ``asepkit <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import analysis, verify
from .ansatz import ansatz_partition, bracket
from .combinatorics import format_cycles, parse_permutation
from .eulerian import (
    asep_partition_perm,
    colored_eulerian,
    excedance_polynomial,
    excedance_polynomial_recursive,
    specialize,
    tree_parameters,
    tree_partition,
)
from .markov import (
    ChainError,
    ChainSpec,
    Distribution,
    asep_line_spec,
    distribution_of_partition,
    gillespie,
    partition_of_distribution,
    stationary_exact,
    total_variation,
)
from .polycore import SitePoly, format_rational, parse_rational
from .trees import (
    MarkedCycle,
    diagram_arcs,
    enumerate_trees,
    permutation_from_tree,
    tree_from_colored_permutation,
    tree_from_marked_cycle,
    tree_from_permutation,
    tree_statistics,
    validate_tree,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError("not a rational: %r" % text) from exc


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def _dist_json(mu: Distribution) -> dict:
    return {"n": mu.n, "probabilities": {w: format_rational(mu[w]) for w in sorted(mu.weights)}}


def _chain(args) -> ChainSpec:
    if getattr(args, "spec", None):
        with open(args.spec) as fh:
            return ChainSpec.from_json(fh.read())
    if args.n is None:
        raise UsageError("give --n (with rates) or --spec")
    return asep_line_spec(args.n, args.q, args.alpha, args.beta, args.gamma, args.delta)


def _load_poly(path: str) -> SitePoly:
    with open(path) as fh:
        return SitePoly.from_json(fh.read())


def _load_distribution(path: str) -> Distribution:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return distribution_of_partition(SitePoly.from_json(text))
    return Distribution.from_csv(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_stationary(args) -> int:
    mu = stationary_exact(_chain(args), initial=args.initial)
    if args.format == "csv":
        _emit(args, mu.to_csv())
    else:
        _emit(args, _dump({"distribution": _dist_json(mu), "partition": partition_of_distribution(mu).to_json()}))
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = _chain(args)
    res = gillespie(spec, args.t_burn, args.samples, args.gap, args.seed, initial=args.initial)
    emp = res.distribution
    out = {"seed": args.seed, "samples": args.samples, "events": res.events, "absorbing_state": res.absorbing_state}
    if args.compare:
        exact = stationary_exact(spec, initial=args.initial)
        out["total_variation"] = float(total_variation(emp, exact))
    if args.format == "csv":
        _emit(args, emp.to_csv())
    else:
        out["distribution"] = _dist_json(emp)
        _emit(args, _dump(out))
    return EXIT_OK


def cmd_ansatz(args) -> int:
    if args.word is not None:
        p = bracket(args.word)
        if args.alpha is not None:
            value = p.evaluate({"alpha": args.alpha, "beta": args.beta, "q": args.q, "xi": args.xi})
            _emit(args, _dump({"word": args.word, "value": format_rational(value)}))
        else:
            _emit(args, _dump({"word": args.word, "params": list(p.params), "bracket": p.to_json()}))
        return EXIT_OK
    if args.n is None:
        raise UsageError("give --word or --n")
    p = ansatz_partition(args.n)
    if args.alpha is not None:
        p = p.subs_params({"alpha": args.alpha, "beta": args.beta, "q": args.q, "xi": args.xi})
    _emit(args, _dump(p.to_json()))
    return EXIT_OK


def cmd_partition(args) -> int:
    n, r = args.n, args.r
    numeric = args.alpha is not None
    if args.method == "solve":
        if not numeric:
            raise UsageError("the solver needs numeric --alpha/--beta/--q")
        p = partition_of_distribution(stationary_exact(asep_line_spec(n, args.q, args.alpha, args.beta, args.gamma, args.delta)))
    elif args.method == "ansatz":
        p = ansatz_partition(n)
        if numeric:
            p = p.subs_params({"alpha": args.alpha, "beta": args.beta, "q": args.q, "xi": 1})
    elif args.method in ("perm", "colored"):
        if args.method == "colored" and r < 2:
            raise UsageError("--method colored needs --r >= 2")
        p = asep_partition_perm(n, r if args.method == "colored" else 1)
        if numeric:
            p = specialize(p, args.alpha, args.beta, args.q)
    else:
        p = tree_partition(n, r)
        if numeric:
            p = p.subs_params({**tree_parameters(args.alpha, args.beta, r), "q": args.q})
    _emit(args, _dump(p.to_json()))
    return EXIT_OK


def cmd_eulerian(args) -> int:
    if args.y:
        p = excedance_polynomial_recursive(args.n, args.r) if args.recursive else excedance_polynomial(args.n, args.r)
    else:
        if args.recursive:
            raise UsageError("the recursion is for the x/y polynomial; add --y")
        p = colored_eulerian(args.n, args.r)
    if args.a is not None:
        p = p.subs_params({"a": args.a, "b": args.b})
    _emit(args, _dump(p.to_json()))
    return EXIT_OK


def cmd_analyze(args) -> int:
    check = args.check
    report: dict = {"check": check}
    ok = True
    if check in ("sturm", "stability", "rayleigh"):
        p = _load_poly(args.input)
        if check == "sturm":
            coeffs = analysis.diagonal_coefficients(p)
            ok = analysis.sturm_real_rooted(coeffs)
            report.update(diagonal=[format_rational(c) for c in coeffs], real_rooted=ok)
        elif check == "stability":
            rep = analysis.stability_sample(p, args.samples, args.seed)
            ok = not rep.refuted
            report.update(rep.to_json())
        else:
            rep = analysis.rayleigh_sample(p, args.samples, args.seed)
            ok = rep.nonnegative
            w = None
            if rep.witness is not None:
                w = {k: (format_rational(v) if isinstance(v, Fraction) else list(v)) for k, v in rep.witness.items()}
            report.update(nonnegative=ok, witness=w, samples_run=rep.samples_run, seed=rep.seed)
    else:
        mu = _load_distribution(args.input)
        if not mu.normalized:
            mu = mu.normalize()
        if check == "pairwise":
            rep = analysis.pairwise_negative_correlation(mu)
            ok = rep.holds
            report.update(holds=ok, witness=rep.witness)
        elif check == "na":
            rep = analysis.negative_association_exact(mu)
            ok = rep.holds
            report.update(holds=ok, witness=rep.witness, checked=rep.checked)
        else:
            cc = analysis.concentration_check(mu, args.deviation)
            ok = cc.holds
            report.update(
                mean=format_rational(cc.mean_particles),
                deviation=format_rational(cc.deviation),
                tail=format_rational(cc.tail),
                bound=format_rational(cc.bound),
                holds=ok,
            )
    _emit(args, _dump(report))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        checks = verify.run_suite(args.suite, args.n, args.r, args.seed, args.samples, args.count)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    ok = all(c.ok for c in checks)
    if args.format == "csv":
        rows = [[c.name, json.dumps(c.params, sort_keys=True), "pass" if c.ok else "FAIL", c.detail] for c in checks]
        _emit(args, _rows_csv(["check", "params", "result", "detail"], rows))
    else:
        _emit(args, _dump({"suite": args.suite, "description": verify.SUITES[args.suite], "passed": ok,
                           "checks": [c.to_json() for c in checks]}))
    return EXIT_OK if ok else EXIT_FAIL


def default_q_grid() -> list:
    return [Fraction(k, 4) for k in range(10)]


def explore_q(n: int, alpha, beta, grid, samples: int, seed: int) -> list:
    rows = []
    for q in grid:
        mu = stationary_exact(asep_line_spec(n, q, alpha, beta))
        z = partition_of_distribution(mu)
        rooted = analysis.sturm_real_rooted(analysis.diagonal_coefficients(z))
        stab = analysis.stability_sample(z, samples, seed).verdict
        pw = analysis.pairwise_negative_correlation(mu).holds
        rows.append([format_rational(q), str(rooted).lower(), stab, str(pw).lower()])
    return rows


def cmd_explore_q(args) -> int:
    grid = [_rational(t) for t in args.q_grid.split(",")] if args.q_grid else default_q_grid()
    rows = explore_q(args.n, args.alpha, args.beta, grid, args.samples, args.seed)
    _emit(args, _rows_csv(["q", "diagonal_real_rooted", "stability_sampling", "pairwise_negative_correlation"], rows))
    return EXIT_OK


def _tree_of(args):
    pi = parse_permutation(args.permutation, r=args.r)
    if args.marked:
        cycles = pi.cycles()
        if len([c for c in cycles if len(c) > 1]) != 1:
            raise UsageError("--marked needs exactly one nontrivial cycle")
        cyc = max(cycles, key=len)
        mark = min(cyc) if args.marked == "min" else max(cyc)
        return pi, tree_from_marked_cycle(MarkedCycle.from_cycle(cyc, mark))
    if pi.r >= 2:
        return pi, tree_from_colored_permutation(pi)
    return pi, tree_from_permutation(pi)


def cmd_diagram(args) -> int:
    _, t = _tree_of(args)
    rows = [[i, j, side] for i, j, side in diagram_arcs(t)]
    if args.format == "json":
        _emit(args, _dump({"arcs": [{"i": i, "j": j, "side": s} for i, j, s in rows]}))
    else:
        _emit(args, _rows_csv(["i", "j", "side"], rows))
    return EXIT_OK


def cmd_tree(args) -> int:
    if args.permutation is None:
        if args.n is None:
            raise UsageError("give a permutation or --n")
        bad = 0
        total = 0
        for t in enumerate_trees(args.n, args.r):
            total += 1
            back = permutation_from_tree(t)
            again = tree_from_permutation(back) if args.r == 1 else tree_from_colored_permutation(back)
            bad += again != t
        _emit(args, _dump({"n": args.n, "r": args.r, "trees": total, "round_trip_failures": bad}))
        return EXIT_OK if not bad else EXIT_FAIL
    pi, t = _tree_of(args)
    report = validate_tree(t)
    out = {"permutation": format_cycles(pi), "tree": t.to_json(), "valid": report.ok}
    if not args.marked:
        st = tree_statistics(t)
        back = permutation_from_tree(t)
        out.update(
            statistics={"excedances": st.excedances, "root_children": st.root_children,
                        "top_children": st.top_children, "yin_yang": st.yin_yang},
            round_trip=back == pi,
        )
    _emit(args, _dump(out))
    return EXIT_OK if report.ok and out.get("round_trip", True) else EXIT_FAIL


# ---------------------------------------------------------------------------


def _rates(p):
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=_rational, default=Fraction(1))
    p.add_argument("--alpha", type=_rational, default=Fraction(1))
    p.add_argument("--beta", type=_rational, default=Fraction(1))
    p.add_argument("--gamma", type=_rational, default=Fraction(0))
    p.add_argument("--delta", type=_rational, default=Fraction(0))
    p.add_argument("--spec", help="ChainSpec JSON instead of line rates")
    p.add_argument("--initial", help="starting word; restricts to states reachable from it")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="asepkit", description="Exact tools for the open-boundary exclusion process.")
    sub = top.add_subparsers(dest="command", required=True)

    def command(name, helptext, fmt="json"):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=["json", "csv"], default=fmt)
        p.add_argument("--output", "-o", help="write here instead of stdout")
        return p

    p = command("stationary", "exact stationary distribution")
    _rates(p)
    p.set_defaults(func=cmd_stationary)

    p = command("simulate", "continuous-time simulation")
    _rates(p)
    p.add_argument("--t-burn", type=_rational, default=Fraction(50))
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--gap", type=_rational, default=Fraction(1))
    p.add_argument("--compare", action="store_true", help="report total variation to the exact law")
    p.set_defaults(func=cmd_simulate)

    p = command("ansatz", "word bracket or its partition function")
    p.add_argument("--word")
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=_rational)
    p.add_argument("--beta", type=_rational, default=Fraction(1))
    p.add_argument("--q", type=_rational, default=Fraction(1))
    p.add_argument("--xi", type=_rational, default=Fraction(1))
    p.set_defaults(func=cmd_ansatz)

    p = command("partition", "partition function by one route")
    p.add_argument("--method", choices=["solve", "ansatz", "perm", "colored", "trees"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--alpha", type=_rational)
    p.add_argument("--beta", type=_rational, default=Fraction(1))
    p.add_argument("--q", type=_rational, default=Fraction(1))
    p.add_argument("--gamma", type=_rational, default=Fraction(0))
    p.add_argument("--delta", type=_rational, default=Fraction(0))
    p.set_defaults(func=cmd_partition)

    p = command("eulerian", "excedance polynomials of colored permutations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--recursive", action="store_true")
    p.add_argument("--y", action="store_true", help="include the anti-excedance variables")
    p.add_argument("--a", type=_rational)
    p.add_argument("--b", type=_rational, default=Fraction(1))
    p.set_defaults(func=cmd_eulerian)

    p = command("analyze", "zeros and dependence checks")
    p.add_argument("--input", required=True, help="polynomial JSON, or distribution CSV")
    p.add_argument("--check", choices=["sturm", "stability", "rayleigh", "pairwise", "na", "pp"], required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--deviation", type=_rational, default=Fraction(1))
    p.set_defaults(func=cmd_analyze)

    p = command("verify", "run a named identity suite")
    p.add_argument("--suite", required=True, help=", ".join(sorted(verify.SUITES)))
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--count", type=int, default=5, help="parameter samples per size")
    p.set_defaults(func=cmd_verify)

    p = command("explore-q", "scan q: diagonal roots, stability search, correlations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=_rational, default=Fraction(1))
    p.add_argument("--beta", type=_rational, default=Fraction(1))
    p.add_argument("--q-grid", help="comma-separated rationals (default 0, 1/4, ..., 9/4)")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_explore_q)

    for name, func, helptext in (("diagram", cmd_diagram, "arc diagram of the tree of a permutation"),
                                 ("tree", cmd_tree, "tree of a permutation, with round trip")):
        p = command(name, helptext, "csv" if name == "diagram" else "json")
        p.add_argument("permutation", nargs="?" if name == "tree" else None)
        p.add_argument("--r", type=int)
        p.add_argument("--marked", choices=["min", "max"], help="read a single cycle as a marked cycle")
        if name == "tree":
            p.add_argument("--n", type=int, help="round-trip every tree of this size")
        p.set_defaults(func=func)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "tree" and args.r is None:
        args.r = 1 if args.permutation is None else None
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ChainError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
