"""Command-line frontend.

Every library operation is reachable through exactly one subcommand
(see OP_REGISTRY).  Exit codes: 0 success, 1 the mathematics said no
(bad bracket, divergence, a check that came back false), 2 bad usage or
unparseable input.  With --output json a single object with "result"
and "diagnostics" is emitted; identical argv and seed give
byte-identical output.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from typing import Callable, Dict

from . import calculus, cover, expr, graph, integrate, interval, sequences, stepfn, suprema
from .errors import MathError, ParseError

# library operation -> owning subcommand
OP_REGISTRY: Dict[str, str] = {
    "expr.parse": "parse",
    "expr.eval": "eval",
    "expr.differentiate": "deriv",
    "interval.bisect": "ival",
    "interval.uniform_partition": "ival",
    "interval.refine": "ival",
    "interval.shrink_to_point": "ival",
    "sequences.check_monotone": "seq",
    "sequences.check_cauchy_window": "seq",
    "sequences.bound_prefix": "seq",
    "sequences.bw_extract": "seq",
    "sequences.monotone_limit": "seq",
    "sequences.divergence_witness": "seq",
    "sequences.cauchy_limit": "seq",
    "suprema.supremum": "sup",
    "suprema.sup_witnesses": "sup",
    "suprema.cut_point": "cut",
    "suprema.ivt_root": "root",
    "suprema.affine_map": "affine",
    "calculus.limit": "limit",
    "calculus.derivative": "deriv",
    "calculus.extreme_point": "extremum",
    "calculus.rolle_witness": "rolle",
    "calculus.mvt_witness": "mvt",
    "calculus.emvt_witness": "emvt",
    "calculus.taylor": "taylor",
    "calculus.polynomial_check": "polycheck",
    "calculus.shape_checks": "shape",
    "calculus.piecewise_linear": "pwl",
    "cover.verify_cover": "cover-verify",
    "cover.length_inequality": "cover-verify",
    "cover.finite_subcover": "subcover",
    "cover.lebesgue_number": "lebesgue",
    "cover.uniform_modulus": "modulus",
    "cover.step_approximation": "stepapprox",
    "integrate.step_integral": "stepint",
    "integrate.step_reexpress": "stepint",
    "integrate.step_combine": "stepint",
    "integrate.step_split": "stepint",
    "integrate.darboux_bounds": "darboux",
    "integrate.riemann_sum": "riemann",
    "integrate.riemann_integral": "integrate",
    "integrate.integral_additivity_check": "integrate",
    "integrate.bounds_check": "integrate",
    "integrate.antiderivative": "integrate",
    "integrate.ftc2_check": "ftc2",
    "integrate.imvt_witness": "imvt",
    "integrate.adt_check": "adt",
    "graph.build": "graph",
    "graph.path": "graph",
    "graph.check_equivalence": "graph",
    "graph.export_dot": "graph",
    "cli.dispatch": "fc",
}


@dataclass
class Config:
    tol: float = 1e-9
    seed: int = 0
    output: str = "text"
    max_iter: int = 10**6


_COMPARATORS = (("<=", lambda u, v: u <= v), (">=", lambda u, v: u >= v),
                ("<", lambda u, v: u < v), (">", lambda u, v: u > v))


def parse_predicate(text: str) -> Callable[[float], bool]:
    """Comparison over the expression grammar, e.g. 'x*x < 2'."""
    for sym, op in _COMPARATORS:
        pos = text.find(sym)
        if pos >= 0:
            lhs = expr.parse(text[:pos])
            rhs = expr.parse(text[pos + len(sym):])
            return lambda t: bool(op(expr.evaluate(lhs, t), expr.evaluate(rhs, t)))
    raise ParseError("predicate needs a comparison (<, <=, >, >=)", 0)


def _json_list(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"bad JSON: {e.msg}", e.pos)
    return data


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


# ---------------------------------------------------------------------------
# handlers: each returns (result, diagnostics, exit_code, text_lines)

def _h_parse(args, cfg):
    text = expr.to_text(expr.parse(args.text))
    return text, {}, 0, [text]


def _h_eval(args, cfg):
    value = expr.evaluate(expr.parse(args.f), args.x)
    return value, {}, 0, [_fmt(value)]


def _h_deriv(args, cfg):
    f = expr.parse(args.f)
    if args.at is None:
        text = expr.to_text(expr.differentiate(f, args.order))
        return text, {}, 0, [text]
    if args.order != 1:
        value = expr.evaluate(expr.differentiate(f, args.order), args.at)
        return value, {"order": args.order}, 0, [_fmt(value)]
    rep = calculus.derivative(f, args.at, tol=max(cfg.tol, 1e-10))
    diag = dataclasses.asdict(rep)
    return rep.estimate, diag, 0, [_fmt(rep.estimate)]


def _h_limit(args, cfg):
    f = expr.parse(args.f)
    sched = calculus.LimitSchedule(mode=args.mode)
    rep = calculus.limit(f, args.at, sched, tol=max(cfg.tol, 1e-10))
    diag = dataclasses.asdict(rep)
    return rep.estimate, diag, 0, [_fmt(rep.estimate)]


def _h_sup(args, cfg):
    pset = suprema.PredicateSet(parse_predicate(args.member), args.seed_point, args.bound)
    res = suprema.bisect_supremum(pset, cfg.tol)
    diag = {"iterations": res.iterations}
    lines = [_fmt(res.value)]
    if args.witnesses:
        wit = suprema.sup_witnesses(pset, res.value, args.witnesses)
        diag["witnesses"] = wit
        lines.append("witnesses: " + _fmt(wit))
    return res.value, diag, 0, lines


def _h_cut(args, cfg):
    c = suprema.Cut(parse_predicate(args.below), args.in_point, args.out_point)
    value = suprema.cut_point(c, cfg.tol)
    return value, {}, 0, [_fmt(value)]


def _h_root(args, cfg):
    f = expr.parse(args.f)
    res = suprema.ivt_root_result(f, args.a, args.b, args.k, cfg.tol)
    diag = {"iterations": res.iterations, "bracket": list(res.bracket),
            "residual": res.residual}
    return res.root, diag, 0, [_fmt(res.root)]


def _h_extremum(args, cfg):
    f = expr.parse(args.f)
    c, fc = calculus.extreme_point(f, args.a, args.b, args.grid, args.refinements)
    return {"argmax": c, "max": fc}, {}, 0, [f"argmax {_fmt(c)} max {_fmt(fc)}"]


def _h_rolle(args, cfg):
    f = expr.parse(args.f)
    c = calculus.rolle_witness(f, args.a, args.b, max(cfg.tol, 1e-12))
    return c, {}, 0, [_fmt(c)]


def _h_mvt(args, cfg):
    f = expr.parse(args.f)
    c = calculus.mvt_witness(f, args.a, args.b, max(cfg.tol, 1e-12))
    return c, {}, 0, [_fmt(c)]


def _h_emvt(args, cfg):
    f, g = expr.parse(args.f), expr.parse(args.g)
    c = calculus.emvt_witness(f, g, args.a, args.b, max(cfg.tol, 1e-12))
    return c, {}, 0, [_fmt(c)]


def _h_taylor(args, cfg):
    f = expr.parse(args.f)
    rep = calculus.taylor(f, args.at, args.n, args.x, max(cfg.tol, 1e-12))
    diag = dataclasses.asdict(rep)
    lines = [f"value {_fmt(rep.value)} rho {_fmt(rep.rho)} witness "
             f"{_fmt(rep.witness) if rep.witness is not None else 'none'} "
             f"remainder {_fmt(rep.remainder)}"]
    return rep.value, diag, 0, lines


def _h_polycheck(args, cfg):
    f = expr.parse(args.f)
    ok = calculus.polynomial_check(f, args.a, args.b, args.n, args.samples, cfg.tol)
    return ok, {}, 0 if ok else 1, [f"polynomial of degree <= {args.n}: {str(ok).lower()}"]


def _h_shape(args, cfg):
    f = expr.parse(args.f)
    ok, ce = calculus.shape_checks(f, args.a, args.b, args.kind, args.samples,
                                   cfg.tol, seed=cfg.seed)
    diag = {"counterexample": list(ce) if ce else None}
    lines = [f"{args.kind}: {str(ok).lower()}"]
    if ce:
        lines.append("counterexample: " + _fmt(list(ce)))
    return ok, diag, 0 if ok else 1, lines


def _load_cover(text: str) -> cover.OpenCover:
    return cover.OpenCover.from_json(_json_list(text))


def _h_cover_verify(args, cfg):
    c = _load_cover(args.cover)
    ok, witness = cover.verify_cover(c)
    diag = {"witness": witness}
    lines = [f"covers: {str(ok).lower()}"]
    if ok:
        diag["length_inequality"] = cover.length_inequality(c)
    else:
        lines.append(f"uncovered point: {_fmt(witness)}")
    return ok, diag, 0 if ok else 1, lines


def _h_subcover(args, cfg):
    c = _load_cover(args.cover)
    ok, witness = cover.verify_cover(c)
    if not ok:
        raise MathError(f"not a cover: {witness} is uncovered")
    idx = cover.finite_subcover(c)
    return idx, {}, 0, ["indices: " + _fmt(idx)]


def _h_lebesgue(args, cfg):
    c = _load_cover(args.cover)
    ok, witness = cover.verify_cover(c)
    if not ok:
        raise MathError(f"not a cover: {witness} is uncovered")
    delta = cover.lebesgue_number(c, args.mode, args.sample)
    return delta, {"mode": args.mode}, 0, [_fmt(delta)]


def _h_modulus(args, cfg):
    f = expr.parse(args.f)
    delta = cover.uniform_modulus(f, args.a, args.b, args.eps, args.grid, seed=cfg.seed)
    return delta, {}, 0, [_fmt(delta)]


def _h_stepapprox(args, cfg):
    f = expr.parse(args.f)
    phi = cover.step_approximation(f, args.a, args.b, args.eps, delta=args.delta,
                                   grid=args.grid, seed=cfg.seed)
    err = cover.sup_error(f, phi)
    result = {"partition": phi.partition.to_json(), "values": list(phi.cell_values),
              "sup_error": err}
    lines = [f"cells {phi.partition.cell_count} sup_error {_fmt(err)}"]
    return result, {}, 0, lines


def _step_from_args(ptext: str, vtext: str) -> stepfn.StepFunction:
    nodes = _json_list(ptext)
    values = _json_list(vtext)
    return stepfn.StepFunction(interval.Partition(tuple(map(float, nodes))),
                               tuple(map(float, values)))


def _h_stepint(args, cfg):
    phi = _step_from_args(args.partition, args.values)
    if args.split_at is not None:
        left, right = stepfn.step_split(phi, args.split_at)
        result = {"left": stepfn.step_integral(left), "right": stepfn.step_integral(right)}
        return result, {}, 0, [f"left {_fmt(result['left'])} right {_fmt(result['right'])}"]
    if args.reexpress is not None:
        omega = interval.Partition(tuple(map(float, _json_list(args.reexpress))))
        phi = stepfn.step_reexpress(phi, omega)
    if args.combine is not None:
        psi = None
        if args.combine == "add":
            if args.other_partition is None or args.other_values is None:
                raise ParseError("--combine add needs --other-partition and --other-values", 0)
            psi = _step_from_args(args.other_partition, args.other_values)
        phi = stepfn.step_combine(phi, psi, op=args.combine, factor=args.factor)
    value = stepfn.step_integral(phi)
    diag = {"partition": phi.partition.to_json(), "values": list(phi.cell_values)}
    return value, diag, 0, [_fmt(value)]


def _h_darboux(args, cfg):
    f = expr.parse(args.f)
    lower, upper = integrate.darboux_bounds(f, args.a, args.b, args.n, args.m)
    return {"lower": lower, "upper": upper}, {}, 0, [f"lower {_fmt(lower)} upper {_fmt(upper)}"]


def _h_riemann(args, cfg):
    f = expr.parse(args.f)
    part = interval.Partition(tuple(map(float, _json_list(args.partition))))
    points = tuple(map(float, _json_list(args.points))) if args.points else None
    choice = integrate.ChoiceFunction(args.choice, seed=cfg.seed, points=points)
    value = integrate.riemann_sum(f, part, choice)
    return value, {}, 0, [_fmt(value)]


def _h_integrate(args, cfg):
    f = expr.parse(args.f)
    tol = getattr(args, "tol", 1e-6)
    if args.check_additivity_at is not None:
        ok = integrate.integral_additivity_check(f, args.a, args.check_additivity_at,
                                                 args.b, tol)
        return ok, {}, 0 if ok else 1, [f"additivity: {str(ok).lower()}"]
    if args.bounds is not None:
        ok = integrate.bounds_check(f, args.a, args.b, args.bounds[0], args.bounds[1], tol)
        return ok, {}, 0 if ok else 1, [f"bounds: {str(ok).lower()}"]
    cert = integrate.riemann_integral(f, args.a, args.b, tol, seed=cfg.seed)
    diag = cert.to_json() if args.certificate else {"converged": cert.converged,
                                                    "levels": len(cert.levels)}
    return cert.value, diag, 0, [_fmt(cert.value)]


def _h_ftc2(args, cfg):
    F = expr.parse(args.F)
    tol = getattr(args, "tol", 1e-6)
    ok = integrate.ftc2_check(F, args.a, args.b, tol)
    return ok, {}, 0 if ok else 1, [f"ftc2: {str(ok).lower()}"]


def _h_imvt(args, cfg):
    f = expr.parse(args.f)
    tol = getattr(args, "tol", 1e-6)
    xi = integrate.imvt_witness(f, args.a, args.b, tol)
    return xi, {}, 0, [_fmt(xi)]


def _h_adt(args, cfg):
    F, G = expr.parse(args.F), expr.parse(args.G)
    ok = integrate.adt_check(F, G, args.a, args.b, args.samples, max(cfg.tol, 1e-12))
    return ok, {}, 0 if ok else 1, [f"adt: {str(ok).lower()}"]


def _h_graph(args, cfg):
    g = graph.build()
    if args.gcmd == "scc":
        ok = graph.check_equivalence(g)
        return ok, {"nodes": len(g.nodes), "edges": len(g.edges)}, 0 if ok else 1, [
            f"strongly connected: {str(ok).lower()}"
        ]
    if args.gcmd == "dot":
        text = graph.export_dot(g)
        return text, {}, 0, [text.rstrip("\n")]
    chain = graph.path(g, args.src, args.dst)
    hops = [f"{e.src} -> {e.dst}" for e in chain]
    result = {"length": len(chain), "edges": hops}
    return result, {}, 0, [f"length {len(chain)}"] + hops


def _h_affine(args, cfg):
    e = suprema.affine_map(args.from_a, args.from_b, args.to_a, args.to_b)
    text = expr.to_text(e)
    return text, {}, 0, [text]


def _h_pwl(args, cfg):
    nodes = list(map(float, _json_list(args.nodes)))
    values = list(map(float, _json_list(args.values)))
    fn = calculus.piecewise_linear(nodes, values)
    value = fn(args.x)
    return value, {}, 0, [_fmt(value)]


def _h_seq(args, cfg):
    rule_expr = expr.parse(args.s, var_name="n")
    s = sequences.Sequence(lambda k: expr.evaluate(rule_expr, float(k)))
    if args.op == "monotone":
        verdict = sequences.check_monotone(s, args.n)
        return verdict, {}, 0, [verdict]
    if args.op == "cauchy":
        rep = sequences.check_cauchy_window(s, args.eps, args.lo, args.hi)
        diag = {"pair": list(rep.pair), "gap": rep.gap}
        return rep.ok, diag, 0 if rep.ok else 1, [
            f"cauchy: {str(rep.ok).lower()} worst pair {rep.pair} gap {_fmt(rep.gap)}"
        ]
    if args.op == "bound":
        m = sequences.bound_prefix(s, args.n)
        return m, {}, 0, [_fmt(m)]
    if args.op == "bw":
        box = interval.Interval(args.box[0], args.box[1])
        sel, ivals = sequences.bw_extract(s, box, args.depth, args.budget)
        result = {"indices": list(sel.indices),
                  "intervals": [iv.to_json() for iv in ivals]}
        return result, {}, 0, ["indices: " + _fmt(list(sel.indices))]
    if args.op == "limit":
        if args.upper is None:
            raise ParseError("seq --op limit needs --upper", 0)
        value = sequences.monotone_limit(s, args.upper, max(cfg.tol, 1e-12), cfg.max_iter)
        return value, {}, 0, [_fmt(value)]
    if args.op == "diverge":
        sel = sequences.divergence_witness(s, args.eps, args.count, args.budget)
        return list(sel.indices), {}, 0, ["indices: " + _fmt(list(sel.indices))]
    if args.op == "cauchy-limit":
        box = interval.Interval(args.box[0], args.box[1])
        value = sequences.cauchy_limit(s, box, max(cfg.tol, 1e-12), args.budget)
        return value, {}, 0, [_fmt(value)]
    raise ParseError(f"unknown sequence op {args.op!r}", 0)


def _h_ival(args, cfg):
    if args.op == "bisect":
        iv = interval.Interval(*map(float, _json_list(args.interval)))
        left, right = interval.bisect(iv)
        result = {"left": left.to_json(), "right": right.to_json()}
        return result, {}, 0, [f"left {left.to_json()} right {right.to_json()}"]
    if args.op == "partition":
        part = interval.uniform_partition(args.a, args.b, args.n)
        return part.to_json(), {}, 0, [_fmt(part.to_json())]
    if args.op == "refine":
        p = interval.Partition(tuple(map(float, _json_list(args.p))))
        q = interval.Partition(tuple(map(float, _json_list(args.q))))
        return interval.refine(p, q).to_json(), {}, 0, [_fmt(interval.refine(p, q).to_json())]
    if args.op == "shrink":
        lo_rule = expr.parse(args.lo_expr, var_name="n")
        hi_rule = expr.parse(args.hi_expr, var_name="n")
        seq = interval.NestedSequence(
            lambda k: interval.Interval(expr.evaluate(lo_rule, float(k)),
                                        expr.evaluate(hi_rule, float(k)))
        )
        value = interval.shrink_to_point(seq, max(cfg.tol, 1e-15), cfg.max_iter)
        return value, {}, 0, [_fmt(value)]
    raise ParseError(f"unknown interval op {args.op!r}", 0)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="default tolerance (1e-9)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for all randomized checks (0; FC_SEED overrides)")
    common.add_argument("--output", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--max-iter", type=int, default=argparse.SUPPRESS, dest="max_iter")

    top = argparse.ArgumentParser(prog="fc", parents=[common],
                                  description="constructive real-analysis toolkit")
    subs = top.add_subparsers(dest="command", required=True)

    def cmd(name, handler, **kwargs):
        p = subs.add_parser(name, parents=[common], **kwargs)
        p.set_defaults(handler=handler)
        return p

    p = cmd("parse", _h_parse, help="parse an expression and print it back")
    p.add_argument("--text", required=True)

    p = cmd("eval", _h_eval, help="evaluate an expression at a point")
    p.add_argument("--f", required=True)
    p.add_argument("--x", type=float, required=True)

    p = cmd("deriv", _h_deriv, help="symbolic or numeric derivative")
    p.add_argument("--f", required=True)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--at", type=float, default=None)

    p = cmd("limit", _h_limit, help="filter-base limit at a point")
    p.add_argument("--f", required=True)
    p.add_argument("--at", type=float, required=True)
    p.add_argument("--mode", choices=("left", "right", "two-sided"), default="two-sided")

    p = cmd("sup", _h_sup, help="supremum of a predicate set by bisection")
    p.add_argument("--member", required=True, help="comparison predicate, e.g. 'x*x < 2'")
    p.add_argument("--seed-point", type=float, required=True, dest="seed_point")
    p.add_argument("--bound", type=float, required=True)
    p.add_argument("--witnesses", type=int, default=0)

    p = cmd("cut", _h_cut, help="cut point of a downward-closed predicate")
    p.add_argument("--below", required=True)
    p.add_argument("--in-point", type=float, required=True, dest="in_point")
    p.add_argument("--out-point", type=float, required=True, dest="out_point")

    p = cmd("root", _h_root, help="intermediate-value root by bisection")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--k", type=float, default=0.0)

    p = cmd("extremum", _h_extremum, help="grid argmax with local refinement")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--refinements", type=int, default=3)

    for name, handler in (("rolle", _h_rolle), ("mvt", _h_mvt)):
        p = cmd(name, handler, help=f"{name} witness")
        p.add_argument("--f", required=True)
        p.add_argument("--a", type=float, required=True)
        p.add_argument("--b", type=float, required=True)

    p = cmd("emvt", _h_emvt, help="Cauchy mean-value witness")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)

    p = cmd("taylor", _h_taylor, help="Taylor value, normalized error and witness")
    p.add_argument("--f", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--at", type=float, required=True)
    p.add_argument("--x", type=float, required=True)

    p = cmd("polycheck", _h_polycheck, help="is f a polynomial of degree <= n")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=128)

    p = cmd("shape", _h_shape, help="convex / increasing / constant check")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--kind", choices=("convex", "increasing", "constant"), required=True)
    p.add_argument("--samples", type=int, default=64)

    p = cmd("cover-verify", _h_cover_verify, help="exact cover check")
    p.add_argument("--cover", required=True, help='JSON {"target":[a,b],"pieces":[[lo,hi],...]}')

    p = cmd("subcover", _h_subcover, help="greedy finite subcover")
    p.add_argument("--cover", required=True)

    p = cmd("lebesgue", _h_lebesgue, help="Lebesgue number of a verified cover")
    p.add_argument("--cover", required=True)
    p.add_argument("--mode", choices=("exact", "paper"), default="exact")
    p.add_argument("--sample", type=int, default=256)

    p = cmd("modulus", _h_modulus, help="uniform-continuity modulus")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--grid", type=int, default=256)

    p = cmd("stepapprox", _h_stepapprox, help="uniform step-function approximation")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--grid", type=int, default=256)

    p = cmd("stepint", _h_stepint, help="step-function integral and algebra")
    p.add_argument("--partition", required=True, help="JSON array of nodes")
    p.add_argument("--values", required=True, help="JSON array of cell values")
    p.add_argument("--reexpress", default=None, help="refined partition, JSON")
    p.add_argument("--split-at", type=float, default=None, dest="split_at")
    p.add_argument("--combine", choices=("add", "scale", "negate"), default=None)
    p.add_argument("--other-partition", default=None, dest="other_partition")
    p.add_argument("--other-values", default=None, dest="other_values")
    p.add_argument("--factor", type=float, default=None)

    p = cmd("darboux", _h_darboux, help="sampled Darboux bounds")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=8)

    p = cmd("riemann", _h_riemann, help="Riemann sum for a choice function")
    p.add_argument("--f", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--choice", choices=("left", "right", "midpoint", "random", "explicit"),
                   default="midpoint")
    p.add_argument("--points", default=None, help="explicit choice points, JSON")

    p = cmd("integrate", _h_integrate, help="certified Riemann integral")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--certificate", action="store_true")
    p.add_argument("--check-additivity-at", type=float, default=None,
                   dest="check_additivity_at")
    p.add_argument("--bounds", type=float, nargs=2, default=None, metavar=("LO", "HI"))

    p = cmd("ftc2", _h_ftc2, help="integral of F' equals F(b) - F(a)")
    p.add_argument("--F", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)

    p = cmd("imvt", _h_imvt, help="integral mean-value witness")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)

    p = cmd("adt", _h_adt, help="two antiderivatives differ by a constant")
    p.add_argument("--F", required=True)
    p.add_argument("--G", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--samples", type=int, default=128)

    p = cmd("graph", _h_graph, help="implication graph queries")
    gsubs = p.add_subparsers(dest="gcmd", required=True)
    gp = gsubs.add_parser("path")
    gp.add_argument("src")
    gp.add_argument("dst")
    gsubs.add_parser("scc")
    gsubs.add_parser("dot")

    p = cmd("affine", _h_affine, help="affine map between intervals, as an expression")
    p.add_argument("--from-a", type=float, required=True, dest="from_a")
    p.add_argument("--from-b", type=float, required=True, dest="from_b")
    p.add_argument("--to-a", type=float, required=True, dest="to_a")
    p.add_argument("--to-b", type=float, required=True, dest="to_b")

    p = cmd("pwl", _h_pwl, help="evaluate a piecewise-linear interpolant")
    p.add_argument("--nodes", required=True)
    p.add_argument("--values", required=True)
    p.add_argument("--x", type=float, required=True)

    p = cmd("seq", _h_seq, help="sequence diagnostics (expressions in n)")
    p.add_argument("--op", required=True,
                   choices=("monotone", "cauchy", "bound", "bw", "limit",
                            "diverge", "cauchy-limit"))
    p.add_argument("--s", required=True, help="expression in n")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--lo", type=int, default=1)
    p.add_argument("--hi", type=int, default=100)
    p.add_argument("--box", type=float, nargs=2, default=(0.0, 1.0))
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--budget", type=int, default=10**4)
    p.add_argument("--upper", type=float, default=None)
    p.add_argument("--count", type=int, default=5)

    p = cmd("ival", _h_ival, help="interval and partition helpers")
    p.add_argument("--op", required=True, choices=("bisect", "partition", "refine", "shrink"))
    p.add_argument("--interval", default="[0,1]")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--p", default="[0,1]")
    p.add_argument("--q", default="[0,1]")
    p.add_argument("--lo-expr", default="0", dest="lo_expr")
    p.add_argument("--hi-expr", default="1/n", dest="hi_expr")

    return top


def _emit(result, diagnostics, lines, cfg) -> None:
    if cfg.output == "json":
        payload = {"result": result, "diagnostics": diagnostics}
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = getattr(args, "seed", 0)
    if "FC_SEED" in os.environ:
        seed = int(os.environ["FC_SEED"])
    cfg = Config(
        tol=getattr(args, "tol", 1e-9),
        seed=seed,
        output=getattr(args, "output", "text"),
        max_iter=getattr(args, "max_iter", 10**6),
    )
    if cfg.tol <= 0:
        parser.error("--tol must be positive")
    try:
        result, diagnostics, code, lines = args.handler(args, cfg)
    except ParseError as e:
        if cfg.output == "json":
            print(json.dumps({"result": None, "diagnostics": {"error": str(e)}},
                             sort_keys=True))
        else:
            print(f"parse error: {e}", file=sys.stderr)
        return 2
    except MathError as e:
        if cfg.output == "json":
            print(json.dumps({"result": None, "diagnostics": {"error": str(e)}},
                             sort_keys=True))
        else:
            print(f"error: {e}", file=sys.stderr)
        return 1
    _emit(result, diagnostics, lines, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
