"""Command-line interface: ``infometric <command> ...``.

Every command prints a short human-readable report; ``--json`` prints the
same report as a JSON document instead.  Exit status is 0 on success, 1 when
the input fails validation, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import io
from .boolean import ExprSyntaxError, TooManyAtoms, parse_bool_expr, shannon_dnf, zeta, zeta_by_terms
from .closures import InstanceTooLarge, delta_closure, nabla_closure, tiha
from .fixpoint import NotConverged, descent_violations, ideal_length, is_fixed_point, sigma_variant_bounds
from .homs import (CategoryError, Mismatch, NotClosed, NotJoinPreserving, TooLarge, banach_mazur,
                   ell_prime, hom_ideal_length, product_flags, product_violations)
from .inequalities import check_inequalities, check_table
from .instances import random_instance, random_nonmonotone_length, random_monoid
from .lengths import BadP, LengthError, TableError, d_of, distance_table, sigma_of
from .monoid import MonoidError, MonoidTooLarge, TooManyGenerators, UnknownElement
from .numeric import TOL, render
from .quotient import NoNablaInequality, NotPseudometric, quotient
from .setmodel import (NegativeWeight, UnknownSet, UnsupportedComplement, oracle_d, oracle_sigma,
                       oracle_zeta, random_set_instance)

VALIDATION_ERRORS = (io.FormatError, MonoidError, LengthError, TableError, UnknownElement,
                     MonoidTooLarge, TooManyGenerators, BadP, ExprSyntaxError, TooManyAtoms,
                     NotPseudometric, NoNablaInequality, NegativeWeight, UnknownSet,
                     UnsupportedComplement, NotJoinPreserving, Mismatch, NotClosed, TooLarge,
                     CategoryError, InstanceTooLarge, NotConverged, FileNotFoundError)


class Usage(Exception):
    pass


class Report:
    """Collects a JSON-able report and the matching text lines."""

    def __init__(self, command, as_float=False):
        self.data = {"command": command}
        self.lines = []
        self.as_float = as_float

    def num(self, v):
        return render(v, self.as_float)

    def table(self, labels, values):
        return {"labels": list(labels),
                "rows": [[self.num(v) for v in row] for row in np.asarray(values, dtype=object)]}

    def add_table(self, key, title, labels, values):
        t = self.table(labels, values)
        self.data[key] = t
        self.lines.append(f"{title}:")
        self.lines.extend(format_table(t))

    def flag(self, key, flag):
        self.data[key] = {"holds": flag.holds, "witness": list(flag.witness) if flag.witness else None}
        text = "n/a" if flag.holds is None else str(flag.holds).lower()
        if flag.witness:
            text += f" (witness {', '.join(flag.witness)})"
        self.lines.append(f"{key}={text}")

    def emit(self, as_json, out):
        if as_json:
            out.write(json.dumps(self.data, indent=2) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")


def format_table(t):
    labels = t["labels"]
    rows = [[""] + labels] + [[lab] + row for lab, row in zip(labels, t["rows"])]
    widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
    return ["  " + "  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]


def _rational(text):
    if text in ("inf", "infinity"):
        return math.inf
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _p_value(text):
    p = _rational(text)
    if p < 1:
        raise argparse.ArgumentTypeError("p must be at least 1")
    return p


# -- per-row work for --jobs -------------------------------------------------------

def _distance_row(args):
    length, kind, p, i = args
    m = length.monoid
    x = m.elements[i]
    if kind == "d":
        return [d_of(length, x, y) for y in m.elements]
    return [sigma_of(length, x, y, p) for y in m.elements]


def _oracle_row(args):
    inst, i = args
    x = inst.monoid.elements[i]
    return [(oracle_d(inst, x, y), oracle_sigma(inst, x, y)) for y in inst.monoid.elements]


def _rows(fn, items, jobs):
    """``map`` in input order, across ``jobs`` processes when ``jobs > 1``."""
    if jobs <= 1:
        return [fn(a) for a in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- commands ------------------------------------------------------------------------

def _need_length(inst):
    if inst.length is None:
        raise io.FormatError("this command needs an instance with a length function")
    return inst.length


def _table_for(length, variant, p):
    if variant == "sigma":
        return distance_table(length, "sigma", p)
    if variant == "nonmono":
        return distance_table(length.with_mode("nonmonotone"), "d")
    return distance_table(length, "d")


def cmd_validate(args, rep):
    inst = io.load_instance(args.instance)
    m = inst.monoid
    rep.data.update(elements=list(m.elements), neutral=m.neutral, size=len(m))
    if inst.length is None:
        rep.data["length"] = None
        rep.lines.append("monoid OK, no length function")
    else:
        rep.data["length"] = {e: rep.num(v) for e, v in zip(m.elements, inst.length.values)}
        rep.data["mode"] = inst.length.mode
        rep.lines.append(f"monoid OK, length OK ({inst.length.mode})")
    return 0


def cmd_distances(args, rep):
    inst = io.load_instance(args.instance)
    length = _need_length(inst)
    if args.variant == "nonmono":
        length = length.with_mode("nonmonotone")
    kind = "sigma" if args.variant == "sigma" else "d"
    m = length.monoid
    rows = _rows(_distance_row, [(length, kind, args.p, i) for i in range(len(m))], args.jobs)
    rep.data.update(variant=args.variant, p=rep.num(args.p))
    rep.add_table("table", f"{kind} table", m.elements, rows)
    return 0


def cmd_check(args, rep):
    inst = io.load_instance(args.instance)
    length = _need_length(inst)
    r = check_inequalities(length, seed=args.seed or 0)
    rep.data["mode"] = r.mode
    rep.data["sampled"] = r.sampled
    rep.flag("delta_holds", r.d.delta)
    rep.flag("nabla_holds", r.d.nabla)
    for key, flag in r.summary().items():
        rep.flag(key, flag)
    if r.mode == "monotone":
        flags = r.equivalent_flags()
        rep.data["equivalent"] = {k: f.holds for k, f in flags.items()}
        agree = len({f.holds for f in flags.values()}) == 1
        rep.data["equivalent_agree"] = agree
        rep.lines.append("equivalent flags a-f: "
                         + " ".join(f"{k}={str(f.holds).lower()}" for k, f in flags.items())
                         + ("" if agree else "  (DISAGREE)"))
    return 0


def cmd_close(args, rep):
    inst = io.load_instance(args.instance)
    length = _need_length(inst)
    m = length.monoid
    t = _table_for(length, args.variant, args.p)
    rep.data["variant"] = args.variant
    rep.add_table("table", "input table", m.elements, t.values)
    rep.add_table("delta_closure", "chain closure", m.elements, delta_closure(t).values)
    rep.add_table("nabla_closure", "join closure", m.elements, nabla_closure(m, t).values)
    closed = tiha(m, t)
    rep.add_table("tiha", "join closure, then chain closure", m.elements, closed.values)
    r = check_table(closed)
    rep.flag("closed_delta", r.delta)
    rep.flag("closed_nabla", r.nabla)
    return 0


def cmd_fixpoint(args, rep):
    inst = io.load_instance(args.instance)
    length = _need_length(inst)
    if args.variant == "nonmono":
        length = length.with_mode("nonmonotone")
    res = ideal_length(length, args.variant, tol=args.tol, max_iter=args.max_iter)
    m = length.monoid
    rep.data.update(variant=args.variant, iterations=res.trace.iterations,
                    converged=res.trace.converged,
                    length={e: rep.num(v) for e, v in zip(m.elements, res.length.values)},
                    ratio_min=None if res.ratio_min is None else rep.num(res.ratio_min),
                    ratio_mean=None if res.ratio_mean is None else rep.num(res.ratio_mean))
    rep.lines.append(f"variant {args.variant}: converged after {res.trace.iterations} iteration(s)")
    rep.lines.append("ideal length: " + ", ".join(f"{e}={rep.num(v)}"
                                                   for e, v in zip(m.elements, res.length.values)))
    rep.add_table("table", "final table", m.elements, res.table.values)
    r = check_table(res.table)
    for key in ("delta", "second_delta", "nabla", "weak_nabla", "very_weak_nabla"):
        rep.flag(f"final_{key}", getattr(r, key))
    descent = descent_violations(res.trace)
    rep.data["descent_violations"] = len(descent)
    rep.lines.append(f"descent violations: {len(descent)}")
    if args.variant == "sigma":
        b = sigma_variant_bounds(res.trace)
        rep.data["sigma_bounds_hold"] = b.holds
        rep.lines.append(f"sigma bounds hold: {str(b.holds).lower()}")
    if res.ratio_min is not None:
        rep.lines.append(f"degeneracy ratios: min {rep.num(res.ratio_min)}, mean {rep.num(res.ratio_mean)}")
    if length.mode == "monotone":
        fp = is_fixed_point(length)
        rep.data["input_is_fixed_point"] = fp.holds
        rep.lines.append(f"input is a fixed point: {str(fp.holds).lower()}")
    return 0


def cmd_zeta(args, rep):
    if not args.expr:
        raise Usage("zeta needs --expr")
    inst = io.load_instance(args.instance)
    length = _need_length(inst)
    expr = parse_bool_expr(args.expr, length.monoid)
    value = zeta(length, expr)
    second = zeta_by_terms(length, expr)
    rep.data.update(expr=str(expr), zeta=rep.num(value), disjoint_terms=len(shannon_dnf(expr).terms),
                    routes_agree=bool(value == second if not isinstance(value, float)
                                      else abs(value - second) <= TOL))
    rep.lines.append(f"zeta({expr}) = {rep.num(value)}")
    if not rep.data["routes_agree"]:
        rep.lines.append(f"WARNING: term-by-term evaluation gives {rep.num(second)}")
    return 0


def cmd_quotient(args, rep):
    inst = io.load_instance(args.instance)
    length = _need_length(inst)
    if args.ideal:
        variant = "d" if args.variant == "nonmono" and length.mode == "monotone" else args.variant
        t = ideal_length(length, variant, tol=args.tol, max_iter=args.max_iter).table
        rep.lines.append(f"quotient of the ideal table ({variant} variant)")
    else:
        t = _table_for(length, args.variant, args.p)
    q = quotient(length.monoid, t)
    rep.data["classes"] = [list(c) for c in q.classes]
    rep.data["trivial"] = q.is_trivial
    rep.lines.append(f"{len(q.classes)} class(es):")
    rep.lines.extend("  " + " ~ ".join(c) for c in q.classes)
    rep.add_table("metric", "quotient metric", q.quotient.elements, q.metric.values)
    rep.data["induced_length"] = {e: rep.num(v) for e, v in
                                  zip(q.quotient.elements, q.induced_length.values)}
    rep.data["induced_mode"] = q.induced_length.mode
    return 0


def _category_lengths(cat):
    """Hom-set lengths of the file, or else raw operator lengths (may be inf)."""
    if cat.lengths is not None:
        return cat.lengths, "declared"
    if len(cat.object_tables) == len(cat.names):
        out = {}
        for key, hs in cat.homsets.items():
            a, b = key
            out[key] = [ell_prime(h, cat.object_tables[a], cat.object_tables[b]) for h in hs]
        return out, "operator"
    raise io.FormatError("the category has neither hom-set lengths nor object lengths")


def cmd_hom(args, rep):
    cat = io.load_category(args.category)
    rep.data["objects"] = {a: len(m) for a, m in cat.objects.items()}
    rep.data["homsets"] = {f"{a}->{b}": len(hs) for (a, b), hs in cat.homsets.items()}
    rep.lines.append("hom sets: " + ", ".join(f"{a}->{b}: {len(hs)}"
                                             for (a, b), hs in cat.homsets.items()))
    problems = cat.validate()
    rep.data["structure_ok"] = not problems
    rep.lines.append(f"category structure OK: {str(not problems).lower()}")
    if problems:
        return 1
    if len(cat.object_tables) == len(cat.names):
        worst = 0
        for a in cat.names:
            for b in cat.names:
                for c in cat.names:
                    ls = [ell_prime(h, cat.object_tables[b], cat.object_tables[c])
                          for h in cat.homsets[(b, c)]]
                    rs = [ell_prime(h, cat.object_tables[a], cat.object_tables[b])
                          for h in cat.homsets[(a, b)]]
                    out = [ell_prime(h, cat.object_tables[a], cat.object_tables[c])
                           for h in cat.homsets[(a, c)]]
                    C = cat.comp[(a, b, c)]
                    for i, li in enumerate(ls):
                        for j, rj in enumerate(rs):
                            if li * rj < out[C[i, j]]:
                                worst += 1
        rep.data["operator_submultiplicative"] = worst == 0
        rep.lines.append(f"operator lengths submultiplicative: {str(worst == 0).lower()}")
    if cat.lengths is None:
        return 0
    d_ok, s_ok = product_flags(cat)
    rep.data.update(product_d=d_ok, product_sigma=s_ok)
    rep.lines.append(f"product inequality: d={str(d_ok).lower()} sigma={str(s_ok).lower()}")
    res = hom_ideal_length(cat, tol=args.tol, max_iter=args.max_iter)
    left = product_violations(cat, res.lengths, res.tables)
    rep.data.update(ideal_iterations=res.iterations, ideal_product_violations=len(left))
    rep.lines.append(f"ideal hom lengths after {res.iterations} iteration(s); "
                     f"product violations: {len(left)}")
    for (a, b), vals in res.lengths.items():
        rep.data.setdefault("ideal_lengths", {})[f"{a}->{b}"] = {
            h.label: rep.num(v) for h, v in zip(cat.homsets[(a, b)], vals)}
    return 0


def cmd_banach_mazur(args, rep):
    cat = io.load_category(args.category)
    for name in (args.a, args.b):
        if name not in cat.objects:
            raise Usage(f"unknown object {name!r}")
    lengths, source = _category_lengths(cat)
    bm = banach_mazur(cat, args.a, args.b, lengths)
    value = bm.value
    rep.data.update(lengths=source, value=render(value) if math.isinf(value) else repr(value),
                    product=None if bm.product is None else rep.num(bm.product),
                    witness=None if bm.witness is None else bm.witness.label)
    text = render(value) if math.isinf(value) else f"{value:.12g}"
    extra = "" if bm.witness is None else f" via {bm.witness.label}, product {rep.num(bm.product)}"
    rep.lines.append(f"banach-mazur({args.a}, {args.b}) = {text} ({source} lengths){extra}")
    return 0


def cmd_random(args, rep):
    if args.seed is None:
        raise Usage("random needs --seed")
    if args.kind == "set":
        inst = random_set_instance(args.seed, max_points=min(args.max_elements, 6))
        doc = {"join": {"sets": [sorted(s) for s in inst.family if s],
                        "weights": {str(p): render(w) for p, w in inst.weights.items()}}}
    elif args.kind == "nonmonotone":
        m = random_monoid(np.random.default_rng(args.seed), 3, args.max_elements)
        doc = io.serialize_instance(m, random_nonmonotone_length(m, args.seed))
    else:
        m, length = random_instance(args.seed, args.max_elements)
        doc = io.serialize_instance(m, length)
    rep.data["instance"] = doc
    rep.lines.append(json.dumps(doc, indent=2))
    return 0


def cmd_oracle(args, rep):
    inst = io.load_instance(args.instance)
    if inst.set_instance is None:
        raise io.FormatError("oracle needs a set-model instance (a 'sets' block)")
    s = inst.set_instance
    m = s.monoid
    rows = _rows(_oracle_row, [(s, i) for i in range(len(m))], args.jobs)
    od = [[a for a, _ in row] for row in rows]
    os_ = [[b for _, b in row] for row in rows]
    dt = distance_table(s.length, "d").values
    st = distance_table(s.length, "sigma").values
    d_ok = bool(np.all(dt == np.asarray(od, dtype=object)))
    s_ok = bool(np.all(st == np.asarray(os_, dtype=object)))
    rep.data.update(d_matches=d_ok, sigma_matches=s_ok)
    rep.lines.append(f"d matches set differences: {str(d_ok).lower()}")
    rep.lines.append(f"sigma matches set differences: {str(s_ok).lower()}")
    ok = d_ok and s_ok
    if args.expr:
        expr = parse_bool_expr(args.expr, m)
        a, b = zeta(s.length, expr), oracle_zeta(s, expr)
        rep.data.update(expr=str(expr), zeta=rep.num(a), oracle_zeta=rep.num(b), zeta_matches=a == b)
        rep.lines.append(f"zeta({expr}) = {rep.num(a)}, measure of realized set = {rep.num(b)}")
        ok = ok and a == b
    return 0 if ok else 1


COMMANDS = {
    "validate": (cmd_validate, "parse and validate an instance"),
    "distances": (cmd_distances, "d or sigma table of an instance"),
    "check": (cmd_check, "triangle, join and monotonicity flags"),
    "close": (cmd_close, "chain and join closures of the distance table"),
    "fixpoint": (cmd_fixpoint, "iterate to the ideal length function"),
    "zeta": (cmd_zeta, "signed measure of a Boolean expression"),
    "quotient": (cmd_quotient, "identify elements at distance zero"),
    "hom": (cmd_hom, "hom-set report for a category file"),
    "banach-mazur": (cmd_banach_mazur, "distance between two objects of a category"),
    "random": (cmd_random, "print a seeded random instance"),
    "oracle": (cmd_oracle, "compare a set-model instance with its closed forms"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--variant", choices=("d", "sigma", "nonmono"), default="d")
    common.add_argument("--p", type=_p_value, default=Fraction(1), help="exponent for sigma (rational >= 1 or inf)")
    common.add_argument("--tol", type=_rational, default=Fraction(1, 10**9),
                        help="stopping tolerance for float input")
    common.add_argument("--max-iter", type=int, default=10000)
    common.add_argument("--expr", help="Boolean expression over element labels")
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for per-row work")
    common.add_argument("--float", dest="as_float", action="store_true", help="print decimals")
    common.add_argument("--json", action="store_true", help="print the report as JSON")

    parser = argparse.ArgumentParser(prog="infometric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("hom", "banach-mazur"):
            p.add_argument("category", help="category file (JSON)")
            if name == "banach-mazur":
                p.add_argument("a")
                p.add_argument("b")
        elif name == "random":
            p.add_argument("--kind", choices=("monotone", "nonmonotone", "set"), default="monotone")
            p.add_argument("--max-elements", type=int, default=8)
        else:
            p.add_argument("instance", help="builtin name (fix_p2, fix_bad) or instance file (JSON)")
        if name == "quotient":
            p.add_argument("--ideal", action="store_true",
                           help="quotient the ideal table instead of the raw one")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        err.write("infometric: --jobs must be positive\n")
        return 2
    if isinstance(args.tol, Fraction):
        args.tol = float(args.tol)
    rep = Report(args.command, args.as_float)
    fn = COMMANDS[args.command][0]
    try:
        code = fn(args, rep)
    except Usage as exc:
        parser.print_usage(err)
        err.write(f"infometric: {exc}\n")
        return 2
    except VALIDATION_ERRORS as exc:
        rep.data["error"] = {"type": type(exc).__name__, "message": str(exc)}
        rep.lines.append(f"error: {type(exc).__name__}: {exc}")
        rep.emit(args.json, out)
        return 1
    rep.data["exit"] = code
    rep.emit(args.json, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
