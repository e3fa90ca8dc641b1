"""``graev`` command line.

Exit codes: 0 success, 1 a self-test failed, 2 unparsable input, 3 invalid
input, 4 a search bound was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .dot import forest_to_dot, match_to_dot
from .forest import (EvaluationForest, build_maximal_forest, check_forest, check_maximal,
                     enumerate_maximal_forests)
from .fpairs import check_pair, is_reduced_pair, make_pair, to_reduced_pair
from .free import graev_norm_free_witness, inverse_word, word_names
from .metrics import validate_biinvariance
from .report import BoundError, ValidationError, ValidationReport
from .scaled import graev_norm_scaled, scaled_match_norm
from .spaces import validate_space

EXIT_FAIL, EXIT_PARSE, EXIT_INVALID, EXIT_BOUND = 1, 2, 3, 4


def _emit(obj, out) -> None:
    out.write(io.dump(obj) + "\n")


def _report_json(rep: ValidationReport) -> dict:
    return {"ok": rep.ok,
            "violations": [{"rule": v.rule, "witness": io.to_jsonable(v.witness), "detail": v.detail}
                           for v in rep]}


def _kind(data: dict) -> str:
    if "factors" in data:
        return "setup"
    if "points" in data:
        return "space"
    if "K" in data:
        return "hnn"
    if "group" in data:
        return "metric"
    raise io.FormatError("cannot tell what kind of file this is")


def _write_text(path: str, text: str, out) -> None:
    if path == "-":
        out.write(text)
    else:
        Path(path).write_text(text)


# -- commands -------------------------------------------------------------------

def cmd_validate(args, out) -> int:
    data = io.load_json(args.input)
    kind = args.kind or _kind(data)
    if kind == "space":
        rep = validate_space(io.read_raw_space(data))
        if rep.ok and "scale" in data:
            rep = io.read_scaled(data).validate()
    elif kind == "metric":
        m = io.read_metric(data)
        rep = ValidationReport("metric")
        for v in validate_space_of_metric(m):
            rep.add(v.rule, v.witness, v.detail)
        rep.extend(validate_biinvariance(m))
    elif kind == "setup":
        try:
            io.read_setup(data)
            rep = ValidationReport("amalgam setup")
        except ValidationError as exc:
            rep = ValidationReport("amalgam setup")
            rep.add("setup", exc.witness, str(exc))
    elif kind == "hnn":
        try:
            io.read_hnn(data)
            rep = ValidationReport("HNN data")
        except ValidationError as exc:
            rep = ValidationReport("HNN data")
            rep.add("hnn", exc.witness, str(exc))
    else:
        raise io.FormatError(f"unknown kind {kind!r}")
    _emit({"kind": kind, **_report_json(rep)}, out)
    return 0 if rep.ok else EXIT_INVALID


def validate_space_of_metric(m):
    from .spaces import FiniteSpace
    g = m.group
    return validate_space(FiniteSpace(tuple(g.labels), tuple(tuple(r) for r in m.table()), "ultrametric"))


def _free_norm(space_data, word, args):
    ss = io.read_scaled(space_data)
    space = ss.space
    w = io.read_free_word(word, space)
    if ss.scale.is_identity:
        value, red, theta = graev_norm_free_witness(w, space, args.mode)
        result = {"norm": value, "reduced": word_names(red, space), "match": list(theta)}
        labels = word_names(red, space)
    else:
        sn = graev_norm_scaled(w, ss, args.mode, args.length_bound)
        if scaled_match_norm(sn.word, sn.match, ss, args.mode) != sn.value:
            raise AssertionError("emitted witness does not re-evaluate to the norm")
        result = {"norm": sn.value, "word": word_names(sn.word, space), "match": list(sn.match),
                  "length_bound": sn.bound, "exact": sn.exact}
        labels = word_names(sn.word, space)
        theta = sn.match
    return result, match_to_dot(labels, theta)


def _product_norm(setup_data, word, args):
    from .product import product_norm, product_norm_dp
    setup = io.read_setup(setup_data)
    f = setup.evaluate(io.read_pword(word, setup))
    fn = product_norm if args.method == "brute" else product_norm_dp
    res = fn(setup, f)
    if check_pair(setup, res.pair) or res.pair.target != f or setup.rho(res.pair.alpha, res.pair.zeta) != res.value:
        raise AssertionError("emitted witness does not re-validate")
    result = {"norm": res.value, "element": setup.label(f),
              "alpha": io.write_pword(res.pair.alpha, setup), "zeta": io.write_pword(res.pair.zeta, setup)}
    return result, None


def cmd_norm(args, out) -> int:
    data = io.load_json(args.setup)
    word = io.word_source(args.word)
    if _kind(data) == "space":
        result, dot = _free_norm(data, word, args)
    else:
        result, dot = _product_norm(data, word, args)
    if args.emit_dot and dot is not None:
        _write_text(args.emit_dot, dot, out)
    if args.bare:
        out.write(io.format_rational(result["norm"]) + "\n")
    else:
        _emit(result, out)
    return 0


def cmd_dist(args, out) -> int:
    data = io.load_json(args.setup)
    w1, w2 = io.word_source(args.word), io.word_source(args.other)
    if _kind(data) == "space":
        ss = io.read_scaled(data)
        a, b = io.read_free_word(w1, ss.space), io.read_free_word(w2, ss.space)
        if ss.scale.is_identity:
            value = graev_norm_free_witness(inverse_word(a, ss.space) + b, ss.space, args.mode)[0]
        else:
            value = graev_norm_scaled(inverse_word(a, ss.space) + b, ss, args.mode, args.length_bound).value
    else:
        from .product import product_dist
        setup = io.read_setup(data)
        f1 = setup.evaluate(io.read_pword(w1, setup))
        f2 = setup.evaluate(io.read_pword(w2, setup))
        value = product_dist(setup, f1, f2)
    if args.bare:
        out.write(io.format_rational(value) + "\n")
    else:
        _emit({"dist": value}, out)
    return 0


def cmd_forest(args, out) -> int:
    setup = io.read_setup(io.load_json(args.setup))
    zeta = io.read_pword(io.word_source(args.word), setup)
    labels = [setup.letter_label(x) for x in zeta]
    if args.check:
        forest = EvaluationForest.from_json(io.load_json(args.check))
        rep = check_forest(setup, zeta, forest)
        rep.extend(check_maximal(setup, zeta, forest))
        _emit({"forest": forest.describe(), **_report_json(rep)}, out)
        return 0 if rep.ok else EXIT_INVALID
    if args.enumerate:
        try:
            forests = enumerate_maximal_forests(setup, zeta, args.limit)
        except OverflowError as exc:
            raise BoundError(str(exc)) from exc
    else:
        forests = [build_maximal_forest(setup, zeta)]
    for f in forests:
        if not (check_forest(setup, zeta, f).ok and check_maximal(setup, zeta, f).ok):
            raise AssertionError(f"emitted forest {f.describe()} fails its checks")
    if args.emit_dot:
        text = "".join(forest_to_dot(f, labels, f"forest{k}") for k, f in enumerate(forests))
        _write_text(args.emit_dot, text, out)
        if args.emit_dot == "-":
            return 0
    _emit({"count": len(forests),
           "forests": [{"describe": f.describe(), **f.to_json()} for f in forests]}, out)
    return 0


def cmd_reduce_trace(args, out) -> int:
    setup = io.read_setup(io.load_json(args.setup))
    alpha = io.read_pword(io.word_source(args.alpha), setup)
    zeta = io.read_pword(io.word_source(args.zeta), setup)
    p = make_pair(setup, alpha, zeta)
    trace: list = []
    q = to_reduced_pair(setup, p, trace)
    for k, step in enumerate(trace):
        line = {"step": k, "op": step.op, "detail": io.to_jsonable(step.detail), "rho": step.rho,
                "alpha": [setup.letter_label(x) for x in step.pair.alpha],
                "zeta": [setup.letter_label(x) for x in step.pair.zeta]}
        out.write(json.dumps(io.to_jsonable(line), sort_keys=True) + "\n")
    if check_pair(setup, q) or not is_reduced_pair(setup, q):
        raise AssertionError("the final pair is not reduced")
    out.write(json.dumps({"reduced": True, "rho": io.format_rational(setup.rho(q.alpha, q.zeta))},
                         sort_keys=True) + "\n")
    return 0


def cmd_hnn(args, out) -> int:
    from .hnn import check_subgroup_metric_agreement, restriction_violations, stable_letter_norm
    data = io.load_json(args.input)
    if args.phi is not None:
        data = {**data, "phi": json.loads(args.phi)}
    if args.k is not None:
        data = {**data, "K": args.k}
    hnn = io.read_hnn(data)
    stable = stable_letter_norm(hnn, args.length)
    bad = restriction_violations(hnn)
    agree, compared = check_subgroup_metric_agreement(hnn, args.length)
    _emit({"K": hnn.k, "stable_letter_norm": stable.value, "certified": stable.value == stable.lower_bound,
           "witness": list(stable.witness), "restriction_violations": io.to_jsonable(bad),
           "agreement": {"compared": compared, **_report_json(agree)}}, out)
    return 0


def cmd_selftest(args, out) -> int:
    from .acceptance import run_all
    results = run_all(quick=args.quick)
    for r in results:
        out.write(f"{'PASS' if r.passed else 'FAIL'} {r.number:2d} {r.name}: {r.detail} ({r.seconds:.1f}s)\n")
    return 0 if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graev", description="Exact Graev norms on free groups and products.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a space, metric, amalgam setup or HNN file")
    p.add_argument("input")
    p.add_argument("--kind", choices=["space", "metric", "setup", "hnn"])
    p.set_defaults(func=cmd_validate)

    def word_opts(p):
        p.add_argument("--setup", required=True, help="space or amalgam setup JSON")
        p.add_argument("--word", required=True, help="word JSON file, or inline tokens")
        p.add_argument("--mode", choices=["ultrametric", "metric"])
        p.add_argument("--length-bound", type=int, help="word length bound for scaled norms")
        p.add_argument("--method", choices=["dp", "brute"], default="dp")
        p.add_argument("--bare", action="store_true", help="print only the value")

    p = sub.add_parser("norm", help="Graev norm of a word")
    word_opts(p)
    p.add_argument("--emit-dot", metavar="PATH", help="arc diagram of the optimal match ('-' for stdout)")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("dist", help="Graev distance between two words")
    word_opts(p)
    p.add_argument("--other", required=True, help="second word")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("forest", help="maximal evaluation forests of a word that evaluates into A")
    p.add_argument("--setup", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--enumerate", action="store_true", help="all maximal forests instead of one")
    p.add_argument("--limit", type=int, default=100000, help="search budget for --enumerate")
    p.add_argument("--check", metavar="FOREST_JSON", help="check a given forest instead")
    p.add_argument("--emit-dot", metavar="PATH")
    p.set_defaults(func=cmd_forest)

    p = sub.add_parser("reduce-trace", help="reduce an f-pair, one JSON line per step")
    p.add_argument("--setup", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--zeta", required=True)
    p.set_defaults(func=cmd_reduce_trace)

    p = sub.add_parser("hnn", help="stable letter norm and restriction checks for an HNN extension")
    p.add_argument("input")
    p.add_argument("--phi", help='JSON pairs overriding the file, e.g. \'[["(123)", "(132)"]]\'')
    p.add_argument("-K", "--k", help="override K")
    p.add_argument("--length", type=int, default=1, help="generator count bound for the searches")
    p.set_defaults(func=cmd_hnn)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--quick", action="store_true", help="skip the slowest scans")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except io.FormatError as exc:
        print(f"graev: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"graev: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BoundError as exc:
        print(f"graev: bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
