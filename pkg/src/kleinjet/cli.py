"""Command-line front end.  Exit codes: 0 pass, 1 check failed, 2 bad input, 3 degenerate samples."""

import argparse
import hashlib
import json
import os
import random
import sys

from . import __version__
from .exact import Subspace
from .finitetype import (NoRelationFound, OdeRelation,
                         SampleDegeneracyError, builtin_action, derive_ode_linear,
                         schwarzian_spot_checks, verify_lie_first_theorem,
                         verify_schwarzian_symbolic)
from .klein import (BUILTINS, ChartError, builtin, push_ad_crosscheck, adk_group, geometric_order,
                    verify_diagrams, verify_theta_kernels, verify_splitting)
from .liealg import (JacobiError, NotSubalgebraError,
                     check_prolongation_inequality, descending_filtration)
from .parabolic import parabolic_report
from .serialize import (FormatError, algebra_from_json, ode_to_json, realization_from_json,
                        subspace_from_json, subspace_to_json)

SUITES = ("lemma4", "diagrams", "schwarzian", "lie1", "prolongation", "group", "all")


class UsageError(Exception):
    pass


def _load_json(text_or_path):
    if os.path.exists(text_or_path):
        with open(text_or_path) as fh:
            text = fh.read()
    else:
        text = text_or_path
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError("malformed JSON in %s: %s" % (text_or_path[:60], e)) from e


def _digest(obj):
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _report(command, inputs, results, seed=None):
    return {"command": command, "inputs_digest": _digest(inputs), "inputs": inputs,
            "results": results, "seed": seed, "version": __version__}


def _emit(report, out, summary):
    print(summary)
    if out:
        with open(out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")


def cmd_order(args):
    if not args.input:
        raise UsageError("order needs --input")
    data = _load_json(args.input)
    g = algebra_from_json(data)
    if args.g0 is None:
        g0 = Subspace(g.dim)
    else:
        g0 = subspace_from_json(_load_json(args.g0), g.dim)
    filt = descending_filtration(g, g0)
    result = {"filtration_dims": filt.dims(),
              "members": [subspace_to_json(s) for s in filt.members]}
    if filt.almost_effective:
        result["order"] = filt.order
        line = "filtration dims %s; infinitesimal order m = %d" % (filt.dims(), filt.order)
    else:
        result["order"] = None
        result["not_almost_effective"] = {"stable_dim": filt.stabilized_value_dim}
        line = "filtration dims %s; NotAlmostEffective(stable_dim=%d)" % (
            filt.dims(), filt.stabilized_value_dim)
    inputs = {"algebra": data, "g0": subspace_to_json(g0)}
    _emit(_report("order", inputs, result), args.out, line)
    return 0


def cmd_parabolic(args):
    if args.n is None or args.d is None:
        raise UsageError("parabolic needs --n and --d")
    if args.n < 2 or not 1 <= args.d <= args.n // 2:
        raise UsageError("need n >= 2 and 1 <= d <= floor(n/2), got n=%d d=%d" % (args.n, args.d))
    rep = parabolic_report(args.n, args.d)
    line = "n=%d d=%d filtration dims %s order %s: %s" % (
        args.n, args.d, rep["filtration_dims"], rep["order"],
        "PASS" if rep["pass"] else "FAIL %s" % (rep["mismatch"],))
    _emit(_report("parabolic", {"n": args.n, "d": args.d}, rep), args.out, line)
    return 0 if rep["pass"] else 1


def _realization(spec):
    if spec in BUILTINS:
        return builtin(spec)
    if os.path.exists(spec):
        return realization_from_json(_load_json(spec))
    raise UsageError("unknown realization %r (built-ins: %s)" % (spec, ", ".join(BUILTINS)))


def _group_suite(r, seed, samples=20):
    rng = random.Random(seed)
    grp = r.group
    m = r.m
    cross = []
    for _ in range(samples):
        g = grp.sample_G(rng)
        try:
            res = all(push_ad_crosscheck(r, g, k)["pass"] for k in range(m + 1))
        except ChartError:  # g moves o into the chart's singular locus
            continue
        cross.append(res)
    adk = []
    for _ in range(samples):
        g0 = grp.sample_G0(rng)
        for k in range(m + 1):
            adk_group(r, g0, k)
        adk.append(True)
    geo = geometric_order(r)
    split = verify_splitting(r, grp.sample_G0(rng), geo["M"], 1, trials=10, seed=seed)
    return {"crosscheck_samples": len(cross), "crosscheck_pass": all(cross),
            "adk_samples": len(adk), "m": geo["m"], "M": geo["M"],
            "splitting": split,
            "pass": all(cross) and split["pass"]}


def cmd_verify(args):
    suite = args.suite
    if suite not in SUITES:
        raise UsageError("unknown suite %r; choose from %s" % (suite, ", ".join(SUITES)))
    run = SUITES[:-1] if suite == "all" else (suite,)
    r = None
    if any(s in ("lemma4", "diagrams", "prolongation", "group") for s in run):
        r = _realization(args.realization or "mobius")
    results = {}
    for s in run:
        if s == "lemma4":
            results[s] = verify_theta_kernels(r)
        elif s == "diagrams":
            reps = [verify_diagrams(r, k) for k in range((r.m or 0) + 1)]
            results[s] = {"levels": reps, "pass": all(x["pass"] for x in reps)}
        elif s == "schwarzian":
            sym = verify_schwarzian_symbolic()
            spot = schwarzian_spot_checks(50, args.seed)
            results[s] = {"symbolic": sym, "spot_checks": spot,
                          "pass": sym["pass"] and spot["pass"]}
        elif s == "lie1":
            reps = {name: verify_lie_first_theorem(builtin_action(name), 25, args.seed)
                    for name in ("translations1d", "translations2d", "affine_group")}
            results[s] = {"actions": reps, "pass": all(x["pass"] for x in reps.values())}
        elif s == "prolongation":
            rep = check_prolongation_inequality(r.algebra, r.g0, args.cap or 6)
            rep["pass"] = rep["holds"]
            results[s] = rep
        elif s == "group":
            if r.group is None:
                results[s] = {"skipped": "no group-level data", "pass": True}
            else:
                results[s] = _group_suite(r, args.seed)
    ok = all(v["pass"] for v in results.values())
    inputs = {"suite": suite, "realization": r.name if r is not None else None}
    lines = ["%-12s %s" % (k, "PASS" if v["pass"] else "FAIL") for k, v in results.items()]
    _emit(_report("verify", inputs, results, args.seed), args.out, "\n".join(lines))
    return 0 if ok else 1


def cmd_derive(args):
    name = args.action or args.realization
    if not name:
        raise UsageError("derive needs --action NAME")
    try:
        action = builtin_action(name)
    except KeyError as e:
        raise UsageError(str(e)) from None
    if action.n != 1:
        raise UsageError("derive handles one-dimensional actions only")
    order = args.order if args.order is not None else (action.geometric_order or 0) + 1
    cap = args.cap or 2
    details = {}
    res = derive_ode_linear(action, order, cap, seed=args.seed, details=details)
    result = {"action": name, "order": order, "cap": cap,
              "nullspace_dims": {str(k): v for k, v in details["nullspace_dims"].items()},
              "samples": details["samples"]}
    if isinstance(res, OdeRelation):
        result.update({"status": "relation", "relation": ode_to_json(res),
                       "text": res.describe()})
        line = "order %d: %s" % (order, res.describe())
    elif isinstance(res, NoRelationFound):
        result["status"] = "NoRelationFound"
        line = "order %d: NoRelationFound" % order
    else:
        result.update({"status": "ambiguous", "nullspace_dim": res.nullspace_dim,
                       "weight": res.weight,
                       "basis": [ode_to_json(x) for x in res.basis]})
        line = "order %d: ambiguous, %d independent relations at weight %d" % (
            order, res.nullspace_dim, res.weight)
    inputs = {"action": name, "order": order, "cap": cap}
    _emit(_report("derive", inputs, result, args.seed), args.out, line)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="kleinjet", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the full JSON report here")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("order", help="descending filtration and infinitesimal order")
    sp.add_argument("--input", help="Lie algebra JSON (path or inline)")
    sp.add_argument("--g0", help="isotropy basis JSON (path or inline); default {0}")
    common(sp)
    sp.set_defaults(func=cmd_order)

    sp = sub.add_parser("parabolic", help="sl(n) Borel construction with h = a_-1 + p")
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=int)
    common(sp)
    sp.set_defaults(func=cmd_parabolic)

    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument("--suite", default="all")
    sp.add_argument("--realization", help="built-in name or realization JSON path")
    sp.add_argument("--cap", type=int, help="prolongation cap (default 6)")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("derive", help="derive the finite-type ODE of a 1-d action")
    sp.add_argument("--action", help="built-in action name")
    sp.add_argument("--realization", help="alias of --action")
    sp.add_argument("--order", type=int)
    sp.add_argument("--cap", type=int, help="monomial degree cap (default 2)")
    common(sp)
    sp.set_defaults(func=cmd_derive)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, JacobiError, NotSubalgebraError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except SampleDegeneracyError as e:
        print("error: %s (try another --seed)" % e, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
