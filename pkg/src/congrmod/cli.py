"""File-driven front end.

Exit codes: 0 computed, 1 a verdict fails, 2 input error, 3 a degree or
valuation bound was exceeded.  Structured output is a single JSON record;
the text rendering prints exactly the same data.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import warnings

from .algebra import build_algebra, cotangent_invariants, regularity_at_lambda
from .config import DEFAULT_CONFIG, EngineConfig
from .congruence import (RegularityWarning, _plain, analyze, deformation_step,
                         eta_raw, numerical_criterion, psi_raw, serre_check)
from .dvr import Dvr
from .errors import DegreeBoundExceeded, EngineError, InputError
from .lattice import LatticeSplit, pairing_discriminant, split_and_congruence
from .poly import PolyRing, parse_poly
from .probfile import load_problem
from .resolution import resolve_O


def _config_from_args(args) -> EngineConfig:
    if getattr(args, "degree_bound", None):
        return EngineConfig(search_degree=args.degree_bound)
    return DEFAULT_CONFIG


def _load(args):
    with open(args.file, "r", encoding="utf-8") as fh:
        text = fh.read()
    return load_problem(text, config=_config_from_args(args))


def _resolution(problem, args):
    strategy = getattr(args, "strategy", "auto") or "auto"
    length = getattr(args, "length", None)
    user = problem.resolution_matrices if strategy == "file" else None
    return resolve_O(problem.algebra, length=length, strategy=strategy,
                     user_matrices=user)


def to_text(record, indent=0):
    lines = []
    pad = "  " * indent
    for key in record if isinstance(record, dict) else []:
        value = record[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(to_text(value, indent + 1))
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: {json.dumps(value)}")
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines


def _emit(record, args):
    if getattr(args, "format", "text") == "structured":
        print(json.dumps(record, sort_keys=True))
    else:
        print("\n".join(to_text(record)))


def _require_algebra(problem):
    if problem.algebra is None:
        raise InputError("this command needs [ring] and [augmentation] sections")


def _module_for(problem, args):
    name = getattr(args, "module", None)
    if name is None or name == "ring":
        return None
    if name == "O":
        from .fpmodule import FpModule
        return FpModule.o_module(problem.algebra)
    if name not in problem.modules:
        raise InputError(f"no module named {name} in the problem file")
    return problem.modules[name]


def cmd_analyze(args):
    problem = _load(args)
    _require_algebra(problem)
    res = _resolution(problem, args)
    report = analyze(problem.algebra, problem.modules, res=res)
    return report.to_dict(), 0


def cmd_single_invariant(args, which):
    problem = _load(args)
    _require_algebra(problem)
    A = problem.algebra
    record = {"command": which, "algebra": repr(A), "codim": A.codim}
    if which == "phi":
        cot = cotangent_invariants(A)
        record["phi"] = str(cot.phi)
        record["phi_length"] = cot.phi.torsion_length
        record["fitt_c"] = str(cot.fitt_c)
        return record, 0
    res = _resolution(problem, args)
    M = _module_for(problem, args)
    regularity_at_lambda(A)
    if which == "eta":
        value, cert = eta_raw(A, M, A.codim, res)
        record["eta"] = str(value)
        record["certification"] = cert.label()
    else:
        value, cert, mu = psi_raw(A, M, A.codim, res)
        record["psi"] = str(value)
        record["psi_length"] = _plain(value.torsion_length)
        record["mu"] = mu
        record["certification"] = cert.label()
    return record, 0


def cmd_criterion(args):
    problem = _load(args)
    _require_algebra(problem)
    A = problem.algebra
    M = _module_for(problem, args)
    surjection = None
    if args.mode in ("iso", "cotangent_iso"):
        if problem.surjection is None:
            raise InputError(f"mode {args.mode} needs a [surjection] section")
        surjection = (problem.surjection["target"], problem.surjection["images"])
    res = _resolution(problem, args)
    out = numerical_criterion(A, M, mode=args.mode, surjection=surjection, res=res)
    record = {"command": "criterion", "algebra": repr(A)}
    record.update(_plain(out))
    return record, 0 if out["verdict"] == "holds" else 1


def cmd_deform(args):
    problem = _load(args)
    _require_algebra(problem)
    A = problem.algebra
    f = parse_poly(A.ring, args.element)
    M = _module_for(problem, args)
    out = deformation_step(A, M, f)
    record = {
        "command": "deform",
        "algebra": repr(A),
        "element": args.element,
        "quotient": repr(out["B"]),
        "lhs": _plain(out["lhs"]),
        "rhs": _plain(out["rhs"]),
        "ord_f": str(out["ord_f"]),
        "eta_A": str(out["eta_A"]),
        "eta_B": str(out["eta_B"]),
        "exact_sequence_holds": out["exact_sequence_holds"],
        "certification": out["certification"],
    }
    return record, 0 if out["exact_sequence_holds"] else 1


def cmd_lattice(args):
    problem = _load(args)
    if problem.lattice is None:
        raise InputError("this command needs a [lattice] section")
    data = problem.lattice
    split = LatticeSplit(problem.dvr, data["basis"], data["v1"], data["v2"])
    out = split_and_congruence(split)
    disc = pairing_discriminant(split, data["pairing"])
    record = {
        "command": "lattice",
        "congruence_module": str(out["cong"]),
        "congruence_length": _plain(out["cong"].torsion_length),
        "discriminant": str(disc),
        "fitt0_matches_discriminant":
            disc.exponent == out["cong"].torsion_length,
    }
    return record, 0 if record["fitt0_matches_discriminant"] else 1


def cmd_serre(args):
    problem = _load(args)
    _require_algebra(problem)
    res = _resolution(problem, args)
    out = serre_check(problem.algebra, res=res, with_products=args.products)
    record = {"command": "serre", "algebra": repr(problem.algebra)}
    record.update(_plain(out))
    return record, 0 if out["verdict"] == "holds" else 1


def random_grammar_algebra(dvr, rng, max_vars=3, config=DEFAULT_CONFIG,
                           finite_only=False):
    """A random member of C_O(c) by construction: every variable is either
    cut out at the augmentation (a unit times x_i survives localization) or
    left free; mixed monomials always touch a cut variable.  With
    finite_only every variable is cut, so the result is module-finite over
    the base and its codimension is zero."""
    n = rng.randint(1, max_vars)
    ring = PolyRing(dvr, tuple(f"x{i + 1}" for i in range(n)))
    relations = []
    killed = set()
    for i in range(n):
        roll = rng.random()
        if roll < 0.65 or (finite_only and roll < 0.85):
            k = rng.randint(1, 3)
            relations.append(ring.var(i) * (ring.var(i) - ring.const(dvr.pi_pow(k))))
            killed.add(i)
        elif roll < 0.8 or finite_only:
            k = rng.randint(1, 2)
            relations.append(ring.var(i).scale(dvr.pi_pow(k)))
            if finite_only:
                m = rng.randint(1, 2)
                relations.append(
                    ring.var(i) * (ring.var(i) - ring.const(dvr.pi_pow(m))))
            killed.add(i)
    for i in range(n):
        for j in range(i + 1, n):
            if (i in killed or j in killed) and rng.random() < 0.35:
                relations.append(ring.var(i) * ring.var(j))
    codim = n - len(killed)
    return build_algebra(ring, relations, [dvr.zero] * n, codim, config=config)


def cmd_probe(args):
    dvr = Dvr.p_adic(args.p)
    rng = random.Random(args.seed)
    config = _config_from_args(args)
    violations = []
    checked = 0
    for _ in range(args.count):
        A = random_grammar_algebra(dvr, rng, config=config)
        cot = cotangent_invariants(A)
        res = resolve_O(A)
        eta, _ = eta_raw(A, None, A.codim, res)
        checked += 1
        contained = eta.exponent <= cot.fitt_c.exponent
        if not contained:
            violations.append({
                "relations": [str(r) for r in A.relations],
                "vars": list(A.ring.names),
                "codim": A.codim,
                "fitt_c": str(cot.fitt_c),
                "eta": str(eta),
            })
    record = {
        "command": "probe-fitting-question",
        "count": checked,
        "seed": args.seed,
        "p": args.p,
        "containment_holds_everywhere": not violations,
        "violations": violations,
    }
    return record, 0 if not violations else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="congrmod",
        description="Exact congruence modules, congruence ideals and "
                    "numerical criteria over a discrete valuation ring.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="problem description file")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--strategy", default="auto",
                       choices=("auto", "koszul", "matrix_factorization",
                                "shamash", "syzygy", "file"))
        p.add_argument("--degree-bound", type=int, default=None,
                       help="search degree for bounded syzygy-type computations")
        p.add_argument("--length", type=int, default=None,
                       help="resolution length (default codim + 2)")
        p.add_argument("--seed", type=int, default=0)

    common(sub.add_parser("analyze", help="full congruence report"))
    p = sub.add_parser("eta", help="congruence ideal")
    common(p)
    p.add_argument("--module", default=None)
    p = sub.add_parser("psi", help="congruence module")
    common(p)
    p.add_argument("--module", default=None)
    common(sub.add_parser("phi", help="cotangent torsion and Fitting ideal"))
    p = sub.add_parser("criterion", help="numerical criterion")
    common(p)
    p.add_argument("--mode", required=True,
                   choices=("defect0", "wld", "iso", "cotangent_iso"))
    p.add_argument("--module", default=None)
    p = sub.add_parser("deform", help="cut by a regular element")
    common(p)
    p.add_argument("--element", required=True)
    p.add_argument("--module", default=None)
    common(sub.add_parser("lattice", help="lattice congruence module"))
    p = sub.add_parser("serre", help="torsion-free Ext ranks")
    common(p)
    p.add_argument("--products", action="store_true")
    p = sub.add_parser("probe-fitting-question",
                       help="random search for Fitt_c not contained in eta")
    common(p, with_file=False)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--p", type=int, default=5)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "analyze": cmd_analyze,
        "eta": lambda a: cmd_single_invariant(a, "eta"),
        "psi": lambda a: cmd_single_invariant(a, "psi"),
        "phi": lambda a: cmd_single_invariant(a, "phi"),
        "criterion": cmd_criterion,
        "deform": cmd_deform,
        "lattice": cmd_lattice,
        "serre": cmd_serre,
        "probe-fitting-question": cmd_probe,
    }
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", RegularityWarning)
            record, code = handlers[args.command](args)
    except DegreeBoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    _emit(record, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
