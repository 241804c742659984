"""Command-line surface: construction, verification, decomposition,
equivalence, and dual analysis over the JSON file formats.

Exit codes: 0 success / equivalent, 1 property failure / not equivalent,
2 invalid input, 3 indeterminate-tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import classify, dual, models, operators as ops
from .trees import (
    TreeSkeleton,
    TreeValidationError,
    branching_degrees,
    example_2_plus_3,
    graph_isomorphic,
    make_eta_kappa,
)
from .xi import DomainError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_INDETERMINATE = 3

_INPUT_ERRORS = (
    TreeValidationError,
    DomainError,
    ops.SpecError,
    ops.TruncationError,
    json.JSONDecodeError,
    OSError,
    KeyError,
    ValueError,
)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _load_spec(args) -> ops.ShiftSpec:
    sources = [args.tree is not None, args.atoms is not None, args.brownian_sigma is not None]
    if sum(sources) != 1:
        raise ValueError("give exactly one of --tree, --atoms, --brownian-sigma")
    if args.tree is not None:
        tree = TreeSkeleton.load(args.tree)
        return _tree_spec(tree, args)
    if args.atoms is not None:
        with open(args.atoms) as fh:
            return ops.DiagonalOpShift(ops.SpectralData.from_json(json.load(fh)))
    return ops.BrownianShift(sigma=args.brownian_sigma)


def _tree_spec(tree: TreeSkeleton, args) -> ops.TreeShift:
    if getattr(args, "weights", None):
        with open(args.weights) as fh:
            data = json.load(fh)
        rule = data.get("rule")
        if rule:
            strategy = {"uwrem-equal": "equal", "uwrem-random": "random"}.get(rule)
            if strategy is None:
                raise ValueError(f"unknown weight rule {rule!r}")
            return models.build_weights_uwrem(tree, data["x"], strategy, data.get("seed"))
        weights = {v: complex(re, im) for v, (re, im) in data["weights"].items()}
        return ops.TreeShift(tree=tree, weights=weights, ray_x=data["ray_x"])
    if args.x is None:
        raise ValueError("--x is required without a weight file")
    return models.build_weights_uwrem(tree, args.x, args.strategy, args.seed)


def cmd_tree_info(args) -> int:
    tree = TreeSkeleton.load(args.tree)
    j = branching_degrees(tree)
    sizes = [len(tree.expand(tree.skeleton_depth + 2).generations[n])
             for n in range(tree.skeleton_depth + 2)]
    _emit(
        {
            "root": tree.root,
            "skeleton_vertices": len(tree.vertices),
            "skeleton_depth": tree.skeleton_depth,
            "branching_degrees": j.to_json(),
            "generation_sizes": sizes,
        },
        args.out,
    )
    return EXIT_OK


def cmd_build(args) -> int:
    tree = TreeSkeleton.load(args.tree)
    spec = models.build_weights_uwrem(tree, args.x, args.strategy, args.seed)
    payload = {
        "rule": f"uwrem-{args.strategy}",
        "x": args.x,
        "seed": args.seed,
        "ray_x": spec.ray_x,
        "weights": {v: [complex(w).real, complex(w).imag] for v, w in sorted(spec.weights.items())},
    }
    _emit(payload, args.out)
    return EXIT_OK


def run_check(args) -> int:
    tree = TreeSkeleton.load(args.tree)
    spec = _tree_spec(tree, args)
    report = ops.property_report(spec, args.depth, tol=args.tol)
    payload = report.to_json()
    payload["seed"] = args.seed
    ok = report.defect_2iso <= args.tol and report.hypo_plus and report.kernel_condition
    payload["passed"] = ok
    _emit(payload, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_invariant(args) -> int:
    tree = TreeSkeleton.load(args.tree)
    spec = _tree_spec(tree, args)
    inv = models.decompose(spec, tol=args.tol)
    _emit(inv.to_json(), args.out)
    return EXIT_OK


def run_equiv(args) -> int:
    tree_a = TreeSkeleton.load(args.tree_a)
    tree_b = TreeSkeleton.load(args.tree_b)
    inv_a = models.decompose(models.build_weights_uwrem(tree_a, args.x_a, args.strategy, args.seed))
    inv_b = models.decompose(models.build_weights_uwrem(tree_b, args.x_b, args.strategy, args.seed))
    verdict = classify.equiv_tree_shifts(inv_a, inv_b, tol=args.tol)
    payload = verdict.to_json()
    payload["invariant_a"] = inv_a.to_json()
    payload["invariant_b"] = inv_b.to_json()
    _emit(payload, args.out)
    if verdict.equivalent is None:
        return EXIT_INDETERMINATE
    return EXIT_OK if verdict.equivalent else EXIT_FAIL


def cmd_dual(args) -> int:
    spec = _load_spec(args)
    report = dual.classify_c_classes(spec, depth=args.depth, tol=args.tol)
    payload = report.to_json()
    payload["cn_limit"] = None
    try:
        payload["cn_limit"] = dual.cn_limit(spec, tol=args.tol)
    except dual.IsometricInputError:
        payload["cn_limit_note"] = "isometric input: limit is trivially 1"
    _emit(payload, args.out)
    return EXIT_OK


def run_demo(args) -> int:
    if args.name == "example-2+3":
        return _demo_example_2_plus_3(args)
    if args.name == "eta-kappa":
        return _demo_eta_kappa(args)
    return _demo_brownian(args)


def _demo_example_2_plus_3(args) -> int:
    x = args.x if args.x is not None else math.sqrt(2.0)
    t1, t2 = example_2_plus_3()
    inv1 = models.decompose(models.build_weights_uwrem(t1, x))
    inv2 = models.decompose(models.build_weights_uwrem(t2, x))
    verdict = classify.equiv_tree_shifts(inv1, inv2)
    iso = graph_isomorphic(t1, t2)
    print(f"invariant 1: x = {inv1.x:.12g}, j = {inv1.j.entries}")
    print(f"invariant 2: x = {inv2.x:.12g}, j = {inv2.j.entries}")
    print(f"equivalent: {str(verdict.equivalent).lower()}, graph-isomorphic: {str(iso).lower()}")
    ok = verdict.equivalent is True and not iso and inv1.j.entries == (1, 2)
    return EXIT_OK if ok else EXIT_FAIL


def _demo_eta_kappa(args) -> int:
    x = args.x if args.x is not None else math.sqrt(2.0)
    tree = make_eta_kappa(args.eta, args.kappa)
    inv = models.decompose(models.build_weights_uwrem(tree, x))
    print(f"tree: eta = {args.eta}, kappa = {args.kappa}")
    print(f"invariant: x = {inv.x:.12g}, j = {inv.j.to_json()}")
    expected = {args.kappa + 1: args.eta - 1}
    ok = dict(map(tuple, inv.j.to_json())) == expected and abs(inv.x - x) <= 1e-9
    return EXIT_OK if ok else EXIT_FAIL


def _demo_brownian(args) -> int:
    sigma = args.sigma
    spec = ops.BrownianShift(sigma=sigma)
    c1, min_sq = dual.cn_bound(spec, 1, depth=60)
    report = dual.classify_c_classes(spec, depth=10, iter_n=50)
    scalar_idx = [i for i, (label, _) in enumerate(report.a_iterative.basis_labels) if label == "scalar"][0]
    scalar_entry = float(np.real(report.a_iterative.matrix[scalar_idx, scalar_idx]))
    closed_scalar = 1.0 / (2.0 + sigma**2)
    print(f"sigma = {sigma}: c_1 = {c1:.6g} (min singular sq {min_sq:.6g})")
    print(f"asymptotic scalar entry: iterate {scalar_entry:.6g} -> closed form {closed_scalar:.6g}")
    print(f"classes: C.0 = {report.c_dot0}, C0. = {report.c_0dot}")
    ok = (
        abs(min_sq - c1) <= 1e-3
        and abs(scalar_entry - closed_scalar) <= 2e-2
        and report.c_dot0
        and not report.c_0dot
    )
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeshift",
        description="Construct, verify, decompose and classify 2-isometric weighted shifts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tree_required=True):
        p.add_argument("--depth", type=int, default=10)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)

    p = sub.add_parser("tree-info", help="summarize a tree file")
    p.add_argument("tree")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tree_info)

    p = sub.add_parser("build", help="build uwrem weights for a tree")
    p.add_argument("tree")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--strategy", choices=["equal", "random"], default="equal")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", help="run the verification battery")
    p.add_argument("tree")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--weights", default=None)
    p.add_argument("--strategy", choices=["equal", "random"], default="equal")
    common(p)
    p.set_defaults(func=run_check)

    p = sub.add_parser("invariant", help="canonical invariant (x, j) of a tree shift")
    p.add_argument("tree")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--weights", default=None)
    p.add_argument("--strategy", choices=["equal", "random"], default="equal")
    common(p)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("equiv", help="decide unitary equivalence of two tree shifts")
    p.add_argument("tree_a")
    p.add_argument("tree_b")
    p.add_argument("--x-a", type=float, required=True)
    p.add_argument("--x-b", type=float, required=True)
    p.add_argument("--strategy", choices=["equal", "random"], default="equal")
    common(p)
    p.set_defaults(func=run_equiv)

    p = sub.add_parser("dual", help="Cauchy-dual analysis of a spec")
    p.add_argument("--tree", default=None)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--weights", default=None)
    p.add_argument("--atoms", default=None, help="spectral data JSON file")
    p.add_argument("--brownian-sigma", type=float, default=None)
    p.add_argument("--strategy", choices=["equal", "random"], default="equal")
    common(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("demo", help="reproduce a named scenario end to end")
    p.add_argument("name", choices=["example-2+3", "eta-kappa", "brownian"])
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--eta", type=int, default=3)
    p.add_argument("--kappa", type=int, default=2)
    p.add_argument("--sigma", type=float, default=1.0)
    p.set_defaults(func=run_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except models.VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except _INPUT_ERRORS as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
