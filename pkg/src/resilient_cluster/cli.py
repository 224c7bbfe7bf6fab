"""Command-line surface: solve, certify, and generate over JSON instance files.

Exit codes: 0 optimal/success, 1 I/O or validation error, 2 infeasible or too
large, 3 certified not-resilient. Setting RESILIENT_CLUSTER_EXACT=1 is the same
as passing --exact: float literals in input files are parsed as exact rationals
and numbers are emitted as rational strings.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import approx, generator, lp, mstdp, oracle, perturb
from .core import (
    KCENTER,
    OUTLIER,
    Clustering,
    Instance,
    cost,
    objective_by_name,
    validate_metric,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_NOT_RESILIENT = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_ERROR):
        super().__init__(message)
        self.code = code


def _exact_requested(args) -> bool:
    return bool(getattr(args, "exact", False)) or os.environ.get(
        "RESILIENT_CLUSTER_EXACT"
    ) == "1"


def _parse_number(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


def _emit_number(x, exact_out: bool):
    if isinstance(x, bool):
        raise TypeError("unexpected boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x) if exact_out else float(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite value in report")
        return x
    raise TypeError(f"cannot serialize {type(x)!r}")


def load_instance_file(path: str, exact: bool) -> tuple[Instance, Clustering | None]:
    """Parse an instance file: either an explicit distance matrix
    {"n", "k", "z", "symmetric", "dist"} or a point cloud {"points", "metric",
    "k", "z"}; an optional "planted" clustering rides along."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}")
    if not text.strip():
        raise CliError(f"{path}: empty file")
    try:
        doc = json.loads(text, parse_float=Fraction if exact else float)
    except json.JSONDecodeError as e:
        raise CliError(f"{path}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(doc, dict):
        raise CliError(f"{path}: top-level JSON object expected")
    try:
        k = int(doc["k"])
        z = int(doc.get("z", 0))
        if "dist" in doc:
            dist = tuple(
                tuple(_parse_number(x) for x in row) for row in doc["dist"]
            )
            if "n" in doc and int(doc["n"]) != len(dist):
                raise ValueError("declared n does not match the matrix size")
            symmetric = doc.get("symmetric")
            if symmetric is None:
                symmetric = all(
                    dist[u][v] == dist[v][u]
                    for u in range(len(dist))
                    for v in range(u + 1, len(dist))
                )
            inst = Instance(dist, k, z, symmetric=bool(symmetric))
        elif "points" in doc:
            pts = np.asarray(
                [[float(x) for x in row] for row in doc["points"]], dtype=float
            )
            metric = doc.get("metric", "euclidean")
            diff = pts[:, None, :] - pts[None, :, :]
            if metric == "euclidean":
                mat = np.sqrt((diff**2).sum(axis=2))
                dist = tuple(tuple(float(x) for x in row) for row in mat)
            elif metric == "manhattan":
                if exact or all(
                    float(x).is_integer() for row in doc["points"] for x in row
                ):
                    rows = [
                        [
                            sum(
                                abs(_parse_number(a) - _parse_number(b))
                                for a, b in zip(p, q)
                            )
                            for q in doc["points"]
                        ]
                        for p in doc["points"]
                    ]
                    rows = [
                        [int(x) if float(x).is_integer() else x for x in row]
                        for row in rows
                    ]
                    dist = tuple(tuple(row) for row in rows)
                else:
                    mat = np.abs(diff).sum(axis=2)
                    dist = tuple(tuple(float(x) for x in row) for row in mat)
            else:
                raise ValueError(f"unknown metric {metric!r}")
            inst = Instance(dist, k, z, symmetric=True)
        else:
            raise ValueError('either "dist" or "points" is required')
    except CliError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise CliError(f"{path}: {e}")
    violations = validate_metric(inst)
    if violations:
        raise CliError(f"{path}: not a valid metric, e.g. {violations[0]}")
    planted = None
    if "planted" in doc:
        p = doc["planted"]
        try:
            planted = Clustering(
                tuple(int(a) for a in p["assignment"]),
                tuple(int(c) for c in p["centers"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise CliError(f"{path}: bad planted clustering: {e}")
    return inst, planted


def _clustering_doc(clus: Clustering) -> dict:
    return {
        "assignment": list(clus.assignment),
        "centers": list(clus.centers),
        "outliers": sorted(clus.outliers),
    }


def _default_formulation(inst: Instance) -> str:
    if not inst.symmetric:
        return lp.ASYM_KC
    return lp.KCO if inst.z > 0 else lp.KC


def _report(doc: dict, exact_out: bool) -> None:
    def walk(x):
        if isinstance(x, dict):
            return {key: walk(v) for key, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [walk(v) for v in x]
        if isinstance(x, (int, float, Fraction)) and not isinstance(x, bool):
            return _emit_number(x, exact_out)
        return x
    print(json.dumps(walk(doc), indent=2, sort_keys=True))


def _self_consistent(inst, clus, obj, reported) -> None:
    again = cost(inst, clus, obj)
    if inst.exact:
        assert again == reported
    else:
        assert math.isclose(float(again), float(reported), rel_tol=1e-9, abs_tol=1e-9)


def cmd_solve(args) -> int:
    inst, _ = load_instance_file(args.input, _exact_requested(args))
    obj = objective_by_name(args.objective)
    started = time.perf_counter()
    report: dict = {"method": args.method, "objective": args.objective}
    code = EXIT_OK
    if args.method == "oracle":
        try:
            res = oracle.brute_force(inst, obj)
        except oracle.InstanceTooLarge as e:
            raise CliError(str(e), EXIT_INFEASIBLE)
        report["verdict"] = "SOLVED"
        report["cost"] = res.cost
        report["unique"] = res.unique
        report["clustering"] = _clustering_doc(res.best)
        _self_consistent(inst, res.best, obj, res.cost)
    elif args.method == "mstdp":
        try:
            clus = mstdp.solve_outlier_clustering(inst, obj)
        except mstdp.Infeasible as e:
            raise CliError(str(e), EXIT_INFEASIBLE)
        value = cost(inst, clus, obj)
        report["verdict"] = "SOLVED"
        report["cost"] = value
        report["clustering"] = _clustering_doc(clus)
    elif args.method in ("gonzalez", "hs"):
        if obj is not KCENTER and obj.name != "kcenter":
            raise CliError(f"--method {args.method} solves the kcenter objective only")
        algo = approx.GONZALEZ if args.method == "gonzalez" else approx.HOCHBAUM_SHMOYS
        clus = approx.recover_via_2approx(inst, algo)
        value = cost(inst, clus, KCENTER)
        report["verdict"] = "SOLVED"
        report["cost"] = value
        report["radius"] = value
        report["clustering"] = _clustering_doc(clus)
        _self_consistent(inst, clus, KCENTER, value)
    elif args.method == "lp":
        if obj.name != "kcenter":
            raise CliError("--method lp solves the kcenter objective only")
        formulation = args.formulation or _default_formulation(inst)
        verdict = lp.certify(inst, formulation)
        report["formulation"] = formulation
        report["radius"] = verdict.lp_radius
        if verdict.kind == lp.OPTIMAL:
            report["verdict"] = lp.OPTIMAL
            report["cost"] = cost(inst, verdict.clustering, KCENTER)
            report["clustering"] = _clustering_doc(verdict.clustering)
        else:
            report["verdict"] = lp.NOT_2PR
            witness = verdict.fractional_witness
            report["lp"] = {
                "feasible": witness.feasible,
                "bound": witness.bound,
                "y": list(witness.y) if witness.y is not None else None,
            }
            code = EXIT_NOT_RESILIENT
    else:
        raise CliError(f"unknown method {args.method!r}")
    report["timing"] = {"seconds": time.perf_counter() - started}
    _report(report, _exact_requested(args))
    return code


def cmd_certify(args) -> int:
    inst, _ = load_instance_file(args.input, _exact_requested(args))
    formulation = args.formulation or _default_formulation(inst)
    started = time.perf_counter()
    verdict = lp.certify(inst, formulation)
    report: dict = {"formulation": formulation, "radius": verdict.lp_radius}
    code = EXIT_OK
    if verdict.kind == lp.OPTIMAL:
        report["verdict"] = lp.OPTIMAL
        report["cost"] = cost(inst, verdict.clustering, KCENTER)
        report["clustering"] = _clustering_doc(verdict.clustering)
        _self_consistent(inst, verdict.clustering, KCENTER, report["cost"])
    else:
        report["verdict"] = lp.NOT_2PR
        witness = verdict.fractional_witness
        report["lp"] = {
            "feasible": witness.feasible,
            "integral": witness.integral,
            "bound": witness.bound,
            "y": list(witness.y) if witness.y is not None else None,
        }
        code = EXIT_NOT_RESILIENT
    if args.falsify:
        try:
            fr = perturb.falsify_resilience(inst, KCENTER)
            fdoc: dict = {"verdict": fr.verdict}
            if fr.witness is not None:
                spec, alt = fr.witness
                fdoc["witness"] = {
                    "edges": [list(e) for e in spec.edges],
                    "cap": spec.cap,
                    "mode": spec.mode,
                    "alternate": _clustering_doc(alt),
                }
            report["falsifier"] = fdoc
        except oracle.InstanceTooLarge:
            report["falsifier"] = {"skipped": "instance too large for brute force"}
    report["timing"] = {"seconds": time.perf_counter() - started}
    _report(report, _exact_requested(args))
    return code


def cmd_generate(args) -> int:
    cfg = generator.GeneratorConfig(
        n=args.n,
        k=args.k,
        z=args.z,
        sigma=Fraction(args.sigma),
        radius=args.radius,
        seed=args.seed,
        mode=args.mode,
    )
    try:
        inst, planted = generator.generate(cfg)
    except generator.ConfigInfeasible as e:
        raise CliError(str(e), EXIT_INFEASIBLE)
    doc = {
        "n": inst.n,
        "k": inst.k,
        "z": inst.z,
        "symmetric": inst.symmetric,
        "dist": [[x for x in row] for row in inst.dist],
        "planted": {
            "assignment": list(planted.assignment),
            "centers": list(planted.centers),
        },
        "generator": {
            "mode": cfg.mode,
            "sigma": str(cfg.sigma),
            "radius": cfg.radius,
            "seed": cfg.seed,
        },
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    try:
        Path(args.out).write_text(text)
    except OSError as e:
        raise CliError(f"cannot write {args.out}: {e}")
    print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def _run_single(func, args) -> int:
    try:
        return func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (ValueError, AssertionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def _run_batch(func, args) -> int:
    """Process every *.json file in a directory; reports are printed in file
    order regardless of worker scheduling. Exit code is the worst one seen."""
    directory = Path(args.input)
    files = sorted(str(p) for p in directory.glob("*.json"))
    if not files:
        print(f"error: no *.json files in {directory}", file=sys.stderr)
        return EXIT_ERROR
    jobs = max(1, args.jobs)
    tasks = [(func.__name__, dict(vars(args), input=f, func=None)) for f in files]
    if jobs == 1:
        results = [_batch_worker(*t) for t in tasks]
    else:
        import multiprocessing as mp

        with mp.Pool(jobs) as pool:
            results = pool.starmap(_batch_worker, tasks)
    for code, out, err in results:
        if out:
            sys.stdout.write(out)
        if err:
            sys.stderr.write(err)
    return max(code for code, _, _ in results)


def _batch_worker(func_name: str, arg_dict: dict) -> tuple[int, str, str]:
    import contextlib
    import io

    func = {"cmd_solve": cmd_solve, "cmd_certify": cmd_certify}[func_name]
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = _run_single(func, argparse.Namespace(**arg_dict))
    return code, out.getvalue(), err.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resilient-cluster",
        description="Certified-optimal clustering on perturbation-resilient instances",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance with a chosen method")
    p_solve.add_argument("--input", required=True, help="instance file or directory")
    p_solve.add_argument(
        "--objective",
        default="kcenter",
        help="kcenter, kmedian, kmeans, or lp:P for a summed p-th power objective",
    )
    p_solve.add_argument(
        "--method",
        required=True,
        choices=["lp", "mstdp", "gonzalez", "hs", "oracle"],
    )
    p_solve.add_argument(
        "--formulation", choices=list(lp.FORMULATIONS), default=None
    )
    p_solve.add_argument("--exact", action="store_true")
    p_solve.add_argument("--jobs", type=int, default=1)
    p_solve.set_defaults(func=cmd_solve)

    p_cert = sub.add_parser("certify", help="optimality or non-resilience certificate")
    p_cert.add_argument("--input", required=True, help="instance file or directory")
    p_cert.add_argument(
        "--formulation", choices=list(lp.FORMULATIONS), default=None
    )
    p_cert.add_argument("--falsify", action="store_true",
                        help="also search proof-shaped perturbations (small n)")
    p_cert.add_argument("--exact", action="store_true")
    p_cert.add_argument("--jobs", type=int, default=1)
    p_cert.set_defaults(func=cmd_certify)

    p_gen = sub.add_parser("generate", help="write a planted instance file")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--k", type=int, required=True)
    p_gen.add_argument("--z", type=int, default=0)
    p_gen.add_argument("--sigma", default="4")
    p_gen.add_argument("--radius", type=int, default=1000)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument(
        "--mode",
        default=generator.SYMMETRIC,
        choices=list(generator.MODES),
    )
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    func = args.func
    if func in (cmd_solve, cmd_certify) and Path(args.input).is_dir():
        return _run_batch(func, args)
    return _run_single(func, args)


if __name__ == "__main__":
    sys.exit(main())
