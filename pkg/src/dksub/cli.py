"""Command-line interface.

Subcommands: generate, solve, certify, oracle, phase, bench.
Exit codes: 0 success, 2 bad input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import experiments, io, models, oracle, solver
from .certificate import build_multipliers, verify
from .graphs import NodeSubset
from .solver import NumericalError, SolverConfig


def _json_out(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _cmd_generate(args) -> int:
    if args.model == "dks":
        if args.n is None or args.k is None:
            raise ValueError("--n and --k are required for the dks model")
        params = models.PlantedDksParams(
            n=args.n, k=args.k, p=args.p, q=args.q, seed=args.seed
        )
        inst = models.sample_dks(params, permute=not args.no_permute)
        if args.adv_r or args.adv_s:
            adv = models.AdversarialParams(
                r=args.adv_r, s=args.adv_s, delta1=args.adv_delta1, delta2=args.adv_delta2
            )
            inst = models.corrupt_adversarial(inst, adv, seed=args.adv_seed)
        io.write_graph(inst.graph, args.out)
        io.write_ground_truth(
            io.truth_path(args.out), [inst.k], inst.planted.members, inst.params
        )
    else:
        if None in (args.n1, args.n2, args.k1, args.k2):
            raise ValueError("--n1 --n2 --k1 --k2 are required for the dkb model")
        params = models.PlantedDkbParams(
            n1=args.n1, n2=args.n2, k1=args.k1, k2=args.k2,
            p=args.p, q=args.q, seed=args.seed,
        )
        inst = models.sample_dkb(params, permute=not args.no_permute)
        io.write_bipartite(inst.graph, args.out)
        io.write_ground_truth(
            io.truth_path(args.out),
            [params.k1, params.k2],
            list(inst.planted_u.members) + list(inst.planted_v.members),
            inst.params,
        )
    print(f"wrote {args.out} and {io.truth_path(args.out)}")
    return 0


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        gamma=args.gamma, tau=args.tau, tol=args.tol,
        max_iter=args.max_iter, mode=args.mode,
    )


def _find_truth(args) -> Path | None:
    if args.ground_truth:
        return Path(args.ground_truth)
    candidate = io.truth_path(args.graph)
    return candidate if candidate.exists() else None


def _cmd_solve(args) -> int:
    kind = io.sniff_kind(args.graph)
    cfg = _solver_config(args)
    truth_file = _find_truth(args)
    payload: dict = {}
    if kind == "graph":
        if args.k is None:
            raise ValueError("--k is required for a unipartite graph")
        g = io.read_graph(args.graph)
        result = solver.solve_dks(g, args.k, cfg)
        rounded = solver.round_to_subset(result.X, args.k)
        payload["recovered_subset"] = list(rounded.members)
        if truth_file:
            truth = io.read_ground_truth(truth_file)
            planted = truth.subset(g)
            payload["X_relative_error_vs_ground_truth"] = solver.relative_error(
                result.X, planted
            )
    else:
        if args.k1 is None or args.k2 is None:
            raise ValueError("--k1 and --k2 are required for a bipartite graph")
        g = io.read_bipartite(args.graph)
        result = solver.solve_dkb(g, args.k1, args.k2, cfg)
        su, sv = _round_bipartite(result.X, args.k1, args.k2)
        payload["recovered_subset"] = {"u": list(su.members), "v": list(sv.members)}
        if truth_file:
            truth = io.read_ground_truth(truth_file)
            planted = truth.subsets(g)
            payload["X_relative_error_vs_ground_truth"] = solver.relative_error(
                result.X, planted
            )
    payload.update(
        converged=result.converged,
        iterations=result.iterations,
        objective=result.objective,
        primal_residual=result.primal_residual,
        dual_residual=result.dual_residual,
    )
    _json_out(payload, args.out)
    return 0


def _round_bipartite(X: np.ndarray, k1: int, k2: int) -> tuple[NodeSubset, NodeSubset]:
    U, _, Vt = np.linalg.svd(X)
    u, v = U[:, 0], Vt[0]
    if u.sum() < 0:
        u, v = -u, -v
    su = np.argsort(-u, kind="stable")[:k1]
    sv = np.argsort(-v, kind="stable")[:k2]
    return (
        NodeSubset(tuple(int(i) for i in su), X.shape[0]),
        NodeSubset(tuple(int(i) for i in sv), X.shape[1]),
    )


def _pq_from_params(params: dict) -> tuple[float, float] | None:
    if "p" in params and "q" in params:
        return float(params["p"]), float(params["q"])
    base = params.get("base")
    if isinstance(base, dict) and "p" in base and "q" in base:
        return float(base["p"]), float(base["q"])
    return None


def _cmd_certify(args) -> int:
    g = io.read_graph(args.graph)
    truth_file = _find_truth(args)
    if truth_file is None:
        raise ValueError("certify needs a ground-truth sidecar (--ground-truth)")
    truth = io.read_ground_truth(truth_file)
    planted = truth.subset(g)
    if args.estimate_pq:
        p = q = None
    else:
        if (args.p is None) != (args.q is None):
            raise ValueError("pass --p and --q together")
        pq = (args.p, args.q) if args.p is not None else _pq_from_params(truth.params)
        if pq is None:
            raise ValueError("no p/q in the sidecar; pass --p and --q or --estimate-pq")
        p, q = pq
    stub = models.PlantedDksParams(
        n=g.n, k=len(planted), p=p if p is not None else 0.0,
        q=q if q is not None else 0.0, seed=0,
    )
    inst = models.PlantedInstance(g, planted, stub)
    mult = build_multipliers(
        inst, gamma=args.gamma, epsilon_slack=args.epsilon,
        p=p, q=q, use_estimated_pq=args.estimate_pq,
    )
    report = verify(mult, inst)
    payload = dataclasses.asdict(report)
    payload["margins"] = {
        "one_minus_W_norm": 1.0 - report.W_spectral_norm,
        "one_minus_F_inf_norm": 1.0 - report.F_inf_norm,
        "min_M_on_block": report.min_M_on_block,
    }
    payload["lambda"] = mult.lam
    payload["gamma"] = mult.gamma
    payload["epsilon_slack"] = mult.epsilon_slack
    _json_out(payload, args.out)
    return 0


def _cmd_oracle(args) -> int:
    kind = io.sniff_kind(args.graph)
    if kind == "graph":
        if args.k is None:
            raise ValueError("--k is required for a unipartite graph")
        g = io.read_graph(args.graph)
        result = oracle.brute_force_dks(g, args.k)
        first = list(result.optimal_subsets[0].members)
    else:
        if args.k1 is None or args.k2 is None:
            raise ValueError("--k1 and --k2 are required for a bipartite graph")
        g = io.read_bipartite(args.graph)
        result = oracle.brute_force_dkb(g, args.k1, args.k2)
        su, sv = result.optimal_subsets[0]
        first = {"u": list(su.members), "v": list(sv.members)}
    _json_out(
        {
            "best_edge_count": result.best_edge_count,
            "num_optima": len(result.optimal_subsets),
            "first_optimum": first,
        },
        args.out,
    )
    return 0


def _phase_config(args) -> experiments.PhaseGridConfig:
    raw: dict = {}
    if args.config:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    solver_raw = dict(raw.get("solver", {}))
    for key, val in (
        ("gamma", args.gamma), ("tau", args.tau),
        ("tol", args.tol), ("max_iter", args.max_iter), ("mode", args.mode),
    ):
        if val is not None:
            solver_raw[key] = val
    cfg = SolverConfig(**solver_raw)
    fields = {
        "n": args.n if args.n is not None else raw.get("n", 250),
        "q": args.q if args.q is not None else raw.get("q", 0.25),
        "p_values": tuple(args.p_list) if args.p_list else tuple(
            raw.get("p_values", experiments.DEFAULT_P_VALUES)
        ),
        "k_values": tuple(args.k_list) if args.k_list else tuple(
            raw.get("k_values", experiments.DEFAULT_K_VALUES)
        ),
        "trials": args.trials if args.trials is not None else raw.get("trials", 10),
        "master_seed": args.seed if args.seed is not None else raw.get("master_seed", 0),
        "recovery_tol": raw.get("recovery_tol", 1e-3),
    }
    return experiments.PhaseGridConfig(solver=cfg, **fields)


def _cmd_phase(args) -> int:
    cfg = _phase_config(args)
    start = time.perf_counter()
    cells, _records = experiments.run_phase_diagram(cfg, jobs=args.jobs)
    elapsed = time.perf_counter() - start
    if args.out_csv:
        experiments.emit_csv(cells, cfg.n, cfg.q, args.out_csv)
    if args.out_svg:
        experiments.emit_heatmap_svg(cells, args.out_svg)
    summary = {
        "n": cfg.n,
        "q": cfg.q,
        "wall_time_s": elapsed,
        "cells": [dataclasses.asdict(c) for c in cells],
    }
    _json_out(summary, args.out)
    return 0


def _cmd_bench(args) -> int:
    params = models.PlantedDksParams(n=args.n, k=args.k, p=args.p, q=args.q, seed=args.seed)
    inst = models.sample_dks(params)
    cfg = _solver_config(args)
    start = time.perf_counter()
    result = solver.solve_dks(inst.graph, args.k, cfg)
    elapsed = time.perf_counter() - start
    _json_out(
        {
            "wall_time_s": elapsed,
            "iterations": result.iterations,
            "converged": result.converged,
            "ms_per_iteration": 1000.0 * elapsed / max(result.iterations, 1),
            "relative_error": solver.relative_error(result.X, inst.planted),
        },
        args.out,
    )
    return 0


def _add_solver_flags(p: argparse.ArgumentParser, with_defaults: bool = True) -> None:
    p.add_argument("--gamma", type=float, default=None, help="l1 weight (default 6/k)")
    p.add_argument("--tau", type=float, default=0.35 if with_defaults else None)
    p.add_argument("--tol", type=float, default=1e-4 if with_defaults else None)
    p.add_argument("--max-iter", type=int, default=5000 if with_defaults else None)
    p.add_argument(
        "--mode", choices=("paper", "derived"),
        default="derived" if with_defaults else None,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dksub",
        description="Densest k-subgraph recovery via a nuclear-norm + l1 relaxation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample a planted instance to an edge-list file")
    gen.add_argument("--model", choices=("dks", "dkb"), default="dks")
    gen.add_argument("--n", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--n1", type=int)
    gen.add_argument("--n2", type=int)
    gen.add_argument("--k1", type=int)
    gen.add_argument("--k2", type=int)
    gen.add_argument("--p", type=float, default=0.0)
    gen.add_argument("--q", type=float, default=0.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--no-permute", action="store_true")
    gen.add_argument("--adv-r", type=int, default=0, help="adversarial edge additions")
    gen.add_argument("--adv-s", type=int, default=0, help="adversarial edge deletions")
    gen.add_argument("--adv-delta1", type=float, default=0.0)
    gen.add_argument("--adv-delta2", type=float, default=0.0)
    gen.add_argument("--adv-seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_generate)

    slv = sub.add_parser("solve", help="run the ADMM solver on a graph file")
    slv.add_argument("--graph", required=True)
    slv.add_argument("--k", type=int)
    slv.add_argument("--k1", type=int)
    slv.add_argument("--k2", type=int)
    slv.add_argument("--ground-truth")
    _add_solver_flags(slv)
    slv.add_argument("--out")
    slv.set_defaults(func=_cmd_solve)

    cert = sub.add_parser("certify", help="build and verify a dual certificate")
    cert.add_argument("--graph", required=True)
    cert.add_argument("--ground-truth")
    cert.add_argument("--gamma", type=float)
    cert.add_argument("--epsilon", type=float)
    cert.add_argument("--p", type=float)
    cert.add_argument("--q", type=float)
    cert.add_argument("--estimate-pq", action="store_true")
    cert.add_argument("--out")
    cert.set_defaults(func=_cmd_certify)

    orc = sub.add_parser("oracle", help="brute-force densest subgraph on a small graph")
    orc.add_argument("--graph", required=True)
    orc.add_argument("--k", type=int)
    orc.add_argument("--k1", type=int)
    orc.add_argument("--k2", type=int)
    orc.add_argument("--out")
    orc.set_defaults(func=_cmd_oracle)

    ph = sub.add_parser("phase", help="run a recovery phase diagram over a (p, k) grid")
    ph.add_argument("--config", help="JSON config file; flags override its values")
    ph.add_argument("--n", type=int)
    ph.add_argument("--q", type=float)
    ph.add_argument("--p-list", type=float, nargs="+")
    ph.add_argument("--k-list", type=int, nargs="+")
    ph.add_argument("--trials", type=int)
    ph.add_argument("--seed", type=int)
    ph.add_argument("--jobs", type=int, default=1)
    ph.add_argument("--out-csv")
    ph.add_argument("--out-svg")
    ph.add_argument("--out")
    _add_solver_flags(ph, with_defaults=False)
    ph.set_defaults(func=_cmd_phase)

    ben = sub.add_parser("bench", help="time one solve on a sampled instance")
    ben.add_argument("--n", type=int, default=250)
    ben.add_argument("--k", type=int, default=100)
    ben.add_argument("--p", type=float, default=0.05)
    ben.add_argument("--q", type=float, default=0.25)
    ben.add_argument("--seed", type=int, default=0)
    _add_solver_flags(ben)
    ben.add_argument("--out")
    ben.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
