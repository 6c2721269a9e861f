#!/usr/bin/env python3
"""Sensitivity sweep: how the time budget moves P_t and the gate verdict.

Evaluates one step of the shutdown fixture across a range of available-time
budgets, with the lognormal shape parameter optionally swept as well.
Useful for picking per-step budgets in scenario configs.

Usage:
    python scripts/time_margin_sweep.py [--step NAV-1] [--sigmas 0.28 0.4]
"""
from __future__ import annotations

import argparse
from pathlib import Path

from procgate.config import load_scenario
from procgate.operator_model import TimeEstimate, compile_primitives, estimate_median, p_t
from procgate.procedures import compile_step, parse_procedure


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixtures", default="fixtures/shutdown", type=Path)
    parser.add_argument("--step", default="NAV-1")
    parser.add_argument("--sigmas", nargs="+", type=float, default=[0.28])
    args = parser.parse_args()

    scenario = load_scenario(args.fixtures / "scenario.json")
    steps = {s.id: s for s in parse_procedure(
        scenario.procedures[next(iter(scenario.procedures))].document
    )}
    step = steps[args.step]
    path = compile_step(step, scenario.graph)
    primitives = compile_primitives(path, step.kind, scenario.timing)
    median = estimate_median(primitives, scenario.timing)
    print(f"step {step.id}: {len(path.nodes)} nodes, median required {median:.2f} s")

    budgets = [round(median * f, 1) for f in (0.6, 0.8, 1.0, 1.25, 1.5, 2.0, 3.0)]
    header = "  ".join(f"sigma={s:<5}" for s in args.sigmas)
    print(f"{'t_avail':>8}  {'ratio':>6}  {header}")
    for t_avail in budgets:
        cells = []
        for sigma in args.sigmas:
            estimate = TimeEstimate(median_s=median, sigma=sigma)
            cells.append(f"{p_t(estimate, t_avail):10.4f}")
        print(f"{t_avail:8.1f}  {median / t_avail:6.2f}  " + "  ".join(cells))


if __name__ == "__main__":
    main()
