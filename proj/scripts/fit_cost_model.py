#!/usr/bin/env python3
"""Fit the default cost model against the benchmark throughput/response series.

Two-stage fit:
  1. With a neutral contention profile, measure the structural bottleneck
     interval and round path per (mode, N) for two busy scales; both are
     affine in the scale, which gives a closed-form solve for the per-load
     busy_scale and extra_wait knots.
  2. Monotonize the knots, re-simulate, and polish the shared cost constants
     with a small coordinate search on the worst-coordinate error.

Writes data/cost_model_default.json. Run from the repository root with
PYTHONPATH pointing at the built python package (build/python).
"""

import json
import math
import sys
from pathlib import Path

import orbitledger as ol

ROOT = Path(__file__).resolve().parent.parent
TARGETS = json.loads((ROOT / "data" / "calibration_targets.json").read_text())
NODES = TARGETS["node_counts"]
BATCH = 500.0

# Active loads per config: selective runs t approvers + t verifiers, full
# participation runs everyone in both roles.
SEL_LOADS = [2 * ol.assign_roles(n).approvers for n in NODES]
FULL_LOADS = [2 * n for n in NODES]
KNOTS = sorted(set(SEL_LOADS + FULL_LOADS))


def make_model(cost_values, busy_scale, extra_wait):
    m = ol.CalibratedCostModel.defaults()
    c = m.cost
    (c.contribution_compute_ms, c.point_add_ms, c.hash_ms_per_kb,
     c.per_message_overhead_ms, c.bandwidth_kbps, c.proposer_assembly_ms) = cost_values
    p = m.contention
    p.load_knots = [float(k) for k in KNOTS]
    p.busy_scale = list(busy_scale)
    p.extra_wait_ms = list(extra_wait)
    m.cost = c
    m.contention = p
    return m


def neutral_model(cost_values, scale):
    return make_model(cost_values, [scale] * len(KNOTS), [0.0] * len(KNOTS))


def sweep(model, rounds=20):
    sel = ol.run_experiment(NODES, "selective", model, [42], rounds=rounds)
    full = ol.run_experiment(NODES, "full", model, [42], rounds=rounds)
    return sel, full


def measure_affine(cost_values):
    """busy interval and response path per config, affine in busy_scale."""
    s1_sel, s1_full = sweep(neutral_model(cost_values, 1.0), rounds=6)
    s2_sel, s2_full = sweep(neutral_model(cost_values, 2.0), rounds=6)

    def affine(r1, r2):
        rows = []
        for a, b in zip(r1, r2):
            busy1 = BATCH / a.throughput_tx_per_s
            busy2 = BATCH / b.throughput_tx_per_s
            path1 = a.response_time_s
            path2 = b.response_time_s
            rows.append({
                "busy_base": 2 * busy1 - busy2,   # scale-0 intercept
                "busy_slope": busy2 - busy1,      # per unit scale
                "path_base": 2 * path1 - path2,
                "path_slope": path2 - path1,
            })
        return rows
    return affine(s1_sel, s2_sel), affine(s1_full, s2_full)


def solve_profile(cost_values):
    sel_aff, full_aff = measure_affine(cost_values)

    wanted_scale = {}
    wanted_wait = {}
    for i, n in enumerate(NODES):
        for (load, aff, tput, resp) in (
            (SEL_LOADS[i], sel_aff[i], TARGETS["throughput_selective"][i], TARGETS["response_selective"][i]),
            (FULL_LOADS[i], full_aff[i], TARGETS["throughput_full"][i], TARGETS["response_full"][i]),
        ):
            target_busy = BATCH / tput
            scale = (target_busy - aff["busy_base"]) / max(aff["busy_slope"], 1e-9)
            wanted_scale.setdefault(load, []).append(max(scale, 0.05))
            path = aff["path_base"] + max(scale, 0.05) * aff["path_slope"]
            wanted_wait.setdefault(load, []).append(max((resp - path) * 1000.0, 0.0))

    scale_knots = [sum(wanted_scale[k]) / len(wanted_scale[k]) for k in KNOTS]
    wait_knots = [sum(wanted_wait[k]) / len(wanted_wait[k]) for k in KNOTS]

    # Monotone non-decreasing (profile invariant): pool adjacent violators.
    def isotonic(values):
        blocks = [[v, 1.0] for v in values]
        i = 0
        while i + 1 < len(blocks):
            if blocks[i][0] > blocks[i + 1][0] + 1e-12:
                total = blocks[i][0] * blocks[i][1] + blocks[i + 1][0] * blocks[i + 1][1]
                weight = blocks[i][1] + blocks[i + 1][1]
                blocks[i] = [total / weight, weight]
                del blocks[i + 1]
                i = max(i - 1, 0)
            else:
                i += 1
        out = []
        for value, weight in blocks:
            out.extend([value] * int(round(weight)))
        return out

    return isotonic(scale_knots), isotonic(wait_knots)


def evaluate(model, rounds=20, verbose=False):
    sel, full = sweep(model, rounds=rounds)
    worst = 0.0
    worst_name = ""
    rows = []
    for i, n in enumerate(NODES):
        for (name, actual, target) in (
            ("sel-tput", sel[i].throughput_tx_per_s, TARGETS["throughput_selective"][i]),
            ("full-tput", full[i].throughput_tx_per_s, TARGETS["throughput_full"][i]),
            ("sel-resp", sel[i].response_time_s, TARGETS["response_selective"][i]),
            ("full-resp", full[i].response_time_s, TARGETS["response_full"][i]),
        ):
            dev = abs(actual - target) / target
            rows.append((f"{name}@{n}", actual, target, dev))
            if dev > worst:
                worst, worst_name = dev, f"{name}@{n}"

    peak_nodes = max(range(len(NODES)), key=lambda i: sel[i].throughput_tx_per_s)
    ratio50 = full[-1].throughput_tx_per_s / sel[-1].throughput_tx_per_s
    geomean = math.exp(sum(math.log(s.throughput_tx_per_s / f.throughput_tx_per_s)
                           for s, f in zip(sel, full)) / len(NODES))
    cycle = ol.tracking_cycle(nodes=24, costs=model, seed=42)

    ok = (worst <= 0.185 and 20 <= NODES[peak_nodes] <= 30 and ratio50 <= 0.019
          and geomean >= 9.3 and 6.05 <= cycle["commit_time_s"] <= 6.95)
    if verbose:
        for name, actual, target, dev in rows:
            flag = "  OK " if dev <= 0.2 else " MISS"
            print(f"{flag} {name:14s} {actual:10.2f} vs {target:10.2f}  ({dev * 100:5.1f}%)")
        print(f"peak N={NODES[peak_nodes]}  full/sel@50={ratio50 * 100:.2f}%  "
              f"geomean={geomean:.2f}x  cycle24={cycle['commit_time_s']:.2f}s  worst={worst * 100:.1f}% {worst_name}")
    return ok, worst, {"peak": NODES[peak_nodes], "ratio50": ratio50,
                       "geomean": geomean, "cycle": cycle["commit_time_s"]}


def objective(model):
    """Soft score: worst deviation plus penalties for the side constraints."""
    sel, full = sweep(model)
    worst = 0.0
    for i in range(len(NODES)):
        devs = (
            abs(sel[i].throughput_tx_per_s - TARGETS["throughput_selective"][i]) / TARGETS["throughput_selective"][i],
            abs(full[i].throughput_tx_per_s - TARGETS["throughput_full"][i]) / TARGETS["throughput_full"][i],
            abs(sel[i].response_time_s - TARGETS["response_selective"][i]) / TARGETS["response_selective"][i],
            abs(full[i].response_time_s - TARGETS["response_full"][i]) / TARGETS["response_full"][i],
        )
        worst = max(worst, *devs)
    score = worst
    ratio50 = full[-1].throughput_tx_per_s / sel[-1].throughput_tx_per_s
    if ratio50 > 0.019:
        score += 5 * (ratio50 - 0.019)
    cycle = ol.tracking_cycle(nodes=24, costs=model, seed=42)["commit_time_s"]
    if cycle > 6.95:
        score += cycle - 6.95
    if cycle < 6.05:
        score += 6.05 - cycle
    peak = max(range(len(NODES)), key=lambda i: sel[i].throughput_tx_per_s)
    if not (20 <= NODES[peak] <= 30):
        score += 1.0
    return score


def main():
    # Starting constants: per-factor Lagrange cost, cheap point adds, hashing
    # around 4 ms/KB, sub-ms message handling on a 2 Mbps ISL budget.
    cost = [4.0, 0.05, 4.0, 0.6, 2000.0, 150.0]
    best_cost, best_score, best_profile = None, float("inf"), None

    for sweep_iter in range(int(sys.argv[1]) if len(sys.argv) > 1 else 3):
        scale, wait = solve_profile(cost)
        model = make_model(cost, scale, wait)
        score = objective(model)
        if score < best_score:
            best_cost, best_score, best_profile = list(cost), score, (scale, wait)
        print(f"iter {sweep_iter}: score {score:.4f} cost {cost}")

        # Coordinate polish on the shared constants.
        improved = False
        for idx in range(6):
            for factor in (0.6, 0.8, 1.25, 1.6):
                trial = list(cost)
                trial[idx] *= factor
                t_scale, t_wait = solve_profile(trial)
                t_score = objective(make_model(trial, t_scale, t_wait))
                if t_score < best_score:
                    best_cost, best_score, best_profile = trial, t_score, (t_scale, t_wait)
                    improved = True
        cost = list(best_cost)
        if not improved:
            break

    scale, wait = best_profile
    model = make_model(best_cost, scale, wait)
    ok, worst, stats = evaluate(model, verbose=True)
    print(f"final score {best_score:.4f} ok={ok}")

    out = ROOT / "data" / "cost_model_default.json"
    out.write_text(model.to_json())
    print(f"wrote {out}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
