#!/usr/bin/env python3
"""
Benchmark the geometry-width sweep.
Times a full lambda x l maxima map for each worker count, checks that every
worker count gives the same matrix bit for bit, and logs the results to a
timestamped file.
Usage:
    python benchmark_sweep.py [--points 200] [--workers 1 2 4]
"""
import argparse
import time
from datetime import datetime
from typing import Dict, List

import numpy as np

from qbgeom.models import GridSpec, ModelParams
from qbgeom.sweep import sweep_geometry_width

LOG_FILE = f"benchmark_results_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"
TARGET_SECONDS = 10.0


class SweepBenchmark:
    def __init__(self, points: int, steps: int, log_file: str):
        self.points = points
        self.log_file = log_file
        self.params = ModelParams.from_ratios(n_steps=steps)
        self.l_grid = GridSpec(
            axis="l_over_lambda0", min=0.0, max=1.0, n_points=points
        )
        self.lambda_grid = GridSpec(
            axis="lambda_over_gamma",
            min=0.02,
            max=1.0,
            n_points=points,
            spacing="log",
        )

    def log(self, message: str, also_print: bool = True):
        """Log message to file and optionally print to console."""
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        log_entry = f"[{timestamp}] {message}"

        with open(self.log_file, "a", encoding="utf-8") as f:
            f.write(log_entry + "\n")

        if also_print:
            print(log_entry)

    def time_sweep(self, workers: int) -> Dict[str, object]:
        """Run one sweep and return its timing."""
        self.log(f"Sweeping {self.points}x{self.points} with {workers} worker(s)...")
        start = time.perf_counter()
        result = sweep_geometry_width(
            self.params,
            self.l_grid,
            self.lambda_grid,
            observable="energy",
            workers=workers,
        )
        elapsed = time.perf_counter() - start
        finite = bool(np.isfinite(result.values).all())
        mark = "✅" if finite else "❌"
        if finite and elapsed > TARGET_SECONDS:
            mark = "⚠️"
        self.log(f"{mark} {workers} worker(s): {elapsed:.2f}s, finite={finite}")
        return {"workers": workers, "elapsed": elapsed, "values": result.values}

    def run_full_benchmark(self, worker_counts: List[int]):
        """Run the benchmark for every worker count."""
        self.log("=" * 60)
        self.log("Starting geometry-width sweep benchmark")
        self.log("=" * 60)

        runs = [self.time_sweep(workers) for workers in worker_counts]

        self.log("\n" + "=" * 60)
        self.log("Benchmark Summary")
        self.log("=" * 60)

        baseline = runs[0]
        for run in runs:
            speedup = baseline["elapsed"] / run["elapsed"] if run["elapsed"] else 0.0
            self.log(
                f"workers={run['workers']}: {run['elapsed']:.2f}s "
                f"(speedup {speedup:.2f}x)"
            )

        identical = all(
            run["values"].tobytes() == baseline["values"].tobytes() for run in runs
        )
        if identical:
            self.log("✅ All worker counts produced identical matrices")
        else:
            self.log("❌ Worker counts disagree: sweep is not deterministic")

        self.log(f"\nBenchmark completed. Results logged to: {self.log_file}")
        return identical


def main():
    """Main function to run the sweep benchmark."""
    parser = argparse.ArgumentParser(description="Benchmark the maxima sweep")
    parser.add_argument("--points", type=int, default=200)
    parser.add_argument("--steps", type=int, default=5000)
    parser.add_argument("--workers", type=int, nargs="+", default=[1, 2, 4])
    args = parser.parse_args()

    print("qbgeom Sweep Benchmark")
    print("=" * 40)
    print(f"Logging results to: {LOG_FILE}")
    print("Starting benchmark...\n")

    benchmark = SweepBenchmark(args.points, args.steps, LOG_FILE)
    if not benchmark.run_full_benchmark(args.workers):
        raise SystemExit(1)


if __name__ == "__main__":
    main()
