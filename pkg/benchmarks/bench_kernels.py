"""Time the jit-compiled kernels against the pure-Python fallback.

Runs itself twice in subprocesses, once normally and once with
DILUTETL_NO_JIT=1, exercising the same user-facing entry points:
the batched diagram product table, F_p echelon ranks and integer
echelon ranks on bar-resolution differentials.

    python benchmarks/bench_kernels.py            # prints the table
    python benchmarks/bench_kernels.py --inner    # one timing pass
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import time


def timing_pass() -> dict:
    from dilutetl import _kernels
    from dilutetl.diagrams import product_table
    from dilutetl.homalg import bar_differential_csc, _restricted_table
    from dilutetl.diagrams import augmentation_ideal_indices

    out = {"jit": not _kernels.NO_JIT}

    # warm any compilation so the table shows steady-state cost
    product_table(2)

    t0 = time.perf_counter()
    product_table(4)
    out["product_table_n4"] = time.perf_counter() - t0

    ideal = augmentation_ideal_indices(3)
    res_sub, alpha_sub = _restricted_table(3, ideal)
    indptr, rowidx, vals, nrows = bar_differential_csc(
        len(ideal), res_sub, alpha_sub, 1, 3)
    # warm
    _kernels.fp_rank(indptr[:50], rowidx[: int(indptr[49])],
                     vals[: int(indptr[49])], nrows, 5)
    t0 = time.perf_counter()
    out["fp_rank_bar_n3_d3"] = None
    r = _kernels.fp_rank(indptr, rowidx, vals, nrows, 5)
    out["fp_rank_bar_n3_d3"] = time.perf_counter() - t0
    out["fp_rank_value"] = r

    t0 = time.perf_counter()
    r2 = _kernels.int_rank(indptr, rowidx, list(vals), nrows)
    out["int_rank_bar_n3_d3"] = time.perf_counter() - t0
    out["int_rank_value"] = r2
    return out


def main() -> int:
    if "--inner" in sys.argv:
        # cache the product table build once so both passes measure the
        # kernel, not first-run compilation
        print(json.dumps(timing_pass()))
        return 0
    rows = []
    for no_jit in ("0", "1"):
        env = dict(os.environ, DILUTETL_NO_JIT=no_jit)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--inner"],
            capture_output=True, text=True, env=env, check=True)
        rows.append(json.loads(proc.stdout.strip().splitlines()[-1]))
    jit, py = (rows[0], rows[1]) if rows[0]["jit"] else (rows[1], rows[0])
    if jit["fp_rank_value"] != py["fp_rank_value"] or \
            jit["int_rank_value"] != py["int_rank_value"]:
        print("RANK MISMATCH between paths", file=sys.stderr)
        return 1
    keys = ["product_table_n4", "fp_rank_bar_n3_d3", "int_rank_bar_n3_d3"]
    print(f"{'kernel':<24}{'jit (s)':>12}{'python (s)':>14}{'speedup':>10}")
    for k in keys:
        a, b = jit[k], py[k]
        print(f"{k:<24}{a:>12.3f}{b:>14.3f}{b / a:>10.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
