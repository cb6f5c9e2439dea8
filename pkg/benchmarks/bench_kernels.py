"""Benchmark the JIT-compiled phase-ODE integrator against the pure fallback.

Runs the same fixed-step RK4 integration (the verification hot loop) in this
process, once with the compiled kernel and once in a subprocess with
DHYM_RULED_NO_NUMBA=1, and reports per-run timings.

Usage: python benchmarks/bench_kernels.py [--steps N] [--repeat R]
"""

import argparse
import os
import subprocess
import sys
import time


SNIPPET = """
import time
import numpy as np
from dhym_ruled import _kernels
cos_t, sin_t = 1.0 / 5**0.5, 2.0 / 5**0.5
n = {steps}
# warm-up (compilation, if any)
_kernels.rk4_phase_ode(cos_t, sin_t, 7.0, -2.0, 5.001, n)
times = []
for _ in range({repeat}):
    t0 = time.perf_counter()
    _kernels.rk4_phase_ode(cos_t, sin_t, 7.0, -2.0, 5.001, n)
    times.append(time.perf_counter() - t0)
print(_kernels.USING_NUMBA, min(times))
"""


def run(env_extra, steps, repeat):
    env = dict(os.environ, **env_extra)
    out = subprocess.run(
        [sys.executable, "-c", SNIPPET.format(steps=steps, repeat=repeat)],
        capture_output=True, text=True, env=env, check=True,
    ).stdout.split()
    return out[0] == "True", float(out[1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    used, t_jit = run({}, args.steps, args.repeat)
    if not used:
        print("numba unavailable; only the fallback timing is meaningful")
    _, t_fb = run({"DHYM_RULED_NO_NUMBA": "1"}, args.steps, args.repeat)

    print(f"steps per run:    {args.steps}")
    print(f"jit kernel:       {t_jit * 1e3:9.3f} ms")
    print(f"pure fallback:    {t_fb * 1e3:9.3f} ms")
    if used and t_jit > 0:
        print(f"speedup:          {t_fb / t_jit:9.1f}x")


if __name__ == "__main__":
    main()
