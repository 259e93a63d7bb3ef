"""Compare the compiled lattice-sum kernels with the numpy fallback.

Two levels are timed:

* kernel calls, importing ``gkpkit._kernels`` and ``gkpkit._fallback``
  side by side and checking that both return the same sums;
* end-to-end workloads, each run in a fresh interpreter with and without
  ``GKPKIT_PURE_PYTHON=1`` so that backend selection happens at import as it
  does for users.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--skip-end-to-end]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from gkpkit import _fallback

try:
    from gkpkit import _kernels
except ImportError:  # extension not built
    _kernels = None


def kernel_cases(points: int):
    """Named ``(function name, args)`` pairs sized like production calls."""
    rng = np.random.default_rng(7)
    z = rng.uniform(-1, 1, points) + 0.1j * rng.uniform(-1, 1, points)
    centers = np.zeros(points, dtype=np.int64)
    q = np.linspace(-20.0, 20.0, points)
    spikes = np.arange(-40, 41) * 0.8
    weights = np.exp(-spikes ** 2 / 40.0).astype(complex)
    return [
        ("theta_window", "theta_window", (0.25, -1 / 3, z, 0.3 + 1.2j, centers, 12)),
        ("poisson_window", "poisson_window", (1 / 6, 0.5, z, 0.1 + 0.05j, centers, 12)),
        ("riemann_window", "riemann_window",
         (0.5, 0.0, 0.0, 0.25, z, z[::-1].copy(), 1.5j, 0.2 + 0.1j, 1.1j, centers, centers, 8)),
        ("gauss_comb", "gauss_comb", (spikes, weights, 0.05, q)),
    ]


def _max_difference(a, b) -> float:
    return max(float(np.max(np.abs(np.asarray(x) - np.asarray(y)))) for x, y in zip(a, b))


def bench_kernels(points: int, repeat: int) -> None:
    print(f"kernel calls, {points} points, best of {repeat}")
    print(f"{'kernel':16s} {'compiled [ms]':>14s} {'python [ms]':>12s} {'speed-up':>9s} {'max |diff|':>11s}")
    for label, name, args in kernel_cases(points):
        py = getattr(_fallback, name)
        t_py = min(timeit.repeat(lambda: py(*args), number=1, repeat=repeat))
        if _kernels is None:
            print(f"{label:16s} {'n/a':>14s} {1e3 * t_py:12.3f}")
            continue
        cy = getattr(_kernels, name)
        t_cy = min(timeit.repeat(lambda: cy(*args), number=1, repeat=repeat))
        diff = _max_difference(cy(*args), py(*args))
        print(f"{label:16s} {1e3 * t_cy:14.3f} {1e3 * t_py:12.3f} {t_py / t_cy:9.1f} {diff:11.2e}")


# (setup, timed statement) pairs; imports and parameter set-up are not timed.
WORKLOADS = {
    "wigner riemann 201x201": (
        "from gkpkit.params import SymmetricParams, CodeLabel\n"
        "from gkpkit.wigner import PhaseSpaceGrid, wigner_grid\n"
        "p = SymmetricParams(0.05, CodeLabel(2, 0)).to_standard()\n"
        "g = PhaseSpaceGrid(-10, 10, -10, 10, 201, 201)\n",
        "wigner_grid(p, 0, 1, g, route='riemann')"),
    "wavefunction 200001 pts": (
        "import numpy as np\n"
        "from gkpkit.params import SymmetricParams, CodeLabel\n"
        "from gkpkit.states import position_amplitude\n"
        "p = SymmetricParams(0.02, CodeLabel(3, 1)).to_standard()\n"
        "x = np.linspace(-30, 30, 200001)\n",
        "position_amplitude(p, x, route='theta')"),
    "photon routes 6-14 dB": (
        "from gkpkit.params import SymmetricParams, CodeLabel, sigma2_from_db\n"
        "from gkpkit.observables import PHOTON_ROUTES, avg_photon\n"
        "ps = [SymmetricParams(sigma2_from_db(db), CodeLabel(2, 0)).to_standard()"
        " for db in (6, 8, 10, 14)]\n",
        "[avg_photon(p, r) for p in ps for r in PHOTON_ROUTES]"),
    "selftest": (
        "from gkpkit.selftest import run_checks\n",
        "assert all(r.passed for r in run_checks())"),
}


def _timed_run(setup: str, stmt: str, pure: bool) -> float:
    env = dict(os.environ)
    env.pop("GKPKIT_PURE_PYTHON", None)
    if pure:
        env["GKPKIT_PURE_PYTHON"] = "1"
    script = (setup + "import time\nt0 = time.perf_counter()\n" + stmt
              + "\nprint(time.perf_counter() - t0)\n")
    out = subprocess.run([sys.executable, "-c", script], env=env, check=True,
                         capture_output=True, text=True)
    return float(out.stdout.strip().splitlines()[-1])


def bench_end_to_end(repeat: int) -> None:
    print(f"\nend-to-end workloads, fresh interpreter, best of {repeat}")
    print(f"{'workload':26s} {'compiled [s]':>13s} {'python [s]':>11s} {'speed-up':>9s}")
    for label, (setup, stmt) in WORKLOADS.items():
        t_cy = min(_timed_run(setup, stmt, False) for _ in range(repeat))
        t_py = min(_timed_run(setup, stmt, True) for _ in range(repeat))
        print(f"{label:26s} {t_cy:13.3f} {t_py:11.3f} {t_py / t_cy:9.1f}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=4000, help="points per kernel call")
    parser.add_argument("--repeat", type=int, default=5, help="repetitions, best is reported")
    parser.add_argument("--skip-end-to-end", action="store_true")
    args = parser.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; timing the fallback only")
    bench_kernels(args.points, args.repeat)
    if not args.skip_end_to_end:
        bench_end_to_end(max(1, args.repeat // 2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
