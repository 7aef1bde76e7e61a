"""Compare the compiled and pure kernel backends on the operations that
dominate key generation: row reduction and matrix products mod q.

Usage: python3 benchmarks/bench_kernels.py [--repeats N] [--skip-keygen]

The micro section times rref_mod and matmul_mod from both backends on the
matrix shapes key generation actually produces, asserting bit-identical
results along the way. The keygen section runs the full pipeline twice in
subprocesses, once per XGAB_KERNELS setting, so each run gets the backend
it claims to measure.
"""

import argparse
import subprocess
import sys
import time

import numpy as np

from xgab import _kernels_pure

try:
    from xgab import _kernels_c
except ImportError:
    _kernels_c = None

# (label, q, rows, cols): rref shapes mirror the systematic-form step of
# key generation at the bundled 128-bit parameter rows
RREF_SHAPES = [
    ("Proposal I  (13,18,18,12,16)", 13, 180, 288),
    ("Proposal I  (2,31,31,19,29)", 2, 527, 899),
    ("Proposal II (7,35,35,23,2)", 7, 805, 1225),
]
MATMUL_SHAPES = [
    ("scramble    180x180 * 180x288 mod 13", 13, 180, 180, 288),
    ("scramble    805x805 * 805x1225 mod 7", 7, 805, 805, 1225),
]

KEYGEN_SNIPPET = """
import time
import numpy as np
from xgab import pke
from xgab.backend import backend_name

rng = np.random.default_rng(0)
params = pke.ParamsI(13, 18, 18, 12, 16)
t0 = time.perf_counter()
pk, sk = pke.keygen_i(params, rng)
t1 = time.perf_counter()
for _ in range(20):
    x = rng.integers(0, params.q, size=params.K)
    assert (pke.decrypt_i(sk, pke.encrypt_i(pk, x, rng)) == x).all()
t2 = time.perf_counter()
print(f"{backend_name()},{t1 - t0:.3f},{(t2 - t1) / 20:.4f}")
"""


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def micro(repeats):
    rng = np.random.default_rng(0)
    print(f"{'operation':44s} {'pure':>9s} {'compiled':>9s} {'speedup':>8s}")
    for label, q, rows, cols in RREF_SHAPES:
        M = rng.integers(0, q, size=(rows, cols))
        t_pure, out_pure = _time(lambda: _kernels_pure.rref_mod(M, q), repeats)
        t_c, out_c = _time(lambda: _kernels_c.rref_mod(M, q), repeats)
        assert (out_pure[0] == out_c[0]).all() and out_pure[1] == out_c[1]
        print(f"rref   {label:37s} {t_pure:8.3f}s {t_c:8.3f}s {t_pure / t_c:7.1f}x")
    for label, q, a, b, c in MATMUL_SHAPES:
        A = rng.integers(0, q, size=(a, b))
        B = rng.integers(0, q, size=(b, c))
        t_pure, out_pure = _time(lambda: _kernels_pure.matmul_mod(A, B, q), repeats)
        t_c, out_c = _time(lambda: _kernels_c.matmul_mod(A, B, q), repeats)
        assert (out_pure == out_c).all()
        print(f"matmul {label:37s} {t_pure:8.3f}s {t_c:8.3f}s {t_pure / t_c:7.1f}x")


def keygen():
    print()
    print("full keygen + 20 round trips at Proposal I (13,18,18,12,16):")
    print(f"{'backend':>10s} {'keygen':>9s} {'round trip':>11s}")
    for choice in ("pure", "compiled"):
        proc = subprocess.run(
            [sys.executable, "-c", KEYGEN_SNIPPET],
            capture_output=True,
            text=True,
            env={"XGAB_KERNELS": choice, "PATH": "/usr/bin:/bin"},
        )
        if proc.returncode:
            sys.stderr.write(proc.stderr)
            raise SystemExit(f"keygen benchmark failed under XGAB_KERNELS={choice}")
        name, t_keygen, t_trip = proc.stdout.strip().split(",")
        assert name == choice
        print(f"{name:>10s} {float(t_keygen):8.3f}s {float(t_trip):10.4f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeats", type=int, default=3, help="best-of-N timing")
    ap.add_argument("--skip-keygen", action="store_true")
    args = ap.parse_args()
    if _kernels_c is None:
        raise SystemExit("compiled backend not importable; build it first (pip install -e .)")
    micro(args.repeats)
    if not args.skip_keygen:
        keygen()


if __name__ == "__main__":
    main()
