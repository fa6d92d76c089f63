"""Benchmark the compiled simplex kernel against the numpy fallback.

Times raw LP relaxations of the cycle polytope and a full synthesis
sweep with each backend.  Run from the repo root:

    python benchmarks/bench_kernels.py [--n 20]
"""

import argparse
import time

import numpy as np

from gaitgraph._kernels import pure
from gaitgraph.graph import build_complete_digraph
from gaitgraph.learning import synthetic_weights
from gaitgraph.synthesis import Goal, SynthesisConfig, synthesize

try:
    from gaitgraph._kernels import _simplex as compiled
except ImportError:
    compiled = None


def lp_instances(count, seed=0):
    g = build_complete_digraph(4, 2)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        m = g.m
        theta = rng.normal(0, 0.2, m)
        c = rng.normal(size=m)
        eps = rng.uniform(0.05, 0.5)
        A_le = np.vstack(
            [g.B_i.astype(float), theta[None, :], -theta[None, :], -np.ones((1, m))]
        )
        b_le = np.concatenate([np.ones(g.n), [eps, eps, -2.0]])
        q = A_le.shape[0]
        A = np.zeros((g.n + q, m + q))
        A[: g.n, :m] = g.B
        A[g.n :, :m] = A_le
        A[g.n :, m:] = np.eye(q)
        b = np.concatenate([np.zeros(g.n), b_le])
        u = np.concatenate([np.ones(m), np.full(q, np.inf)])
        out.append((A, b, np.concatenate([c, np.zeros(q)]), u))
    return out


def bench_lp(kernel, instances):
    t0 = time.perf_counter()
    objs = []
    for A, b, c, u in instances:
        status, _, obj = kernel(A, b, c, u)
        objs.append(obj if status == 0 else None)
    return time.perf_counter() - t0, objs


def bench_sweep(kernel, n_samples):
    g = build_complete_digraph(4, 2)
    w = synthetic_weights(g, seed=42)
    config = SynthesisConfig(
        goal=Goal.TRANSLATION, n_samples=n_samples, max_cuts=50, eps_theta=0.15
    )
    t0 = time.perf_counter()
    gaits, _ = synthesize(w, config, np.random.default_rng(1), kernel=kernel)
    return time.perf_counter() - t0, len(gaits)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=20,
                        help="sweep samples for the synthesis benchmark")
    parser.add_argument("--lps", type=int, default=200,
                        help="raw LP relaxations to solve")
    args = parser.parse_args()

    instances = lp_instances(args.lps)
    t_pure, ref = bench_lp(pure.simplex_bounded, instances)
    print(f"raw LP x{args.lps} (n=16 cycle polytope)")
    print(f"  pure numpy : {t_pure:.3f}s  ({1e3 * t_pure / args.lps:.2f} ms/LP)")
    if compiled is not None:
        t_comp, objs = bench_lp(compiled.simplex_bounded, instances)
        agree = all(
            (a is None) == (b is None) or abs(a - b) < 1e-7
            for a, b in zip(ref, objs)
        )
        print(f"  compiled   : {t_comp:.3f}s  ({1e3 * t_comp / args.lps:.2f} ms/LP)"
              f"  speedup x{t_pure / t_comp:.1f}  objectives agree: {agree}")
    else:
        print("  compiled   : extension not built")

    t_pure, k = bench_sweep(pure.simplex_bounded, args.n)
    print(f"synthesis sweep n=16, N={args.n}, L=50 (translation goal)")
    print(f"  pure numpy : {t_pure:.2f}s  ({k} gaits)")
    if compiled is not None:
        t_comp, k = bench_sweep(compiled.simplex_bounded, args.n)
        print(f"  compiled   : {t_comp:.2f}s  ({k} gaits)  "
              f"speedup x{t_pure / t_comp:.1f}")


if __name__ == "__main__":
    main()
