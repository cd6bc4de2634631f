"""Compare the numba kernels with the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Times exhaustive search on random instances and the polymorphism test on
closed relations, checks that both backends agree, and prints one row per
workload.  The first numba call per kernel includes compilation and is
reported separately.
"""
import argparse
import time

from wmaxsol import Domain
from wmaxsol.algebra import is_polymorphism, max_op
from wmaxsol.algebra.ops import closure
from wmaxsol.sampling import random_genmax_language, random_instance, rng_for
from wmaxsol.solve import brute_force


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bf_workloads(seed):
    rng = rng_for(seed)
    out = []
    for size, n_vars in ((3, 9), (4, 8), (4, 10), (5, 9)):
        D = Domain.range(size)
        lang, _ = random_genmax_language(rng, D, n_rels=3, max_arity=2)
        inst = random_instance(rng, lang, n_vars, n_vars // 2)
        out.append((f"brute_force |D|={size} |V|={n_vars}", inst))
    return out


def poly_workloads(seed):
    rng = rng_for(seed)
    out = []
    for size, arity, seeds in ((4, 4, 12), (5, 5, 20), (6, 5, 40), (5, 6, 40)):
        D = Domain.range(size)
        f = max_op(D)
        R = closure(f, [tuple(rng.choice(D.elements) for _ in range(arity)) for _ in range(seeds)], arity)
        out.append((f"is_polymorphism |D|={size} arity={arity} |R|={len(R)}", (f, R)))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    bf = bf_workloads(args.seed)
    poly = poly_workloads(args.seed)
    # warm-up: compile every numba kernel once
    t0 = time.perf_counter()
    brute_force(bf[0][1], backend="numba")
    is_polymorphism(*poly[0][1], backend="numba")
    print(f"numba compile + first call: {time.perf_counter() - t0:.2f} s\n")

    print(f"{'workload':<48} {'numba ms':>9} {'numpy ms':>9} {'speedup':>8}")
    for name, inst in bf:
        tn, rn = _time(lambda: brute_force(inst, backend="numba"), args.repeat)
        tp, rp = _time(lambda: brute_force(inst, backend="numpy"), args.repeat)
        assert (rn.status, rn.measure, rn.assignment) == (rp.status, rp.measure, rp.assignment)
        print(f"{name:<48} {1e3 * tn:>9.2f} {1e3 * tp:>9.2f} {tp / tn:>7.1f}x")
    for name, (f, R) in poly:
        tn, rn = _time(lambda: is_polymorphism(f, R, backend="numba"), args.repeat)
        tp, rp = _time(lambda: is_polymorphism(f, R, backend="numpy"), args.repeat)
        assert rn == rp
        print(f"{name:<48} {1e3 * tn:>9.2f} {1e3 * tp:>9.2f} {tp / tn:>7.1f}x")


if __name__ == "__main__":
    main()
