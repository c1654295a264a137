"""Compare the compiled and pure-Python term kernels.

    python3 benchmarks/bench_kernel.py [--repeat 3] [--n-max 6]

Times raw multiplication of random term dicts and full identity construction
plus comparison, once per available backend, and prints the best of
``--repeat`` runs with the speedup.
"""
import argparse
import random
import time

from ncabel import kernel
from ncabel.freealg import Polynomial, RingSpec
from ncabel.identities import IdentityCase, Setup, build_side


def _random_poly(rng, ring, terms, word, central):
    out = {}
    for _ in range(terms):
        w = tuple(rng.randrange(len(ring.noncommuting)) for _ in range(rng.randint(0, word)))
        c = tuple(sorted(rng.randrange(len(ring.central)) for _ in range(rng.randint(0, central))))
        out[(c, w)] = rng.randint(-9, 9) or 1
    return Polynomial(ring, out)


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def _verify(case):
    setup = Setup(case.n, case.model)
    lhs = build_side(setup, case, "lhs")
    rhs = build_side(setup, case, "rhs")
    assert (lhs - rhs).is_zero()


def workloads(n_max):
    ring = RingSpec(("X", "Y", "x1", "x2", "x3"), ("c", "d"))
    rng = random.Random(0)
    a = _random_poly(rng, ring, 400, 5, 3)
    b = _random_poly(rng, ring, 400, 5, 3)
    yield "mul 400x400 terms", lambda: a * b
    for name in ("thm1", "thm2", "thm5"):
        case = IdentityCase(name, n_max)
        yield f"{name} n={n_max}", lambda case=case: _verify(case)
    case = IdentityCase("hurwitz1", n_max + 2)
    yield f"hurwitz1 n={n_max + 2}", lambda: _verify(case)


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--n-max", type=int, default=6)
    args = parser.parse_args()
    backends = kernel.available_backends()
    print("workload".ljust(22) + "".join(f"{b + ' s':>12}" for b in backends) + "     speedup")
    for label, fn in workloads(args.n_max):
        row = {}
        for b in backends:
            with kernel.use_backend(b):
                row[b] = _best(fn, args.repeat)
        line = label.ljust(22) + "".join(f"{row[b]:>12.3f}" for b in backends)
        if "compiled" in row and "python" in row:
            line += f"{row['python'] / row['compiled']:>11.2f}x"
        print(line)


if __name__ == "__main__":
    main()
