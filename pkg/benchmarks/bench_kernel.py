"""Compare the compiled combination kernel with the pure-Python one.

Times repeated orthogonal sums and belief queries over random mass
functions at several frame widths, printing a table with the speedup.
The compiled kernel only covers widths up to 64 bits; wider rows report
the pure path alone.

Run from the repository root:

    python benchmarks/bench_kernel.py [--repeats N] [--focal K]
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from credence import _kernel_py
from credence.kernel import HAVE_COMPILED, _WORD_BITS, _compiled


def random_masses(
    rng: random.Random, width: int, focal_count: int
) -> dict[int, float]:
    full = (1 << width) - 1
    codes = set()
    while len(codes) < focal_count:
        codes.add(rng.randint(1, full))
    weights = [rng.uniform(0.05, 1.0) for _ in codes]
    total = sum(weights) / 0.9
    masses = {c: w / total for c, w in zip(codes, weights)}
    masses[full] = 1.0 - sum(masses.values())
    return masses


def time_fn(fn, repeats: int) -> float:
    """Best-of-five median wall time for `repeats` calls of fn."""
    samples = []
    for _ in range(5):
        started = time.perf_counter()
        for _ in range(repeats):
            fn()
        samples.append((time.perf_counter() - started) / repeats)
    return statistics.median(samples)


def bench_width(width: int, focal_count: int, repeats: int) -> list[str]:
    rng = random.Random(width * 1000 + focal_count)
    a = random_masses(rng, width, focal_count)
    b = random_masses(rng, width, focal_count)
    target = rng.randint(1, (1 << width) - 1)
    combined, _ = _kernel_py.combine_masses(a, b, 1e-12)

    rows = []
    pure_combine = time_fn(
        lambda: _kernel_py.combine_masses(a, b, 1e-12), repeats
    )
    pure_bel = time_fn(lambda: _kernel_py.bel_of(combined, target), repeats)

    if HAVE_COMPILED and width <= _WORD_BITS:
        comp_combine = time_fn(
            lambda: _compiled.combine_masses(a, b, 1e-12), repeats
        )
        comp_bel = time_fn(
            lambda: _compiled.bel_of(combined, target), repeats
        )
        check, _ = _compiled.combine_masses(a, b, 1e-12)
        worst = max(
            abs(check.get(c, 0.0) - combined.get(c, 0.0))
            for c in set(check) | set(combined)
        )
        assert worst < 1e-12, f"kernels disagree at width {width}: {worst}"
        rows.append(
            f"{width:>5} {focal_count:>6}  combine "
            f"{pure_combine * 1e6:>10.2f} {comp_combine * 1e6:>10.2f} "
            f"{pure_combine / comp_combine:>7.2f}x"
        )
        rows.append(
            f"{width:>5} {focal_count:>6}  bel     "
            f"{pure_bel * 1e6:>10.2f} {comp_bel * 1e6:>10.2f} "
            f"{pure_bel / comp_bel:>7.2f}x"
        )
    else:
        rows.append(
            f"{width:>5} {focal_count:>6}  combine "
            f"{pure_combine * 1e6:>10.2f} {'n/a':>10} {'':>8}"
        )
        rows.append(
            f"{width:>5} {focal_count:>6}  bel     "
            f"{pure_bel * 1e6:>10.2f} {'n/a':>10} {'':>8}"
        )
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=2000)
    parser.add_argument(
        "--focal",
        type=int,
        default=None,
        help="focal sets per operand (default: scale with width)",
    )
    args = parser.parse_args()

    print(f"compiled kernel available: {HAVE_COMPILED}")
    print()
    header = (
        f"{'width':>5} {'focal':>6}  {'op':<7} "
        f"{'pure (us)':>10} {'comp (us)':>10} {'speedup':>8}"
    )
    print(header)
    print("-" * len(header))
    for width in (6, 19, 64, 128):
        focal = args.focal or min(2 ** width - 1, max(8, width))
        for line in bench_width(width, focal, args.repeats):
            print(line)


if __name__ == "__main__":
    main()
