"""Pure-Python combination kernel.

Reference implementation of the hot numeric loops; also the fallback
used when the compiled extension is unavailable and the only path for
frames wider than 64 bits (codes no longer fit a machine word there).
Must stay semantically identical to _kernel.pyx.
"""

from __future__ import annotations


def combine_masses(
    a: dict[int, float], b: dict[int, float], tol: float
) -> tuple[dict[int, float] | None, float]:
    """Orthogonal sum of two mass assignments keyed by subset code.

    Returns (result, K) where K is the conflict mass; result is None when
    K >= 1 - tol (total conflict, no renormalization possible).  Empty
    intersections feed K only; zero-mass keys are dropped from the result.
    """
    conflict = 0.0
    acc: dict[int, float] = {}
    for ca, ma in a.items():
        for cb, mb in b.items():
            c = ca & cb
            w = ma * mb
            if c:
                acc[c] = acc.get(c, 0.0) + w
            else:
                conflict += w
    if conflict >= 1.0 - tol:
        return None, conflict
    norm = 1.0 / (1.0 - conflict)
    return {c: m * norm for c, m in acc.items() if m > 0.0}, conflict


def bel_of(masses: dict[int, float], target: int) -> float:
    """Total mass committed to subsets of `target`."""
    total = 0.0
    for code, m in masses.items():
        if code & target == code:
            total += m
    return total
