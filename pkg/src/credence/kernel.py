"""Kernel selection: compiled extension when available, pure Python otherwise.

The compiled kernel only handles codes that fit an unsigned 64-bit word,
so dispatch is per call: wide frames always take the pure path.  Set
CREDENCE_PURE_KERNEL=1 to force the pure path globally (benchmarking,
debugging a suspected kernel discrepancy).
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("CREDENCE_PURE_KERNEL"):
    _compiled = None
else:
    try:
        from . import _kernel as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

HAVE_COMPILED = _compiled is not None

_WORD_BITS = 64


def active_kernel_name(width: int = 1) -> str:
    return "compiled" if (_compiled is not None and width <= _WORD_BITS) else "pure-python"


def combine_masses(
    a: dict[int, float], b: dict[int, float], tol: float, width: int
) -> tuple[dict[int, float] | None, float]:
    """Orthogonal sum of two {code: mass} dicts over a `width`-bit frame.

    Returns (result, conflict); result is None on total conflict
    (conflict >= 1 - tol).
    """
    if _compiled is not None and width <= _WORD_BITS:
        return _compiled.combine_masses(a, b, tol)
    return _kernel_py.combine_masses(a, b, tol)


def bel_of(masses: dict[int, float], target: int, width: int) -> float:
    """Total mass committed to subsets of the code `target`."""
    if _compiled is not None and width <= _WORD_BITS:
        return _compiled.bel_of(masses, target)
    return _kernel_py.bel_of(masses, target)
