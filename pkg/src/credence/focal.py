"""Bit-vector encoding of frame subsets and the set algebra built on it.

A frame is an ordered list of mutually exclusive, exhaustive values; a
subset of a frame is stored as a Python int whose bit i is 1 exactly when
element i (in declaration order) belongs to the subset.  The int read as
an unsigned number is the subset's *code*, the canonical external name
used in serialized belief assignments.  Python ints are arbitrary-width,
so frames are not capped at machine-word size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import FrameMismatchError, UnknownElementError


@dataclass(frozen=True)
class FrameSignature:
    """Identity and element layout of a frame.

    Declaration order defines bit position: element i of `elements`
    occupies bit i of every code for this frame.
    """

    frame_id: str
    elements: tuple[str, ...]

    def __post_init__(self):
        if not self.elements:
            raise ValueError(f"frame {self.frame_id!r} declares no elements")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError(f"frame {self.frame_id!r} has duplicate element names")
        object.__setattr__(
            self, "_bit_of", {name: i for i, name in enumerate(self.elements)}
        )

    @property
    def width(self) -> int:
        return len(self.elements)

    @property
    def full_code(self) -> int:
        return (1 << self.width) - 1

    def bit_of(self, element: str) -> int:
        try:
            return self._bit_of[element]
        except KeyError:
            raise UnknownElementError(self.frame_id, element) from None

    def encode(self, members: Iterable[str]) -> FocalSet:
        """Encode a collection of element names as a focal set.

        Duplicates are idempotent; an unknown name raises
        UnknownElementError carrying the offending name.
        """
        code = 0
        for name in members:
            code |= 1 << self.bit_of(name)
        return FocalSet(self.frame_id, code, self.width)

    def decode(self, s: FocalSet) -> list[str]:
        """Element names of `s`, in declaration order."""
        if s.frame_id != self.frame_id or s.width != self.width:
            raise FrameMismatchError(
                f"focal set of frame {s.frame_id!r} (width {s.width}) does not "
                f"belong to frame {self.frame_id!r} (width {self.width})"
            )
        return [name for i, name in enumerate(self.elements) if (s.code >> i) & 1]

    def from_code(self, code: int) -> FocalSet:
        if not 0 <= code <= self.full_code:
            raise ValueError(
                f"code {code} out of range for frame {self.frame_id!r} "
                f"(width {self.width})"
            )
        return FocalSet(self.frame_id, code, self.width)

    def full_set(self) -> FocalSet:
        return FocalSet(self.frame_id, self.full_code, self.width)

    def empty_set(self) -> FocalSet:
        return FocalSet(self.frame_id, 0, self.width)


@dataclass(frozen=True)
class FocalSet:
    """A subset of a frame: the unit of all belief bookkeeping.

    `code` is both the bit vector and its serialized name (a decimal
    unsigned integer).  The empty set (code 0) is representable; layers
    that forbid it (mass assignments, hypothesis declarations) reject it
    themselves.
    """

    frame_id: str
    code: int
    width: int

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("focal set width must be positive")
        if not 0 <= self.code < (1 << self.width):
            raise ValueError(f"code {self.code} does not fit in {self.width} bits")

    def _check_mate(self, other: FocalSet) -> None:
        if self.frame_id != other.frame_id or self.width != other.width:
            raise FrameMismatchError(
                f"operands belong to different frames: "
                f"{self.frame_id!r}/{self.width} vs {other.frame_id!r}/{other.width}"
            )

    def __and__(self, other: FocalSet) -> FocalSet:
        self._check_mate(other)
        return FocalSet(self.frame_id, self.code & other.code, self.width)

    def __or__(self, other: FocalSet) -> FocalSet:
        self._check_mate(other)
        return FocalSet(self.frame_id, self.code | other.code, self.width)

    def __invert__(self) -> FocalSet:
        full = (1 << self.width) - 1
        return FocalSet(self.frame_id, self.code ^ full, self.width)

    def __len__(self) -> int:
        return self.code.bit_count()

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        return f"FocalSet({self.frame_id}, {self.code:#x}/{self.width})"


def encode(frame: FrameSignature, members: Iterable[str]) -> FocalSet:
    return frame.encode(members)


def decode(s: FocalSet, frame: FrameSignature) -> list[str]:
    return frame.decode(s)


def intersect(a: FocalSet, b: FocalSet) -> FocalSet:
    return a & b


def union(a: FocalSet, b: FocalSet) -> FocalSet:
    return a | b


def complement(a: FocalSet) -> FocalSet:
    """Complement relative to the full frame."""
    return ~a


def is_subset(a: FocalSet, b: FocalSet) -> bool:
    a._check_mate(b)
    return a.code & b.code == a.code


def is_empty(a: FocalSet) -> bool:
    return a.code == 0


def cardinality(a: FocalSet) -> int:
    return a.code.bit_count()
