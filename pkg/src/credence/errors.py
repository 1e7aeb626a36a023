"""Error taxonomy shared across the package.

Every domain error derives from CredenceError so callers can catch the
whole family at once (the CLI and HTTP service both do).
"""

from __future__ import annotations


class CredenceError(Exception):
    """Base class for all domain errors raised by this package."""


class UnknownElementError(CredenceError):
    """A name was used that is not an element of the frame."""

    def __init__(self, frame_id: str, element: str):
        super().__init__(f"frame {frame_id!r} has no element {element!r}")
        self.frame_id = frame_id
        self.element = element


class FrameMismatchError(CredenceError):
    """Two operands that must share a frame do not."""


class DanglingReferenceError(CredenceError):
    """A declaration refers to a frame, hypothesis, or rule that does not exist."""

    def __init__(self, ref: str, context: str = ""):
        where = f" (in {context})" if context else ""
        super().__init__(f"reference to undeclared object {ref!r}{where}")
        self.ref = ref


class CircularDefinitionError(CredenceError):
    """A hypothesis member expression refers back to itself."""


class InvalidRuleError(CredenceError):
    """A rule violates a structural invariant (mass bound, empty target, ...)."""


class UndefinedEvidenceError(CredenceError):
    """An antecedent atom refers to a frame with no belief state."""

    def __init__(self, frame_id: str):
        super().__init__(f"frame {frame_id!r} has no belief state (no evidence or inference)")
        self.frame_id = frame_id


class TotalConflictError(CredenceError):
    """Dempster combination was attempted on totally conflicting operands."""

    def __init__(self, message: str, rule_id: str | None = None):
        super().__init__(message)
        self.rule_id = rule_id


class DependencyCycleError(CredenceError):
    """The frame dependency graph induced by the rules contains a cycle."""

    def __init__(self, cycle: list[str]):
        super().__init__("cyclic frame dependencies: " + " -> ".join(cycle))
        self.cycle = cycle


class InvalidQueryError(CredenceError):
    """A belief query was made against an invalid set (e.g. the empty set)."""


class DegeneratePriorError(CredenceError):
    """A certainty redistribution hit a zero-prior element inside a focal set."""

    def __init__(self, frame_id: str, element: str):
        super().__init__(
            f"element {element!r} of frame {frame_id!r} has zero prior "
            "but appears in a focal set"
        )
        self.frame_id = frame_id
        self.element = element


class UnknownHypothesisError(CredenceError):
    """A hypothesis name does not denote a declared hypothesis."""

    def __init__(self, name: str):
        super().__init__(f"unknown hypothesis {name!r}")
        self.name = name


class NoParentError(CredenceError):
    """Explanation expansion was requested at a hypothesis with no superclass."""


class KBParseError(CredenceError):
    """Raised by convenience loaders when a source file has diagnostics."""

    def __init__(self, diagnostics):
        super().__init__("\n".join(str(d) for d in diagnostics))
        self.diagnostics = list(diagnostics)
