"""credence: rule-based evidential reasoning with belief functions.

Belief lives on frames of discernment as mass over focal sets; rules
carry conditional probabilities and fuzzy antecedents; forward chaining
combines everything with Dempster's rule and keeps per-hypothesis
triggering records so consultations can explain themselves.
"""

from .engine import (
    BeliefInterval,
    Bca,
    Bpa,
    EngineSettings,
    Observation,
    TriggeredRule,
    TriggerRecord,
    WorkingMemory,
    all_diagnoses,
    bca,
    bel,
    combine,
    diagnose,
    eval_antecedent,
    forward_chain,
    interval,
    pl,
    rank_diagnoses,
    simple_support,
    update_evidence,
    vacuous,
)
from .errors import (
    CircularDefinitionError,
    CredenceError,
    DanglingReferenceError,
    DegeneratePriorError,
    DependencyCycleError,
    FrameMismatchError,
    InvalidQueryError,
    InvalidRuleError,
    KBParseError,
    NoParentError,
    TotalConflictError,
    UndefinedEvidenceError,
    UnknownElementError,
    UnknownHypothesisError,
)
from .explain import (
    ExplanationNode,
    ParentLink,
    RuleContribution,
    expand,
    explain,
    explain_chain,
    render_text,
)
from .focal import (
    FocalSet,
    FrameSignature,
    cardinality,
    complement,
    decode,
    encode,
    intersect,
    is_empty,
    is_subset,
    union,
)
from .lang import (
    Diagnostic,
    EvidenceAssignment,
    EvidenceEntry,
    SourceSpan,
    parse_evidence,
    parse_kb,
    serialize_kb,
)
from .model import (
    Frame,
    Hypothesis,
    KnowledgeBase,
    ResolvedClause,
    RoleDescriptor,
    Rule,
    load_evidence,
    load_kb,
    role_consistency_check,
    validate_evidence,
    wire,
)

__version__ = "0.1.0"

__all__ = [
    "BeliefInterval",
    "Bca",
    "Bpa",
    "CircularDefinitionError",
    "CredenceError",
    "DanglingReferenceError",
    "DegeneratePriorError",
    "DependencyCycleError",
    "Diagnostic",
    "EngineSettings",
    "EvidenceAssignment",
    "EvidenceEntry",
    "ExplanationNode",
    "FocalSet",
    "Frame",
    "FrameMismatchError",
    "FrameSignature",
    "Hypothesis",
    "InvalidQueryError",
    "InvalidRuleError",
    "KBParseError",
    "KnowledgeBase",
    "NoParentError",
    "Observation",
    "ParentLink",
    "ResolvedClause",
    "RoleDescriptor",
    "Rule",
    "RuleContribution",
    "SourceSpan",
    "TotalConflictError",
    "TriggerRecord",
    "TriggeredRule",
    "UndefinedEvidenceError",
    "UnknownElementError",
    "UnknownHypothesisError",
    "WorkingMemory",
    "all_diagnoses",
    "bca",
    "bel",
    "cardinality",
    "combine",
    "complement",
    "decode",
    "diagnose",
    "encode",
    "eval_antecedent",
    "expand",
    "explain",
    "explain_chain",
    "forward_chain",
    "intersect",
    "interval",
    "is_empty",
    "is_subset",
    "load_evidence",
    "load_kb",
    "parse_evidence",
    "parse_kb",
    "pl",
    "rank_diagnoses",
    "render_text",
    "role_consistency_check",
    "serialize_kb",
    "simple_support",
    "union",
    "update_evidence",
    "vacuous",
    "validate_evidence",
    "wire",
]
