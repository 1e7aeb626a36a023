"""Parser and serializer for the knowledge-base and patient-evidence formats.

KB files (.gkb) open with the version header ``gertis-kb 1`` and then hold
three kinds of declarations::

    frame <id> "<display name>" {
      elements: e1, e2, ... ;
      prior: uniform ;            # or: p1, p2, ... ; omitted = uniform
    }

    hypothesis <id> "<text>" in <frame-id> = <set-expr> [parent <hyp-id>] ;

    rule <id> {
      consequent: <frame-id> ;
      if: <antecedent> ;
      except: <antecedent> ;      # optional
      then: <set-expr> : <prob> [, ...] ;
      else: <set-expr> : <prob> [, ...] ;   # optional
      t-role: <effect> <hyp-id> ;           # optional
      nil-role: <effect> <hyp-id> ;         # optional
    }

Antecedents are parenthesized: ``(<frame-id> [<value>])`` with the value
defaulting to "present", ``(and e...)``, ``(or e...)``, ``(not e)``,
``(min <n> e...)`` (at least n hold), ``(max <n> e...)`` (at most n hold).
Set expressions are ``<hyp-id or element>``, ``(or s...)``, ``(not s)``;
they resolve to focal sets when the KB is wired.

Evidence files (.gev) hold one whitespace-separated observation per line:
``<frame> <element> [<degree>]`` with the degree defaulting to 1.0.
Comments run from "#" to end of line in both formats.

Parsing never throws on bad input: every problem becomes a Diagnostic with
a 1-based line/column span, and the KB parser resynchronizes at the next
declaration keyword so several errors surface in one pass.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Union

KB_FORMAT_NAME = "gertis-kb"
KB_FORMAT_VERSION = 1

ROLE_EFFECTS = ("supportive", "confirming", "adversary", "disconfirming")

RESERVED_WORDS = frozenset(
    {"frame", "hypothesis", "rule", "and", "or", "not", "min", "max"}
)


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int  # 1-based
    column: int  # 1-based

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    message: str
    span: SourceSpan

    def __str__(self) -> str:
        return f"{self.span}: {self.message}"


# --------------------------------------------------------------------------
# Abstract syntax


@dataclass(frozen=True)
class Atom:
    """Antecedent atom: belief that `frame_id` takes `value`."""

    frame_id: str
    value: str = "present"
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class And:
    items: tuple[AntecedentExpr, ...]
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Or:
    items: tuple[AntecedentExpr, ...]
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Not:
    item: AntecedentExpr
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class AtLeast:
    """Elastic constraint: at least `n` of `items` hold (the MIN operator)."""

    n: int
    items: tuple[AntecedentExpr, ...]
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class AtMost:
    """Elastic constraint: at most `n` of `items` hold (the MAX operator)."""

    n: int
    items: tuple[AntecedentExpr, ...]
    span: SourceSpan | None = field(default=None, compare=False)


AntecedentExpr = Union[Atom, And, Or, Not, AtLeast, AtMost]


@dataclass(frozen=True)
class SetAtom:
    """A hypothesis id or element name, resolved at wire time."""

    name: str
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SetOr:
    items: tuple[SetExpr, ...]
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SetNot:
    item: SetExpr
    span: SourceSpan | None = field(default=None, compare=False)


SetExpr = Union[SetAtom, SetOr, SetNot]


@dataclass(frozen=True)
class FrameDecl:
    id: str
    name: str
    elements: tuple[str, ...]
    prior: tuple[float, ...] | None  # None = uniform
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class HypothesisDecl:
    id: str
    text: str
    frame_id: str
    members: SetExpr
    parent: str | None
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Clause:
    target: SetExpr
    prob: float
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Role:
    effect: str  # one of ROLE_EFFECTS
    hypothesis: str
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class RuleDecl:
    id: str
    consequent: str
    if_expr: AntecedentExpr
    except_expr: AntecedentExpr | None
    then_clauses: tuple[Clause, ...]
    else_clauses: tuple[Clause, ...]
    t_role: Role | None
    nil_role: Role | None
    span: SourceSpan | None = field(default=None, compare=False)


Declaration = Union[FrameDecl, HypothesisDecl, RuleDecl]


@dataclass(frozen=True)
class EvidenceEntry:
    frame_id: str
    element: str
    degree: float
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class EvidenceAssignment:
    """Observed degrees of belief, at most one per (frame, element)."""

    entries: tuple[EvidenceEntry, ...] = ()

    def as_dict(self) -> dict[tuple[str, str], float]:
        return {(e.frame_id, e.element): e.degree for e in self.entries}

    def with_change(
        self, frame_id: str, element: str, degree: float | None
    ) -> EvidenceAssignment:
        """A new assignment with one observation set (or removed when None)."""
        kept = [
            e
            for e in self.entries
            if not (e.frame_id == frame_id and e.element == element)
        ]
        if degree is not None:
            kept.append(EvidenceEntry(frame_id, element, degree))
        return EvidenceAssignment(tuple(kept))


@dataclass
class ParseResult:
    declarations: list[Declaration]
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not self.diagnostics


@dataclass
class EvidenceResult:
    assignment: EvidenceAssignment
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not self.diagnostics


# --------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_-]*)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<badstr>"[^"\n]*)
  | (?P<punct>[{}():;,=])
    """,
    re.VERBOSE,
)

_PUNCT_KINDS = {
    "{": "LBRACE",
    "}": "RBRACE",
    "(": "LPAREN",
    ")": "RPAREN",
    ":": "COLON",
    ";": "SEMI",
    ",": "COMMA",
    "=": "EQ",
}


@dataclass(frozen=True)
class Token:
    kind: str  # ID NUM STR LBRACE RBRACE LPAREN RPAREN COLON SEMI COMMA EQ EOF
    text: str
    line: int
    column: int


def _tokenize(text: str, filename: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    line, col = 1, 1
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            diagnostics.append(
                Diagnostic(
                    f"unexpected character {text[pos]!r}",
                    SourceSpan(filename, line, col),
                )
            )
            pos += 1
            col += 1
            continue
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(lexeme)
        elif kind == "badstr":
            diagnostics.append(
                Diagnostic("unterminated string", SourceSpan(filename, line, col))
            )
            col += len(lexeme)
        else:
            if kind == "num":
                tokens.append(Token("NUM", lexeme, line, col))
            elif kind == "id":
                tokens.append(Token("ID", lexeme, line, col))
            elif kind == "str":
                tokens.append(Token("STR", lexeme, line, col))
            else:
                tokens.append(Token(_PUNCT_KINDS[lexeme], lexeme, line, col))
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("EOF", "", line, col))
    return tokens, diagnostics


def _unquote(raw: str) -> str:
    body = raw[1:-1]
    return body.replace('\\"', '"').replace("\\\\", "\\")


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


# --------------------------------------------------------------------------
# KB parser


class _ParseAbort(Exception):
    """Internal: unwind to the declaration boundary after a diagnostic."""


class _Parser:
    def __init__(self, tokens: list[Token], filename: str):
        self.tokens = tokens
        self.filename = filename
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []
        self.declarations: list[Declaration] = []
        self.seen_ids: dict[tuple[str, str], SourceSpan] = {}

    # -- primitives

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def span_of(self, tok: Token) -> SourceSpan:
        return SourceSpan(self.filename, tok.line, tok.column)

    def error(self, message: str, tok: Token) -> None:
        self.diagnostics.append(Diagnostic(message, self.span_of(tok)))

    def abort(self, message: str, tok: Token) -> _ParseAbort:
        self.error(message, tok)
        return _ParseAbort()

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.abort(f"expected {what}", tok)
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != "ID" or tok.text != word:
            raise self.abort(f"expected {word!r}", tok)
        return self.advance()

    def expect_name(self, what: str) -> Token:
        tok = self.expect("ID", what)
        if tok.text in RESERVED_WORDS:
            raise self.abort(f"{tok.text!r} is a reserved word", tok)
        return tok

    def expect_number(self, what: str) -> tuple[float, Token]:
        tok = self.expect("NUM", what)
        return float(tok.text), tok

    # -- entry

    def parse(self) -> None:
        self.parse_header()
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                return
            try:
                if tok.kind == "ID" and tok.text == "frame":
                    self.declarations.append(self.parse_frame())
                elif tok.kind == "ID" and tok.text == "hypothesis":
                    self.declarations.append(self.parse_hypothesis())
                elif tok.kind == "ID" and tok.text == "rule":
                    self.declarations.append(self.parse_rule())
                else:
                    raise self.abort(
                        "expected a declaration (frame, hypothesis, or rule)", tok
                    )
            except _ParseAbort:
                self.synchronize()

    def parse_header(self) -> None:
        tok = self.peek()
        if tok.kind != "ID" or tok.text != KB_FORMAT_NAME:
            self.error(
                f"expected header '{KB_FORMAT_NAME} {KB_FORMAT_VERSION}'", tok
            )
            return
        self.advance()
        vtok = self.peek()
        if vtok.kind != "NUM":
            self.error("expected format version number", vtok)
            return
        self.advance()
        if float(vtok.text) != KB_FORMAT_VERSION:
            self.error(
                f"unsupported format version {vtok.text} "
                f"(this build reads version {KB_FORMAT_VERSION})",
                vtok,
            )

    def synchronize(self) -> None:
        """Skip to the next declaration keyword so later errors still surface."""
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                return
            if tok.kind == "ID" and tok.text in ("frame", "hypothesis", "rule"):
                return
            self.advance()

    def note_id(self, kind: str, tok: Token) -> None:
        key = (kind, tok.text)
        prev = self.seen_ids.get(key)
        if prev is not None:
            self.error(
                f"duplicate {kind} id {tok.text!r} (first declared at "
                f"{prev.line}:{prev.column})",
                tok,
            )
        else:
            self.seen_ids[key] = self.span_of(tok)

    # -- declarations

    def parse_frame(self) -> FrameDecl:
        head = self.advance()  # 'frame'
        id_tok = self.expect_name("frame id")
        self.note_id("frame", id_tok)
        name_tok = self.expect("STR", "quoted display name")
        self.expect("LBRACE", "'{'")
        self.expect_keyword("elements")
        self.expect("COLON", "':'")
        elements: list[str] = []
        elements.append(self.expect_name("element name").text)
        while self.peek().kind == "COMMA":
            self.advance()
            elements.append(self.expect_name("element name").text)
        self.expect("SEMI", "';'")

        prior: tuple[float, ...] | None = None
        if self.peek().kind == "ID" and self.peek().text == "prior":
            self.advance()
            self.expect("COLON", "':'")
            if self.peek().kind == "ID" and self.peek().text == "uniform":
                self.advance()
            else:
                values: list[float] = []
                first_tok = self.peek()
                v, _ = self.expect_number("prior probability")
                values.append(v)
                while self.peek().kind == "COMMA":
                    self.advance()
                    v, _ = self.expect_number("prior probability")
                    values.append(v)
                if len(values) != len(elements):
                    self.error(
                        f"prior lists {len(values)} values for "
                        f"{len(elements)} elements",
                        first_tok,
                    )
                elif abs(sum(values) - 1.0) > 1e-9:
                    self.error(
                        f"prior sums to {sum(values)!r}, expected 1", first_tok
                    )
                prior = tuple(values)
            self.expect("SEMI", "';'")
        self.expect("RBRACE", "'}'")

        seen: set[str] = set()
        for el in elements:
            if el in seen:
                self.error(f"duplicate element name {el!r}", id_tok)
            seen.add(el)
        return FrameDecl(
            id_tok.text,
            _unquote(name_tok.text),
            tuple(elements),
            prior,
            self.span_of(head),
        )

    def parse_hypothesis(self) -> HypothesisDecl:
        head = self.advance()  # 'hypothesis'
        id_tok = self.expect_name("hypothesis id")
        self.note_id("hypothesis", id_tok)
        text_tok = self.expect("STR", "quoted display text")
        self.expect_keyword("in")
        frame_tok = self.expect_name("frame id")
        self.expect("EQ", "'='")
        members = self.parse_set_expr()
        parent: str | None = None
        if self.peek().kind == "ID" and self.peek().text == "parent":
            self.advance()
            parent = self.expect_name("parent hypothesis id").text
        self.expect("SEMI", "';'")
        return HypothesisDecl(
            id_tok.text,
            _unquote(text_tok.text),
            frame_tok.text,
            members,
            parent,
            self.span_of(head),
        )

    def parse_rule(self) -> RuleDecl:
        head = self.advance()  # 'rule'
        id_tok = self.expect_name("rule id")
        self.note_id("rule", id_tok)
        self.expect("LBRACE", "'{'")
        self.expect_keyword("consequent")
        self.expect("COLON", "':'")
        consequent = self.expect_name("frame id").text
        self.expect("SEMI", "';'")

        self.expect_keyword("if")
        self.expect("COLON", "':'")
        if_expr = self.parse_antecedent()
        self.expect("SEMI", "';'")

        except_expr: AntecedentExpr | None = None
        if self.peek().kind == "ID" and self.peek().text == "except":
            self.advance()
            self.expect("COLON", "':'")
            except_expr = self.parse_antecedent()
            self.expect("SEMI", "';'")

        self.expect_keyword("then")
        self.expect("COLON", "':'")
        then_clauses = self.parse_clauses()
        self.expect("SEMI", "';'")

        else_clauses: tuple[Clause, ...] = ()
        if self.peek().kind == "ID" and self.peek().text == "else":
            self.advance()
            self.expect("COLON", "':'")
            else_clauses = self.parse_clauses()
            self.expect("SEMI", "';'")

        t_role = nil_role = None
        if self.peek().kind == "ID" and self.peek().text == "t-role":
            self.advance()
            t_role = self.parse_role()
        if self.peek().kind == "ID" and self.peek().text == "nil-role":
            self.advance()
            nil_role = self.parse_role()
        self.expect("RBRACE", "'}'")

        for clauses, label in ((then_clauses, "then"), (else_clauses, "else")):
            total = sum(c.prob for c in clauses)
            if total > 1.0 + 1e-9:
                self.error(
                    f"{label} clause probabilities sum to {total!r} > 1",
                    id_tok,
                )
        return RuleDecl(
            id_tok.text,
            consequent,
            if_expr,
            except_expr,
            then_clauses,
            else_clauses,
            t_role,
            nil_role,
            self.span_of(head),
        )

    def parse_clauses(self) -> tuple[Clause, ...]:
        clauses = [self.parse_clause()]
        while self.peek().kind == "COMMA":
            self.advance()
            clauses.append(self.parse_clause())
        return tuple(clauses)

    def parse_clause(self) -> Clause:
        target = self.parse_set_expr()
        self.expect("COLON", "':'")
        prob, tok = self.expect_number("conditional probability")
        if not 0.0 < prob <= 1.0:
            self.error("probability out of range (must be in (0, 1])", tok)
        return Clause(target, prob, self.span_of(tok))

    def parse_role(self) -> Role:
        self.expect("COLON", "':'")
        eff_tok = self.expect("ID", "role effect")
        if eff_tok.text not in ROLE_EFFECTS:
            self.error(
                f"unknown role effect {eff_tok.text!r} "
                f"(expected one of: {', '.join(ROLE_EFFECTS)})",
                eff_tok,
            )
        hyp_tok = self.expect_name("hypothesis id")
        self.expect("SEMI", "';'")
        return Role(eff_tok.text, hyp_tok.text, self.span_of(eff_tok))

    # -- expressions

    def parse_antecedent(self) -> AntecedentExpr:
        open_tok = self.expect("LPAREN", "'('")
        span = self.span_of(open_tok)
        tok = self.peek()
        if tok.kind != "ID":
            raise self.abort("expected operator or frame id", tok)

        if tok.text in ("and", "or"):
            self.advance()
            items = self.parse_antecedent_list(tok)
            self.expect("RPAREN", "')'")
            return And(items, span) if tok.text == "and" else Or(items, span)
        if tok.text == "not":
            self.advance()
            inner = self.parse_antecedent()
            self.expect("RPAREN", "')'")
            return Not(inner, span)
        if tok.text in ("min", "max"):
            self.advance()
            n_tok = self.expect("NUM", "count")
            n = int(float(n_tok.text))
            items = self.parse_antecedent_list(tok)
            if not 1 <= n <= len(items):
                self.error(
                    f"count {n_tok.text} out of range (1 to {len(items)})", n_tok
                )
                n = max(1, min(n, len(items)))
            self.expect("RPAREN", "')'")
            cls = AtLeast if tok.text == "min" else AtMost
            return cls(n, items, span)

        frame_tok = self.expect_name("frame id")
        value = "present"
        if self.peek().kind == "ID":
            value = self.expect_name("value name").text
        self.expect("RPAREN", "')'")
        return Atom(frame_tok.text, value, span)

    def parse_antecedent_list(self, op_tok: Token) -> tuple[AntecedentExpr, ...]:
        items = []
        while self.peek().kind == "LPAREN":
            items.append(self.parse_antecedent())
        if not items:
            raise self.abort(f"'{op_tok.text}' needs at least one operand", op_tok)
        return tuple(items)

    def parse_set_expr(self) -> SetExpr:
        tok = self.peek()
        if tok.kind == "ID":
            name = self.expect_name("hypothesis id or element name")
            return SetAtom(name.text, self.span_of(name))
        if tok.kind == "LPAREN":
            open_tok = self.advance()
            span = self.span_of(open_tok)
            op = self.peek()
            if op.kind == "ID" and op.text == "or":
                self.advance()
                items = []
                while self.peek().kind not in ("RPAREN", "EOF"):
                    items.append(self.parse_set_expr())
                if not items:
                    raise self.abort("'or' needs at least one operand", op)
                self.expect("RPAREN", "')'")
                return SetOr(tuple(items), span)
            if op.kind == "ID" and op.text == "not":
                self.advance()
                inner = self.parse_set_expr()
                self.expect("RPAREN", "')'")
                return SetNot(inner, span)
            raise self.abort("expected 'or' or 'not'", op)
        raise self.abort("expected a set expression", tok)


def parse_kb(text: str, filename: str = "<kb>") -> ParseResult:
    """Parse KB source.  Diagnostics and declarations may both be nonempty:
    parsing resynchronizes at declaration boundaries after an error."""
    tokens, lex_diags = _tokenize(text, filename)
    parser = _Parser(tokens, filename)
    parser.parse()
    return ParseResult(parser.declarations, lex_diags + parser.diagnostics)


# --------------------------------------------------------------------------
# Evidence parser

_EV_LINE_RE = re.compile(
    r"^(?P<frame>\S+)\s+(?P<element>\S+)(?:\s+(?P<degree>\S+))?\s*$"
)


def parse_evidence(text: str, filename: str = "<evidence>") -> EvidenceResult:
    entries: list[EvidenceEntry] = []
    diagnostics: list[Diagnostic] = []
    seen: dict[tuple[str, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        m = _EV_LINE_RE.match(line.strip())
        span = SourceSpan(filename, lineno, 1 + indent)
        if m is None:
            diagnostics.append(
                Diagnostic("expected 'frame element [degree]'", span)
            )
            continue
        frame_id, element = m.group("frame"), m.group("element")
        degree = 1.0
        if m.group("degree") is not None:
            degree_span = SourceSpan(
                filename, lineno, 1 + indent + m.start("degree")
            )
            try:
                degree = float(m.group("degree"))
            except ValueError:
                diagnostics.append(
                    Diagnostic(
                        f"bad degree {m.group('degree')!r}", degree_span
                    )
                )
                continue
            if not 0.0 <= degree <= 1.0:
                diagnostics.append(
                    Diagnostic(
                        f"degree {degree!r} out of range [0, 1]", degree_span
                    )
                )
                continue
        key = (frame_id, element)
        if key in seen:
            diagnostics.append(
                Diagnostic(
                    f"duplicate observation for {frame_id} {element} "
                    f"(first on line {seen[key]})",
                    span,
                )
            )
            continue
        seen[key] = lineno
        entries.append(EvidenceEntry(frame_id, element, degree, span))
    return EvidenceResult(EvidenceAssignment(tuple(entries)), diagnostics)


# --------------------------------------------------------------------------
# Serializer

def antecedent_text(expr: AntecedentExpr) -> str:
    if isinstance(expr, Atom):
        if expr.value == "present":
            return f"({expr.frame_id})"
        return f"({expr.frame_id} {expr.value})"
    if isinstance(expr, And):
        return "(and " + " ".join(antecedent_text(e) for e in expr.items) + ")"
    if isinstance(expr, Or):
        return "(or " + " ".join(antecedent_text(e) for e in expr.items) + ")"
    if isinstance(expr, Not):
        return f"(not {antecedent_text(expr.item)})"
    if isinstance(expr, AtLeast):
        inner = " ".join(antecedent_text(e) for e in expr.items)
        return f"(min {expr.n} {inner})"
    if isinstance(expr, AtMost):
        inner = " ".join(antecedent_text(e) for e in expr.items)
        return f"(max {expr.n} {inner})"
    raise TypeError(f"not an antecedent expression: {expr!r}")


def set_expr_text(expr: SetExpr) -> str:
    if isinstance(expr, SetAtom):
        return expr.name
    if isinstance(expr, SetOr):
        return "(or " + " ".join(set_expr_text(e) for e in expr.items) + ")"
    if isinstance(expr, SetNot):
        return f"(not {set_expr_text(expr.item)})"
    raise TypeError(f"not a set expression: {expr!r}")


def _clauses_text(clauses: Iterable[Clause]) -> str:
    return ", ".join(f"{set_expr_text(c.target)} : {c.prob!r}" for c in clauses)


def serialize_kb(declarations: Iterable[Declaration]) -> str:
    """Canonical text for declarations; parse_kb inverts it structurally."""
    out: list[str] = [f"{KB_FORMAT_NAME} {KB_FORMAT_VERSION}", ""]
    for decl in declarations:
        if isinstance(decl, FrameDecl):
            out.append(f"frame {decl.id} {_quote(decl.name)} {{")
            out.append("  elements: " + ", ".join(decl.elements) + " ;")
            if decl.prior is None:
                out.append("  prior: uniform ;")
            else:
                out.append(
                    "  prior: " + ", ".join(repr(p) for p in decl.prior) + " ;"
                )
            out.append("}")
        elif isinstance(decl, HypothesisDecl):
            parent = f" parent {decl.parent}" if decl.parent else ""
            out.append(
                f"hypothesis {decl.id} {_quote(decl.text)} in {decl.frame_id} = "
                f"{set_expr_text(decl.members)}{parent} ;"
            )
        elif isinstance(decl, RuleDecl):
            out.append(f"rule {decl.id} {{")
            out.append(f"  consequent: {decl.consequent} ;")
            out.append(f"  if: {antecedent_text(decl.if_expr)} ;")
            if decl.except_expr is not None:
                out.append(f"  except: {antecedent_text(decl.except_expr)} ;")
            out.append(f"  then: {_clauses_text(decl.then_clauses)} ;")
            if decl.else_clauses:
                out.append(f"  else: {_clauses_text(decl.else_clauses)} ;")
            if decl.t_role is not None:
                out.append(
                    f"  t-role: {decl.t_role.effect} {decl.t_role.hypothesis} ;"
                )
            if decl.nil_role is not None:
                out.append(
                    f"  nil-role: {decl.nil_role.effect} "
                    f"{decl.nil_role.hypothesis} ;"
                )
            out.append("}")
        else:
            raise TypeError(f"not a declaration: {decl!r}")
        out.append("")
    return "\n".join(out)
