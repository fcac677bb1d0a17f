"""Line-oriented text format for protocol specs (``.pp`` files).

::

    protocol epidemic
    model selective
    states: 0, 1, Stop
    group G0 = {0}
    group G1 = {1, Stop}
    target 1 -> G0            # optional when rules name the group
    1 + G0|0 -> 1 + 1
    1 + G0|null -> Stop

Standard-model rules omit the group (``1 + 0 -> 1 + 1``); ``order by-key``
makes the scheduler hand every pair to the rules smaller key first.
Guards ``[<]`` / ``[>]`` follow the responder and compare the initiator's
key with the responder's.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import SelpopError
from .spec import SELECTIVE, STANDARD, Guard, ProtocolSpec, Rule, make_spec, spec_issues

RESERVED = {"protocol", "model", "states", "group", "target", "order", "null"}
IDENT = re.compile(r"[A-Za-z0-9_*'^.@]+")
DIRECTIVE = re.compile(r"\s*(protocol|order)(?![A-Za-z0-9_*'^.@])\s*([^\s#]*)\s*(?:#.*)?$")
PUNCT = ("->", "→", "+", "|", "[", "]", "<", ">", "{", "}", ",", "=", ":")


@dataclass(frozen=True)
class SourceSpan:
    line: int        # 1-based
    column: int      # 1-based, in characters
    start: int       # byte offsets into the UTF-8 text
    end: int


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    span: SourceSpan | None = None
    severity: str = "error"

    def __str__(self) -> str:
        where = f"{self.span.line}:{self.span.column}: " if self.span else ""
        return f"{where}{self.severity} {self.kind}: {self.message}"


class DslError(SelpopError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        first = diagnostics[0]
        super().__init__("\n".join(str(d) for d in diagnostics), kind=first.kind)


@dataclass
class _Tok:
    text: str
    col: int         # 0-based character offset within the line
    ident: bool


class _Line:
    def __init__(self, no: int, text: str, byte0: int):
        self.no, self.text, self.byte0 = no, text, byte0

    def span(self, col: int = 0, end: int | None = None) -> SourceSpan:
        end = len(self.text) if end is None else end
        b0 = self.byte0 + len(self.text[:col].encode())
        b1 = self.byte0 + len(self.text[:end].encode())
        return SourceSpan(self.no, col + 1, b0, b1)

    def tspan(self, tok: _Tok) -> SourceSpan:
        return self.span(tok.col, tok.col + len(tok.text))


class _Syntax(Exception):
    def __init__(self, kind: str, message: str, span: SourceSpan):
        self.diag = Diagnostic(kind, message, span)


def _lex(line: _Line) -> list[_Tok]:
    text = line.text
    toks: list[_Tok] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "#":
            break
        if ch.isspace():
            i += 1
            continue
        for p in PUNCT:
            if text.startswith(p, i):
                toks.append(_Tok("->" if p == "→" else p, i, False))
                i += len(p)
                break
        else:
            m = IDENT.match(text, i)
            if not m:
                raise _Syntax("UnexpectedCharacter", f"unexpected character {ch!r}", line.span(i, i + 1))
            toks.append(_Tok(m.group(), i, True))
            i = m.end()
    return toks


class _Cursor:
    def __init__(self, line: _Line, toks: list[_Tok]):
        self.line, self.toks, self.i = line, toks, 0

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def _end_span(self) -> SourceSpan:
        n = len(self.line.text.rstrip("\r\n"))
        return self.line.span(n, n)

    def take(self, want: str | None = None, what: str = "") -> _Tok:
        tok = self.peek()
        if tok is None:
            raise _Syntax("UnexpectedEnd", f"expected {what or want!r} before end of line", self._end_span())
        if want is not None and tok.text != want:
            raise _Syntax("UnexpectedToken", f"expected {want!r}, found {tok.text!r}", self.line.tspan(tok))
        self.i += 1
        return tok

    def ident(self, what: str, allow_null: bool = False) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise _Syntax("UnexpectedEnd", f"expected {what} before end of line", self._end_span())
        if not tok.ident:
            raise _Syntax("UnexpectedToken", f"expected {what}, found {tok.text!r}", self.line.tspan(tok))
        if tok.text in RESERVED and not (allow_null and tok.text == "null"):
            raise _Syntax("ReservedWord", f"{tok.text!r} is reserved and cannot name {what}",
                          self.line.tspan(tok))
        self.i += 1
        return tok

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise _Syntax("TrailingInput", f"unexpected {tok.text!r} after the end of the declaration",
                          self.line.tspan(tok))


def _lines(text: str) -> list[_Line]:
    out, byte = [], 0
    for no, raw in enumerate(text.splitlines(keepends=True), 1):
        body = raw.rstrip("\r\n")
        out.append(_Line(no, body, byte))
        byte += len(raw.encode())
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.diags: list[Diagnostic] = []
        self.name = self.model = None
        self.name_span = self.model_span = None
        self.key_order = False
        self.states: list[str] = []
        self.state_spans: dict[str, SourceSpan] = {}
        self.groups: dict[str, list[str]] = {}
        self.group_spans: dict[str, SourceSpan] = {}
        self.targets: dict[str, str] = {}
        self.target_spans: dict[str, SourceSpan] = {}
        self.rules: list[Rule] = []
        self.rule_spans: list[SourceSpan] = []

    def error(self, kind: str, message: str, span: SourceSpan) -> None:
        self.diags.append(Diagnostic(kind, message, span))

    def parse(self) -> ProtocolSpec | None:
        lines = _lines(self.text)
        for line in lines:
            try:
                if not self.directive(line):
                    toks = _lex(line)
                    if toks:
                        self.statement(_Cursor(line, toks))
            except _Syntax as exc:
                self.diags.append(exc.diag)
        last = lines[-1] if lines else _Line(1, "", 0)
        eof = last.span(len(last.text), len(last.text))
        if self.name is None:
            self.error("MissingProtocolName", "no 'protocol <name>' line", eof)
        if self.model is None:
            self.error("MissingModel", "no 'model standard|selective' line", eof)
        if self.diags:
            return None
        spec = make_spec(self.name, self.model, self.states, groups=self.groups if self.groups else None,
                         targets=self.targets, rules=self.rules, key_order=self.key_order, check=False)
        for issue in spec_issues(spec):
            self.diags.append(Diagnostic(issue.kind, issue.message, self.locate(issue.subject, eof)))
        return None if self.diags else spec.replace()

    def locate(self, subject, eof: SourceSpan) -> SourceSpan:
        kind, key = subject
        if kind == "rule" and key < len(self.rule_spans):
            return self.rule_spans[key]
        table = {"group": self.group_spans, "state": self.state_spans, "target": self.target_spans}.get(kind)
        if table and key in table:
            return table[key]
        if kind == "target" and key in self.state_spans:
            return self.state_spans[key]
        return self.model_span or self.name_span or eof

    def directive(self, line: _Line) -> bool:
        """Lines whose words fall outside the identifier alphabet."""
        m = DIRECTIVE.match(line.text)
        if not m:
            return False
        word, arg = m.group(1), m.group(2)
        col = m.start(2)
        if word == "protocol":
            if not arg:
                raise _Syntax("UnexpectedEnd", "expected a protocol name", line.span(m.end(1), m.end(1)))
            if self.name is not None:
                raise _Syntax("DuplicateDirective", "protocol name given twice", line.span(m.start(1)))
            self.name, self.name_span = arg, line.span(col, col + len(arg))
        else:
            if arg != "by-key":
                raise _Syntax("UnexpectedToken", "expected 'order by-key'",
                              line.span(col, col + max(len(arg), 1)) if arg else line.span(m.end(1)))
            self.key_order = True
        return True

    def statement(self, cur: _Cursor) -> None:
        line = cur.line
        head = cur.peek()
        word = head.text if head.ident else ""
        if word == "model":
            cur.take()
            tok = cur.ident("a model")
            if tok.text not in (STANDARD, SELECTIVE):
                raise _Syntax("UnknownModel", f"model must be standard or selective, got {tok.text!r}",
                              line.tspan(tok))
            cur.done()
            if self.model is not None:
                raise _Syntax("DuplicateDirective", "model given twice", line.span(head.col))
            self.model, self.model_span = tok.text, line.tspan(tok)
        elif word == "states":
            cur.take()
            cur.take(":")
            while True:
                tok = cur.ident("a state name")
                if tok.text in self.state_spans:
                    self.error("DuplicateState", f"state {tok.text!r} declared twice", line.tspan(tok))
                else:
                    self.states.append(tok.text)
                    self.state_spans[tok.text] = line.tspan(tok)
                if cur.peek() is None:
                    break
                cur.take(",")
        elif word == "group":
            cur.take()
            name = cur.ident("a group name")
            cur.take("=")
            cur.take("{")
            members: list[str] = []
            if cur.peek() is not None and cur.peek().text == "}":
                cur.take()
            else:
                while True:
                    members.append(cur.ident("a state name").text)
                    tok = cur.take(what="',' or '}'")
                    if tok.text == "}":
                        break
                    if tok.text != ",":
                        raise _Syntax("UnexpectedToken", f"expected ',' or '}}', found {tok.text!r}",
                                      line.tspan(tok))
            cur.done()
            if name.text in self.groups:
                raise _Syntax("DuplicateGroup", f"group {name.text!r} declared twice", line.tspan(name))
            self.groups[name.text] = members
            self.group_spans[name.text] = line.span(head.col)
        elif word == "target":
            cur.take()
            st = cur.ident("a state name")
            cur.take("->")
            grp = cur.ident("a group name")
            cur.done()
            if st.text in self.targets:
                raise _Syntax("TargetConflict", f"state {st.text!r} has two targets", line.tspan(st))
            self.targets[st.text] = grp.text
            self.target_spans[st.text] = line.span(head.col)
        else:
            self.rule(cur)

    def rule(self, cur: _Cursor) -> None:
        line = cur.line
        first = cur.peek()
        ini = cur.ident("an initiator state").text
        cur.take("+")
        a = cur.ident("a responder", allow_null=True)
        group = None
        if cur.peek() is not None and cur.peek().text == "|":
            cur.take()
            if a.text == "null":
                raise _Syntax("ReservedWord", "'null' cannot name a group", line.tspan(a))
            group = a.text
            a = cur.ident("a responder state or 'null'", allow_null=True)
        responder = None if a.text == "null" else a.text
        guard = Guard.NONE
        if cur.peek() is not None and cur.peek().text == "[":
            cur.take()
            g = cur.take(what="'<' or '>'")
            if g.text not in ("<", ">"):
                raise _Syntax("BadGuard", f"guard must be '<' or '>', found {g.text!r}", line.tspan(g))
            cur.take("]")
            guard = Guard(g.text)
        cur.take("->")
        out_i = cur.ident("an initiator output").text
        out_r = None
        if cur.peek() is not None and cur.peek().text == "+":
            cur.take()
            out_r = cur.ident("a responder output").text
        cur.done()
        self.rules.append(Rule(ini, responder, out_i, out_r, guard, group))
        self.rule_spans.append(line.span(first.col))


def check_protocol(text: str | bytes) -> tuple[ProtocolSpec | None, list[Diagnostic]]:
    """Parse ``text``; never raises.  Returns the spec (or None) and all diagnostics."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            return None, [Diagnostic("InvalidEncoding", "input is not valid UTF-8",
                                     SourceSpan(1, 1, exc.start, exc.end))]
    p = _Parser(text)
    try:
        spec = p.parse()
    except Exception as exc:   # keep the parser total; report rather than crash
        return None, p.diags + [Diagnostic("InternalError", repr(exc), SourceSpan(1, 1, 0, 0))]
    return spec, p.diags


def parse_protocol(text: str | bytes) -> ProtocolSpec:
    spec, diags = check_protocol(text)
    if spec is None:
        raise DslError(diags)
    return spec


def validate(spec: ProtocolSpec) -> list[Diagnostic]:
    """Invariant violations plus warnings about reachable draws nobody handles."""
    out = [Diagnostic(i.kind, i.message) for i in spec_issues(spec)]
    if spec.selective:
        target_of = spec.target_of
        for s in spec.states:
            if s in target_of and spec.null_rule(s) is None:
                out.append(Diagnostic(
                    "MissingNullRule",
                    f"state {s!r} targets {target_of[s]!r} but has no null rule for an empty target",
                    severity="warning"))
    return out


def pretty_print(spec: ProtocolSpec) -> str:
    lines = [f"protocol {spec.name}", f"model {spec.model}"]
    if spec.key_order:
        lines.append("order by-key")
    lines.append("states: " + ", ".join(spec.states))
    if spec.selective:
        for g in spec.groups:
            lines.append(f"group {g.name} = {{{', '.join(g.states)}}}")
        for s, g in spec.targets:
            lines.append(f"target {s} -> {g}")
    lines.extend(str(r) for r in spec.rules)
    return "\n".join(lines) + "\n"
