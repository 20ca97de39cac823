"""Concrete text syntax: ``.lform`` formulas, ``.model`` structures, ``.tm`` machines.

Formula grammar (whitespace-insensitive, ``//`` comments)::

    formula := "~" formula | "(" formula binop formula ")"
             | "exists" ident formula | "forall" ident formula | "new" ident formula
             | ("ins" | "del") relatom formula
             | "#" nat "{" formula "}" | "#" nat
             | "Q" Name ident formula
             | relatom | ident "=" ident | "T" | "F"
    binop   := "&" | "|" | "->"
    relatom := (RelSym | "$" RelSym) "(" ident ("," ident)* ")"

Individual variables start with a lowercase letter or ``_``; relation symbols
with an uppercase letter; relation variables carry a ``$`` prefix.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import syntax as S
from .structure import Structure, StructureError


@dataclass(frozen=True)
class SourceSpan:
    begin: int  # byte offsets into the UTF-8 input
    end: int
    line: int
    column: int

    @classmethod
    def of(cls, text: str, begin: int, end: int) -> "SourceSpan":
        line = text.count("\n", 0, begin) + 1
        column = begin - (text.rfind("\n", 0, begin) + 1) + 1
        b = len(text[:begin].encode("utf-8"))
        e = b + len(text[begin:end].encode("utf-8"))
        return cls(b, e, line, column)


@dataclass(frozen=True)
class Diagnostic:
    span: SourceSpan
    message: str
    severity: str = "error"

    def __str__(self):
        return f"{self.span.line}:{self.span.column}: {self.severity}: {self.message}"


class ParseError(ValueError):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


def _fail(text, begin, end, message):
    raise ParseError(Diagnostic(SourceSpan.of(text, begin, max(begin, end)), message))


# -- formulas ------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<arrow>->)
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[~()&|,={}#$])
    """,
    re.VERBOSE,
)

KEYWORDS = {"exists", "forall", "new", "ins", "del"}


@dataclass
class _Tok:
    kind: str
    value: str
    begin: int
    end: int


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            _fail(text, pos, pos + 1, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "arrow":
                kind = "punct"
            toks.append(_Tok(kind, value, m.start(), m.end()))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text), len(text)))
    return toks


def _is_var(name):
    return name[0].islower() or name[0] == "_"


class _FormulaParser:
    def __init__(self, text, vocabulary, quantifiers):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.vocabulary = vocabulary
        self.quantifiers = quantifiers
        self.relvars = {}
        self.loop_spans = {}

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, message, tok=None):
        tok = tok or self.tok
        _fail(self.text, tok.begin, tok.end, message)

    def expect(self, value):
        if self.tok.value != value or self.tok.kind not in ("punct",):
            self.error(f"expected {value!r}, found {self.tok.value or 'end of input'!r}")
        self.i += 1

    def var(self):
        tok = self.tok
        if tok.kind != "ident" or not _is_var(tok.value) or tok.value in KEYWORDS:
            self.error(f"expected a variable, found {tok.value or 'end of input'!r}")
        self.i += 1
        return tok.value

    def nat(self):
        tok = self.tok
        if tok.kind != "nat":
            self.error("expected a natural-number loop label")
        self.i += 1
        return int(tok.value)

    def relatom(self):
        start = self.tok
        is_var = False
        if start.kind == "punct" and start.value == "$":
            is_var = True
            self.i += 1
        name_tok = self.tok
        if name_tok.kind != "ident" or _is_var(name_tok.value):
            self.error("expected a capitalized relation name")
        self.i += 1
        self.expect("(")
        args = [self.var()]
        while self.tok.value == ",":
            self.i += 1
            args.append(self.var())
        end_tok = self.tok
        self.expect(")")
        name, k = name_tok.value, len(args)
        if is_var:
            seen = self.relvars.setdefault(name, k)
            if seen != k:
                _fail(self.text, start.begin, end_tok.end,
                      f"relation variable ${name} used with arity {k}, first used with arity {seen}")
            return S.RelVar(name, k), tuple(args)
        if self.vocabulary is not None:
            if name not in self.vocabulary:
                _fail(self.text, start.begin, end_tok.end, f"undeclared relation symbol {name}")
            if self.vocabulary[name] != k:
                _fail(self.text, start.begin, end_tok.end,
                      f"{name} has arity {self.vocabulary[name]} but is applied to {k} variables")
        return S.RelSym(name, k), tuple(args)

    def formula(self):
        tok = self.tok
        if tok.kind == "eof":
            self.error("unexpected end of input")
        if tok.kind == "punct":
            if tok.value == "~":
                self.i += 1
                return S.Not(self.formula())
            if tok.value == "(":
                self.i += 1
                left = self.formula()
                op = self.tok
                if op.value not in ("&", "|", "->"):
                    self.error("expected '&', '|' or '->' (binary connectives must be parenthesized)")
                self.i += 1
                right = self.formula()
                self.expect(")")
                return {"&": S.And, "|": S.Or, "->": S.Implies}[op.value](left, right)
            if tok.value == "#":
                self.i += 1
                k = self.nat()
                if self.tok.value == "{":
                    self.i += 1
                    body = self.formula()
                    self.expect("}")
                    return S.Loop(k, body)
                atom = S.LoopAtom(k)
                self.loop_spans[id(atom)] = (tok.begin, self.toks[self.i - 1].end)
                return atom
            if tok.value == "$":
                target, args = self.relatom()
                return S.RelVarAtom(target, args)
            self.error(f"unexpected {tok.value!r}")
        if tok.kind == "nat":
            self.error("loop atoms are written '#k'")
        name = tok.value
        if name in KEYWORDS:
            self.i += 1
            if name in ("exists", "forall", "new"):
                x = self.var()
                body = self.formula()
                return {"exists": S.Exists, "forall": S.Forall, "new": S.New}[name](x, body)
            target, args = self.relatom()
            body = self.formula()
            return (S.Insert if name == "ins" else S.Delete)(target, args, body)
        if _is_var(name):
            self.i += 1
            self.expect("=")
            return S.Eq(name, self.var())
        nxt = self.peek()
        if nxt.value == "(":
            target, args = self.relatom()
            return S.Rel(target, args)
        if name == "T":
            self.i += 1
            return S.Top()
        if name == "F":
            self.i += 1
            return S.Bottom()
        if name.startswith("Q") and len(name) > 1:
            qname = name[1:]
            if self.quantifiers is not None and qname not in self.quantifiers:
                self.error(f"unknown quantifier {qname}")
            self.i += 1
            x = self.var()
            return S.Quant(qname, x, self.formula())
        self.error(f"expected a formula, found {name!r}")


def parse_formula(text: str, vocabulary=None, quantifiers=None) -> S.Formula:
    """Parse, desugar and validate a formula.

    ``vocabulary`` maps relation-symbol names to arities (``None`` skips the
    declaration check).  ``quantifiers`` is a collection of known quantifier
    names.  Raises :class:`ParseError` carrying a :class:`Diagnostic`.
    """
    p = _FormulaParser(text, vocabulary, quantifiers)
    surface = p.formula()
    if p.tok.kind != "eof":
        p.error(f"trailing input {p.tok.value!r}")
    core = S.desugar(surface)
    try:
        S.validate(core, vocabulary, quantifiers)
    except S.FormulaError as err:
        begin, end = 0, len(text)
        if err.rule == "non-standard jump":
            node = S.node_at(core, err.path)
            begin, end = p.loop_spans.get(id(node), (0, len(text)))
        _fail(text, begin, end, str(err))
    return core


def pretty_print(phi: S.Formula) -> str:
    """Render a formula in ``.lform`` syntax; parsing the output gives ``phi`` back."""
    out = []

    def atom(target, args):
        prefix = "$" if isinstance(target, S.RelVar) else ""
        return f"{prefix}{target.name}({','.join(args)})"

    def go(node):
        if isinstance(node, S.Rel):
            out.append(atom(node.symbol, node.args))
        elif isinstance(node, S.RelVarAtom):
            out.append(atom(node.var, node.args))
        elif isinstance(node, S.Eq):
            out.append(f"{node.left} = {node.right}")
        elif isinstance(node, S.LoopAtom):
            out.append(f"#{node.label}")
        elif isinstance(node, S.Not):
            out.append("~")
            go(node.body)
        elif isinstance(node, (S.And, S.Or, S.Implies)):
            op = {S.And: " & ", S.Or: " | ", S.Implies: " -> "}[type(node)]
            out.append("(")
            go(node.left)
            out.append(op)
            go(node.right)
            out.append(")")
        elif isinstance(node, (S.Exists, S.Forall, S.New)):
            kw = {S.Exists: "exists", S.Forall: "forall", S.New: "new"}[type(node)]
            out.append(f"{kw} {node.var} ")
            go(node.body)
        elif isinstance(node, (S.Insert, S.Delete)):
            kw = "ins" if isinstance(node, S.Insert) else "del"
            out.append(f"{kw} {atom(node.target, node.args)} ")
            go(node.body)
        elif isinstance(node, S.Loop):
            out.append(f"#{node.label}{{")
            go(node.body)
            out.append("}")
        elif isinstance(node, S.Quant):
            out.append(f"Q{node.name} {node.var} ")
            go(node.body)
        elif isinstance(node, S.Top):
            out.append("T")
        elif isinstance(node, S.Bottom):
            out.append("F")
        else:
            raise TypeError(f"not a formula: {node!r}")

    # iterative descent would be faster, but compiled formulas stay well below
    # the recursion limit
    go(phi)
    return "".join(out)


# -- line-oriented formats ------------------------------------------------------


def _lines(text):
    """Yield ``(line_no, start_offset, content)`` with ``#`` comments removed."""
    offset = 0
    for no, raw in enumerate(text.split("\n"), start=1):
        content = raw.split("#", 1)[0]
        yield no, offset, content
        offset += len(raw) + 1


_REL_HEAD = re.compile(r"\s*rel\s+([A-Z][A-Za-z0-9_]*)\s*/\s*(\d+)\s*=(.*)$")
_TUPLE = re.compile(r"\(([^()]*)\)")


def parse_model(text: str):
    """Parse a ``.model`` file into ``(vocabulary, structure)``.

    Format: one ``domain N`` line (elements ``0..N-1``, ``N ≥ 1``) and any
    number of ``rel Name/k = (a,b) (c,d) ...`` lines.
    """
    n = None
    rels, arities = {}, {}
    for no, off, line in _lines(text):
        if not line.strip():
            continue
        stripped = line.strip()
        lead = off + (len(line) - len(line.lstrip()))
        if stripped.startswith("domain"):
            m = re.fullmatch(r"domain\s+(\d+)", stripped)
            if not m:
                _fail(text, lead, off + len(line), "expected 'domain N'")
            if n is not None:
                _fail(text, lead, off + len(line), "duplicate domain declaration")
            n = int(m.group(1))
            if n < 1:
                _fail(text, lead, off + len(line), "the domain must be nonempty")
            continue
        m = _REL_HEAD.match(line)
        if not m:
            _fail(text, lead, off + len(line), "expected 'domain N' or 'rel Name/k = (...)...'")
        if n is None:
            _fail(text, lead, off + len(line), "'domain' must come before relations")
        name, k = m.group(1), int(m.group(2))
        if k < 1:
            _fail(text, lead, off + len(line), "relation arity must be positive")
        if name in rels:
            _fail(text, lead, off + len(line), f"relation {name} declared twice")
        body_start = off + m.start(3)
        body = m.group(3)
        if _TUPLE.sub("", body).strip():
            _fail(text, body_start, off + len(line), "tuples must be written as (a,b,...)")
        tuples = set()
        for tm in _TUPLE.finditer(body):
            b, e = body_start + tm.start(), body_start + tm.end()
            try:
                t = tuple(int(x) for x in tm.group(1).split(","))
            except ValueError:
                _fail(text, b, e, "tuple components must be element indices")
            if len(t) != k:
                _fail(text, b, e, f"tuple of length {len(t)} in relation of arity {k}")
            if any(not 0 <= a < n for a in t):
                _fail(text, b, e, f"tuple {t} is out of range for domain {n}")
            if t in tuples:
                _fail(text, b, e, f"duplicate tuple {t}")
            tuples.add(t)
        rels[name] = tuples
        arities[name] = k
    if n is None:
        _fail(text, 0, len(text), "missing 'domain N' line")
    try:
        s = Structure(range(n), rels, arities)
    except StructureError as err:
        _fail(text, 0, len(text), str(err))
    return dict(arities), s


_TRANS = re.compile(
    r"\s*trans\s+(\w+)\s*,\s*(\w+)\s*->\s*(\w+)\s*,\s*(\w+)\s*,\s*([LR])\s*$"
)
_TM_KEYS = ("states", "start", "accept", "reject", "input_alphabet", "tape_alphabet", "blank")


def parse_tm(text: str):
    """Parse a ``.tm`` file into a :class:`~turinglogic.tmcompile.TuringMachine`."""
    from .tmcompile import TuringMachine, TMError

    fields = {}
    transitions = {}
    for no, off, line in _lines(text):
        stripped = line.strip()
        if not stripped:
            continue
        lead = off + (len(line) - len(line.lstrip()))
        end = off + len(line)
        if stripped.startswith("trans"):
            m = _TRANS.match(line)
            if not m:
                _fail(text, lead, end, "expected 'trans q,s -> q2,t,L|R'")
            q, s, q2, t, d = m.groups()
            if (q, s) in transitions:
                _fail(text, lead, end, f"second transition for ({q}, {s}): machines are deterministic")
            transitions[(q, s)] = (q2, t, d)
            continue
        key, _, rest = stripped.partition(" ")
        if key not in _TM_KEYS:
            _fail(text, lead, end, f"unknown section {key!r}")
        if key in fields:
            _fail(text, lead, end, f"duplicate section {key!r}")
        fields[key] = [v for v in re.split(r"[\s,]+", rest.strip()) if v]
    for key in ("states", "start", "input_alphabet", "blank"):
        if key not in fields:
            _fail(text, 0, len(text), f"missing section {key!r}")
    if len(fields["start"]) != 1 or len(fields["blank"]) != 1:
        _fail(text, 0, len(text), "'start' and 'blank' take exactly one value")
    try:
        return TuringMachine(
            states=fields["states"],
            start=fields["start"][0],
            accept=fields.get("accept", []),
            reject=fields.get("reject", []),
            input_alphabet=fields["input_alphabet"],
            tape_alphabet=fields.get("tape_alphabet", []),
            blank=fields["blank"][0],
            transitions=transitions,
        )
    except TMError as err:
        _fail(text, 0, len(text), str(err))


def format_model(s: Structure) -> str:
    lines = [f"domain {s.size}"]
    for name in sorted(s.relations):
        tuples = " ".join("(" + ",".join(map(str, t)) + ")" for t in sorted(s.relations[name]))
        lines.append(f"rel {name}/{s.arities[name]} = {tuples}".rstrip())
    return "\n".join(lines) + "\n"
