"""Propositional formula ASTs, concrete syntax, and valuation semantics.

Two immutable node families live here.  `Formula` is the full language
(variables, constants, conjunction, disjunction, implication, negation).
`FormulaWI` is the implication-free sublanguage used by the normalization
pipeline; the absence of an implication node class makes "contains no
implication" a guarantee of the data type rather than a property to scan
for.

Concrete syntax (whitespace-insensitive, UTF-8)::

    formula := impl
    impl    := or ("->" impl)?          # right-associative
    or      := and ("|" and)*           # left-associative
    and     := neg ("&" neg)*           # left-associative
    neg     := "~" neg | atom
    atom    := "true" | "false" | IDENT | "(" formula ")"

Identifiers match ``[A-Za-z_][A-Za-z0-9_]*`` and may not be the reserved
words ``true`` / ``false``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

from .errors import FormulaSyntaxError

__all__ = [
    "Formula", "Var", "Const", "And", "Or", "Impl", "Neg",
    "FormulaWI", "VarWI", "ConstWI", "AndWI", "OrWI", "NegWI",
    "Valuation", "parse", "parse_wi", "to_text",
    "evaluate", "evaluate_wi", "size", "embed", "as_wi",
]

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = ("true", "false")


def _check_ident(name: str) -> None:
    if not _IDENT_RE.match(name) or name in _RESERVED:
        raise ValueError(f"invalid atom identifier: {name!r}")


class _Node:
    """Shared behaviour for AST nodes: `str()` renders concrete syntax."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


class _FormulaBase(_Node):
    """Marker base for the full language."""

    __slots__ = ()


class _FormulaWIBase(_Node):
    """Marker base for the implication-free language."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(_FormulaBase):
    name: str

    def __post_init__(self) -> None:
        _check_ident(self.name)


@dataclass(frozen=True, slots=True)
class Const(_FormulaBase):
    value: bool


@dataclass(frozen=True, slots=True)
class And(_FormulaBase):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or(_FormulaBase):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Impl(_FormulaBase):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Neg(_FormulaBase):
    child: "Formula"


Formula = Union[Var, Const, And, Or, Impl, Neg]


@dataclass(frozen=True, slots=True)
class VarWI(_FormulaWIBase):
    name: str

    def __post_init__(self) -> None:
        _check_ident(self.name)


@dataclass(frozen=True, slots=True)
class ConstWI(_FormulaWIBase):
    value: bool


@dataclass(frozen=True, slots=True)
class AndWI(_FormulaWIBase):
    left: "FormulaWI"
    right: "FormulaWI"


@dataclass(frozen=True, slots=True)
class OrWI(_FormulaWIBase):
    left: "FormulaWI"
    right: "FormulaWI"


@dataclass(frozen=True, slots=True)
class NegWI(_FormulaWIBase):
    child: "FormulaWI"


FormulaWI = Union[VarWI, ConstWI, AndWI, OrWI, NegWI]


@dataclass(frozen=True)
class Valuation:
    """Total assignment of booleans to atom names.

    Stored as a finite mapping plus a default for atoms not in the mapping,
    so lookup is total while the value stays a plain serializable record.
    Instances are callable: ``v("p")``.
    """

    assignment: Mapping[str, bool] = field(default_factory=dict)
    default: bool = False

    def __call__(self, name: str) -> bool:
        return bool(self.assignment.get(name, self.default))


def _as_valuation(v: Valuation | Mapping[str, bool]) -> Valuation:
    return v if isinstance(v, Valuation) else Valuation(v)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<arrow>->)
    | (?P<op>[&|~()])
    """,
    re.VERBOSE,
)

_ATOM_STARTS = frozenset({"identifier", "'true'", "'false'", "'~'", "'('"})


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # ident | true | false | arrow | & | | | ~ | ( | ) | end
    text: str
    offset: int  # character offset; byte offset derived at error time


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}",
                _byte_offset(text, pos),
                _ATOM_STARTS,
            )
        if m.lastgroup == "ident":
            word = m.group()
            kind = word if word in _RESERVED else "ident"
            tokens.append(_Token(kind, word, pos))
        elif m.lastgroup == "arrow":
            tokens.append(_Token("arrow", "->", pos))
        elif m.lastgroup == "op":
            tokens.append(_Token(m.group(), m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser over the grammar in the module docstring."""

    def __init__(self, text: str, allow_impl: bool):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.allow_impl = allow_impl

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: frozenset[str]) -> FormulaSyntaxError:
        tok = self.peek()
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        return FormulaSyntaxError(
            f"unexpected {what}",
            _byte_offset(self.text, tok.offset),
            expected,
        )

    def parse(self) -> Formula:
        phi = self.impl()
        if self.peek().kind != "end":
            raise self.fail(frozenset({"end of input"}))
        return phi

    def impl(self) -> Formula:
        left = self.or_()
        if self.peek().kind == "arrow":
            if not self.allow_impl:
                raise self.fail(frozenset({"end of input", "'&'", "'|'"}))
            self.advance()
            return Impl(left, self.impl())
        return left

    def or_(self) -> Formula:
        phi = self.and_()
        while self.peek().kind == "|":
            self.advance()
            phi = Or(phi, self.and_())
        return phi

    def and_(self) -> Formula:
        phi = self.neg()
        while self.peek().kind == "&":
            self.advance()
            phi = And(phi, self.neg())
        return phi

    def neg(self) -> Formula:
        if self.peek().kind == "~":
            self.advance()
            return Neg(self.neg())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "ident":
            self.advance()
            return Var(tok.text)
        if tok.kind in _RESERVED:
            self.advance()
            return Const(tok.kind == "true")
        if tok.kind == "(":
            self.advance()
            phi = self.impl()
            if self.peek().kind != ")":
                raise self.fail(frozenset({"')'"}))
            self.advance()
            return phi
        raise self.fail(_ATOM_STARTS)


def parse(text: str) -> Formula:
    """Parse concrete syntax into a `Formula` AST.

    Raises `FormulaSyntaxError` (with byte offset and expected-token set)
    on malformed input, including empty input and trailing tokens.
    """
    return _Parser(text, allow_impl=True).parse()


def parse_wi(text: str) -> FormulaWI:
    """Parse implication-free concrete syntax into a `FormulaWI` AST.

    ``->`` is a syntax error here, reported at the arrow's offset.
    """
    return as_wi(_Parser(text, allow_impl=False).parse())


# ---------------------------------------------------------------------------
# Printing

_PREC_IMPL, _PREC_OR, _PREC_AND, _PREC_NEG, _PREC_ATOM = 1, 2, 3, 4, 5


def to_text(phi: Formula | FormulaWI) -> str:
    """Render minimally parenthesized concrete syntax.

    Inverse of `parse` up to whitespace: ``parse(to_text(phi)) == phi``.
    """
    return _fmt(phi, _PREC_IMPL)


def _fmt(phi, want: int) -> str:
    match phi:
        case Var(x) | VarWI(x):
            return x
        case Const(b) | ConstWI(b):
            return "true" if b else "false"
        case Neg(p) | NegWI(p):
            return "~" + _fmt(p, _PREC_NEG)
        case And(a, b) | AndWI(a, b):
            text = f"{_fmt(a, _PREC_AND)} & {_fmt(b, _PREC_AND + 1)}"
            return f"({text})" if want > _PREC_AND else text
        case Or(a, b) | OrWI(a, b):
            text = f"{_fmt(a, _PREC_OR)} | {_fmt(b, _PREC_OR + 1)}"
            return f"({text})" if want > _PREC_OR else text
        case Impl(a, b):
            text = f"{_fmt(a, _PREC_IMPL + 1)} -> {_fmt(b, _PREC_IMPL)}"
            return f"({text})" if want > _PREC_IMPL else text
    raise TypeError(f"not a formula node: {phi!r}")


# ---------------------------------------------------------------------------
# Semantics

def evaluate(v: Valuation | Mapping[str, bool], phi: Formula) -> bool:
    """Truth value of `phi` under valuation `v`.

    Implication is material: ``a -> b`` holds unless `a` is true and `b`
    is false.
    """
    return _eval(_as_valuation(v), phi)


def _eval(v: Valuation, phi: Formula) -> bool:
    match phi:
        case Var(x):
            return v(x)
        case Const(b):
            return b
        case And(a, b):
            return _eval(v, a) and _eval(v, b)
        case Or(a, b):
            return _eval(v, a) or _eval(v, b)
        case Impl(a, b):
            return (not _eval(v, a)) or _eval(v, b)
        case Neg(a):
            return not _eval(v, a)
    raise TypeError(f"not a Formula: {phi!r}")


def evaluate_wi(v: Valuation | Mapping[str, bool], phi: FormulaWI) -> bool:
    """Truth value of an implication-free formula under `v`."""
    return _eval_wi(_as_valuation(v), phi)


def _eval_wi(v: Valuation, phi: FormulaWI) -> bool:
    match phi:
        case VarWI(x):
            return v(x)
        case ConstWI(b):
            return b
        case AndWI(a, b):
            return _eval_wi(v, a) and _eval_wi(v, b)
        case OrWI(a, b):
            return _eval_wi(v, a) or _eval_wi(v, b)
        case NegWI(a):
            return not _eval_wi(v, a)
    raise TypeError(f"not a FormulaWI: {phi!r}")


# ---------------------------------------------------------------------------
# Size and conversions

def _children(phi) -> tuple:
    match phi:
        case VarWI(_) | ConstWI(_) | Var(_) | Const(_):
            return ()
        case NegWI(a) | Neg(a):
            return (a,)
        case AndWI(a, b) | OrWI(a, b) | And(a, b) | Or(a, b) | Impl(a, b):
            return (a, b)
    raise TypeError(f"not a formula node: {phi!r}")


def size(phi: FormulaWI) -> int:
    """Number of constructors in `phi`; always at least 1.

    Counted iteratively with per-subtree memoization so shared subtrees
    (common after distribution) do not force an exponential walk, and deep
    chains do not hit the interpreter recursion limit.  The result equals
    the naive structural count: leaves are 1, negation adds 1, binary
    nodes add 1 plus both subtree sizes.
    """
    memo: dict[int, int] = {}
    stack = [phi]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        kids = _children(node)
        todo = [k for k in kids if id(k) not in memo]
        if todo:
            stack.extend(todo)
        else:
            memo[id(node)] = 1 + sum(memo[id(k)] for k in kids)
            stack.pop()
    return memo[id(phi)]


def embed(phi: FormulaWI) -> Formula:
    """Reinject an implication-free formula into the full language."""
    match phi:
        case VarWI(x):
            return Var(x)
        case ConstWI(b):
            return Const(b)
        case AndWI(a, b):
            return And(embed(a), embed(b))
        case OrWI(a, b):
            return Or(embed(a), embed(b))
        case NegWI(a):
            return Neg(embed(a))
    raise TypeError(f"not a FormulaWI: {phi!r}")


def as_wi(phi: Formula) -> FormulaWI:
    """Reinterpret a formula that happens to be implication-free.

    Raises `ValueError` if `phi` contains an implication node.
    """
    match phi:
        case Var(x):
            return VarWI(x)
        case Const(b):
            return ConstWI(b)
        case And(a, b):
            return AndWI(as_wi(a), as_wi(b))
        case Or(a, b):
            return OrWI(as_wi(a), as_wi(b))
        case Neg(a):
            return NegWI(as_wi(a))
        case Impl(_, _):
            raise ValueError("formula contains an implication")
    raise TypeError(f"not a Formula: {phi!r}")


def subformulas(phi: Formula | FormulaWI) -> Iterator[Formula | FormulaWI]:
    """Yield every node of `phi`, parents before children, left to right."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(_children(node)))
