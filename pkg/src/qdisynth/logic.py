"""Boolean functions, dual-rail literals, DSOP covers and factored expressions.

Truth tables are indexed by the integer value of the assignment read as
``Xn..X1``: bit ``i - 1`` of the index is the value of variable ``Xi``.  For
``n = 3`` index 6 is ``X3=1, X2=1, X1=0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

MAX_INPUTS = 16


class ParseError(ValueError):
    """Malformed text input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class BooleanFunction:
    """Single-output function of ``n`` binary inputs, stored as a truth table."""

    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_INPUTS:
            raise ValueError(f"input count must be in 1..{MAX_INPUTS}, got {self.n}")
        if len(self.bits) != 1 << self.n:
            raise ValueError(
                f"truth table for n={self.n} needs 2^{self.n} = {1 << self.n} bits, "
                f"got {len(self.bits)}"
            )
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("truth table bits must be 0 or 1")

    def __call__(self, index: int) -> int:
        return self.bits[index]

    @property
    def is_constant(self) -> bool:
        return len(set(self.bits)) == 1

    @classmethod
    def from_int(cls, n: int, table: int) -> "BooleanFunction":
        """Function whose truth-table bit ``i`` is bit ``i`` of ``table``."""
        return cls(n, tuple((table >> i) & 1 for i in range(1 << n)))

    def to_text(self) -> str:
        return f"n={self.n}\n" + "".join(map(str, self.bits)) + "\n"


def from_truth_table(n: int, bits: Sequence[int]) -> BooleanFunction:
    """Build a function from ``2**n`` bits; index order is ``Xn..X1`` as binary."""
    bits = tuple(int(b) for b in bits)
    if n < 1 or len(bits) != 1 << n:
        raise ValueError(
            f"expected 2^{n} = {1 << max(n, 0)} truth-table bits, got {len(bits)}"
        )
    return BooleanFunction(n, bits)


def parse_truth_table(text: str) -> BooleanFunction:
    """Parse the two-line ``n=<k>`` / ``0101...`` format."""
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if len(lines) < 2:
        raise ParseError("expected an 'n=<k>' line followed by the truth-table bits")
    no, header = lines[0]
    m = re.fullmatch(r"n\s*=\s*(\d+)", header)
    if not m:
        raise ParseError(f"expected 'n=<k>', got {header!r}", no)
    n = int(m.group(1))
    if not 1 <= n <= MAX_INPUTS:
        raise ParseError(f"n must be in 1..{MAX_INPUTS}, got {n}", no)
    no, body = lines[1]
    if set(body) - {"0", "1"}:
        raise ParseError("truth-table bits must be 0/1 characters", no)
    if len(body) != 1 << n:
        raise ParseError(f"expected 2^{n} = {1 << n} bits, got {len(body)}", no)
    if len(lines) > 2:
        raise ParseError("unexpected trailing content", lines[2][0])
    return BooleanFunction(n, tuple(int(c) for c in body))


@dataclass(frozen=True, order=True)
class RailLiteral:
    """One wire of a dual-rail pair: ``rail=1`` asserts ``Xvar`` true."""

    var: int
    rail: int

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")
        if self.rail not in (0, 1):
            raise ValueError(f"rail must be 0 or 1, got {self.rail}")

    def __str__(self) -> str:
        return f"X{self.var}{self.rail}"

    @property
    def complement(self) -> "RailLiteral":
        return RailLiteral(self.var, 1 - self.rail)

    @classmethod
    def parse(cls, name: str) -> "RailLiteral":
        m = re.fullmatch(r"X(\d+)([01])", name.strip())
        if not m:
            raise ParseError(f"not a rail literal: {name!r}")
        return cls(int(m.group(1)), int(m.group(2)))


def _literal_order(lit: RailLiteral) -> tuple[int, int]:
    # printed order: highest variable first, as in X31X21X11
    return (-lit.var, lit.rail)


@dataclass(frozen=True)
class ProductTerm:
    literals: frozenset[RailLiteral]

    def __post_init__(self):
        object.__setattr__(self, "literals", frozenset(self.literals))
        vars_ = [lit.var for lit in self.literals]
        if len(vars_) != len(set(vars_)):
            raise ValueError(f"product term uses both rails of a variable: {self}")

    @classmethod
    def of(cls, *literals: RailLiteral | str) -> "ProductTerm":
        return cls(frozenset(RailLiteral.parse(x) if isinstance(x, str) else x for x in literals))

    @property
    def variables(self) -> frozenset[int]:
        return frozenset(lit.var for lit in self.literals)

    def sorted_literals(self) -> list[RailLiteral]:
        return sorted(self.literals, key=_literal_order)

    def satisfied_by(self, active: frozenset[RailLiteral]) -> bool:
        return self.literals <= active

    def is_disjoint_from(self, other: "ProductTerm") -> bool:
        return any(lit.complement in other.literals for lit in self.literals)

    def __str__(self) -> str:
        return "".join(map(str, self.sorted_literals())) or "1"


@dataclass(frozen=True)
class DsopCover:
    """Sum of product terms over ``n`` dual-rail variables, kept in order."""

    n: int
    terms: tuple[ProductTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if any(lit.var > self.n for lit in t.literals):
                raise ValueError(f"term {t} references a variable above n={self.n}")

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[ProductTerm]:
        return iter(self.terms)

    def __str__(self) -> str:
        return " + ".join(map(str, self.terms)) or "0"


def is_disjoint(cover: DsopCover) -> bool:
    """True iff every pair of terms has some variable on opposite rails."""
    terms = cover.terms
    return all(
        terms[i].is_disjoint_from(terms[j])
        for i in range(len(terms))
        for j in range(i + 1, len(terms))
    )


@dataclass(frozen=True)
class Codeword:
    """A valid dual-rail input: exactly one rail of each variable is high."""

    n: int
    value: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_INPUTS:
            raise ValueError(f"codeword width must be in 1..{MAX_INPUTS}")
        if not 0 <= self.value < 1 << self.n:
            raise ValueError(f"assignment {self.value} out of range for n={self.n}")

    def bit(self, var: int) -> int:
        return (self.value >> (var - 1)) & 1

    @property
    def assignment(self) -> tuple[int, ...]:
        """Values of ``Xn..X1`` in that order."""
        return tuple(self.bit(v) for v in range(self.n, 0, -1))

    def literal(self, var: int) -> RailLiteral:
        return RailLiteral(var, self.bit(var))

    def active_rails(self, subset: Iterable[int] | None = None) -> frozenset[RailLiteral]:
        vars_ = range(1, self.n + 1) if subset is None else subset
        return frozenset(self.literal(v) for v in vars_)

    def rails(self) -> dict[RailLiteral, int]:
        return {
            RailLiteral(v, r): int(self.bit(v) == r)
            for v in range(self.n, 0, -1)
            for r in (1, 0)
        }

    @classmethod
    def parse(cls, text: str) -> "Codeword":
        """Parse an ``Xn..X1`` assignment string such as ``"110"``."""
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ParseError(f"codeword must be a 0/1 string over Xn..X1, got {text!r}")
        return cls(len(text), int(text, 2))

    def __str__(self) -> str:
        return "".join(map(str, self.assignment))


class _SpacerType:
    """The all-zero (NULL) dual-rail state."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def active_rails(self, subset=None) -> frozenset[RailLiteral]:
        return frozenset()

    def __repr__(self) -> str:
        return "Spacer"

    __str__ = __repr__


Spacer = _SpacerType()
CodewordOrSpacer = Union[Codeword, _SpacerType]


def all_codewords(n: int) -> list[Codeword]:
    return [Codeword(n, v) for v in range(1 << n)]


def minterm(n: int, index: int) -> ProductTerm:
    cw = Codeword(n, index)
    return ProductTerm(cw.active_rails())


def dual_rail_cover(f: BooleanFunction) -> tuple[DsopCover, DsopCover]:
    """One full minterm per input pattern, filed under the rail it drives."""
    ones, zeros = [], []
    for i, b in enumerate(f.bits):
        (ones if b else zeros).append(minterm(f.n, i))
    return DsopCover(f.n, tuple(ones)), DsopCover(f.n, tuple(zeros))


def eval_cover_pair(f1: DsopCover, f0: DsopCover, cw: CodewordOrSpacer) -> tuple[int, int]:
    if f1.n != f0.n:
        raise ValueError(f"cover arity mismatch: {f1.n} vs {f0.n}")
    if isinstance(cw, Codeword) and cw.n != f1.n:
        raise ValueError(f"codeword has {cw.n} variables, covers have {f1.n}")
    active = cw.active_rails()
    return (
        int(any(t.satisfied_by(active) for t in f1.terms)),
        int(any(t.satisfied_by(active) for t in f0.terms)),
    )


# --- factored expressions ---------------------------------------------------


@dataclass(frozen=True)
class Literal:
    lit: RailLiteral

    def evaluate(self, active: frozenset[RailLiteral]) -> int:
        return int(self.lit in active)

    def literals(self) -> Iterator[RailLiteral]:
        yield self.lit

    def canonical(self):
        return ("lit", self.lit.var, self.lit.rail)

    def depth(self) -> int:
        return 0

    def __str__(self) -> str:
        return str(self.lit)


@dataclass(frozen=True)
class _Nary:
    children: tuple["FactoredExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError(f"{type(self).__name__} needs at least 2 children")
        if any(type(c) is type(self) for c in self.children):
            raise ValueError(f"{type(self).__name__} directly under {type(self).__name__}")

    def literals(self) -> Iterator[RailLiteral]:
        for c in self.children:
            yield from c.literals()

    def canonical(self):
        return (type(self).__name__.lower(), tuple(sorted(c.canonical() for c in self.children)))

    def depth(self) -> int:
        return 1 + max(c.depth() for c in self.children)


@dataclass(frozen=True)
class And(_Nary):
    def evaluate(self, active: frozenset[RailLiteral]) -> int:
        return int(all(c.evaluate(active) for c in self.children))

    def __str__(self) -> str:
        return "".join(f"({c})" if isinstance(c, Or) else str(c) for c in self.children)


@dataclass(frozen=True)
class Or(_Nary):
    def evaluate(self, active: frozenset[RailLiteral]) -> int:
        return int(any(c.evaluate(active) for c in self.children))

    def __str__(self) -> str:
        return " + ".join(map(str, self.children))


FactoredExpr = Union[Literal, And, Or]


def conj(*items: FactoredExpr) -> FactoredExpr:
    """Flattening conjunction; a single operand is returned unchanged."""
    flat: list[FactoredExpr] = []
    for it in items:
        flat.extend(it.children if isinstance(it, And) else (it,))
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*items: FactoredExpr) -> FactoredExpr:
    flat: list[FactoredExpr] = []
    for it in items:
        flat.extend(it.children if isinstance(it, Or) else (it,))
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def term_expr(term: ProductTerm) -> FactoredExpr:
    return conj(*(Literal(lit) for lit in term.sorted_literals()))


def cover_expr(cover: DsopCover) -> FactoredExpr:
    if not cover.terms:
        raise ValueError("empty cover has no expression form")
    return disj(*(term_expr(t) for t in cover.terms))


def eval_factored(expr: FactoredExpr, cw: CodewordOrSpacer) -> int:
    return expr.evaluate(cw.active_rails())


def top_level_terms(expr: FactoredExpr) -> tuple[FactoredExpr, ...]:
    return expr.children if isinstance(expr, Or) else (expr,)


_TOKEN = re.compile(r"\s*(X\d+[01]|\(|\)|\+|\[|\])")


def parse_expr(text: str) -> FactoredExpr:
    """Parse the rendered form, e.g. ``(X30 + X31)(X20 + X21)X10 + X30X21X11``.

    Square brackets are accepted as grouping, so printed equations can be
    pasted as they are written.
    """
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at offset {pos}: {text[pos:pos + 8]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    i = 0

    def sum_() -> FactoredExpr:
        nonlocal i
        items = [product()]
        while i < len(tokens) and tokens[i] == "+":
            i += 1
            items.append(product())
        return disj(*items)

    def product() -> FactoredExpr:
        nonlocal i
        items = []
        while i < len(tokens) and tokens[i] not in ("+", ")", "]"):
            tok = tokens[i]
            i += 1
            if tok in ("(", "["):
                items.append(sum_())
                close = ")" if tok == "(" else "]"
                if i >= len(tokens) or tokens[i] != close:
                    raise ParseError(f"missing {close!r}")
                i += 1
            else:
                items.append(Literal(RailLiteral.parse(tok)))
        if not items:
            raise ParseError("empty product")
        return conj(*items)

    expr = sum_()
    if i != len(tokens):
        raise ParseError(f"unexpected token {tokens[i]!r}")
    return expr
