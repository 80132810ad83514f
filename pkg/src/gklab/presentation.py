"""Finitely presented algebras as terminating rewriting systems.

A presentation fixes an ordered list of generators over a coefficient domain
and a list of rules ``lhs -> rhs`` where every word of ``rhs`` is strictly
smaller than ``lhs`` in degree-lexicographic order.  Since deglex is a
monoid order, every rewrite decreases the multiset of word ranks and
reduction always terminates.

File format (line oriented, ``#`` starts a comment)::

    domain: Z[q]
    generators: x y
    rule: y x -> q x y
    flags: pbw
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .coeff import (
    DomainMismatch,
    DomainSpec,
    ParamPoly,
    Scalar,
    format_scalar,
    is_scalar,
    is_unit,
)

__all__ = [
    "Word",
    "NCPoly",
    "RewriteRule",
    "Presentation",
    "Ambiguity",
    "PBWReport",
    "PresentationError",
    "PresentationSyntaxError",
    "OrderingViolation",
    "UnknownGenerator",
    "DomainMismatch",
    "deglex_key",
    "parse_presentation",
    "load_presentation",
    "parse_poly",
    "format_poly",
    "reduce",
    "multiply_reduced",
    "confluence_check",
    "validate_pbw_shape",
]

Word = Tuple[int, ...]


def deglex_key(w: Word) -> Tuple[int, Word]:
    return (len(w), w)


class PresentationError(Exception):
    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(self._render())

    def _render(self) -> str:
        if self.line is None:
            return self.message
        if self.col is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, col {self.col}: {self.message}"


class PresentationSyntaxError(PresentationError):
    pass


class OrderingViolation(PresentationError):
    pass


class UnknownGenerator(PresentationError):
    pass


class ParseDomainMismatch(PresentationError, DomainMismatch):
    """Domain mismatch found while reading text; carries a source position."""


class NCPoly:
    """Noncommutative polynomial: a finite map from words to nonzero scalars.

    Coefficients are central.  Instances are treated as immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Word, Scalar]] = None):
        self._terms: Dict[Word, Scalar] = {}
        if terms:
            for w, c in terms.items():
                if c != 0:
                    self._terms[tuple(w)] = c
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, terms: Dict[Word, Scalar]) -> "NCPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def one(cls) -> "NCPoly":
        return cls._raw({(): 1})

    @classmethod
    def zero(cls) -> "NCPoly":
        return cls._raw({})

    @classmethod
    def word(cls, w: Sequence[int], coeff: Scalar = 1) -> "NCPoly":
        return cls({tuple(w): coeff})

    @classmethod
    def constant(cls, c: Scalar) -> "NCPoly":
        return cls({(): c})

    @property
    def terms(self) -> Mapping[Word, Scalar]:
        return self._terms

    def items(self):
        return self._terms.items()

    def words(self) -> Iterable[Word]:
        return self._terms.keys()

    def coeff(self, w: Word) -> Scalar:
        return self._terms.get(w, 0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self) -> Iterator[Word]:
        return iter(self._terms)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=-1)

    def leading_word(self) -> Word:
        return max(self._terms, key=deglex_key)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return all(len(w) == 0 for w in self._terms)

    def __add__(self, other):
        if is_scalar(other):
            other = NCPoly.constant(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            v = out.get(w, 0) + c
            if v == 0:
                out.pop(w, None)
            else:
                out[w] = v
        return NCPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        if is_scalar(other):
            other = NCPoly.constant(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "NCPoly":
        if c == 0:
            return NCPoly.zero()
        return NCPoly._raw({w: c * s for w, s in self._terms.items()})

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        out: Dict[Word, Scalar] = {}
        for u, a in self._terms.items():
            for v, b in other._terms.items():
                w = u + v
                s = out.get(w, 0) + a * b
                if s == 0:
                    out.pop(w, None)
                else:
                    out[w] = s
        return NCPoly._raw(out)

    def __rmul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self._terms == other._terms
        if is_scalar(other):
            return self == NCPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"NCPoly({self._terms!r})"


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: NCPoly

    def __post_init__(self):
        if len(self.lhs) < 2:
            raise OrderingViolation(f"rule lhs {self.lhs} must have length >= 2")
        k = deglex_key(self.lhs)
        for w in self.rhs.words():
            if deglex_key(w) >= k:
                raise OrderingViolation(
                    f"rhs word {w} is not deglex-smaller than lhs {self.lhs}"
                )


@dataclass(frozen=True)
class Ambiguity:
    overlap_word: Word
    reduction_a: NCPoly
    reduction_b: NCPoly
    resolved: bool
    kind: str = "overlap"
    rules: Tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class PBWReport:
    pbw_shape: bool
    quasi_commutative: bool
    bijective_constants: bool
    constants: Dict[Tuple[int, int], Scalar] = field(default_factory=dict)
    problems: Tuple[str, ...] = ()
    claims_consistent: bool = True


@dataclass(frozen=True, eq=False)
class Presentation:
    domain: DomainSpec
    generators: Tuple[str, ...]
    rules: Tuple[RewriteRule, ...] = ()
    claims_pbw: bool = False
    claims_commutative: bool = False
    name: str = ""

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "rules", tuple(self.rules))
        if len(set(gens)) != len(gens):
            raise PresentationSyntaxError("generator names must be unique")
        for g in gens:
            if not g.isidentifier():
                raise PresentationSyntaxError(f"invalid generator name {g!r}")
        if self.domain.parameter_name is not None and self.domain.parameter_name in gens:
            raise DomainMismatch(
                f"parameter {self.domain.parameter_name!r} clashes with a generator name"
            )
        n = len(gens)
        for r in self.rules:
            for w in (r.lhs, *r.rhs.words()):
                if any(not 0 <= i < n for i in w):
                    raise UnknownGenerator(f"word {w} uses an index outside 0..{n - 1}")
            for c in r.rhs.terms.values():
                self.domain.check(c)
        by_first: Dict[int, List[RewriteRule]] = {}
        for r in self.rules:
            by_first.setdefault(r.lhs[0], []).append(r)
        object.__setattr__(self, "_by_first", by_first)
        # normal forms of reducible words; values are never mutated once stored
        object.__setattr__(self, "_nf_cache", {})

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def max_lhs_length(self) -> int:
        return max((len(r.lhs) for r in self.rules), default=0)

    def gen(self, name: str) -> NCPoly:
        return NCPoly.word((self.generators.index(name),))

    def find_redex(self, w: Word) -> Optional[Tuple[int, RewriteRule]]:
        """Leftmost redex position; ties broken by rule order."""
        by_first = self._by_first
        for i, g in enumerate(w):
            for rule in by_first.get(g, ()):
                k = len(rule.lhs)
                if w[i:i + k] == rule.lhs:
                    return i, rule
        return None

    def is_normal(self, w: Word) -> bool:
        return self.find_redex(w) is None

    def normal_form_word(self, w: Word) -> Mapping[Word, Scalar]:
        memo = self._nf_cache
        hit = memo.get(w)
        if hit is not None:
            return hit
        if self.find_redex(w) is None:
            return {w: 1}
        stack = [w]
        while stack:
            u = stack[-1]
            if u in memo:
                stack.pop()
                continue
            redex = self.find_redex(u)
            if redex is None:
                stack.pop()
                continue
            i, rule = redex
            pre, post = u[:i], u[i + len(rule.lhs):]
            pending = [
                pre + v + post
                for v in rule.rhs.words()
                if (pre + v + post) not in memo and self.find_redex(pre + v + post) is not None
            ]
            if pending:
                stack.extend(pending)
                continue
            acc: Dict[Word, Scalar] = {}
            for v, c in rule.rhs.items():
                child = pre + v + post
                nf = memo.get(child)
                if nf is None:
                    nf = {child: 1}
                for x, d in nf.items():
                    s = acc.get(x, 0) + c * d
                    if s == 0:
                        acc.pop(x, None)
                    else:
                        acc[x] = s
            memo[u] = acc
            stack.pop()
        return memo[w]

    def reduce(self, p: NCPoly) -> NCPoly:
        out: Dict[Word, Scalar] = {}
        for w, c in p.items():
            for x, d in self.normal_form_word(w).items():
                s = out.get(x, 0) + c * d
                if s == 0:
                    out.pop(x, None)
                else:
                    out[x] = s
        return NCPoly._raw(out)

    def multiply(self, p: NCPoly, q: NCPoly) -> NCPoly:
        return self.reduce(p * q)

    def fingerprint(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]

    def canonical_text(self) -> str:
        lines = [f"domain: {self.domain}", "generators: " + " ".join(self.generators)]
        for r in self.rules:
            lines.append(
                f"rule: {format_poly(NCPoly.word(r.lhs), self)} -> {format_poly(r.rhs, self)}"
            )
        flags = [f for f, on in (("pbw", self.claims_pbw), ("commutative", self.claims_commutative)) if on]
        if flags:
            lines.append("flags: " + " ".join(flags))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# operations


def reduce(p: NCPoly, pres: Presentation) -> NCPoly:
    return pres.reduce(p)


def multiply_reduced(p: NCPoly, q: NCPoly, pres: Presentation) -> NCPoly:
    return pres.multiply(p, q)


def confluence_check(pres: Presentation, max_overlap_degree: Optional[int] = None) -> List[Ambiguity]:
    """Reduce every overlap and inclusion ambiguity both ways.

    Overlaps pair a proper suffix of one lhs with a proper prefix of another
    (a rule may overlap itself); inclusions are lhs words occurring inside a
    different lhs.  Only ambiguity words of length ``<= max_overlap_degree``
    are examined.
    """
    if max_overlap_degree is None:
        max_overlap_degree = 2 * pres.max_lhs_length
    if pres.rules and max_overlap_degree < pres.max_lhs_length:
        raise ValueError("max_overlap_degree must be at least the longest lhs length")
    found: List[Ambiguity] = []
    rules = pres.rules
    for a, r1 in enumerate(rules):
        l1 = r1.lhs
        for b, r2 in enumerate(rules):
            l2 = r2.lhs
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] != l2[:k]:
                    continue
                w = l1 + l2[k:]
                if len(w) > max_overlap_degree:
                    continue
                left = pres.reduce(r1.rhs * NCPoly.word(l2[k:]))
                right = pres.reduce(NCPoly.word(l1[:-k]) * r2.rhs)
                found.append(Ambiguity(w, left, right, left == right, "overlap", (a, b)))
            if a == b or len(l2) > len(l1):
                continue
            for i in range(len(l1) - len(l2) + 1):
                if l1[i:i + len(l2)] != l2:
                    continue
                if len(l1) > max_overlap_degree:
                    continue
                left = pres.reduce(r1.rhs)
                right = pres.reduce(
                    NCPoly.word(l1[:i]) * r2.rhs * NCPoly.word(l1[i + len(l2):])
                )
                found.append(Ambiguity(l1, left, right, left == right, "inclusion", (a, b)))
    return found


def is_confluent(pres: Presentation) -> bool:
    return all(a.resolved for a in confluence_check(pres))


def validate_pbw_shape(pres: Presentation) -> PBWReport:
    """Check the rules against ``x_j x_i -> c x_i x_j + linear + constant``."""
    n = pres.ngens
    problems: List[str] = []
    names = pres.generators
    constants: Dict[Tuple[int, int], Scalar] = {}
    touched = set()
    pure = True
    for r in pres.rules:
        lhs = r.lhs
        shown = " ".join(names[i] for i in lhs)
        if len(lhs) != 2 or lhs[0] <= lhs[1]:
            problems.append(f"lhs '{shown}' is not of the form x_j x_i with j > i")
            continue
        j, i = lhs
        if (i, j) in touched:
            problems.append(f"more than one rule for the pair ({names[i]}, {names[j]})")
            continue
        touched.add((i, j))
        c = r.rhs.coeff((i, j))
        if c == 0 or any(len(w) > 1 and w != (i, j) for w in r.rhs.words()):
            problems.append(f"rhs of '{shown}' is not c {names[i]} {names[j]} + linear + constant")
            continue
        constants[(i, j)] = c
        if len(r.rhs) != 1:
            pure = False
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in touched:
                problems.append(f"no rule for the pair ({names[i]}, {names[j]})")
    shape = not problems
    quasi = shape and pure
    bijective = shape and all(is_unit(c) for c in constants.values())
    commutative = quasi and all(c == 1 for c in constants.values())
    consistent = (not pres.claims_pbw or shape) and (not pres.claims_commutative or commutative)
    return PBWReport(shape, quasi, bijective, constants, tuple(problems), consistent)


# ---------------------------------------------------------------------------
# text format

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>->|[-+*^(),;]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int, col0: int = 1) -> List[_Tok]:
    toks: List[_Tok] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip()) if pos < len(text) else pos
            raise PresentationSyntaxError(f"unexpected character {text[bad]!r}", line, col0 + bad)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), col0 + m.start(kind)))
        pos = m.end()
    return toks


class _PolyParser:
    """Recursive descent for sums of products of integers, scalars and generators."""

    def __init__(self, toks: List[_Tok], pres_names: Sequence[str], domain: DomainSpec, line):
        self.toks = toks
        self.i = 0
        self.index = {g: k for k, g in enumerate(pres_names)}
        self.domain = domain
        self.line = line

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Optional[_Tok] = None):
        col = tok.col if tok else (self.toks[-1].col + len(self.toks[-1].text) if self.toks else 1)
        raise PresentationSyntaxError(msg, self.line, col)

    def expect_end(self):
        t = self.peek()
        if t is not None:
            self.error(f"unexpected {t.text!r}", t)

    def poly(self) -> NCPoly:
        sign = 1
        t = self.peek()
        if t is not None and t.text in "+-" and t.kind == "op":
            self.take()
            sign = -1 if t.text == "-" else 1
        acc = self.term().scale(sign)
        while True:
            t = self.peek()
            if t is None or t.kind != "op" or t.text not in ("+", "-"):
                return acc
            self.take()
            nxt = self.term()
            acc = acc + nxt if t.text == "+" else acc - nxt

    def term(self) -> NCPoly:
        acc = self.factor(first=True)
        seen_gen = bool(acc.degree > 0)
        while True:
            t = self.peek()
            if t is None:
                return acc
            if t.kind == "op" and t.text == "*":
                self.take()
                t = self.peek()
                if t is None:
                    self.error("expected a factor after '*'")
            elif not (t.kind in ("int", "ident") or t.text == "("):
                return acc
            f = self.factor(first=not seen_gen)
            seen_gen = seen_gen or f.degree > 0
            acc = acc * f

    def exponent(self) -> int:
        t = self.peek()
        if t is not None and t.kind == "op" and t.text == "^":
            self.take()
            e = self.peek()
            if e is None or e.kind != "int":
                self.error("expected a nonnegative integer exponent", e)
            self.take()
            return int(e.text)
        return 1

    def factor(self, first: bool) -> NCPoly:
        t = self.peek()
        if t is None:
            self.error("expected a term")
        if t.kind == "int":
            self.take()
            return NCPoly.constant(int(t.text) ** self.exponent())
        if t.kind == "ident":
            self.take()
            k = self.exponent()
            if t.text in self.index:
                return NCPoly.word((self.index[t.text],) * k)
            if self.domain.has_parameter and t.text == self.domain.parameter_name:
                return NCPoly.constant(ParamPoly.gen() ** k)
            if not self.domain.has_parameter and first:
                raise ParseDomainMismatch(
                    f"{t.text!r} is not a generator and domain Z has no parameter", self.line, t.col
                )
            raise UnknownGenerator(f"unknown generator {t.text!r}", self.line, t.col)
        if t.text == "(":
            self.take()
            inner = self.poly()
            close = self.peek()
            if close is None or close.text != ")":
                self.error("expected ')'", close)
            self.take()
            k = self.exponent()
            out = NCPoly.one()
            for _ in range(k):
                out = out * inner
            return out
        self.error(f"unexpected {t.text!r}", t)


def _parse_domain(value: str, line: int) -> DomainSpec:
    v = value.strip()
    if v in ("Z", "ZZ"):
        return DomainSpec.integers()
    m = re.fullmatch(r"ZZ?\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]", v)
    if m:
        return DomainSpec.with_parameter(m.group(1))
    raise PresentationSyntaxError(f"unsupported domain {v!r} (expected Z or Z[q])", line, 1)


def parse_poly(text: str, pres: Presentation, line: Optional[int] = None, col0: int = 1) -> NCPoly:
    """Parse a polynomial over ``pres``'s generators (not reduced)."""
    toks = _tokenize(text, line, col0)
    if not toks:
        raise PresentationSyntaxError("empty polynomial", line, col0)
    p = _PolyParser(toks, pres.generators, pres.domain, line)
    out = p.poly()
    p.expect_end()
    return out


def parse_presentation(text: str, name: str = "") -> Presentation:
    domain: Optional[DomainSpec] = None
    generators: Optional[Tuple[str, ...]] = None
    raw_rules: List[Tuple[int, int, str]] = []
    flags: set = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if ":" not in body:
            raise PresentationSyntaxError("expected 'key: value'", lineno, 1)
        key, value = body.split(":", 1)
        key = key.strip().lower()
        vcol = body.index(":") + 2
        if key == "domain":
            if domain is not None:
                raise PresentationSyntaxError("domain declared twice", lineno, 1)
            domain = _parse_domain(value, lineno)
        elif key == "generators":
            if generators is not None:
                raise PresentationSyntaxError("generators declared twice", lineno, 1)
            names = tuple(value.replace(",", " ").split())
            if not names:
                raise PresentationSyntaxError("at least one generator is required", lineno, vcol)
            for g in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", g):
                    raise PresentationSyntaxError(f"invalid generator name {g!r}", lineno, vcol)
            if len(set(names)) != len(names):
                raise PresentationSyntaxError("duplicate generator name", lineno, vcol)
            generators = names
        elif key == "rule":
            raw_rules.append((lineno, vcol, value))
        elif key == "flags":
            for f in value.split():
                f = f.lower()
                if f not in ("pbw", "commutative"):
                    raise PresentationSyntaxError(f"unknown flag {f!r}", lineno, vcol)
                flags.add(f)
        else:
            raise PresentationSyntaxError(f"unknown key {key!r}", lineno, 1)
    if domain is None:
        domain = DomainSpec.integers()
    if generators is None:
        raise PresentationSyntaxError("missing 'generators:' line", None)
    if domain.parameter_name in generators:
        raise ParseDomainMismatch(
            f"parameter {domain.parameter_name!r} is also a generator name", None
        )
    shell = Presentation(domain, generators, (), name=name)
    rules: List[RewriteRule] = []
    for lineno, vcol, value in raw_rules:
        if "->" not in value:
            raise PresentationSyntaxError("rule needs '->'", lineno, vcol)
        lhs_text, rhs_text = value.split("->", 1)
        lhs = parse_poly(lhs_text, shell, lineno, vcol)
        if not lhs.is_monomial() or next(iter(lhs.terms.values())) != 1:
            raise PresentationSyntaxError("rule lhs must be a single word", lineno, vcol)
        (lw,) = lhs.words()
        if len(lw) < 2:
            raise PresentationSyntaxError("rule lhs must have length >= 2", lineno, vcol)
        rcol = vcol + len(lhs_text) + 2
        rhs = parse_poly(rhs_text, shell, lineno, rcol)
        try:
            rules.append(RewriteRule(lw, rhs))
        except OrderingViolation as e:
            shown = " ".join(generators[i] for i in lw)
            bad = [w for w in rhs.words() if deglex_key(w) >= deglex_key(lw)]
            worst = " ".join(generators[i] for i in max(bad, key=deglex_key)) or "1"
            raise OrderingViolation(
                f"rhs word '{worst}' is not deglex-smaller than lhs '{shown}'", lineno, rcol
            ) from e
    return Presentation(
        domain,
        generators,
        tuple(rules),
        claims_pbw="pbw" in flags,
        claims_commutative="commutative" in flags,
        name=name,
    )


def load_presentation(path) -> Presentation:
    from pathlib import Path

    p = Path(path)
    return parse_presentation(p.read_text(encoding="utf-8"), name=p.stem)


def format_word(w: Word, pres: Presentation) -> str:
    if not w:
        return "1"
    out: List[str] = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        g = pres.generators[w[i]]
        out.append(g if j - i == 1 else f"{g}^{j - i}")
        i = j
    return " ".join(out)


def format_poly(p: NCPoly, pres: Presentation) -> str:
    if not p:
        return "0"
    param = pres.domain.parameter_name or "q"
    parts: List[str] = []
    for w in sorted(p.words(), key=deglex_key, reverse=True):
        c = p.coeff(w)
        neg = isinstance(c, int) and c < 0
        mag = -c if neg else c
        if isinstance(mag, ParamPoly):
            text = format_scalar(mag, param)
            cs = f"({text})" if len([t for t in mag.coeffs if t]) > 1 else text
        else:
            cs = str(mag)
        ws = format_word(w, pres)
        if not w:
            body = cs
        elif mag == 1:
            body = ws
        else:
            body = f"{cs} {ws}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)
