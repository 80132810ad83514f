"""Interval bookkeeping for GK dimension over construction trees.

Every node maps the bounds of its children to a bound for itself using one of
the standard construction rules (polynomial extensions, free algebras, matrix
rings, quotients, subalgebras, products, tensor products, localizations,
group rings, associated graded rings, Ore and skew PBW extensions, modules,
transcendence degree).  Hypotheses such as bijectivity or central regularity
are flags the caller asserts; a missing flag only weakens the interval.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import List, Optional, Sequence, Tuple, Union

__all__ = [
    "DimValue",
    "DimBound",
    "INF",
    "MalformedExpression",
    "EmptyBound",
    "TraceEntry",
    "Base",
    "PolyExt",
    "FreeAlgebra",
    "MatrixRing",
    "Quotient",
    "Subalgebra",
    "DirectProduct",
    "Tensor",
    "Localization",
    "GroupRing",
    "AssocGraded",
    "OreExt",
    "SkewPBW",
    "RegularModule",
    "ModuleOver",
    "SubOrQuotientModule",
    "AnnihilatedModule",
    "ModuleSum",
    "Tdeg",
    "eval_construction",
    "bergman_normalize",
    "parse_expr",
    "format_rational",
]


class MalformedExpression(ValueError):
    pass


class EmptyBound(ValueError):
    pass


def format_rational(x: Fraction) -> str:
    """Exact decimal when the denominator allows it, else ``p/q``."""
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    scaled = abs(x.numerator) * 10**places // x.denominator
    sign = "-" if x < 0 else ""
    whole, frac = divmod(scaled, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}".rstrip("0")


@total_ordering
@dataclass(frozen=True)
class DimValue:
    """A dimension: a nonnegative rational or infinity."""

    value: Fraction = Fraction(0)
    infinite: bool = False

    def __post_init__(self):
        if self.infinite:
            object.__setattr__(self, "value", Fraction(0))
        else:
            v = Fraction(self.value)
            if v < 0:
                raise ValueError("dimensions are nonnegative")
            object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, x) -> "DimValue":
        if isinstance(x, DimValue):
            return x
        if isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        return cls(Fraction(x))

    @property
    def is_finite(self) -> bool:
        return not self.infinite

    def __lt__(self, other):
        other = DimValue.of(other)
        if self.infinite:
            return False
        if other.infinite:
            return True
        return self.value < other.value

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, str)):
            try:
                other = DimValue.of(other)
            except (ValueError, ZeroDivisionError):
                return False
        if not isinstance(other, DimValue):
            return NotImplemented
        return self.infinite == other.infinite and self.value == other.value

    def __hash__(self):
        return hash((self.infinite, self.value))

    def __add__(self, other):
        other = DimValue.of(other)
        if self.infinite or other.infinite:
            return INF
        return DimValue(self.value + other.value)

    __radd__ = __add__

    def __str__(self):
        return "inf" if self.infinite else format_rational(self.value)

    def __repr__(self):
        return f"DimValue({self})"


INF = DimValue(infinite=True)
ZERO = DimValue(Fraction(0))


@dataclass(frozen=True)
class DimBound:
    lo: DimValue
    hi: DimValue

    def __post_init__(self):
        object.__setattr__(self, "lo", DimValue.of(self.lo))
        object.__setattr__(self, "hi", DimValue.of(self.hi))
        if self.hi < self.lo:
            raise EmptyBound(f"lower end {self.lo} exceeds upper end {self.hi}")

    @classmethod
    def exactly(cls, x) -> "DimBound":
        v = DimValue.of(x)
        return cls(v, v)

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        x = DimValue.of(x)
        return self.lo <= x <= self.hi

    def shift(self, m) -> "DimBound":
        return DimBound(self.lo + m, self.hi + m)

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"

    def to_json(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi), "exact": self.exact}


# ---------------------------------------------------------------------------
# construction trees


@dataclass(frozen=True)
class Base:
    name: str
    bound: DimBound
    commutative: bool = False
    fin_gen: bool = False
    finite_rank: bool = False


@dataclass(frozen=True)
class PolyExt:
    child: "Expr"
    m: int = 1


@dataclass(frozen=True)
class FreeAlgebra:
    m: int


@dataclass(frozen=True)
class MatrixRing:
    child: "Expr"
    n: int


@dataclass(frozen=True)
class Quotient:
    child: "Expr"


@dataclass(frozen=True)
class Subalgebra:
    child: "Expr"
    central_module_finite: bool = False


@dataclass(frozen=True)
class DirectProduct:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Tensor:
    left: "Expr"
    right: "Expr"
    fg_witness: bool = False


@dataclass(frozen=True)
class Localization:
    child: "Expr"
    central_regular: bool = True


@dataclass(frozen=True)
class GroupRing:
    child: "Expr"
    group_order: Optional[int]


@dataclass(frozen=True)
class AssocGraded:
    child: "Expr"
    locally_finite: bool = True


@dataclass(frozen=True)
class OreExt:
    child: "Expr"
    frame_stable: bool = True


@dataclass(frozen=True)
class SkewPBW:
    child: "Expr"
    t: int
    bijective: bool = True
    frame_stable: bool = True


@dataclass(frozen=True)
class RegularModule:
    child: "Expr"


@dataclass(frozen=True)
class ModuleOver:
    child: "Expr"


@dataclass(frozen=True)
class SubOrQuotientModule:
    module_child: "Expr"


@dataclass(frozen=True)
class AnnihilatedModule:
    module_child: "Expr"


@dataclass(frozen=True)
class ModuleSum:
    children: Tuple["Expr", ...]


@dataclass(frozen=True)
class Tdeg:
    child: "Expr"
    commutative: bool = False


Expr = Union[
    Base, PolyExt, FreeAlgebra, MatrixRing, Quotient, Subalgebra, DirectProduct, Tensor,
    Localization, GroupRing, AssocGraded, OreExt, SkewPBW, RegularModule, ModuleOver,
    SubOrQuotientModule, AnnihilatedModule, ModuleSum, Tdeg,
]

_ALGEBRA = (
    Base, PolyExt, FreeAlgebra, MatrixRing, Quotient, Subalgebra, DirectProduct, Tensor,
    Localization, GroupRing, AssocGraded, OreExt, SkewPBW,
)
_MODULE = (RegularModule, ModuleOver, SubOrQuotientModule, AnnihilatedModule, ModuleSum)


@dataclass(frozen=True)
class TraceEntry:
    node: str
    rule: str
    cite: str
    inputs: Tuple[DimBound, ...]
    output: DimBound
    blocked: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "node": self.node,
            "rule": self.rule,
            "cite": self.cite,
            "inputs": [str(b) for b in self.inputs],
            "output": str(self.output),
        }
        if self.blocked:
            out["blocked"] = self.blocked
        return out


@dataclass
class _Result:
    bound: DimBound
    commutative: bool = False
    # algebra bound a module lives over; None for algebra nodes
    over: Optional[DimBound] = None


def _interval(lo, hi) -> DimBound:
    return DimBound(DimValue.of(lo), DimValue.of(hi))


def _up_to(b: DimBound) -> DimBound:
    return DimBound(ZERO, b.hi)


def _maxb(bs: Sequence[DimBound]) -> DimBound:
    return DimBound(max(b.lo for b in bs), max(b.hi for b in bs))


class _Evaluator:
    def __init__(self):
        self.trace: List[TraceEntry] = []

    def log(self, node, rule, cite, inputs, out, blocked=None):
        self.trace.append(TraceEntry(node, rule, cite, tuple(inputs), out, blocked))
        return out

    def algebra(self, e) -> _Result:
        if not isinstance(e, _ALGEBRA):
            raise MalformedExpression(f"{type(e).__name__} is not an algebra node")
        return self.ev(e)

    def module(self, e) -> _Result:
        if not isinstance(e, _MODULE):
            raise MalformedExpression(f"{type(e).__name__} is not a module node")
        return self.ev(e)

    def ev(self, e) -> _Result:
        name = type(e).__name__
        if isinstance(e, Base):
            b = e.bound
            if e.finite_rank:
                if not e.fin_gen:
                    out = self.log(f"Base({e.name})", "base", "given bound", [], b,
                                   blocked="finite rank gives dim 0 only for finitely generated algebras")
                    return _Result(out, e.commutative)
                if not b.contains(0):
                    raise MalformedExpression(f"base {e.name!r}: finite rank forces dim 0, outside {b}")
                out = self.log(f"Base({e.name})", "finite-rank", "GKdim(B) = 0 iff rank B < inf (B finitely generated)", [b], DimBound.exactly(0))
                return _Result(out, e.commutative)
            return _Result(self.log(f"Base({e.name})", "base", "given bound", [], b), e.commutative)

        if isinstance(e, PolyExt):
            if e.m < 0:
                raise MalformedExpression("PolyExt needs m >= 0")
            c = self.algebra(e.child)
            out = c.bound.shift(e.m)
            return _Result(self.log(f"PolyExt(m={e.m})", "polynomial-extension", "GKdim(B[x1..xm]) = GKdim(B) + m", [c.bound], out), c.commutative)

        if isinstance(e, FreeAlgebra):
            if e.m < 0:
                raise MalformedExpression("FreeAlgebra needs m >= 0")
            if e.m <= 1:
                # R has rank 1, so dim 0; one free variable is R[x]
                out = DimBound.exactly(e.m)
                return _Result(self.log(f"FreeAlgebra({e.m})", "free-algebra-small",
                                        "GKdim(R) = 0 (rank 1); R{x} = R[x] has GKdim 1", [], out), True)
            out = DimBound.exactly(INF)
            return _Result(self.log(f"FreeAlgebra({e.m})", "free-algebra", "GKdim(R{x1..xm}) = inf for m >= 2", [], out), False)

        if isinstance(e, MatrixRing):
            if e.n < 1:
                raise MalformedExpression("MatrixRing needs n >= 1")
            c = self.algebra(e.child)
            return _Result(self.log(f"MatrixRing(n={e.n})", "matrix-ring", "GKdim(M_n(B)) = GKdim(B)", [c.bound], c.bound),
                           c.commutative and e.n == 1)

        if isinstance(e, Quotient):
            c = self.algebra(e.child)
            out = _up_to(c.bound)
            return _Result(self.log(name, "quotient", "GKdim(B/I) <= GKdim(B)", [c.bound], out), c.commutative)

        if isinstance(e, Subalgebra):
            c = self.algebra(e.child)
            if e.central_module_finite:
                return _Result(self.log(name, "central-finite-subalgebra",
                                        "GKdim(C) = GKdim(B) for central C with B f.g. over C", [c.bound], c.bound), c.commutative)
            out = _up_to(c.bound)
            return _Result(self.log(name, "subalgebra", "GKdim(C) <= GKdim(B) for a subalgebra C", [c.bound], out,
                                    blocked="equality needs central_module_finite"), c.commutative)

        if isinstance(e, DirectProduct):
            l, r = self.algebra(e.left), self.algebra(e.right)
            out = _maxb([l.bound, r.bound])
            return _Result(self.log(name, "direct-product", "GKdim(B x C) = max(GKdim B, GKdim C)", [l.bound, r.bound], out),
                           l.commutative and r.commutative)

        if isinstance(e, Tensor):
            l, r = self.algebra(e.left), self.algebra(e.right)
            comm = l.commutative and r.commutative
            if e.fg_witness:
                out = DimBound(l.bound.lo + r.bound.lo, l.bound.hi + r.bound.hi)
                return _Result(self.log(name, "tensor-sum", "GKdim(B (x) C) = GKdim B + GKdim C (f.g. witness)", [l.bound, r.bound], out), comm)
            out = DimBound(max(l.bound.lo, r.bound.lo), l.bound.hi + r.bound.hi)
            return _Result(self.log(name, "tensor-bounds", "max(GKdim B, GKdim C) <= GKdim(B (x) C) <= GKdim B + GKdim C", [l.bound, r.bound], out,
                                    blocked="sum needs fg_witness"), comm)

        if isinstance(e, Localization):
            c = self.algebra(e.child)
            if e.central_regular:
                return _Result(self.log(name, "localization", "GKdim(BS^-1) = GKdim(B), S central regular", [c.bound], c.bound), c.commutative)
            out = _interval(0, INF)
            return _Result(self.log(name, "localization", "GKdim(BS^-1) = GKdim(B), S central regular", [c.bound], out,
                                    blocked="needs a central regular multiplicative system"), c.commutative)

        if isinstance(e, GroupRing):
            c = self.algebra(e.child)
            if e.group_order is not None and e.group_order < 1:
                raise MalformedExpression("group order must be positive")
            if e.group_order is not None:
                return _Result(self.log(f"GroupRing(|G|={e.group_order})", "group-ring", "GKdim(B[G]) = GKdim(B), G finite",
                                        [c.bound], c.bound), c.commutative and e.group_order == 1)
            out = DimBound(c.bound.lo, INF)
            return _Result(self.log("GroupRing(|G|=?)", "group-ring", "GKdim(C) <= GKdim(B) for a subalgebra C", [c.bound], out,
                                    blocked="equality needs a finite group"), False)

        if isinstance(e, AssocGraded):
            c = self.algebra(e.child)
            if e.locally_finite:
                return _Result(self.log(name, "associated-graded", "GKdim(Gr B) = GKdim(B), locally finite filtration", [c.bound], c.bound), c.commutative)
            out = _interval(0, INF)
            return _Result(self.log(name, "associated-graded", "GKdim(Gr B) = GKdim(B), locally finite filtration", [c.bound], out,
                                    blocked="needs a locally finite filtration with f.g. graded ring"), c.commutative)

        if isinstance(e, OreExt):
            c = self.algebra(e.child)
            if e.frame_stable:
                out = c.bound.shift(1)
                return _Result(self.log(name, "ore-extension", "GKdim(B[x; sigma, delta]) = GKdim(B) + 1", [c.bound], out), False)
            out = DimBound(c.bound.lo, INF)
            return _Result(self.log(name, "ore-extension", "GKdim(C) <= GKdim(B) for a subalgebra C", [c.bound], out,
                                    blocked="+1 needs a frame-stable automorphism"), False)

        if isinstance(e, SkewPBW):
            if e.t < 0:
                raise MalformedExpression("SkewPBW needs t >= 0")
            c = self.algebra(e.child)
            if e.bijective and e.frame_stable:
                out = c.bound.shift(e.t)
                return _Result(self.log(f"SkewPBW(t={e.t})", "skew-pbw", "GKdim(sigma(B)<x1..xt>) = GKdim(B) + t", [c.bound], out), False)
            missing = [h for h, ok in (("bijective", e.bijective), ("frame-stable", e.frame_stable)) if not ok]
            out = DimBound(c.bound.lo, INF)
            return _Result(self.log(f"SkewPBW(t={e.t})", "skew-pbw", "GKdim(C) <= GKdim(B) for a subalgebra C", [c.bound], out,
                                    blocked="+t needs " + " and ".join(missing)), False)

        if isinstance(e, RegularModule):
            c = self.algebra(e.child)
            return _Result(self.log(name, "regular-module", "GKdim(B_B) = GKdim(B)", [c.bound], c.bound), over=c.bound)

        if isinstance(e, ModuleOver):
            c = self.algebra(e.child)
            out = _up_to(c.bound)
            return _Result(self.log(name, "module-bound", "GKdim(M) <= GKdim(B)", [c.bound], out), over=c.bound)

        if isinstance(e, SubOrQuotientModule):
            c = self.module(e.module_child)
            out = _up_to(c.bound)
            return _Result(self.log(name, "exact-sequence", "GKdim(M) >= max(GKdim K, GKdim L) for 0 -> K -> M -> L -> 0", [c.bound], out), over=c.over)

        if isinstance(e, AnnihilatedModule):
            c = self.module(e.module_child)
            return _Result(self.log(name, "annihilated-module", "GKdim(M_B) = GKdim(M_B/I) when MI = 0", [c.bound], c.bound),
                           over=c.over)

        if isinstance(e, ModuleSum):
            if not e.children:
                raise MalformedExpression("ModuleSum needs at least one summand")
            cs = [self.module(x) for x in e.children]
            out = _maxb([c.bound for c in cs])
            over = _maxb([c.over for c in cs])
            return _Result(self.log(name, "module-sum", "GKdim(sum M_i) = max GKdim(M_i)", [c.bound for c in cs], out), over=over)

        if isinstance(e, Tdeg):
            c = self.algebra(e.child)
            if e.commutative or c.commutative:
                return _Result(self.log(name, "tdeg-commutative", "Tdeg(B) = GKdim(B) for commutative B", [c.bound], c.bound))
            out = _up_to(c.bound)
            return _Result(self.log(name, "tdeg", "Tdeg(B) <= GKdim(B)", [c.bound], out,
                                    blocked="equality needs commutativity"))

        raise MalformedExpression(f"unknown node {e!r}")


def eval_construction(expr) -> Tuple[DimBound, List[TraceEntry]]:
    ev = _Evaluator()
    res = ev.ev(expr)
    bound = res.bound
    if res.over is not None and res.over.hi < bound.hi:
        # a module never outgrows its algebra
        bound = DimBound(min(bound.lo, res.over.hi), res.over.hi)
    return bound, ev.trace


_ONE = Fraction(1)
_TWO = Fraction(2)


def bergman_normalize(b: DimBound) -> DimBound:
    """Intersect a bound with the admissible set {0} u {1} u [2, inf]."""
    lo, hi = b.lo, b.hi

    def strictly_between(x: DimValue, a, c) -> bool:
        return x.is_finite and a < x.value < c

    if strictly_between(hi, 0, 1):
        hi = DimValue(0)
    elif strictly_between(hi, 1, 2):
        hi = DimValue(1)
    if strictly_between(lo, 0, 1):
        lo = DimValue(1)
    elif strictly_between(lo, 1, 2):
        lo = DimValue(2)
    if hi < lo:
        raise EmptyBound(f"{b} contains no admissible dimension")
    return DimBound(lo, hi)


# ---------------------------------------------------------------------------
# s-expression syntax


_SEXP_TOKEN = re.compile(r'\s*(?:(\()|(\))|"((?:[^"\\]|\\.)*)"|([^\s()"]+))')


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _SEXP_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise MalformedExpression(f"cannot read expression at offset {pos}")
        if m.group(1):
            out.append(("(", None))
        elif m.group(2):
            out.append((")", None))
        elif m.group(3) is not None:
            out.append(("str", m.group(3)))
        else:
            out.append(("atom", m.group(4)))
        pos = m.end()
    return out


def _read(tokens, i):
    kind, val = tokens[i]
    if kind == "(":
        items, i = [], i + 1
        while True:
            if i >= len(tokens):
                raise MalformedExpression("unbalanced '('")
            if tokens[i][0] == ")":
                return items, i + 1
            item, i = _read(tokens, i)
            items.append(item)
    if kind == ")":
        raise MalformedExpression("unexpected ')'")
    if kind == "str":
        return ("str", val), i + 1
    return val, i + 1


_VALUED = {":t", ":m", ":n", ":order"}


def _split_args(items):
    pos, kw, flags = [], {}, set()
    i = 0
    while i < len(items):
        it = items[i]
        if isinstance(it, str) and it.startswith(":"):
            if it in _VALUED:
                if i + 1 >= len(items):
                    raise MalformedExpression(f"keyword {it} needs a value")
                kw[it] = items[i + 1]
                i += 2
                continue
            flags.add(it)
        else:
            pos.append(it)
        i += 1
    return pos, kw, flags


def _int(x, what) -> int:
    if not isinstance(x, str) or not re.fullmatch(r"\d+", x):
        raise MalformedExpression(f"{what} must be a nonnegative integer, got {x!r}")
    return int(x)


def _dim(x) -> DimValue:
    if not isinstance(x, str):
        raise MalformedExpression(f"expected a dimension, got {x!r}")
    try:
        return DimValue.of(x)
    except (ValueError, ZeroDivisionError):
        raise MalformedExpression(f"bad dimension {x!r}") from None


_HEADS = {
    "base": "base", "poly": "poly", "polyext": "poly", "freealg": "free", "free": "free",
    "matrix": "matrix", "matrices": "matrix", "quotient": "quotient", "subalg": "subalg",
    "subalgebra": "subalg", "product": "product", "prod": "product", "tensor": "tensor",
    "localize": "loc", "localization": "loc", "loc": "loc", "groupring": "group",
    "graded": "graded", "gr": "graded", "ore": "ore", "oreext": "ore", "skewpbw": "skewpbw",
    "regular": "regular", "module": "module", "submodule": "subquot", "quotmodule": "subquot",
    "subquot": "subquot", "annihilated": "annihilated", "modsum": "modsum", "sum": "modsum",
    "tdeg": "tdeg",
}

_ALLOWED_FLAGS = {
    "base": {":commutative", ":fingen", ":finite-rank"},
    "subalg": {":central-finite"},
    "tensor": {":fg"},
    "loc": {":not-central-regular"},
    "group": {":infinite"},
    "graded": {":not-locally-finite"},
    "ore": {":not-frame-stable"},
    "skewpbw": {":not-bijective", ":not-frame-stable"},
    "tdeg": {":commutative"},
}


def _build(node):
    if not isinstance(node, list) or not node:
        raise MalformedExpression(f"expected a parenthesized form, got {node!r}")
    head = node[0]
    if not isinstance(head, str) or head.lower() not in _HEADS:
        raise MalformedExpression(f"unknown form {head!r}")
    kind = _HEADS[head.lower()]
    pos, kw, flags = _split_args(node[1:])
    extra = flags - _ALLOWED_FLAGS.get(kind, set())
    if extra:
        raise MalformedExpression(f"({head} ...) does not accept {', '.join(sorted(extra))}")

    def want(n):
        if len(pos) != n:
            raise MalformedExpression(f"({head} ...) takes {n} positional argument(s), got {len(pos)}")

    def count(key, idx, default=None):
        if key in kw:
            return _int(kw[key], key)
        if len(pos) > idx:
            return _int(pos[idx], head)
        if default is None:
            raise MalformedExpression(f"({head} ...) needs {key}")
        return default

    if kind == "base":
        args = list(pos)
        label = "B"
        if args and isinstance(args[0], tuple):
            label = args.pop(0)[1]
        if len(args) == 1:
            args = args * 2
        if len(args) != 2:
            raise MalformedExpression("(base [\"name\"] lo [hi] ...) expects one or two dimensions")
        try:
            bound = DimBound(_dim(args[0]), _dim(args[1]))
        except EmptyBound as exc:
            raise MalformedExpression(str(exc)) from None
        return Base(label, bound, ":commutative" in flags, ":fingen" in flags or ":finite-rank" in flags,
                    ":finite-rank" in flags)
    if kind == "free":
        if len(pos) > 1:
            raise MalformedExpression("(freealg m) takes one argument")
        return FreeAlgebra(count(":m", 0))
    if kind in ("module", "subquot", "annihilated", "regular", "quotient", "subalg", "loc", "graded", "ore", "tdeg"):
        want(1)
        child = _build(pos[0])
        return {
            "module": lambda: ModuleOver(child),
            "subquot": lambda: SubOrQuotientModule(child),
            "annihilated": lambda: AnnihilatedModule(child),
            "regular": lambda: RegularModule(child),
            "quotient": lambda: Quotient(child),
            "subalg": lambda: Subalgebra(child, ":central-finite" in flags),
            "loc": lambda: Localization(child, ":not-central-regular" not in flags),
            "graded": lambda: AssocGraded(child, ":not-locally-finite" not in flags),
            "ore": lambda: OreExt(child, ":not-frame-stable" not in flags),
            "tdeg": lambda: Tdeg(child, ":commutative" in flags),
        }[kind]()
    if kind == "poly":
        if not 1 <= len(pos) <= 2:
            raise MalformedExpression("(poly expr m) expects a child and a count")
        return PolyExt(_build(pos[0]), count(":m", 1, 1))
    if kind == "matrix":
        if not 1 <= len(pos) <= 2:
            raise MalformedExpression("(matrix expr n) expects a child and a size")
        return MatrixRing(_build(pos[0]), count(":n", 1))
    if kind == "group":
        if not 1 <= len(pos) <= 2:
            raise MalformedExpression("(groupring expr order) expects a child and an order")
        order = None if ":infinite" in flags else count(":order", 1)
        return GroupRing(_build(pos[0]), order)
    if kind == "skewpbw":
        if not 1 <= len(pos) <= 2:
            raise MalformedExpression("(skewpbw expr :t t) expects a child and t")
        return SkewPBW(_build(pos[0]), count(":t", 1), ":not-bijective" not in flags, ":not-frame-stable" not in flags)
    if kind in ("product", "tensor"):
        want(2)
        l, r = _build(pos[0]), _build(pos[1])
        return DirectProduct(l, r) if kind == "product" else Tensor(l, r, ":fg" in flags)
    if kind == "modsum":
        if not pos:
            raise MalformedExpression("(modsum ...) needs at least one summand")
        return ModuleSum(tuple(_build(p) for p in pos))
    raise MalformedExpression(f"unhandled form {head!r}")  # pragma: no cover


def parse_expr(text: str):
    """Parse the s-expression syntax, e.g. ``(skewpbw (base "Z[x]" 1 1) :t 1)``."""
    tokens = _tokenize(text)
    if not tokens:
        raise MalformedExpression("empty expression")
    tree, i = _read(tokens, 0)
    if i != len(tokens):
        raise MalformedExpression("trailing input after expression")
    return _build(tree)
