"""Exact coefficient arithmetic and ranks over fraction fields.

Two coefficient domains are supported: the integers, and univariate integer
polynomials in one named parameter (``Z[q]``).  Scalars of either domain are
plain Python ``int`` values or :class:`ParamPoly` instances; a polynomial of
degree zero always collapses back to an ``int``, so constants have exactly one
representation and compare structurally.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

__all__ = [
    "DomainKind",
    "DomainSpec",
    "ParamPoly",
    "Scalar",
    "Fraction",
    "RankMatrix",
    "EchelonBasis",
    "ZeroDenominator",
    "DomainMismatch",
    "fraction_normalize",
    "matrix_rank",
    "scalar_gcd",
    "exact_div",
    "is_unit",
    "is_scalar",
    "format_scalar",
]


class ZeroDenominator(ZeroDivisionError):
    pass


class DomainMismatch(ValueError):
    """A scalar or identifier does not belong to the declared domain."""


class DomainKind(enum.Enum):
    INTEGERS = "Z"
    INTEGERS_WITH_PARAMETER = "Z[param]"


@dataclass(frozen=True)
class DomainSpec:
    kind: DomainKind = DomainKind.INTEGERS
    parameter_name: Optional[str] = None

    def __post_init__(self):
        if self.kind is DomainKind.INTEGERS:
            if self.parameter_name is not None:
                raise DomainMismatch("the integer domain has no parameter")
        else:
            name = self.parameter_name
            if not name or not name.isidentifier():
                raise DomainMismatch(f"invalid parameter name {name!r}")

    @classmethod
    def integers(cls) -> "DomainSpec":
        return cls(DomainKind.INTEGERS)

    @classmethod
    def with_parameter(cls, name: str = "q") -> "DomainSpec":
        return cls(DomainKind.INTEGERS_WITH_PARAMETER, name)

    @property
    def has_parameter(self) -> bool:
        return self.kind is DomainKind.INTEGERS_WITH_PARAMETER

    def contains(self, s: "Scalar") -> bool:
        if isinstance(s, int) and not isinstance(s, bool):
            return True
        return isinstance(s, ParamPoly) and self.has_parameter

    def check(self, s: "Scalar") -> "Scalar":
        if not self.contains(s):
            raise DomainMismatch(f"scalar {s!r} is not an element of {self}")
        return s

    def __str__(self) -> str:
        if self.has_parameter:
            return f"Z[{self.parameter_name}]"
        return "Z"


# ---------------------------------------------------------------------------
# dense coefficient tuples (low degree first), the internal currency of ParamPoly

_Coeffs = Tuple[int, ...]


def _trim(c: Sequence[int]) -> _Coeffs:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _c_add(a: _Coeffs, b: _Coeffs) -> _Coeffs:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def _c_neg(a: _Coeffs) -> _Coeffs:
    return tuple(-x for x in a)


def _c_mul(a: _Coeffs, b: _Coeffs) -> _Coeffs:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _c_scale(a: _Coeffs, k: int) -> _Coeffs:
    if k == 0:
        return ()
    return tuple(x * k for x in a)


def _c_content(a: _Coeffs) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
    return g


def _c_divmod_exact(a: _Coeffs, b: _Coeffs) -> _Coeffs:
    """Quotient of a by b over Z; raises if the division leaves a remainder."""
    if not b:
        raise ZeroDenominator("division by zero polynomial")
    rem = list(a)
    db, lb = len(b) - 1, b[-1]
    if len(rem) - 1 < db:
        if rem:
            raise ArithmeticError("inexact polynomial division")
        return ()
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        top = rem[k]
        if top == 0:
            continue
        qk, r = divmod(top, lb)
        if r:
            raise ArithmeticError("inexact polynomial division")
        quot[k - db] = qk
        for j, y in enumerate(b):
            rem[k - db + j] -= qk * y
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return _trim(quot)


def _c_prem(a: _Coeffs, b: _Coeffs) -> _Coeffs:
    """Pseudo-remainder of a by b (b nonzero)."""
    rem = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(rem) - 1 >= db and rem:
        k = len(rem) - 1
        top = rem[k]
        rem = [x * lb for x in rem]
        for j, y in enumerate(b):
            rem[k - db + j] -= top * y
        rem = list(_trim(rem))
    return tuple(rem)


def _c_primitive(a: _Coeffs) -> _Coeffs:
    g = _c_content(a)
    if g == 0:
        return ()
    if a[-1] < 0:
        g = -g
    return tuple(x // g for x in a)


def _c_gcd(a: _Coeffs, b: _Coeffs) -> _Coeffs:
    if not a:
        return _c_normal_sign(b)
    if not b:
        return _c_normal_sign(a)
    cont = math.gcd(_c_content(a), _c_content(b))
    f, g = _c_primitive(a), _c_primitive(b)
    if len(f) < len(g):
        f, g = g, f
    while g:
        r = _c_prem(f, g)
        f, g = g, _c_primitive(r)
    return _c_scale(_c_primitive(f), cont)


def _c_normal_sign(a: _Coeffs) -> _Coeffs:
    if a and a[-1] < 0:
        return _c_neg(a)
    return a


def _coeffs_of(s: "Scalar") -> _Coeffs:
    if isinstance(s, ParamPoly):
        return s.coeffs
    return (s,) if s else ()


class ParamPoly:
    """Integer polynomial of degree >= 1 in the domain parameter.

    Arithmetic results of degree <= 0 come back as ``int``.  The parameter
    name is not stored: a scalar only acquires a name through the
    :class:`DomainSpec` it is used with.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int]):
        c = _trim(tuple(int(x) for x in coeffs))
        if len(c) < 2:
            raise ValueError("ParamPoly requires degree >= 1; use int for constants")
        self.coeffs: _Coeffs = c
        self._hash = hash(c)

    @staticmethod
    def make(coeffs: Sequence[int]) -> "Scalar":
        c = _trim(coeffs)
        if len(c) == 0:
            return 0
        if len(c) == 1:
            return c[0]
        return ParamPoly(c)

    @classmethod
    def gen(cls) -> "ParamPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def __add__(self, other):
        if not is_scalar(other):
            return NotImplemented
        return ParamPoly.make(_c_add(self.coeffs, _coeffs_of(other)))

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(_c_neg(self.coeffs))

    def __sub__(self, other):
        if not is_scalar(other):
            return NotImplemented
        return ParamPoly.make(_c_add(self.coeffs, _c_neg(_coeffs_of(other))))

    def __rsub__(self, other):
        if not is_scalar(other):
            return NotImplemented
        return ParamPoly.make(_c_add(_coeffs_of(other), _c_neg(self.coeffs)))

    def __mul__(self, other):
        if isinstance(other, int):
            return ParamPoly.make(_c_scale(self.coeffs, other))
        if isinstance(other, ParamPoly):
            return ParamPoly.make(_c_mul(self.coeffs, other.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        out: _Coeffs = (1,)
        base = self.coeffs
        while k:
            if k & 1:
                out = _c_mul(out, base)
            base = _c_mul(base, base)
            k >>= 1
        return ParamPoly.make(out)

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return False
        return NotImplemented

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return True

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __repr__(self):
        return f"ParamPoly({list(self.coeffs)})"

    def __str__(self):
        return format_scalar(self, "q")


Scalar = Union[int, ParamPoly]


def is_scalar(x) -> bool:
    return (isinstance(x, int) and not isinstance(x, bool)) or isinstance(x, ParamPoly)


def format_scalar(s: Scalar, param: str = "q") -> str:
    """Render a scalar; polynomials as ``2 q^2 - q + 1`` (highest degree first)."""
    if isinstance(s, int):
        return str(s)
    parts: List[str] = []
    for k in range(len(s.coeffs) - 1, -1, -1):
        c = s.coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (param if k == 1 else f"{param}^{k}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag} {mono}")
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def scalar_gcd(a: Scalar, b: Scalar) -> Scalar:
    """gcd normalized to a positive leading coefficient; gcd(0, 0) = 0."""
    if isinstance(a, int) and isinstance(b, int):
        return math.gcd(a, b)
    return ParamPoly.make(_c_gcd(_coeffs_of(a), _coeffs_of(b)))


def exact_div(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, int) and isinstance(b, int):
        if b == 0:
            raise ZeroDenominator("division by zero")
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{a} is not divisible by {b}")
        return q
    return ParamPoly.make(_c_divmod_exact(_coeffs_of(a), _coeffs_of(b)))


def is_unit(s: Scalar) -> bool:
    return isinstance(s, int) and s in (1, -1)


def _leading_int(s: Scalar) -> int:
    return s.leading if isinstance(s, ParamPoly) else s


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fraction:
    """Element of the fraction field, always stored in normalized form."""

    num: Scalar
    den: Scalar

    def __post_init__(self):
        if self.den == 0:
            raise ZeroDenominator("zero denominator")
        n, d = _normalize(self.num, self.den)
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    def __add__(self, other: "Fraction") -> "Fraction":
        other = _as_fraction(other)
        return Fraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Fraction":
        return Fraction(-self.num, self.den)

    def __sub__(self, other) -> "Fraction":
        return self + (-_as_fraction(other))

    def __rsub__(self, other) -> "Fraction":
        return _as_fraction(other) - self

    def __mul__(self, other) -> "Fraction":
        other = _as_fraction(other)
        return Fraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Fraction":
        other = _as_fraction(other)
        if other.num == 0:
            raise ZeroDenominator("division by zero")
        return Fraction(self.num * other.den, self.den * other.num)

    def inverse(self) -> "Fraction":
        return Fraction(1, 1) / self

    def __bool__(self):
        return self.num != 0


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if is_scalar(x):
        return Fraction(x, 1)
    raise TypeError(f"cannot coerce {x!r} to Fraction")


def _normalize(num: Scalar, den: Scalar) -> Tuple[Scalar, Scalar]:
    if num == 0:
        return 0, 1
    g = scalar_gcd(num, den)
    n, d = exact_div(num, g), exact_div(den, g)
    if _leading_int(d) < 0:
        n, d = -n, -d
    return n, d


def fraction_normalize(num: Scalar, den: Scalar) -> Fraction:
    if den == 0:
        raise ZeroDenominator("zero denominator")
    return Fraction(num, den)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[int, int, Scalar], ...]

    def __post_init__(self):
        seen = set()
        for r, c, s in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r}, {c}) outside a {self.rows}x{self.cols} matrix")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry at ({r}, {c})")
            if not is_scalar(s) or s == 0:
                raise ValueError(f"stored entry at ({r}, {c}) must be a nonzero scalar")
            seen.add((r, c))

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Scalar]]) -> "RankMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        entries = tuple(
            (i, j, s) for i, row in enumerate(rows) for j, s in enumerate(row) if s != 0
        )
        return cls(nrows, ncols, entries)

    def to_dense(self) -> List[List[Scalar]]:
        out: List[List[Scalar]] = [[0] * self.cols for _ in range(self.rows)]
        for r, c, s in self.entries:
            out[r][c] = s
        return out

    def transpose(self) -> "RankMatrix":
        return RankMatrix(self.cols, self.rows, tuple((c, r, s) for r, c, s in self.entries))


def matrix_rank(m: RankMatrix, domain: DomainSpec) -> int:
    """Rank over the fraction field by fraction-free (Bareiss) elimination.

    Pivots are taken in column order, first nonzero row; every division is
    exact by Sylvester's identity, so no fractions are ever formed.
    """
    for _, _, s in m.entries:
        domain.check(s)
    a = m.to_dense()
    nrows, ncols = m.rows, m.cols
    prev: Scalar = 1
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, nrows):
            f = a[i][col]
            row_i, row_k = a[i], a[rank]
            for j in range(col + 1, ncols):
                row_i[j] = exact_div(p * row_i[j] - f * row_k[j], prev)
            row_i[col] = 0
        prev = p
        rank += 1
    return rank


class EchelonBasis:
    """Incrementally maintained sparse echelon basis over the fraction field.

    Rows are dicts ``column -> Scalar``.  The pivot of a row is its largest
    column under ``key``; inserting a row eliminates pivots from the top down
    with cross-multiplication and divides out the row content, so entries stay
    in the domain and small.
    """

    def __init__(self, key=None):
        self._key = key if key is not None else (lambda c: c)
        self._pivots: Dict[Hashable, Dict[Hashable, Scalar]] = {}

    def __len__(self):
        return len(self._pivots)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _residue(self, row: Dict[Hashable, Scalar]) -> Dict[Hashable, Scalar]:
        r = {c: s for c, s in row.items() if s != 0}
        key = self._key
        while r:
            lead = max(r, key=key)
            prow = self._pivots.get(lead)
            if prow is None:
                return _primitive_row(r, key)
            p, f = prow[lead], r[lead]
            g = scalar_gcd(p, f)
            p, f = exact_div(p, g), exact_div(f, g)
            out: Dict[Hashable, Scalar] = {}
            for c, s in r.items():
                out[c] = p * s
            for c, s in prow.items():
                v = out.get(c, 0) - f * s
                if v == 0:
                    out.pop(c, None)
                else:
                    out[c] = v
            r = out
        return r

    def contains(self, row: Dict[Hashable, Scalar]) -> bool:
        return not self._residue(row)

    def insert(self, row: Dict[Hashable, Scalar]) -> bool:
        """Add ``row``; return True iff it raised the rank."""
        r = self._residue(row)
        if not r:
            return False
        self._pivots[max(r, key=self._key)] = r
        return True


def _primitive_row(r: Dict[Hashable, Scalar], key) -> Dict[Hashable, Scalar]:
    g: Scalar = 0
    for s in r.values():
        g = scalar_gcd(g, s)
        if g == 1:
            break
    lead = r[max(r, key=key)]
    if _leading_int(lead) < 0:
        g = -g
    if g == 1:
        return r
    return {c: exact_div(s, g) for c, s in r.items()}
