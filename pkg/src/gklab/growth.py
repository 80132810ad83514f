"""Growth sequences ``d_n = rank V^n`` of frames in presented algebras.

Ranks are over the fraction field, so a frame only needs ``1`` in its
rational span: rescaling any element by a nonzero scalar never changes the
sequence.  Powers are built incrementally.  Because ``1`` lies in the span
of ``V``, ``V^(n+1) = V^n + V * N_n`` where ``N_n`` are the basis elements
that first appeared in ``V^n``; only that frontier is multiplied out.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .coeff import EchelonBasis, Scalar
from .presentation import (
    NCPoly,
    Presentation,
    Word,
    confluence_check,
    deglex_key,
    format_poly,
    validate_pbw_shape,
)

__all__ = [
    "DEFAULT_ROW_CAP",
    "BudgetExceeded",
    "NotAFrame",
    "NotQuasiCommutative",
    "Frame",
    "GrowthSequence",
    "MonomialModule",
    "TdegReport",
    "make_frame",
    "row_cap_from_env",
    "growth_sequence",
    "standard_monomial_count",
    "module_growth_sequence",
    "subalgebra_growth",
    "tdeg_pool_estimate",
]

DEFAULT_ROW_CAP = 200_000


class BudgetExceeded(RuntimeError):
    pass


class NotAFrame(ValueError):
    pass


class NotQuasiCommutative(ValueError):
    pass


def row_cap_from_env(default: int = DEFAULT_ROW_CAP) -> int:
    raw = os.environ.get("GKLAB_ROW_CAP")
    if not raw:
        return default
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"GKLAB_ROW_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError("GKLAB_ROW_CAP must be positive")
    return cap


@dataclass(frozen=True)
class Frame:
    elements: Tuple[NCPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        basis = EchelonBasis(key=deglex_key)
        for v in self.elements:
            basis.insert(dict(v.items()))
        if not basis.contains({(): 1}):
            raise NotAFrame("a frame must contain 1 in its span")

    def fingerprint(self, pres: Presentation) -> str:
        text = "|".join(sorted(format_poly(v, pres) for v in self.elements))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @property
    def max_degree(self) -> int:
        return max((v.degree for v in self.elements), default=0)


def make_frame(pres: Presentation, elements: Sequence[NCPoly], add_one: bool = True) -> Frame:
    """Reduce ``elements`` to normal form and put 1 in front if it is missing."""
    reduced = [pres.reduce(v) for v in elements]
    reduced = [v for v in reduced if v]
    one = NCPoly.one()
    if add_one and one not in reduced:
        try:
            return Frame(tuple(reduced))
        except NotAFrame:
            reduced.insert(0, one)
    return Frame(tuple(reduced))


@dataclass(frozen=True)
class GrowthSequence:
    values: Tuple[int, ...]
    presentation_fingerprint: str = ""
    frame_fingerprint: str = ""
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    def to_csv(self) -> str:
        rows = ["n,rank"] + [f"{n},{d}" for n, d in enumerate(self.values)]
        return "\n".join(rows) + "\n"

    def to_record(self) -> dict:
        return {
            "presentation": self.presentation_fingerprint,
            "frame": self.frame_fingerprint,
            "exact": self.exact,
            "marker": "exact" if self.exact else "upper-bound only",
            "values": [{"n": n, "rank": d} for n, d in enumerate(self.values)],
        }


def _certified(pres: Presentation, n_max: int, frame_degree: int) -> bool:
    if not pres.rules:
        return True
    bound = max(2 * n_max * max(frame_degree, 1), pres.max_lhs_length)
    return all(a.resolved for a in confluence_check(pres, bound))


def growth_sequence(
    pres: Presentation,
    v: Frame,
    n_max: int,
    row_cap: Optional[int] = None,
) -> GrowthSequence:
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    cap = DEFAULT_ROW_CAP if row_cap is None else row_cap
    elements = [pres.reduce(e) for e in v.elements]
    echelon = EchelonBasis(key=deglex_key)
    seen = {NCPoly.one()}
    echelon.insert({(): 1})
    frontier = [NCPoly.one()]
    rows = 1
    values = [1]
    for _ in range(n_max):
        fresh: List[NCPoly] = []
        for s in frontier:
            for e in elements:
                prod = pres.multiply(e, s)
                if not prod or prod in seen:
                    continue
                seen.add(prod)
                rows += 1
                if rows > cap:
                    raise BudgetExceeded(
                        f"spanning set exceeded the row cap of {cap} at degree {len(values)}"
                    )
                if echelon.insert(dict(prod.items())):
                    fresh.append(prod)
        frontier = fresh
        values.append(echelon.rank)
    return GrowthSequence(
        tuple(values),
        pres.fingerprint(),
        v.fingerprint(pres),
        exact=_certified(pres, n_max, v.max_degree),
    )


def standard_monomial_count(t: int, n: int) -> int:
    """Number of ordered monomials of degree <= n in t variables."""
    if t < 1 or n < 0:
        raise ValueError("need t >= 1 and n >= 0")
    return sum(math.comb(t + i - 1, i) for i in range(n + 1))


@dataclass(frozen=True)
class MonomialModule:
    annihilator_monomials: Tuple[Word, ...]
    generator_monomials: Tuple[Word, ...] = ((),)

    def __post_init__(self):
        object.__setattr__(self, "annihilator_monomials", tuple(map(tuple, self.annihilator_monomials)))
        object.__setattr__(self, "generator_monomials", tuple(map(tuple, self.generator_monomials)))
        if not self.generator_monomials:
            raise ValueError("at least one generator monomial is required")


def _exponents(w: Word, n: int) -> Tuple[int, ...]:
    e = [0] * n
    for i in w:
        e[i] += 1
    return tuple(e)


def _single_word(p: NCPoly, what: str) -> Word:
    if not p.is_monomial():
        raise ValueError(f"{what} must reduce to a single monomial")
    (w,) = p.words()
    return w


def module_growth_sequence(
    pres: Presentation,
    m: MonomialModule,
    v: Frame,
    n_max: int,
) -> GrowthSequence:
    """Ranks of ``F V^n`` in ``B / aB`` for monomial annihilators ``a``.

    Over a quasi-commutative presentation a product of monomials is a nonzero
    multiple of one monomial, so ``F V^n`` is spanned by monomials and its image
    in the quotient has rank equal to the number of spanning monomials not
    dominated (componentwise in exponents) by an annihilator.
    """
    report = validate_pbw_shape(pres)
    if not report.quasi_commutative:
        raise NotQuasiCommutative(
            "module growth needs a quasi-commutative presentation: " + "; ".join(report.problems or ("rules are not of the form x_j x_i -> c x_i x_j",))
        )
    ng = pres.ngens
    for w in (*m.annihilator_monomials, *m.generator_monomials):
        if not pres.is_normal(w):
            raise ValueError(f"module monomial {w} is not in normal form")
    frame_words = [_single_word(pres.reduce(e), "frame element") for e in v.elements]
    ann = [_exponents(a, ng) for a in m.annihilator_monomials]

    def killed(w: Word) -> bool:
        e = _exponents(w, ng)
        return any(all(x >= y for x, y in zip(e, a)) for a in ann)

    current = set(m.generator_monomials)
    frontier = set(current)
    values = [sum(1 for w in current if not killed(w))]
    for _ in range(n_max):
        fresh = set()
        for s in frontier:
            for fw in frame_words:
                w = _single_word(pres.multiply(NCPoly.word(s), NCPoly.word(fw)), "product")
                if w not in current:
                    fresh.add(w)
        current |= fresh
        frontier = fresh
        values.append(sum(1 for w in current if not killed(w)))
    frame_fp = v.fingerprint(pres)
    return GrowthSequence(tuple(values), pres.fingerprint(), frame_fp, exact=_certified(pres, n_max, v.max_degree))


def subalgebra_growth(
    pres: Presentation,
    gens: Sequence[NCPoly],
    n_max: int,
    row_cap: Optional[int] = None,
) -> GrowthSequence:
    """Growth of the unital subalgebra generated by ``gens``."""
    elements = [NCPoly.one()] + [pres.reduce(g) for g in gens]
    return growth_sequence(pres, Frame(tuple(elements)), n_max, row_cap)


@dataclass(frozen=True)
class TdegEntry:
    frame_index: int
    candidate: NCPoly
    sequence: GrowthSequence
    estimate: object


@dataclass(frozen=True)
class TdegReport:
    entries: Tuple[TdegEntry, ...]
    per_frame: Tuple[object, ...]
    summary: object
    label: str = "pool-restricted heuristic"


def tdeg_pool_estimate(
    pres: Presentation,
    frame_pool: Sequence[Frame],
    candidate_pool: Sequence[NCPoly],
    n_max: int,
    window: int = 3,
    max_degree: int = 6,
    row_cap: Optional[int] = None,
) -> TdegReport:
    """max over frames of min over candidates b of the estimated dimension of R[bV].

    Only the supplied pools are searched; candidates are assumed regular.
    """
    from .analysis import estimate_gkdim

    if not frame_pool or not candidate_pool:
        raise ValueError("frame and candidate pools must be nonempty")
    candidates = [pres.reduce(b) for b in candidate_pool]
    if any(not b for b in candidates):
        raise ValueError("candidate 0 is not a regular element")
    entries: List[TdegEntry] = []
    per_frame = []
    for fi, frame in enumerate(frame_pool):
        best = None
        for b in candidates:
            gens = [pres.multiply(b, e) for e in frame.elements]
            seq = subalgebra_growth(pres, [g for g in gens if g], n_max, row_cap)
            est = estimate_gkdim(seq, window, max_degree)
            entries.append(TdegEntry(fi, b, seq, est))
            if best is None or est.dim < best.dim:
                best = est
        per_frame.append(best)
    summary = max((e.dim for e in per_frame))
    return TdegReport(tuple(entries), tuple(per_frame), summary)
