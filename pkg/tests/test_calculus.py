from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gklab.calculus import (
    INF,
    AnnihilatedModule,
    AssocGraded,
    Base,
    DimBound,
    DimValue,
    DirectProduct,
    EmptyBound,
    FreeAlgebra,
    GroupRing,
    Localization,
    MalformedExpression,
    MatrixRing,
    ModuleOver,
    ModuleSum,
    OreExt,
    PolyExt,
    Quotient,
    RegularModule,
    SkewPBW,
    Subalgebra,
    SubOrQuotientModule,
    Tdeg,
    Tensor,
    bergman_normalize,
    eval_construction,
    parse_expr,
)


def B(lo, hi=None, **kw):
    hi = lo if hi is None else hi
    return Base(f"B{lo}", DimBound(DimValue.of(lo), DimValue.of(hi)), **kw)


def ev(e):
    return eval_construction(e)[0]


def I(lo, hi=None):
    hi = lo if hi is None else hi
    return DimBound(DimValue.of(lo), DimValue.of(hi))


# one test per rule

def test_finite_rank_base_has_dim_zero():
    assert ev(Base("R", I(0, INF), fin_gen=True, finite_rank=True)) == I(0)


def test_polynomial_extension():
    assert ev(PolyExt(B(1), 3)) == I(4)


def test_free_algebra():
    assert ev(FreeAlgebra(2)) == I(INF)
    assert ev(FreeAlgebra(5)) == I(INF)
    assert ev(FreeAlgebra(1)) == I(1)


def test_matrix_ring():
    assert ev(MatrixRing(B(0, INF), 3)) == I(0, INF)
    assert ev(MatrixRing(B(2), 4)) == I(2)


def test_quotient():
    assert ev(Quotient(B(4))) == I(0, 4)


def test_subalgebra():
    assert ev(Subalgebra(B(3))) == I(0, 3)
    assert ev(Subalgebra(B(3), central_module_finite=True)) == I(3)


def test_direct_product():
    assert ev(DirectProduct(B(2), B(3))) == I(3)


def test_tensor():
    assert ev(Tensor(B(2), B(3), fg_witness=True)) == I(5)
    assert ev(Tensor(B(2), B(3))) == I(3, 5)


def test_localization():
    assert ev(Localization(B(2))) == I(2)
    assert ev(Localization(B(2), central_regular=False)) == I(0, INF)


def test_group_ring():
    assert ev(GroupRing(B(2), 6)) == I(2)


def test_associated_graded():
    assert ev(AssocGraded(B(3))) == I(3)


def test_ore_extension():
    assert ev(OreExt(B(2))) == I(3)
    assert ev(OreExt(B(2), frame_stable=False)) == I(2, INF)


def test_skew_pbw():
    assert ev(SkewPBW(Base("Z[x]", I(1)), 1)) == I(2)
    assert ev(SkewPBW(B(1), 2, bijective=False)) == I(1, INF)


def test_regular_module():
    assert ev(RegularModule(B(3))) == I(3)


def test_module_bounded_by_algebra():
    assert ev(ModuleOver(B(3))) == I(0, 3)


def test_exact_sequence_propagation():
    assert ev(SubOrQuotientModule(RegularModule(B(3)))) == I(0, 3)


def test_annihilated_module():
    assert ev(AnnihilatedModule(RegularModule(B(2)))) == I(2)


def test_module_sum():
    assert ev(ModuleSum((RegularModule(B(1)), RegularModule(B(2))))) == I(2)


def test_tdeg():
    assert ev(Tdeg(B(2, commutative=True))) == I(2)
    assert ev(Tdeg(B(2))) == I(0, 2)


def test_blocked_rules_are_traced():
    _, trace = eval_construction(Tensor(B(2), B(3)))
    assert trace[-1].blocked
    assert [t.rule for t in trace] == ["base", "base", "tensor-bounds"]


def test_trace_is_topological():
    _, trace = eval_construction(SkewPBW(PolyExt(B(0), 1), 2))
    assert [t.rule for t in trace] == ["base", "polynomial-extension", "skew-pbw"]


def test_module_over_module_is_malformed():
    with pytest.raises(MalformedExpression):
        ev(Quotient(RegularModule(B(1))))
    with pytest.raises(MalformedExpression):
        ev(AnnihilatedModule(B(1)))


# bergman_normalize

def test_bergman_examples():
    assert bergman_normalize(I(Fraction(3, 2), 5)) == I(2, 5)
    assert bergman_normalize(I(0, Fraction(3, 2))) == I(0, 1)
    assert bergman_normalize(I(2)) == I(2)
    with pytest.raises(EmptyBound):
        bergman_normalize(I(Fraction(5, 4), Fraction(7, 4)))


# properties

dims = st.one_of(st.fractions(min_value=0, max_value=8, max_denominator=4), st.just(None))


def _dv(x):
    return INF if x is None else DimValue.of(x)


bounds = st.tuples(dims, dims).map(lambda p: sorted(map(_dv, p))).map(lambda p: DimBound(p[0], p[1]))

BUILDERS = [
    lambda b: PolyExt(b, 2),
    lambda b: MatrixRing(b, 3),
    Quotient,
    Subalgebra,
    lambda b: DirectProduct(b, B(1)),
    lambda b: Tensor(b, B(1), fg_witness=True),
    lambda b: Tensor(B(1), b),
    Localization,
    lambda b: GroupRing(b, 4),
    AssocGraded,
    OreExt,
    lambda b: SkewPBW(b, 2),
    lambda b: Tdeg(b),
    RegularModule,
    lambda b: SubOrQuotientModule(RegularModule(b)),
    lambda b: ModuleSum((RegularModule(b), ModuleOver(B(0)))),
]
BUILDER_IDS = [
    "poly", "matrix", "quotient", "subalgebra", "product", "tensor-fg", "tensor", "localize",
    "groupring", "graded", "ore", "skewpbw", "tdeg", "regular", "submodule", "modsum",
]


@pytest.mark.parametrize("build", BUILDERS, ids=BUILDER_IDS)
@given(inner=bounds, outer=bounds)
def test_monotone_in_base_bounds(build, inner, outer):
    hull = DimBound(min(inner.lo, outer.lo), max(inner.hi, outer.hi))
    narrow = ev(build(Base("b", inner)))
    wide = ev(build(Base("b", hull)))
    assert wide.lo <= narrow.lo and narrow.hi <= wide.hi


@given(st.fractions(min_value=0, max_value=10, max_denominator=5), st.integers(1, 50))
def test_identity_rules_compose(d, k):
    assert ev(Localization(GroupRing(AssocGraded(Base("b", I(d))), k))) == I(d)


@given(bounds, st.integers(0, 5), st.integers(0, 5))
def test_polynomial_extension_additive(b, m, n):
    assert ev(PolyExt(Base("b", b), m + n)) == ev(PolyExt(PolyExt(Base("b", b), m), n))


@pytest.mark.parametrize("t", range(0, 6))
def test_skew_pbw_over_dim_zero_matches_polynomial_ring(t):
    assert ev(SkewPBW(B(0), t)) == ev(PolyExt(B(0), t)) == I(t)


ADMISSIBLE = st.one_of(st.sampled_from([0, 1]), st.fractions(min_value=2, max_value=9, max_denominator=3))


@pytest.mark.parametrize("build", BUILDERS, ids=BUILDER_IDS)
@given(d=ADMISSIBLE)
def test_exact_outputs_admissible_after_normalizing(build, d):
    out = bergman_normalize(ev(build(Base("b", I(d)))))
    if out.exact and out.lo.is_finite:
        v = out.lo.value
        assert v in (0, 1) or v >= 2


@given(bounds, bounds)
def test_module_hi_never_exceeds_algebra_hi(a, b):
    for node in (RegularModule(Base("a", a)), ModuleOver(Base("a", a)),
                 SubOrQuotientModule(ModuleOver(Base("a", a))),
                 ModuleSum((RegularModule(Base("a", a)), RegularModule(Base("b", b))))):
        out = ev(node)
        alg_hi = max(a.hi, b.hi) if isinstance(node, ModuleSum) else a.hi
        assert out.hi <= alg_hi


# s-expression syntax

def test_parse_examples():
    assert ev(parse_expr('(skewpbw (base "Z[x]" 1 1 :commutative) :t 1)')) == I(2)
    assert ev(parse_expr("(skewpbw (base 1 1) :t 1)")) == I(2)
    assert ev(parse_expr("(tensor (base 2 2) (base 3 3) :fg)")) == I(5)
    assert ev(parse_expr("(tdeg (base 2 2 :commutative))")) == I(2)
    assert ev(parse_expr("(freealg 2)")) == I(INF)
    assert ev(parse_expr("(matrix (base 0 inf) :n 3)")) == I(0, INF)
    assert ev(parse_expr("(base 3/2 5)")) == I(Fraction(3, 2), 5)
    assert ev(parse_expr("(base 1)")) == I(1)


@pytest.mark.parametrize("text", ["(", "()", "(nosuch 1)", "(poly (base 1 1) :m -1)", "(base 3 1)", "(freealg 2) extra"])
def test_parse_errors(text):
    with pytest.raises((MalformedExpression, ValueError)):
        ev(parse_expr(text))


def test_json_output():
    b = ev(parse_expr("(tensor (base 2 2) (base 3 3))"))
    assert b.to_json() == {"lo": "3", "hi": "5", "exact": False}
    assert ev(FreeAlgebra(2)).to_json() == {"lo": "inf", "hi": "inf", "exact": True}
