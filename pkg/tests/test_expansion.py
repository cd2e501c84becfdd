"""Module for the symbolic expansion tests."""
from fractions import Fraction

import pytest
from tvk._expansion import (
    ONE,
    PHI,
    ZERO,
    ExpansionTerm,
    FormalCombination,
    GaussianRational,
    I,
    Monomial,
    SPolynomial,
    apoly_at_one_symbol,
    circled_product,
    closed_form,
    closed_form_one_two,
    closed_form_ones_two,
    duality_relation,
    expand_A,
    lambda_expansion,
    shuffle_relation_at_one,
    sum_relation,
)
from tvk._helpers import Helpers
from tvk._index import Index, InvalidIndexError

pytestmark = pytest.mark.symbolic

_p = pytest.param
S = SPolynomial((ZERO, ONE))


def term(c, e, P, j, residual):
    return ExpansionTerm(Fraction(c), e, tuple(map(Index, P)), j, Index(residual))


def slot(residual, shift, *constants, coeff=1, poly=None):
    return FormalCombination.slotted(
        Index(residual), shift, *map(Index, constants), coeff=coeff, poly=poly
    )


def test_gaussian_rationals():
    half = GaussianRational(Fraction(1, 2), Fraction(-3))

    assert half * I == GaussianRational(Fraction(3), Fraction(1, 2))
    assert str(half) == "1/2-3i"
    assert str(-I) == "-i"
    assert [GaussianRational.i_power(n) for n in range(-1, 3)] == [-I, ONE, I, -ONE]
    assert not ZERO


def test_binomial_polynomials():
    assert SPolynomial.binomial(0, 1) == S
    assert SPolynomial.binomial(-1, 0) == SPolynomial.constant(1)
    assert SPolynomial.binomial(1, 2).evaluate(3) == GaussianRational.of(6)
    assert not SPolynomial.binomial(3, -1)


def test_polynomial_shift():
    square = S * S
    assert square.shift(1).evaluate(2) == GaussianRational.of(9)


@pytest.mark.parametrize(
    ("index", "expected"),
    [
        _p((1,), {term(1, 0, [], 1, [])}, id="A(1)"),
        _p(
            (2,),
            {term(1, 0, [], 1, [1]), term(1, 0, [], 0, [2]), term(-1, 1, [[2]], 0, [])},
            id="A(2)",
        ),
        _p(
            (2, 1),
            {
                term(-1, 0, [], 1, [2]),
                term(-1, 1, [[2]], 1, []),
                term(-2, 0, [], 0, [3]),
                term(2, 1, [[3]], 0, []),
            },
            id="A(2,1)",
        ),
        _p((1, 1, 1), {term(1, 0, [], 3, [])}, id="A(1,1,1)"),
    ],
)
def test_expand_A(index, expected):
    assert set(expand_A(Index(index))) == expected


def test_expand_A_rejects_the_empty_index():
    with pytest.raises(InvalidIndexError):
        expand_A(PHI)


def test_expansion_terms_carry_the_weight_and_the_phase():
    for weight in range(1, 7):
        for entries in Helpers.all_compositions(weight):
            index = Index(entries)
            for t in expand_A(index):
                assert t.weight == weight
                assert (t.e + t.residual.depth - weight + index.depth) % 4 == 0


def test_lambda_of_two():
    expected = slot((1,), 1, coeff=I, poly=S) + slot((2,), 0, coeff=I)
    expected += slot((), 0, (2,), coeff=-I)

    assert lambda_expansion(Index((2,))) == expected


def test_lambda_of_two_one():
    expected = (
        slot((2,), 1, coeff=-I, poly=S)
        + slot((3,), 0, coeff=-2 * I)
        + slot((), 1, (2,), coeff=-I, poly=S)
        + slot((), 0, (3,), coeff=2 * I)
    )
    assert lambda_expansion(Index((2, 1))) == expected


def test_lambda_expansion_substitutes_to_constants():
    fixed = lambda_expansion(Index((2,))).substitute(2)

    assert not fixed.has_s
    assert fixed == (
        FormalCombination.tvalue(Index((1, 3)), coeff=2 * I)
        + FormalCombination.tvalue(Index((2, 2)), coeff=I)
        + FormalCombination.tvalue(Index((2,)), Index((2,)), coeff=-I)
    )


def test_substitute_needs_a_positive_s():
    with pytest.raises(ValueError):
        lambda_expansion(Index((2,))).substitute(0)


def test_shift_s():
    shifted = slot((1,), 0, poly=S).shift_s(2)
    assert shifted == slot((1,), 2, poly=S + SPolynomial.constant(2))


def test_monomial_allows_a_single_slot():
    slotted = Monomial.make((), (Index((1,)), 0))
    with pytest.raises(ValueError):
        slotted * slotted


def test_formal_combination_json():
    expansion = lambda_expansion(Index((2, 1)))
    assert FormalCombination.from_json(expansion.to_json()) == expansion


@pytest.mark.parametrize(
    "index",
    [
        _p((1,), id="depth one"),
        _p((2,), id="two"),
        _p((2, 1), id="two then one"),
        _p((1, 2), id="one then two"),
        _p((1, 2, 1), id="two in the middle"),
        _p((1, 1, 2), id="ones then two"),
    ],
)
def test_closed_forms_match_the_recursive_expansion(index):
    index = Index(index)
    assert closed_form(index) == lambda_expansion(index)


def test_one_two_closed_form_needs_r_above_j():
    with pytest.raises(ValueError):
        closed_form_one_two(2, 2)


def test_printed_binomial_differs_from_the_expansion():
    expansion = lambda_expansion(Index((1, 2)))

    assert closed_form_ones_two(2, "corrected") == expansion
    assert closed_form_ones_two(2, "printed") != expansion
    assert closed_form_ones_two(1, "printed") == closed_form_ones_two(1, "corrected")


def test_no_closed_form_for_other_indices():
    with pytest.raises(ValueError):
        closed_form(Index((3,)))


@pytest.mark.parametrize(
    ("kind", "r", "k"),
    [
        _p("me1", 1, 2, id="me1 depth one"),
        _p("me2", 1, 3, id="me2 depth one"),
        _p("me1", 2, 2, id="me1 weight three"),
        _p("me2", 2, 2, id="me2 weight three"),
    ],
)
def test_sum_relations_hold_without_numerics(kind, r, k):
    assert sum_relation(kind, r, k).holds_symbolically


def test_sum_relation_rejects_unknown_kind():
    with pytest.raises(ValueError):
        sum_relation("me3", 2, 2)


@pytest.mark.parametrize(
    ("relation", "weight"),
    [
        _p(lambda: sum_relation("me1", 2, 3), 4, id="me1"),
        _p(lambda: sum_relation("me2", 3, 2), 4, id="me2"),
        _p(lambda: shuffle_relation_at_one(Index((2,)), Index((3,))), 5, id="shuffle"),
    ],
)
def test_both_sides_of_an_identity_share_one_weight(relation, weight):
    identity = relation()

    assert identity.lhs.gradings == identity.rhs.gradings == [weight]


def test_apoly_at_one_symbol():
    assert apoly_at_one_symbol(PHI) == FormalCombination.constant(1)
    assert apoly_at_one_symbol(Index((3,))) == FormalCombination.tvalue(
        Index((1, 2)), coeff=GaussianRational.i_power(-2)
    )


def test_circled_product_modes():
    index = Index((2, 2))

    assert circled_product(index) == circled_product(index, "insertion")
    assert circled_product(index, "per_block") == {(2, 1, 2): 1}
    with pytest.raises(ValueError):
        circled_product(index, "other")


def test_duality_relation_of_two():
    relation = duality_relation(Index((2,)), 1, 1)

    assert relation.domain == "constant"
    assert relation.params == {"index": [2], "p": 1, "q": 1, "circled": "insertion"}
    assert not relation.lhs.has_s
    assert not relation.rhs


def test_duality_with_an_empty_right_side_is_exact():
    # lambda(1,1;2) = lambda(1;3) = 3T~(4)
    relation = duality_relation(Index((2,)), 1, 2)

    assert relation.holds_symbolically
    assert not relation.rhs


def test_duality_relation_needs_entries_of_at_least_two():
    with pytest.raises(InvalidIndexError):
        duality_relation(Index((1, 2)), 1, 1)


def test_shuffle_relation_at_one_sides_are_built_from_dual_values():
    relation = shuffle_relation_at_one(Index((2,)), Index((2,)))

    # A(2;1) = -iT~(2)
    assert relation.lhs == FormalCombination.tvalue(Index((2,)), Index((2,)), coeff=-1)
    assert relation.rhs == (
        FormalCombination.tvalue(Index((2, 2)), coeff=-2)
        + FormalCombination.tvalue(Index((1, 3)), coeff=-4)
    )
