"""Module for index and word combinatorics tests."""
import pytest
from tvk._helpers import Helpers
from tvk._index import (
    PHI,
    Index,
    InvalidIndexError,
    admissible_indices,
    b_insertion_product,
    dual_index,
    from_word,
    index_slices,
    parse_index,
    shuffle_product,
    split_sum_product,
    to_word,
)

pytestmark = pytest.mark.symbolic

_p = pytest.param


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        _p("2", (2,), id="single entry"),
        _p("1,2", (1, 2), id="innermost first"),
        _p(" 3,1,4 ", (3, 1, 4), id="surrounding whitespace"),
        _p("", (), id="empty is phi"),
    ],
)
def test_parse_index(text, expected):
    assert parse_index(text) == expected


@pytest.mark.parametrize(
    "text",
    [
        _p("0", id="zero entry"),
        _p("1,,2", id="empty token"),
        _p("-1", id="negative entry"),
        _p("a", id="letter"),
        _p("1.5", id="decimal"),
    ],
)
def test_parse_index_rejects_malformed_input(text):
    with pytest.raises(InvalidIndexError):
        parse_index(text)


def test_index_rejects_bad_entries():
    with pytest.raises(InvalidIndexError):
        Index((1, 0))
    with pytest.raises(InvalidIndexError):
        Index((True,))


@pytest.mark.parametrize(
    ("index", "weight", "depth", "admissible"),
    [
        ((2,), 2, 1, True),
        ((2, 1), 3, 2, False),
        ((1, 1, 3), 5, 3, True),
        ((3, 1, 1), 5, 3, False),
        ((), 0, 0, False),
    ],
)
def test_index_properties(index, weight, depth, admissible):
    index = Index(index)
    assert (index.weight, index.depth) == (weight, depth)
    assert index.admissible is admissible


def test_slices():
    slices = index_slices(Index((2, 3, 4)), 2, m=2)

    assert slices.head == (2, 3)
    assert slices.tail == (4, 3)
    assert slices.minus_last == (2, 3, 3)
    assert slices.ones_prefix == (1, 1, 2, 3, 4)


def test_minus_last_needs_a_last_entry_above_one():
    with pytest.raises(InvalidIndexError):
        Index((2, 1)).minus_last()
    with pytest.raises(InvalidIndexError):
        PHI.minus_last()


@pytest.mark.parametrize(
    ("index", "word"),
    [
        ((1,), "b"),
        ((2,), "ba"),
        ((1, 2), "bba"),
        ((3, 1), "baab"),
        ((), ""),
    ],
)
def test_words(index, word):
    assert to_word(index) == word
    assert from_word(word) == index


def test_every_index_survives_the_word_encoding():
    for weight in range(1, 11):
        for entries in Helpers.all_compositions(weight):
            index = Index(entries)
            word = to_word(index)
            assert len(word) == weight
            assert from_word(word) == index


@pytest.mark.parametrize("word", ["ab", "bca"])
def test_from_word_rejects_malformed_words(word):
    with pytest.raises(InvalidIndexError):
        from_word(word)


@pytest.mark.parametrize(
    ("index", "expected"),
    [
        _p((2,), (2,), id="ba is self-dual"),
        _p((3,), (1, 2), id="baa <-> bba"),
        _p((1, 2), (3,), id="bba <-> baa"),
        _p((2, 2), (2, 2), id="baba is self-dual"),
        _p((4,), (1, 1, 2), id="baaa <-> bbba"),
        _p((2, 3), (1, 2, 2), id="babaa <-> bbaba"),
        _p((4, 2), (2, 1, 1, 2), id="baaaba <-> babbba"),
    ],
)
def test_dual_index(index, expected):
    assert dual_index(Index(index)) == expected


def test_dual_of_non_admissible_index_is_undefined():
    with pytest.raises(InvalidIndexError):
        dual_index(Index((2, 1)))


def test_duality_is_a_weight_preserving_involution():
    for index in admissible_indices(10):
        dual = dual_index(index)
        assert dual.weight == index.weight
        assert dual.depth + index.depth == index.weight
        assert dual_index(dual) == index


@pytest.mark.parametrize(
    ("u", "v", "expected"),
    [
        _p((2,), (2,), {(2, 2): 2, (1, 3): 4}, id="(2) sh (2)"),
        _p((2,), (3,), {(1, 4): 6, (2, 3): 3, (3, 2): 1}, id="(2) sh (3)"),
        _p((1,), (1,), {(1, 1): 2}, id="(1) sh (1)"),
        _p((), (2, 1), {(2, 1): 1}, id="phi is the unit"),
    ],
)
def test_shuffle_product(u, v, expected):
    assert shuffle_product(Index(u), Index(v)) == expected


def test_shuffle_product_is_commutative_and_has_binomial_mass():
    u, v = Index((2, 1)), Index((1, 3))
    product = shuffle_product(u, v)

    assert product == shuffle_product(v, u)
    assert product.mass == 35  # binom(7, 3)


@pytest.mark.parametrize(
    ("index", "expected"),
    [
        _p((1,), {(1, 1): 1}, id="b -> bb"),
        _p((2,), {(1, 2): 2}, id="ba -> bba twice"),
        _p((1, 1), {(1, 1, 1): 2}, id="bb"),
        _p((2, 1), {(1, 2, 1): 2, (2, 1, 1): 1}, id="bab"),
    ],
)
def test_b_insertion_product(index, expected):
    assert b_insertion_product(Index(index)) == expected


def test_b_insertion_of_two_misses_the_terminal_insertion():
    # inserting 'b' after 'ba' would give (2, 1)
    assert b_insertion_product(Index((2,)))[(2, 1)] == 0


@pytest.mark.parametrize(
    ("mode", "expected"),
    [
        _p("literal", {(2, 2, 2): 1, (3, 1, 2): 1}, id="first block only"),
        _p("per_block", {(2, 2, 2): 1, (3, 1, 2): 1}, id="every block"),
    ],
)
def test_split_sum_product_on_three_two(mode, expected):
    assert split_sum_product(Index((3, 2)), mode) == expected


def test_split_sum_modes_differ_beyond_the_first_block():
    index = Index((2, 2, 2))

    literal = split_sum_product(index, "literal")
    per_block = split_sum_product(index, "per_block")

    assert literal == {(2, 1, 2, 2): 2, (2, 2, 1, 2): 1}
    assert per_block == {(2, 1, 2, 2): 1, (2, 2, 1, 2): 1}


def test_split_sum_rejects_unknown_mode():
    with pytest.raises(ValueError):
        split_sum_product(Index((2, 2)), "sideways")


def test_admissible_indices_are_ordered_by_weight():
    indices = list(admissible_indices(4))

    assert indices == [(2,), (3,), (1, 2), (4,), (1, 3), (2, 2), (1, 1, 2)]
    assert all(index.admissible for index in indices)
