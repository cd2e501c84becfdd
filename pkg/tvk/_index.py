"""Module with the combinatorics of indices and their two-letter words.

An index (k1, ..., kr) is written innermost entry first. Its word has one 'b'
followed by k - 1 letters 'a' for every entry, where 'a' stands for the form du/u
and 'b' for 2du/(1 - u^2).
"""
from collections import Counter
from functools import lru_cache
from typing import Dict, Iterable, Iterator, NamedTuple, Tuple

from ._helpers import PATTERNS, Helpers

Word = str
MODES = ("literal", "per_block")


class InvalidIndexError(ValueError):
    pass


class Index(tuple):
    """Immutable tuple of positive integers. The empty index plays the role of phi."""

    def __new__(cls, entries: Iterable[int] = ()) -> "Index":
        entries = tuple(entries)
        for entry in entries:
            if not isinstance(entry, int) or isinstance(entry, bool):
                raise InvalidIndexError(f"entry {entry!r} is not an integer")
            if entry < 1:
                raise InvalidIndexError(f"entry {entry}: entry must be ≥ 1")
        return super().__new__(cls, entries)

    def __repr__(self) -> str:
        return f"Index({','.join(map(str, self))})"

    def __str__(self) -> str:
        return ",".join(map(str, self))

    def __add__(self, other: Tuple[int, ...]) -> "Index":  # type: ignore[override]
        return Index(tuple(self) + tuple(other))

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def depth(self) -> int:
        return len(self)

    @property
    def admissible(self) -> bool:
        return bool(self) and self[-1] >= 2

    def minus_last(self) -> "Index":
        """Return the index with its last entry decremented."""
        if not self:
            raise InvalidIndexError("the empty index has no last entry")
        if self[-1] == 1:
            raise InvalidIndexError(f"cannot decrement the final 1 of {self!r}")
        return Index((*self[:-1], self[-1] - 1))

    def head(self, j: int) -> "Index":
        """The first j entries (k1, ..., kj)."""
        self._check_slice(j)
        return Index(self[:j])

    def tail(self, j: int) -> "Index":
        """The last j entries read backwards (kr, ..., k_{r+1-j})."""
        self._check_slice(j)
        return Index(reversed(self[len(self) - j :]))

    def ones_prefix(self, m: int) -> "Index":
        if m < 0:
            raise InvalidIndexError(f"cannot prepend {m} ones")
        return Index((1,) * m + tuple(self))

    def _check_slice(self, j: int) -> None:
        if not 0 <= j <= len(self):
            raise InvalidIndexError(f"slice length {j} out of range for {self!r}")


PHI = Index()


class IndexSlices(NamedTuple):
    head: Index
    tail: Index
    minus_last: Index
    ones_prefix: Index


class IndexCombination:
    """Finite Z-linear combination of indices. Zero coefficients are never stored."""

    terms: Dict[Index, int]

    def __init__(self, terms: Iterable[Tuple[Index, int]] = ()) -> None:
        self.terms = {}
        for index, coeff in terms:
            self.add(index, coeff)

    def add(self, index: Index, coeff: int = 1) -> None:
        total = self.terms.get(index, 0) + coeff
        if total:
            self.terms[index] = total
        else:
            self.terms.pop(index, None)

    def __add__(self, other: "IndexCombination") -> "IndexCombination":
        return IndexCombination([*self.items(), *other.items()])

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IndexCombination):
            return self.terms == other.terms
        if isinstance(other, dict):
            return self.terms == {Index(k): v for k, v in other.items() if v}
        return NotImplemented

    def __iter__(self) -> Iterator[Index]:
        return iter(sorted(self.terms, key=sort_key))

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, index: Tuple[int, ...]) -> int:
        return self.terms.get(Index(index), 0)

    def __repr__(self) -> str:
        return " + ".join(f"{c}·({k})" for k, c in self.items()) or "0"

    def items(self) -> Iterator[Tuple[Index, int]]:
        return ((index, self.terms[index]) for index in self)

    @property
    def mass(self) -> int:
        return sum(self.terms.values())


def sort_key(index: Tuple[int, ...]) -> Tuple[int, int, Tuple[int, ...]]:
    return sum(index), len(index), tuple(index)


def parse_index(text: str) -> Index:
    """Parse 'k1,k2,...,kr' into an Index; the empty string is phi."""
    text = text.strip()
    if not text:
        return PHI
    entries = []
    for token in text.split(","):
        if not PATTERNS["index_token"].match(token):
            raise InvalidIndexError(f"malformed index token {token!r} in {text!r}")
        if int(token) < 1:
            raise InvalidIndexError(f"token {token!r}: entry must be ≥ 1")
        entries.append(int(token))
    return Index(entries)


def to_word(index: Tuple[int, ...]) -> Word:
    return "".join("b" + "a" * (k - 1) for k in index)


def from_word(word: Word) -> Index:
    if not PATTERNS["word"].match(word):
        raise InvalidIndexError(f"word {word!r} has letters outside of 'a' and 'b'")
    if word and word[0] != "b":
        raise InvalidIndexError(f"word {word!r} must start with 'b'")
    return Index(len(block) + 1 for block in word.split("b")[1:])


def dual_index(index: Index) -> Index:
    """Reverse the word and swap the letters."""
    if not index.admissible:
        raise InvalidIndexError(f"duality undefined for non-admissible {index!r}")
    swapped = to_word(index)[::-1].translate(str.maketrans("ab", "ba"))
    return from_word(swapped)


@lru_cache(maxsize=4096)
def _shuffle_words(u: Word, v: Word) -> Tuple[Tuple[Word, int], ...]:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    words: Counter = Counter()
    for word, count in _shuffle_words(u[:-1], v):
        words[word + u[-1]] += count
    for word, count in _shuffle_words(u, v[:-1]):
        words[word + v[-1]] += count
    return tuple(words.items())


def shuffle_product(u: Index, v: Index) -> IndexCombination:
    """Sum over all interleavings of the two words."""
    return IndexCombination(
        (from_word(word), count)
        for word, count in _shuffle_words(to_word(u), to_word(v))
    )


def b_insertion_product(index: Index) -> IndexCombination:
    """Insert one letter 'b' into the word of `index` before each of its letters.

    This is A(k)A(1) - A(k, 1), so the terminal insertion is not part of it.
    """
    if not index:
        raise InvalidIndexError("b-insertion is undefined for the empty index")
    word = to_word(index)
    return IndexCombination(
        (from_word(word[:pos] + "b" + word[pos:]), 1) for pos in range(len(word))
    )


def split_sum_product(index: Index, constraint_mode: str = "literal") -> IndexCombination:
    """Sum of all splits k_j -> (a, b) with a + b = k_j + 1 over j = 1..r-1.

    `literal` requires a ≥ 2 for the first block only, `per_block` for every block.
    """
    if constraint_mode not in MODES:
        raise ValueError(f"unknown constraint mode {constraint_mode!r}")
    combination = IndexCombination()
    for j, entry in enumerate(index[:-1]):
        min_first = 2 if (j == 0 or constraint_mode == "per_block") else 1
        for first in range(min_first, entry + 1):
            second = entry + 1 - first
            combination.add(Index((*index[:j], first, second, *index[j + 1 :])))
    return combination


def index_slices(index: Index, j: int, m: int = 0) -> IndexSlices:
    return IndexSlices(
        head=index.head(j),
        tail=index.tail(j),
        minus_last=index.minus_last(),
        ones_prefix=index.ones_prefix(m),
    )


def admissible_indices(weight_max: int) -> Iterator[Index]:
    """All admissible indices of weight 2..weight_max, by weight then depth."""
    for weight in range(2, weight_max + 1):
        for entries in Helpers.all_compositions(weight):
            if entries[-1] >= 2:
                yield Index(entries)
