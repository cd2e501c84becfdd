"""Module with the exact symbolic expansion of lambda values into T-tilde values.

Every generator here returns a FormalCombination: a finite sum of products of
T-tilde symbols, optionally with one 's-slot' T~(k', s + shift), whose coefficients
are polynomials in s over the Gaussian rationals.
"""
import itertools as it
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import (
    Any,
    Dict,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Tuple,
    Union,
)

from sympy import QQ, QQ_I, Poly, Symbol

from ._helpers import Helpers, JSONDict
from ._index import (
    PHI,
    Index,
    IndexCombination,
    InvalidIndexError,
    b_insertion_product,
    dual_index,
    shuffle_product,
    sort_key,
    split_sum_product,
)

Scalar = Union[int, Fraction, "GaussianRational"]
CIRCLED_MODES = ("insertion", "literal", "per_block")
ONES_TWO_VARIANTS = ("printed", "corrected")


S_SYMBOL = Symbol("s")


def _qq(value: Fraction) -> Any:
    return QQ(value.numerator, value.denominator)


def _fraction(value: Any) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class GaussianRational:
    """Hashable view of an element of QQ_I with Fraction parts; arithmetic is
    carried out by sympy.
    """

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, value: Scalar) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return cls(Fraction(value))

    @classmethod
    def from_element(cls, element: Any) -> "GaussianRational":
        return cls(_fraction(element.x), _fraction(element.y))

    @classmethod
    def i_power(cls, exponent: int) -> "GaussianRational":
        return (ONE, I, -ONE, -I)[exponent % 4]

    @property
    def element(self) -> Any:
        return QQ_I(_qq(self.re), _qq(self.im))

    def __add__(self, other: Scalar) -> "GaussianRational":
        total = self.element + GaussianRational.of(other).element
        return GaussianRational.from_element(total)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: Scalar) -> "GaussianRational":
        return self + (-GaussianRational.of(other))

    def __mul__(self, other: Scalar) -> "GaussianRational":
        product = self.element * GaussianRational.of(other).element
        return GaussianRational.from_element(product)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __str__(self) -> str:
        re_part = Helpers.fraction_str(self.re) if self.re else ""
        if not self.im:
            return re_part or "0"
        im_abs = abs(self.im)
        im_part = ("" if im_abs == 1 else Helpers.fraction_str(im_abs)) + "i"
        sign = "-" if self.im < 0 else ("+" if re_part else "")
        return f"{re_part}{sign}{im_part}"

    def unit_parts(self) -> List[Tuple[int, Fraction]]:
        """Split into (i-exponent, positive magnitude) pairs: real parts use
        exponents 0 or 2, imaginary parts 1 or 3.
        """
        parts = []
        if self.re:
            parts.append((0 if self.re > 0 else 2, abs(self.re)))
        if self.im:
            parts.append((1 if self.im > 0 else 3, abs(self.im)))
        return parts


ONE = GaussianRational(Fraction(1))
I = GaussianRational(Fraction(0), Fraction(1))
ZERO = GaussianRational()


@dataclass(frozen=True)
class SPolynomial:
    """Polynomial in the formal variable s; coeffs[n] multiplies s^n. Arithmetic
    goes through a sympy Poly over QQ_I.
    """

    coeffs: Tuple[GaussianRational, ...] = ()

    def __post_init__(self) -> None:
        coeffs = list(self.coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def constant(cls, value: Scalar) -> "SPolynomial":
        return cls((GaussianRational.of(value),))

    @classmethod
    def from_poly(cls, poly: Poly) -> "SPolynomial":
        elements = map(QQ_I.from_sympy, reversed(poly.all_coeffs()))
        return cls(tuple(map(GaussianRational.from_element, elements)))

    @classmethod
    def binomial(cls, shift: int, lower: int) -> "SPolynomial":
        """binom(s + shift, lower) as a polynomial in s; zero for negative `lower`."""
        if lower < 0:
            return cls()
        product = Poly(1, S_SYMBOL, domain=QQ_I)
        for t in range(lower):
            product *= Poly(S_SYMBOL + shift - t, S_SYMBOL, domain=QQ_I)
        return cls.from_poly(product.quo_ground(factorial(lower)))

    @property
    def poly(self) -> Poly:
        elements = [c.element for c in reversed(self.coeffs)] or [QQ_I.zero]
        return Poly.from_list(elements, S_SYMBOL, domain=QQ_I)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: "SPolynomial") -> "SPolynomial":
        return SPolynomial.from_poly(self.poly + other.poly)

    def __neg__(self) -> "SPolynomial":
        return SPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "SPolynomial") -> "SPolynomial":
        return SPolynomial.from_poly(self.poly - other.poly)

    def __mul__(self, other: "SPolynomial") -> "SPolynomial":
        if not self or not other:
            return SPolynomial()
        return SPolynomial.from_poly(self.poly * other.poly)

    def scale(self, factor: Scalar) -> "SPolynomial":
        element = GaussianRational.of(factor).element
        return SPolynomial.from_poly(self.poly.mul_ground(element))

    def shift(self, offset: int) -> "SPolynomial":
        """Return p(s + offset)."""
        return SPolynomial.from_poly(self.poly.shift(offset))

    def evaluate(self, s: int) -> GaussianRational:
        value = self.poly.eval(QQ_I.convert(s))
        return GaussianRational.from_element(QQ_I.from_sympy(value))

    def __str__(self) -> str:
        terms = []
        for n, c in enumerate(self.coeffs):
            if not c:
                continue
            power = "" if n == 0 else ("s" if n == 1 else f"s^{n}")
            if not power:
                terms.append(str(c))
            elif c == ONE:
                terms.append(power)
            else:
                text = str(c)
                if "+" in text or "-" in text[1:]:
                    text = f"({text})"
                terms.append(f"{text}·{power}")
        return " + ".join(terms) or "0"


Slot = Tuple[Index, int]


class Monomial(NamedTuple):
    """Product of constant T~ values with an optional T~(residual, s + shift)."""

    constants: Tuple[Index, ...] = ()
    slot: Optional[Slot] = None

    @classmethod
    def make(
        cls, constants: Iterable[Index] = (), slot: Optional[Slot] = None
    ) -> "Monomial":
        constants = tuple(sorted((Index(c) for c in constants if c), key=sort_key))
        if slot is not None:
            slot = (Index(slot[0]), slot[1])
        return cls(constants, slot)

    @property
    def grading(self) -> int:
        """Total weight, the s-slot counting as weight s."""
        weight = sum(c.weight for c in self.constants)
        if self.slot:
            residual, shift = self.slot
            weight += residual.weight + shift
        return weight

    @property
    def depth(self) -> int:
        depth = sum(c.depth for c in self.constants)
        return depth + (self.slot[0].depth + 1 if self.slot else 0)

    @property
    def sort_key(self) -> Tuple[Any, ...]:
        slot_key: Tuple[Any, ...] = (0,)
        if self.slot is not None:
            slot_key = (1, sort_key(self.slot[0]), self.slot[1])
        return self.grading, self.depth, tuple(map(sort_key, self.constants)), slot_key

    def substitute(self, s: int) -> "Monomial":
        if self.slot is None:
            return self
        residual, shift = self.slot
        return Monomial.make((*self.constants, residual + (s + shift,)))

    def __mul__(self, other: "Monomial") -> "Monomial":  # type: ignore[override]
        if self.slot and other.slot:
            raise ValueError("a product may carry at most one s-slot")
        return Monomial.make((*self.constants, *other.constants), self.slot or other.slot)

    def __str__(self) -> str:
        factors = [f"T̃({c})" for c in self.constants]
        if self.slot:
            residual, shift = self.slot
            arg = "s" if not shift else f"s{shift:+d}"
            factors.append(f"T̃({residual},{arg})" if residual else f"T̃({arg})")
        return "".join(factors) or "1"


@dataclass
class FormalCombination:
    terms: Dict[Monomial, SPolynomial] = field(default_factory=dict)

    @classmethod
    def of(cls, items: Iterable[Tuple[Monomial, SPolynomial]]) -> "FormalCombination":
        combination = cls()
        for monomial, poly in items:
            combination._add(monomial, poly)
        return combination

    @classmethod
    def constant(cls, value: Scalar) -> "FormalCombination":
        return cls.of([(Monomial(), SPolynomial.constant(value))])

    @classmethod
    def tvalue(cls, *indices: Index, coeff: Scalar = 1) -> "FormalCombination":
        """coeff times the product of T~ over `indices` (the empty index counts as 1)."""
        return cls.of([(Monomial.make(indices), SPolynomial.constant(coeff))])

    @classmethod
    def slotted(
        cls, residual: Index, shift: int, *constants: Index, coeff: Scalar = 1,
        poly: Optional[SPolynomial] = None,
    ) -> "FormalCombination":
        poly = (poly or SPolynomial.constant(1)).scale(coeff)
        return cls.of([(Monomial.make(constants, (residual, shift)), poly)])

    def _add(self, monomial: Monomial, poly: SPolynomial) -> None:
        total = self.terms.get(monomial, SPolynomial()) + poly
        if total:
            self.terms[monomial] = total
        else:
            self.terms.pop(monomial, None)

    def items(self) -> Iterator[Tuple[Monomial, SPolynomial]]:
        for monomial in sorted(self.terms, key=lambda m: m.sort_key):
            yield monomial, self.terms[monomial]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalCombination):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "FormalCombination") -> "FormalCombination":
        return FormalCombination.of(it.chain(self.items(), other.items()))

    def __neg__(self) -> "FormalCombination":
        return self.scale(-1)

    def __sub__(self, other: "FormalCombination") -> "FormalCombination":
        return self + (-other)

    def __mul__(self, other: "FormalCombination") -> "FormalCombination":
        return FormalCombination.of(
            (m1 * m2, p1 * p2)
            for (m1, p1), (m2, p2) in it.product(self.items(), other.items())
        )

    def scale(self, factor: Scalar) -> "FormalCombination":
        return FormalCombination.of((m, p.scale(factor)) for m, p in self.items())

    def scale_poly(self, poly: SPolynomial) -> "FormalCombination":
        return FormalCombination.of((m, p * poly) for m, p in self.items())

    def shift_s(self, offset: int) -> "FormalCombination":
        """Replace s by s + offset."""

        def _shift(monomial: Monomial) -> Monomial:
            if monomial.slot is None:
                return monomial
            residual, shift = monomial.slot
            return Monomial(monomial.constants, (residual, shift + offset))

        return FormalCombination.of((_shift(m), p.shift(offset)) for m, p in self.items())

    def substitute(self, s: int) -> "FormalCombination":
        """Fix s to an integer: slots become constants, coefficients become numbers."""
        if s < 1:
            raise ValueError(f"s must be a positive integer, got {s}")
        return FormalCombination.of(
            (m.substitute(s), SPolynomial.constant(p.evaluate(s)))
            for m, p in self.items()
        )

    @property
    def has_s(self) -> bool:
        return any(m.slot or p.degree > 0 for m, p in self.terms.items())

    @property
    def gradings(self) -> List[int]:
        return sorted({m.grading for m in self.terms})

    def indices(self) -> List[Index]:
        """Every constant T~ index, in canonical order (slots excluded)."""
        found = {c for m in self.terms for c in m.constants}
        return sorted(found, key=sort_key)

    def to_json(self) -> List[JSONDict]:
        entries = []
        for monomial, poly in self.items():
            slot = None
            if monomial.slot is not None:
                slot = {"index": list(monomial.slot[0]), "shift": monomial.slot[1]}
            for power, coeff in enumerate(poly.coeffs):
                for exponent, magnitude in coeff.unit_parts():
                    entries.append(
                        {
                            "coefficient": Helpers.fraction_str(magnitude),
                            "i": exponent,
                            "s_power": power,
                            "constants": [list(c) for c in monomial.constants],
                            "slot": slot,
                        }
                    )
        return entries

    @classmethod
    def from_json(cls, entries: List[JSONDict]) -> "FormalCombination":
        combination = cls()
        for entry in entries:
            slot = entry.get("slot")
            monomial = Monomial.make(
                map(Index, entry["constants"]),
                (Index(slot["index"]), slot["shift"]) if slot else None,
            )
            coeff = GaussianRational.i_power(entry["i"]) * Helpers.parse_fraction(
                entry["coefficient"]
            )
            power = entry.get("s_power", 0)
            combination._add(monomial, SPolynomial((ZERO,) * power + (coeff,)))
        return combination

    def __str__(self) -> str:
        parts = []
        for monomial, poly in self.items():
            text = str(poly)
            if " + " in text:
                text = f"({text})"
            parts.append(str(monomial) if text == "1" else f"{text}·{monomial}")
        return " + ".join(parts) or "0"


class ExpansionTerm(NamedTuple):
    """c · i^e · prod T~(P) · A({1}_j; (1+z)/(1-z)) · A(residual; z)."""

    c: Fraction
    e: int
    P: Tuple[Index, ...]
    j: int
    residual: Index

    @property
    def weight(self) -> int:
        return self.residual.weight + self.j + sum(p.weight for p in self.P)

    def __str__(self) -> str:
        P = "{" + ", ".join(f"({p})" for p in self.P) + "}"
        c = Helpers.fraction_str(self.c)
        return f"({c}, {self.e}, {P}, {self.j}, ({self.residual}))"


TermKey = Tuple[int, Tuple[Index, ...], int, Index]


def _collect(pairs: Iterable[Tuple[TermKey, Fraction]]) -> Tuple[ExpansionTerm, ...]:
    coefficients: Dict[TermKey, Fraction] = {}
    for key, c in pairs:
        coefficients[key] = coefficients.get(key, Fraction(0)) + c
    terms = [ExpansionTerm(c, *key) for key, c in coefficients.items() if c]
    return tuple(
        sorted(
            terms,
            key=lambda t: (sort_key(t.residual), -t.j, [sort_key(p) for p in t.P]),
        )
    )


def _with_constant(P: Tuple[Index, ...], index: Index) -> Tuple[Index, ...]:
    return tuple(sorted((*P, index), key=sort_key))


@lru_cache(maxsize=None)
def expand_A(index: Index) -> Tuple[ExpansionTerm, ...]:
    """Expand A(index; (1+z)/(1-z)) into terms of A({1}_j; (1+z)/(1-z)) A(k'; z)."""
    index = Index(index)
    if not index:
        raise InvalidIndexError("cannot expand the empty index")
    if index == (1,):
        return (ExpansionTerm(Fraction(1), 0, (), 1, PHI),)

    pairs: List[Tuple[TermKey, Fraction]] = []
    if index.admissible:
        for c, e, P, j, residual in expand_A(index.minus_last()):
            for l in range(j + 1):
                pairs.append(((e, P, j - l, residual + (l + 1,)), c))
            boundary = residual + (j + 1,)
            key = ((e + residual.depth + 1) % 4, _with_constant(P, boundary), 0, PHI)
            pairs.append((key, -c))
        return _collect(pairs)

    parent = Index(index[:-1])
    insertions = b_insertion_product(parent) if parent else IndexCombination()
    for c, e, P, j, residual in expand_A(parent) if parent else ():
        pairs.append(((e, P, j + 1, residual), c * (j + 1)))
    for other, coeff in insertions.items():
        if other != index:
            pairs.extend(
                ((t.e, t.P, t.j, t.residual), -coeff * t.c) for t in expand_A(other)
            )
    divisor = 1 + insertions[index]
    return _collect((key, c / divisor) for key, c in pairs)


def lambda_expansion(index: Index) -> FormalCombination:
    """lambda(index; s) as a combination of binom(s+j-1, j) T~(k', s+j) terms."""
    combination = FormalCombination()
    for c, e, P, j, residual in expand_A(Index(index)):
        coeff = GaussianRational.i_power(e + residual.depth) * c
        poly = SPolynomial.binomial(j - 1, j).scale(coeff)
        combination._add(Monomial.make(P, (residual, j)), poly)
    return combination


def closed_form_one_two(r: int, j: int) -> FormalCombination:
    """lambda({1}_{j-1}, 2, {1}_{r-j}; s) for r > j ≥ 1."""
    if not r > j >= 1:
        raise ValueError(f"need r > j ≥ 1, got r={r}, j={j}")
    combination = FormalCombination()
    sign = (-1) ** (r - j)
    for m in range(r - j, r + 1):
        coeff = I * (sign * comb(m, r - j))
        poly = SPolynomial.binomial(r - m - 1, r - m)
        combination += FormalCombination.slotted(
            Index((m + 1,)), r - m, coeff=coeff, poly=poly
        )
    for l in range(r - j + 1):
        coeff = -I * ((-1) ** l * comb(j + l, l))
        poly = SPolynomial.binomial(r - j - l - 1, r - j - l)
        combination += FormalCombination.slotted(
            PHI, r - j - l, Index((j + l + 1,)), coeff=coeff, poly=poly
        )
    return combination


def closed_form_ones_two(
    r: int, binomial_variant: str = "corrected"
) -> FormalCombination:
    """lambda({1}_{r-1}, 2; s). The `printed` variant uses binom(s+r-l-2, r+l-1),
    the `corrected` one binom(s+r-l-2, r-l-1).
    """
    if r < 1:
        raise ValueError(f"need r ≥ 1, got {r}")
    if binomial_variant not in ONES_TWO_VARIANTS:
        raise ValueError(f"unknown binomial variant {binomial_variant!r}")
    combination = FormalCombination.slotted(
        Index((1,)), r, coeff=I, poly=SPolynomial.binomial(r - 1, r)
    )
    for l in range(r):
        lower = r + l - 1 if binomial_variant == "printed" else r - l - 1
        combination += FormalCombination.slotted(
            Index((l + 2,)),
            r - l - 1,
            coeff=I,
            poly=SPolynomial.binomial(r - l - 2, lower),
        )
    return combination + FormalCombination.slotted(PHI, 0, Index((r + 1,)), coeff=-I)


@dataclass
class LambdaIdentity:
    lhs: FormalCombination
    rhs: FormalCombination
    domain: str
    provenance: str
    params: JSONDict = field(default_factory=dict)

    @property
    def difference(self) -> FormalCombination:
        return self.lhs - self.rhs

    @property
    def holds_symbolically(self) -> bool:
        return not self.difference


def _lambda_at(index: Index, offset: int, binomial: SPolynomial) -> FormalCombination:
    return lambda_expansion(index).shift_s(offset).scale_poly(binomial)


def sum_relation(kind: str, r: int, k: int) -> LambdaIdentity:
    """The two weighted sum formulas over all indices of weight k+r-1 (or k+j)."""
    if r < 1 or k < 1:
        raise ValueError(f"need r, k ≥ 1, got r={r}, k={k}")
    params = {"kind": kind, "r": r, "k": k}
    binomial = (lambda j: SPolynomial.binomial(r - j - 2, r - j - 1).scale((-1) ** j))
    if kind == "me1":
        lhs = _sum_lambdas(Helpers.compositions(k + r - 1, r))
        rhs = FormalCombination()
        for j in range(r):
            rhs += _lambda_at(Index((k,)).ones_prefix(j), r - j - 1, binomial(j))
    elif kind == "me2":
        lhs = lambda_expansion(Index((k,)).ones_prefix(r - 1))
        rhs = FormalCombination()
        for j in range(r):
            for entries in Helpers.compositions(k + j, j + 1):
                rhs += _lambda_at(Index(entries), r - j - 1, binomial(j))
    else:
        raise ValueError(f"unknown sum relation {kind!r}")
    return LambdaIdentity(lhs, rhs, "s ≥ 2", kind, params)


def _sum_lambdas(compositions: Iterable[Tuple[int, ...]]) -> FormalCombination:
    expansions = (lambda_expansion(Index(e)) for e in compositions)
    return sum(expansions, FormalCombination())


def apoly_at_one_symbol(index: Index) -> FormalCombination:
    """A(index; 1) = i^{dep - wt} T~(index dual); the empty index gives 1."""
    if not index:
        return FormalCombination.constant(1)
    coeff = GaussianRational.i_power(index.depth - index.weight)
    return FormalCombination.tvalue(dual_index(index), coeff=coeff)


def _dual_sum(combination: IndexCombination) -> FormalCombination:
    """Sum of coeff · T~(term dual) over a combination of admissible indices."""
    return sum(
        (
            FormalCombination.tvalue(dual_index(index), coeff=c)
            for index, c in combination.items()
        ),
        FormalCombination(),
    )


def circled_product(index: Index, mode: str = "insertion") -> IndexCombination:
    """The correction object A(X)A(1) - A(X, 1), or one of the printed split sums."""
    if mode == "insertion":
        return b_insertion_product(index)
    if mode in ("literal", "per_block"):
        return split_sum_product(index, mode)
    raise ValueError(f"unknown circled product mode {mode!r}")


def duality_relation(
    index: Index, p: int, q: int, circled: str = "insertion"
) -> LambdaIdentity:
    """Both sides of the duality formula for lambda at the integers p+1 and q+1."""
    index = Index(index)
    if not index or min(index) < 2:
        raise InvalidIndexError(f"duality formula needs every entry ≥ 2, got {index!r}")
    if p < 1 or q < 1:
        raise ValueError(f"need p, q ≥ 1, got p={p}, q={q}")
    r, weight = index.depth, index.weight

    forward = lambda_expansion(index.minus_last().ones_prefix(q - 1)).substitute(p + 1)
    reversed_index = index.tail(r).minus_last().ones_prefix(p - 1)
    backward = lambda_expansion(reversed_index).substitute(q + 1)
    lhs = forward - backward.scale((-1) ** weight)

    tdual = (lambda x: FormalCombination.tvalue(dual_index(x)))
    rhs = FormalCombination()
    for j in range(r):
        block = index[r - j - 1]
        for l in range(1, block - 1):
            left = index.tail(j).ones_prefix(p - 1) + (l + 1,)
            right = index.head(r - j - 1).ones_prefix(q - 1) + (block - l,)
            sign = (-1) ** (index.tail(j).weight + l - 1)
            rhs += (tdual(left) * tdual(right)).scale(sign)
    for j in range(r - 1):
        left = index.tail(j + 1).ones_prefix(p - 1)
        right = index.head(r - j - 1).ones_prefix(q - 1)
        bracket = tdual(right) * _dual_sum(circled_product(left, circled)) - tdual(
            left
        ) * _dual_sum(circled_product(right, circled))
        rhs += bracket.scale((-1) ** index.tail(j + 1).weight)
    rhs = rhs.scale(GaussianRational.i_power(r - weight + 1))

    params = {"index": list(index), "p": p, "q": q, "circled": circled}
    return LambdaIdentity(lhs, rhs, "constant", "duality", params)


def shuffle_relation_at_one(u: Index, v: Index) -> LambdaIdentity:
    """A(u; 1) A(v; 1) = sum over u ш v of A(w; 1), written with dual T~ values."""
    for index in (u, v):
        if index and not index.admissible:
            raise InvalidIndexError(
                f"shuffle at 1 needs admissible indices, got {index!r}"
            )
    lhs = apoly_at_one_symbol(u) * apoly_at_one_symbol(v)
    rhs = FormalCombination()
    for w, coeff in shuffle_product(u, v).items():
        rhs += apoly_at_one_symbol(w).scale(coeff)
    params = {"u": list(u), "v": list(v)}
    return LambdaIdentity(lhs, rhs, "constant", "shuffle", params)


def closed_form(index: Index) -> FormalCombination:
    """The closed form of lambda(index; s), known for (1) and for indices made of
    ones and a single 2.
    """
    index = Index(index)
    if index == (1,):
        return FormalCombination.slotted(PHI, 1, poly=SPolynomial((ZERO, ONE)))
    if index.count(2) == 1 and set(index) <= {1, 2}:
        r, j = index.depth, index.index(2) + 1
        return closed_form_ones_two(r) if j == r else closed_form_one_two(r, j)
    raise ValueError(f"no closed form known for lambda({index}; s)")
