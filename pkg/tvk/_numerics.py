"""Module with the series evaluation of T~ values and of formal combinations."""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, Iterator, List, NamedTuple, Optional

from mpmath import mp, mpc, mpf

from ._expansion import FormalCombination, GaussianRational
from ._helpers import Helpers
from ._index import Index

if TYPE_CHECKING:
    from ._cache import ValueCache

log = logging.getLogger("tvk")

#: Terms summed directly before the Euler transform takes over the tail.
DIRECT_TERMS = 8
#: Digits kept beyond what an error estimate supports.
GUARD_DIGITS = 10


class NonConvergenceError(ArithmeticError):
    """Raised when a series, an extrapolation or a quadrature misses its target."""

    def __init__(self, msg: str, best: Optional["BigComplex"] = None) -> None:
        super().__init__(msg)
        self.best = best


@dataclass
class PrecisionPolicy:
    target_digits: int = 30
    guard_digits: Optional[int] = None
    max_outer_terms: int = 20000
    acceleration_order: Optional[int] = None

    def __post_init__(self) -> None:
        if self.target_digits < 1:
            raise ValueError(f"target_digits must be positive, got {self.target_digits}")
        if self.guard_digits is not None and self.guard_digits <= self.target_digits:
            raise ValueError("guard_digits must exceed target_digits")

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "PrecisionPolicy":
        """Build the policy from a flattened configuration."""
        return cls(
            target_digits=int(config["digits"]),
            max_outer_terms=int(config["max_outer_terms"]),
            acceleration_order=int(config["acceleration_order"] or 0) or None,
        )

    @property
    def tolerance(self) -> mpf:
        return mpf(10) ** (-self.target_digits)

    def working_dps(self, weight: int) -> int:
        if self.guard_digits is not None:
            return self.guard_digits
        return self.target_digits + 10 + 5 * weight

    def order(self) -> int:
        """Number of Euler-transform terms for the target precision."""
        if self.acceleration_order:
            return self.acceleration_order
        return math.ceil((self.target_digits + 8) * math.log2(10)) + 20


class BigComplex(NamedTuple):
    """Number at working precision with a heuristic absolute error estimate.

    Arithmetic runs with enough digits to keep every error estimate meaningful,
    whatever the global mpmath precision is at the call site.
    """

    value: Any
    err: Any

    @classmethod
    def exact(cls, value: Any) -> "BigComplex":
        return cls(mp.mpmathify(value), mpf(0))

    @property
    def dps(self) -> int:
        """Decimal digits the error estimate supports."""
        if not self.err or not self.value or not mp.isfinite(self.err):
            return 0
        return int(mp.log10(abs(self.value) / self.err)) + GUARD_DIGITS

    def _workdps(self, *others: "BigComplex") -> Any:
        return mp.workdps(max(mp.dps, *(n.dps for n in (self, *others))))

    def __add__(self, other: "BigComplex") -> "BigComplex":  # type: ignore[override]
        with self._workdps(other):
            return BigComplex(self.value + other.value, self.err + other.err)

    def __sub__(self, other: "BigComplex") -> "BigComplex":
        with self._workdps(other):
            return BigComplex(self.value - other.value, self.err + other.err)

    def __neg__(self) -> "BigComplex":
        return BigComplex(-self.value, self.err)

    def __mul__(self, other: "BigComplex") -> "BigComplex":  # type: ignore[override]
        with self._workdps(other):
            err = abs(self.value) * other.err + abs(other.value) * self.err
            err += self.err * other.err
            return BigComplex(self.value * other.value, err)

    def scale(self, factor: Any) -> "BigComplex":
        with self._workdps():
            return BigComplex(self.value * factor, abs(factor) * self.err)

    @property
    def is_real(self) -> bool:
        return not isinstance(self.value, mpc) or not self.value.imag

    def render(self, digits: int) -> str:
        return Helpers.render_decimal(self.value, self.err, digits)


BigReal = BigComplex


def to_mp(value: GaussianRational) -> Any:
    """Convert an exact Gaussian rational at the current precision."""
    re_part = mpf(value.re.numerator) / value.re.denominator
    if not value.im:
        return re_part
    return mpc(re_part, mpf(value.im.numerator) / value.im.denominator)


def binomial_rational(s: int, j: int) -> Fraction:
    """binom(s + j - 1, j) as an exact rational."""
    if j < 0:
        raise ValueError(f"j must be nonnegative, got {j}")
    return Fraction(math.prod(range(s, s + j)), math.factorial(j))


def dirichlet_beta(k: int, policy: PrecisionPolicy) -> BigReal:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    dps = policy.working_dps(k)
    with mp.workdps(dps):
        value = mp.pi / 4 if k == 1 else mp.dirichlet(k, [0, 1, 0, -1])
        return BigComplex(+value, mpf(10) ** (-dps + 5))


def _outer_terms(index: Index) -> Iterator[mpf]:
    """Yield a_n, the absolute outer terms of the nested series, n = 0, 1, ..."""
    r = index.depth
    partial = [mpf(1)] + [mpf(0)] * (r - 1)
    M = 0
    while True:
        M += 1
        if M >= r and (M - r) % 2 == 0:
            yield 2 * partial[r - 1] / mpf(M) ** index[-1]
        for j in range(r - 1, 0, -1):
            if (M - j) % 2 == 0:
                partial[j] += 2 * partial[j - 1] / mpf(M) ** index[j - 1]


def euler_sum(terms: List[mpf], start: int, count: int) -> List[mpf]:
    """Euler-transformed terms of sum_{m ≥ 0} (-1)^m terms[start + m].

    Returns the `count` summands (-1)^k Δ^k b_0 / 2^(k+1).
    """
    diffs = list(terms[start : start + count])
    summands = []
    for k in range(count):
        summands.append((-1) ** k * diffs[0] / mpf(2) ** (k + 1))
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    return summands


def _accelerate(terms: List[mpf], order: int, start: int = DIRECT_TERMS) -> BigReal:
    def _estimate(begin: int) -> mpf:
        direct = mp.fsum((-1) ** n * terms[n] for n in range(begin))
        return direct + (-1) ** begin * mp.fsum(euler_sum(terms, begin, order))

    value = _estimate(start)
    shifted = _estimate(start + 2)
    last = euler_sum(terms, start, order)[-1]
    return BigComplex(value, 2 * abs(last) + abs(value - shifted))


def ttilde(index: Index, policy: PrecisionPolicy) -> BigReal:
    """T~(index) by the nested alternating series with Euler-transformed tail."""
    index = Index(index)
    if not index:
        return BigComplex.exact(1)
    if index[-1] == 1:
        log.debug("T~(%s) converges only conditionally", index)

    order = policy.order()
    best: Optional[BigComplex] = None
    with mp.workdps(policy.working_dps(index.weight)):
        tolerance = policy.tolerance
        while True:
            needed = DIRECT_TERMS + 2 + order
            if needed > policy.max_outer_terms:
                raise NonConvergenceError(
                    f"T~({index}) missed {policy.target_digits} digits "
                    f"within {policy.max_outer_terms} outer terms",
                    best,
                )
            generator = _outer_terms(index)
            terms = [next(generator) for _ in range(needed)]
            best = _accelerate(terms, order)
            if best.err <= tolerance:
                return best
            log.debug(
                "T~(%s): error %s at order %s, doubling",
                index,
                mp.nstr(best.err, 3),
                order,
            )
            order *= 2


class TValueTable:
    """Memoised T~ evaluations for one policy, optionally backed by a value cache."""

    def __init__(
        self, policy: PrecisionPolicy, cache: Optional["ValueCache"] = None
    ) -> None:
        self.policy = policy
        self.cache = cache
        self._values: Dict[Index, BigReal] = {}

    def __getitem__(self, index: Index) -> BigReal:
        index = Index(index)
        if index not in self._values:
            self._values[index] = self._lookup(index)
        return self._values[index]

    def _lookup(self, index: Index) -> BigReal:
        digits = self.policy.target_digits
        if self.cache is not None:
            record = self.cache.get("ttilde", index, digits=digits)
            if record is not None:
                with mp.workdps(self.policy.working_dps(index.weight)):
                    return BigComplex(mpf(record.re), mpf(record.err))
        value = ttilde(index, self.policy)
        if self.cache is not None:
            self.cache.put_value("ttilde", index, value, digits, method="series")
        return value


def eval_combination(
    combination: FormalCombination,
    s: Optional[int],
    policy: PrecisionPolicy,
    values: Optional[TValueTable] = None,
) -> BigComplex:
    """Evaluate a formal combination at the integer s.

    Coefficients stay exact until the final multiplication by T~ numerics.
    """
    if combination.has_s:
        if s is None:
            raise ValueError("the combination depends on s, but no s was given")
        combination = combination.substitute(s)
    values = values or TValueTable(policy)
    weight = max(combination.gradings, default=0)
    total = BigComplex.exact(0)
    with mp.workdps(policy.working_dps(weight)):
        for monomial, poly in combination.items():
            product = BigComplex.exact(1)
            for index in monomial.constants:
                product = product * values[index]
            if not product.is_real:
                raise ArithmeticError(f"T~ product {monomial} is not real")
            total = total + product.scale(to_mp(poly.evaluate(0)))
    return total
