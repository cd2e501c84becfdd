"""Module with an independent evaluation of level-four polylogarithms.

The iterated integral of a word is propagated as a triangular linear system over
the prefixes of the word: y_0 = 1 and dy_m = form(letter_m) * y_{m-1}, starting
from z = i where every nonempty prefix vanishes. Each panel is integrated with a
Chebyshev-Lobatto integration matrix, which is exact up to spectral accuracy since
the system is triangular.

Both paths run along the unit circle from i towards 1. With z = exp(i theta):

    a = du/u           = i d(theta)
    b = 2du/(1 - u^2)  = -d(theta) / sin(theta)

and with z = tanh(t/2 + pi i/4), i.e. tan(theta/2) = exp(-t):

    a = -i sech(t) dt
    b = dt
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Any, Callable, List, NamedTuple, Optional, Sequence, Tuple

from mpmath import mp, mpc, mpf

from ._expansion import GaussianRational, expand_A
from ._index import Index, InvalidIndexError, to_word
from ._numerics import (
    BigComplex,
    NonConvergenceError,
    PrecisionPolicy,
    TValueTable,
    to_mp,
)

log = logging.getLogger("tvk")

ORACLE_DIGITS = 15
NODES = 20
COARSE_NODES = 14
T_MAX = 40
ENDPOINT_TOLERANCE = "1e-11"
QUADRATURE_TOLERANCE = "1e-9"
LADDER = [mpf("1e-8") / 2**k for k in range(9)]

Form = Callable[[Any], Any]


class PathSpec(NamedTuple):
    kind: str
    start: Any
    stop: Any

    @classmethod
    def arc_to_one(cls, stop: Any = 0) -> "PathSpec":
        return cls("arc_to_one", mp.pi / 2, mpf(stop))

    @classmethod
    def lambda_curve(cls, stop: Any = T_MAX) -> "PathSpec":
        return cls("lambda_curve", mpf(0), mpf(stop))

    def width(self, x: Any) -> Any:
        if self.kind == "arc_to_one":
            return min(mpf("0.25"), x / 3)
        return mpf("0.5")

    def form(self, letter: str) -> Form:
        if self.kind == "arc_to_one":
            return (lambda x: mpc(0, 1)) if letter == "a" else (lambda x: -1 / mp.sin(x))
        if letter == "a":
            return lambda x: mpc(0, -1) * mp.sech(x)
        return lambda x: mpf(1)

    def point(self, x: Any) -> Any:
        if self.kind == "arc_to_one":
            return mp.expjpi(x / mp.pi)
        return mp.tanh(x / 2 + mp.pi * mpc(0, 1) / 4)


@dataclass
class PrefixState:
    """Values of every prefix integral of `word` at the path parameter `at`."""

    word: str
    at: Any
    values: List[Any] = field(default_factory=list)

    @classmethod
    def start(cls, word: str, path: PathSpec) -> "PrefixState":
        return cls(word, path.start, [mpc(1)] + [mpc(0)] * len(word))

    @property
    def final(self) -> Any:
        return self.values[-1]

    def polynomials(self) -> List[List[Any]]:
        """Leading behaviour of each prefix beyond the current point, as polynomials
        in the distance measured by the 'b' form. Letter 'a' contributes a constant,
        'b' integrates the previous polynomial.
        """
        polys = [[mpc(1)]]
        for letter, value in zip(self.word, self.values[1:]):
            if letter == "b":
                integrated = [c / (q + 1) for q, c in enumerate(polys[-1])]
                polys.append([value, *integrated])
            else:
                polys.append([value])
        return polys


@lru_cache(maxsize=None)
def _spectral(n: int, dps: int) -> Tuple[Tuple[Any, ...], Any]:
    """Chebyshev-Lobatto nodes on [-1, 1] and the matrix S with
    (S f)_k = integral from -1 to x_k of the interpolant of f.
    """
    with mp.workdps(dps):
        xs = [-mp.cos(mp.pi * k / n) for k in range(n + 1)]
        vander = mp.matrix(n + 1, n + 1)
        integrals = mp.matrix(n + 1, n + 1)
        for k, x in enumerate(xs):
            cheb = [mpf(1), x]
            for _ in range(n + 1):
                cheb.append(2 * x * cheb[-1] - cheb[-2])
            for l in range(n + 1):
                vander[k, l] = cheb[l]
                integrals[k, l] = _antiderivative(l, cheb, x)
        return tuple(xs), integrals * mp.inverse(vander)


def _antiderivative(l: int, cheb: List[Any], x: Any) -> Any:
    if l == 0:
        return x + 1
    if l == 1:
        return (x * x - 1) / 2
    at_minus_one = ((-1) ** (l + 1) / mpf(l + 1) - (-1) ** (l - 1) / mpf(l - 1)) / 2
    return (cheb[l + 1] / (l + 1) - cheb[l - 1] / (l - 1)) / 2 - at_minus_one


def _panel(
    values: List[Any], forms: Sequence[Form], lo: Any, hi: Any, nodes: int
) -> List[Any]:
    xs, integrate = _spectral(nodes, mp.dps)
    half = (hi - lo) / 2
    params = [lo + (x + 1) * half for x in xs]
    previous = [mpc(1)] * len(params)
    result = [values[0]]
    for start, form in zip(values[1:], forms):
        integrand = mp.matrix([form(p) * v for p, v in zip(params, previous)])
        integral = integrate * integrand
        previous = [start + half * integral[k] for k in range(len(params))]
        result.append(previous[-1])
    return result


def propagate(
    state: PrefixState,
    path: PathSpec,
    stop: Any,
    nodes: int = NODES,
    kernel: Optional[Form] = None,
) -> PrefixState:
    """Advance `state` along `path` up to the parameter `stop`.

    An optional `kernel` form adds one more component integrating the final prefix.
    """
    forms = [path.form(letter) for letter in state.word]
    values = list(state.values)
    if kernel is not None:
        forms.append(kernel)
        if len(values) == len(state.word) + 1:
            values.append(mpc(0))
    at = state.at
    direction = 1 if stop > at else -1
    while at != stop:
        width = path.width(at)
        nxt = at + direction * width
        if (nxt - stop) * direction >= 0 or abs(nxt - stop) < width / 4:
            nxt = stop
        values = _panel(values, forms, at, nxt, nodes)
        log.debug("%s panel %s -> %s: %s", path.kind, mp.nstr(at, 6), mp.nstr(nxt, 6),
                  mp.nstr(values[-1], 8))
        at = nxt
    return PrefixState(state.word, at, values)


def _tail_at_one(state: PrefixState) -> Any:
    """Remaining integral of a final 'a' letter from theta = state.at to 0."""
    poly = state.polynomials()[-2]
    moments = mp.fsum(c * factorial(q) for q, c in enumerate(poly))
    return mpc(0, -2) * mp.tan(state.at / 2) * moments


def _fit_real(us: List[Any], ys: List[Any]) -> Tuple[Any, Any]:
    design = mp.matrix([[1, u * mp.log(u), u] for u in us])
    solution, residual = mp.qr_solve(design, mp.matrix(ys))
    return solution[0], residual


def _oracle_dps(policy: PrecisionPolicy) -> int:
    return min(policy.target_digits, ORACLE_DIGITS) + 10


def apoly_at_one(
    index: Index, policy: PrecisionPolicy, tolerance: Any = None
) -> BigComplex:
    """A(index; 1) along the arc, the endpoint treated by an epsilon ladder."""
    index = Index(index)
    if not index.admissible:
        raise InvalidIndexError(f"A at 1 diverges for non-admissible {index!r}")
    word = to_word(index)
    with mp.workdps(_oracle_dps(policy)):
        tolerance = mpf(tolerance or ENDPOINT_TOLERANCE)
        path = PathSpec.arc_to_one()
        state = PrefixState.start(word, path)
        estimates = []
        for eps in LADDER:
            state = propagate(state, path, eps)
            estimates.append(state.final + _tail_at_one(state))
        us = [eps / LADDER[0] for eps in LADDER]
        re_part, re_res = _fit_real(us, [e.real for e in estimates])
        im_part, im_res = _fit_real(us, [e.imag for e in estimates])
        value = mpc(re_part, im_part)
        err = abs(value - estimates[-1]) + re_res + im_res
        result = BigComplex(value, err)
        if err > tolerance:
            raise NonConvergenceError(
                f"endpoint extrapolation of A({index}; 1) failed", result
            )
        return result


def _curve_value(
    word: str, stop: Any, nodes: int, kernel: Optional[Form] = None
) -> PrefixState:
    path = PathSpec.lambda_curve(stop)
    return propagate(PrefixState.start(word, path), path, stop, nodes, kernel)


def lambda_quadrature(
    index: Index, s: int, policy: PrecisionPolicy, tolerance: Any = None
) -> BigComplex:
    """lambda(index; s) from its defining integral along the lambda curve."""
    index = Index(index)
    if not index:
        raise InvalidIndexError("lambda needs a nonempty index")
    if s < 2:
        raise ValueError(f"s must be an integer ≥ 2, got {s}")
    word = to_word(index)
    with mp.workdps(_oracle_dps(policy)):
        tolerance = mpf(tolerance or QUADRATURE_TOLERANCE)
        gamma = factorial(s - 1)
        kernel = (lambda t: t ** (s - 1) * mp.sech(t) / gamma)

        def _integrate(nodes: int) -> Tuple[Any, Any]:
            state = _curve_value(word, mpf(T_MAX), nodes, kernel)
            poly = state.polynomials()[-1]
            tail = 2 * mp.exp(-T_MAX) / gamma * mp.fsum(
                comb(s - 1, u) * mpf(T_MAX) ** (s - 1 - u) * c * factorial(u + q)
                for u in range(s)
                for q, c in enumerate(poly)
            )
            # the kernel component sits after the word's own prefixes
            return state.values[-1] + tail, tail

        value, tail = _integrate(NODES)
        coarse, _ = _integrate(COARSE_NODES)
        result = BigComplex(value, abs(value - coarse))
        if abs(tail) > mpf(10) ** 6 * tolerance:
            raise NonConvergenceError(
                f"tail of lambda({index}; {s}) beyond t={T_MAX} too large", result
            )
        if result.err > tolerance:
            raise NonConvergenceError(
                f"quadrature of lambda({index}; {s}) failed", result
            )
        return result


def apoly_on_arc(index: Index, theta: Any, policy: PrecisionPolicy) -> BigComplex:
    """A(index; exp(i theta)) along the arc from i."""
    word = to_word(Index(index))
    with mp.workdps(_oracle_dps(policy)):
        path = PathSpec.arc_to_one()
        fine = propagate(PrefixState.start(word, path), path, mpf(theta)).final
        start = PrefixState.start(word, path)
        coarse = propagate(start, path, mpf(theta), COARSE_NODES).final
        return BigComplex(fine, abs(fine - coarse))


def apoly_on_curve(index: Index, t: Any, policy: PrecisionPolicy) -> BigComplex:
    """A(index; tanh(t/2 + pi i/4)) along the lambda curve from i."""
    word = to_word(Index(index))
    with mp.workdps(_oracle_dps(policy)):
        fine = _curve_value(word, mpf(t), NODES).final
        coarse = _curve_value(word, mpf(t), COARSE_NODES).final
        return BigComplex(fine, abs(fine - coarse))


def a_level2(index: Index, t: Any, policy: PrecisionPolicy) -> BigComplex:
    """A(index; i exp(-t)) by the truncated parity-constrained series."""
    index = Index(index)
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if not index:
        return BigComplex.exact(1)
    r = index.depth
    with mp.workdps(_oracle_dps(policy)):
        tolerance = mpf(10) ** -ORACLE_DIGITS / 100
        q = mp.exp(-mpf(t))
        z = mpc(0, 1) * q
        ratio = 2 * q**2 / (1 - q**2)
        partial = [mpf(1)] + [mpf(0)] * (r - 1)
        total = mpc(0)
        M = 0
        while True:
            M += 1
            if M > policy.max_outer_terms:
                raise NonConvergenceError(
                    f"A({index}; i exp(-{t})) needs more than "
                    f"{policy.max_outer_terms} terms",
                    BigComplex(total, abs(ratio)),
                )
            if M >= r and (M - r) % 2 == 0:
                term = 2 * partial[r - 1] * z**M / mpf(M) ** index[-1]
                total += term
                bound = abs(term) * ratio
                if term and bound < tolerance:
                    return BigComplex(total, bound)
            for j in range(r - 1, 0, -1):
                if (M - j) % 2 == 0:
                    partial[j] += 2 * partial[j - 1] / mpf(M) ** index[j - 1]


def expansion_value(
    index: Index, t: Any, policy: PrecisionPolicy, values: TValueTable
) -> BigComplex:
    """The right side of the expansion of A(index; tanh(t/2 + pi i/4)):
    sum of c i^e prod T~(P) t^j / j! A(k'; i exp(-t)).
    """
    with mp.workdps(_oracle_dps(policy)):
        t = mpf(t)
        total = BigComplex.exact(0)
        for c, e, P, j, residual in expand_A(Index(index)):
            factor = to_mp(GaussianRational.i_power(e) * c) * t**j / factorial(j)
            term = a_level2(residual, t, policy).scale(factor)
            for constant in P:
                term = term * values[constant]
            total = total + term
        return total
