"""Module with the registry of verification checks and the suite runner.

Each check turns one statement about lambda and T~ values into cases, and each case
into a pair of sides which are compared either exactly or numerically.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import (
    Any,
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

from mpmath import mp, mpc, mpf
from ordered_set import OrderedSet as ordset  # type: ignore[import]

from ._cache import ValueCache
from ._expansion import (
    CIRCLED_MODES,
    I,
    ONE,
    ONES_TWO_VARIANTS,
    PHI,
    ZERO,
    ExpansionTerm,
    FormalCombination,
    GaussianRational,
    SPolynomial,
    closed_form,
    closed_form_one_two,
    closed_form_ones_two,
    duality_relation,
    expand_A,
    lambda_expansion,
    shuffle_relation_at_one,
    sum_relation,
)
from ._helpers import Helpers, JSONDict, LoggingHandler
from ._index import (
    Index,
    admissible_indices,
    dual_index,
    shuffle_product,
)
from ._numerics import (
    BigComplex,
    PrecisionPolicy,
    TValueTable,
    dirichlet_beta,
    eval_combination,
    ttilde,
)
from ._oracle import (
    ORACLE_DIGITS,
    apoly_at_one,
    apoly_on_arc,
    apoly_on_curve,
    expansion_value,
    lambda_quadrature,
)

log = logging.getLogger("tvk")

STATUSES = ("pass", "fail", "error", "ambiguous")
EXIT_CODES = {"pass": 0, "fail": 1, "usage": 2, "numeric": 3}


class UnknownCheckError(KeyError):
    pass


@dataclass
class CheckReport:
    check_id: str
    description: str
    statement: str
    params: JSONDict
    status: str
    lhs: str = ""
    rhs: str = ""
    abs_err: str = ""
    tol: str = ""
    digits: int = 0
    seconds: float = 0.0
    winner: Optional[str] = None
    message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status in {"pass", "ambiguous"}

    def to_json(self) -> JSONDict:
        return asdict(self)


class Outcome(NamedTuple):
    lhs: str
    rhs: str
    abs_err: Any
    tol: Any
    lhs_err: Any = 0
    rhs_err: Any = 0
    exact: bool = False
    winner: Optional[str] = None
    message: Optional[str] = None

    @classmethod
    def symbolic(
        cls, lhs: Any, rhs: Any, render: Callable[[Any], str] = str
    ) -> "Outcome":
        abs_err = mpf(0) if lhs == rhs else mp.inf
        return cls(render(lhs), render(rhs), abs_err, mpf(0), exact=True)

    @classmethod
    def numeric(
        cls, lhs: BigComplex, rhs: BigComplex, tol: Any, digits: int
    ) -> "Outcome":
        with mp.workdps(digits + 20):
            abs_err = abs(lhs.value - rhs.value)
        return cls(
            lhs.render(digits), rhs.render(digits), abs_err, mpf(tol), lhs.err, rhs.err
        )

    @property
    def passed(self) -> bool:
        if self.exact:
            return not self.abs_err
        bound = self.tol / 10
        within = self.lhs_err < bound and self.rhs_err < bound
        return bool(self.abs_err <= self.tol and within)


@dataclass
class CheckContext:
    """Everything a check needs besides its parameters."""

    policy: PrecisionPolicy = field(default_factory=PrecisionPolicy)
    tolerance: float = 1e-20
    duality_tolerance: float = 1e-18
    oracle_tolerance: float = 1e-10
    quadrature_tolerance: float = 1e-8
    cache_dir: Optional[str] = None
    values: TValueTable = field(init=False, repr=False)

    def __post_init__(self) -> None:
        cache = ValueCache(self.cache_dir) if self.cache_dir else None
        self.values = TValueTable(self.policy, cache)

    @classmethod
    def from_config(cls, config: JSONDict) -> "CheckContext":
        return cls(
            policy=PrecisionPolicy.from_config(config),
            tolerance=float(config["tolerance"]),
            duality_tolerance=float(config["duality_tolerance"]),
            oracle_tolerance=float(config["oracle_tolerance"]),
            quadrature_tolerance=float(config["quadrature_tolerance"]),
            cache_dir=config.get("cache_dir"),
        )

    @property
    def settings(self) -> JSONDict:
        """Picklable description, enough to rebuild the context in a worker."""
        return {
            "digits": self.policy.target_digits,
            "max_outer_terms": self.policy.max_outer_terms,
            "acceleration_order": self.policy.acceleration_order,
            "tolerance": self.tolerance,
            "duality_tolerance": self.duality_tolerance,
            "oracle_tolerance": self.oracle_tolerance,
            "quadrature_tolerance": self.quadrature_tolerance,
            "cache_dir": self.cache_dir,
        }

    @property
    def digits(self) -> int:
        return self.policy.target_digits

    def evaluate(
        self, combination: FormalCombination, s: Optional[int] = None
    ) -> BigComplex:
        return eval_combination(combination, s, self.policy, self.values)

    def cached(
        self, kind: str, index: Index, compute: Callable[[], BigComplex], digits: int,
        s: Optional[int] = None, method: str = "series",
    ) -> BigComplex:
        """Read a value from the cache, computing and storing it on a miss."""
        cache = self.values.cache
        if cache is not None:
            record = cache.get(kind, index, s, digits)
            if record is not None:
                with mp.workdps(digits + 10):
                    return BigComplex(mpc(record.re, record.im), mpf(record.err))
        value = compute()
        if cache is not None:
            cache.put_value(kind, index, value, digits, method, s)
        return value

    def compare(
        self,
        lhs: FormalCombination,
        rhs: FormalCombination,
        tol: Any,
        s: Optional[int] = None,
    ) -> Outcome:
        lhs_value, rhs_value = self.evaluate(lhs, s), self.evaluate(rhs, s)
        return Outcome.numeric(lhs_value, rhs_value, tol, self.digits)


Cases = Callable[[int], List[JSONDict]]
Runner = Callable[[JSONDict, CheckContext], Outcome]


class Check(NamedTuple):
    check_id: str
    description: str
    statement: str
    tags: Tuple[str, ...]
    cases: Cases
    run: Runner


CHECKS: Dict[str, Check] = {}


def register(
    check_id: str, description: str, statement: str, tags: Sequence[str], cases: Cases
) -> Callable[[Runner], Runner]:
    def decorator(run: Runner) -> Runner:
        CHECKS[check_id] = Check(
            check_id, description, statement, tuple(tags), cases, run
        )
        return run

    return decorator


def get_check(check_id: str) -> Check:
    try:
        return CHECKS[check_id]
    except KeyError:
        raise UnknownCheckError(check_id) from None


def available_tags() -> List[str]:
    return list(ordset(tag for check in CHECKS.values() for tag in check.tags))


def _index(params: JSONDict, key: str = "index") -> Index:
    return Index(params[key])


def _fraction(text: str) -> Any:
    value = Helpers.parse_fraction(text)
    return mpf(value.numerator) / value.denominator


def _constant(value: Any) -> BigComplex:
    return BigComplex(+value, mpf(0))


S = SPolynomial((ZERO, ONE))


def _slot(
    residual: Tuple[int, ...],
    shift: int,
    *constants: Tuple[int, ...],
    coeff: Any,
    poly: Optional[SPolynomial] = None,
) -> FormalCombination:
    return FormalCombination.slotted(
        Index(residual), shift, *map(Index, constants), coeff=coeff, poly=poly
    )


def _tv(*indices: Tuple[int, ...], coeff: Any = 1) -> FormalCombination:
    return FormalCombination.tvalue(*map(Index, indices), coeff=coeff)


PRINTED_LAMBDAS = {
    (2,): _slot((1,), 1, coeff=I, poly=S)
    + _slot((2,), 0, coeff=I)
    + _slot((), 0, (2,), coeff=-I),
    (2, 1): _slot((2,), 1, coeff=-I, poly=S)
    + _slot((3,), 0, coeff=-2 * I)
    + _slot((), 1, (2,), coeff=-I, poly=S)
    + _slot((), 0, (3,), coeff=2 * I),
}
PRINTED_EXPANSION_OF_TWO = (
    ExpansionTerm(Fraction(1), 0, (), 1, Index((1,))),
    ExpansionTerm(Fraction(1), 0, (), 0, Index((2,))),
    ExpansionTerm(Fraction(-1), 1, (Index((2,)),), 0, PHI),
)


def _render_terms(terms: Iterable[ExpansionTerm]) -> str:
    return ", ".join(map(str, sorted(terms, key=str)))


@register(
    "expansion-golden",
    "The expansion engine reproduces the worked examples term for term",
    "A(2;(1+z)/(1-z)) = A(1;(1+z)/(1-z))A(1;z) + A(2;z) - iT̃(2); "
    "λ(2;s) = isT̃(1,s+1) + iT̃(2,s) - iT̃(2)T̃(s); "
    "λ(2,1;s) = -isT̃(2,s+1) - 2iT̃(3,s) - isT̃(2)T̃(s+1) + 2iT̃(3)T̃(s)",
    ["symbolic"],
    lambda _: [
        {"target": "expand_A", "index": [2]},
        {"target": "lambda", "index": [2]},
        {"target": "lambda", "index": [2, 1]},
    ],
)
def _expansion_golden(params: JSONDict, ctx: CheckContext) -> Outcome:
    index = _index(params)
    if params["target"] == "expand_A":
        return Outcome.symbolic(
            set(expand_A(index)), set(PRINTED_EXPANSION_OF_TWO), render=_render_terms
        )
    return Outcome.symbolic(lambda_expansion(index), PRINTED_LAMBDAS[tuple(index)])


@register(
    "ones-lemma",
    "A({1}_r) at (1+z)/(1-z) is a single power of A(1)",
    "A({1}_r; (1+z)/(1-z)) = A(1; (1+z)/(1-z))^r / r!",
    ["symbolic", "property"],
    lambda w: [{"r": r} for r in range(1, min(6, max(w, 1)) + 1)],
)
def _ones_lemma(params: JSONDict, ctx: CheckContext) -> Outcome:
    r = params["r"]
    expected = {ExpansionTerm(Fraction(1), 0, (), r, PHI)}
    actual = set(expand_A(Index((1,) * r)))
    return Outcome.symbolic(actual, expected, render=_render_terms)


SHUFFLE_EXAMPLES = {
    "T2squared": (_tv((2,), (2,)), _tv((1, 3), coeff=4) + _tv((2, 2), coeff=2)),
    "T2T3": (_tv((2,), (3,)), _tv((1, 4), coeff=6) + _tv((2, 3), coeff=3) + _tv((3, 2))),
}

SHUFFLE_WEIGHTS = {"T2squared": 4, "T2T3": 5}

@register(
    "shuffle-examples",
    "The two worked products of T~ values",
    "T̃(2)² = 4T̃(1,3) + 2T̃(2,2); T̃(2)T̃(3) = 6T̃(1,4) + 3T̃(2,3) + T̃(3,2)",
    ["numeric"],
    lambda w: [{"case": case} for case, weight in SHUFFLE_WEIGHTS.items() if weight <= w],
)
def _shuffle_examples(params: JSONDict, ctx: CheckContext) -> Outcome:
    lhs, rhs = SHUFFLE_EXAMPLES[params["case"]]
    return ctx.compare(lhs, rhs, ctx.tolerance)


def _shuffle_pairs(weight_max: int) -> List[JSONDict]:
    indices = list(admissible_indices(weight_max - 2))
    return [
        {"u": list(u), "v": list(v)}
        for n, u in enumerate(indices)
        for v in indices[n:]
        if u.weight + v.weight <= weight_max
    ]


@register(
    "shuffle-homomorphism",
    "The shuffle product of words is respected by the values at 1",
    "A(u;1)A(v;1) = Σ_{w ∈ u ш v} A(w;1), A(k;1) = i^{dep-wt}T̃(k†)",
    ["numeric", "property"],
    _shuffle_pairs,
)
def _shuffle_homomorphism(params: JSONDict, ctx: CheckContext) -> Outcome:
    relation = shuffle_relation_at_one(_index(params, "u"), _index(params, "v"))
    return ctx.compare(relation.lhs, relation.rhs, ctx.tolerance)


def _route_cases(weight_max: int) -> List[JSONDict]:
    cases: List[JSONDict] = [{"kind": "depth_one", "index": [1], "s": 4}]
    for r, j in ((2, 1), (3, 1), (3, 2)):
        if r + 1 <= weight_max:
            cases.extend({"kind": "one_two", "r": r, "j": j, "s": s} for s in (2, 3))
    for r in (1, 2, 3):
        if r + 1 <= weight_max:
            cases.extend({"kind": "ones_two", "r": r, "s": s} for s in (2, 3))
    return cases


@register(
    "route-agreement",
    "The recursive expansion agrees with the closed forms",
    "λ({1}_{j-1},2,{1}_{r-j};s) and λ({1}_{r-1},2;s) in closed form; "
    "λ(1;s) = sT̃(s+1)",
    ["numeric"],
    _route_cases,
)
def _route_agreement(params: JSONDict, ctx: CheckContext) -> Outcome:
    s, kind = params["s"], params["kind"]
    if kind == "depth_one":
        index = _index(params)
        closed = closed_form(index)
    elif kind == "one_two":
        r, j = params["r"], params["j"]
        closed = closed_form_one_two(r, j)
        index = Index((1,) * (j - 1) + (2,) + (1,) * (r - j))
    else:
        r = params["r"]
        closed = closed_form_ones_two(r, "corrected")
        index = Index((2,)).ones_prefix(r - 1)
    return ctx.compare(lambda_expansion(index), closed, ctx.tolerance, s)


@register(
    "sum-relations",
    "Weighted sums of lambda values over fixed weight and depth",
    "Σ_{wt=k+r-1, dep=r} λ(k;s) = "
    "Σ_j (-1)^j binom(s+r-j-2,r-j-1) λ({1}_j,k;s+r-j-1), and its inverse",
    ["numeric"],
    lambda w: [
        {"kind": kind, "r": r, "k": k, "s": s}
        for kind in ("me1", "me2")
        for r in (1, 2, 3)
        for k in (1, 2, 3)
        for s in (2, 3)
        if k + r - 1 <= w
    ],
)
def _sum_relations(params: JSONDict, ctx: CheckContext) -> Outcome:
    relation = sum_relation(params["kind"], params["r"], params["k"])
    return ctx.compare(relation.lhs, relation.rhs, ctx.tolerance, params["s"])


DUALITY_GRID = [(2,), (3,), (2, 2), (3, 2), (2, 3)]


@register(
    "duality-theorem",
    "The duality formula relating lambda at p+1 and q+1",
    "λ({1}_{q-1},(k)₋;p+1) - (-1)^{wt}λ({1}_{p-1},(←k_r)₋;q+1) = "
    "i^{dep-wt+1}(Σ T̃(·†)T̃(·†) + Σ ...)",
    ["numeric"],
    lambda w: [
        {"index": list(index), "p": p, "q": q}
        for index in DUALITY_GRID
        for p in (1, 2, 3)
        for q in (1, 2, 3)
        if sum(index) <= w
    ],
)
def _duality_theorem(params: JSONDict, ctx: CheckContext) -> Outcome:
    relation = duality_relation(_index(params), params["p"], params["q"])
    return ctx.compare(relation.lhs, relation.rhs, ctx.duality_tolerance)


DUALITY_EXAMPLE = _tv((3, 3), coeff=2 * I) + _tv((4, 2), coeff=3 * I)


@register(
    "duality-example",
    "The worked duality example for k = (2,2), p = 1, q = 2",
    "λ(1,2,1;2) - λ(2,1;3) = -i(2T̃(3)² - 3T̃(2)T̃(4)) = 2iT̃(3,3) + 3iT̃(4,2)",
    ["numeric"],
    lambda _: [{"index": [2, 2], "p": 1, "q": 2}],
)
def _duality_example(params: JSONDict, ctx: CheckContext) -> Outcome:
    relation = duality_relation(_index(params), params["p"], params["q"])
    expected = ctx.evaluate(DUALITY_EXAMPLE)
    lhs, rhs = ctx.evaluate(relation.lhs), ctx.evaluate(relation.rhs)
    left = Outcome.numeric(lhs, expected, ctx.tolerance, ctx.digits)
    right = Outcome.numeric(rhs, expected, ctx.tolerance, ctx.digits)
    return Outcome(
        lhs=left.lhs,
        rhs=right.lhs,
        abs_err=max(left.abs_err, right.abs_err),
        tol=left.tol,
        lhs_err=lhs.err,
        rhs_err=max(rhs.err, expected.err),
        message=f"-i(2T̃(3)² - 3T̃(2)T̃(4)) = {expected.render(ctx.digits)}",
    )


@register(
    "oracle-duality",
    "Values at 1 from path propagation agree with series of the dual index",
    "A(k;1) = i^{dep-wt}T̃(k†)",
    ["oracle"],
    lambda w: [{"index": list(index)} for index in admissible_indices(w)],
)
def _oracle_duality(params: JSONDict, ctx: CheckContext) -> Outcome:
    index = _index(params)
    lhs = ctx.cached(
        "apoly1",
        index,
        lambda: apoly_at_one(index, ctx.policy, ctx.oracle_tolerance / 10),
        min(ctx.digits, ORACLE_DIGITS),
        method="arc",
    )
    coeff = GaussianRational.i_power(index.depth - index.weight)
    rhs = ctx.evaluate(_tv(dual_index(index), coeff=coeff))
    return Outcome.numeric(lhs, rhs, ctx.oracle_tolerance, ctx.digits)


@register(
    "lambda-quadrature",
    "The defining integral of lambda agrees with its expansion",
    "λ(k;s) = 1/Γ(s) ∫₀^∞ t^{s-1} A(k;tanh(t/2+πi/4))/cosh t dt",
    ["oracle"],
    lambda w: [
        {"index": list(entries), "s": s}
        for weight in range(1, min(w, 3) + 1)
        for entries in Helpers.all_compositions(weight)
        for s in (2, 3)
    ],
)
def _lambda_quadrature(params: JSONDict, ctx: CheckContext) -> Outcome:
    index, s = _index(params), params["s"]
    tolerance = ctx.quadrature_tolerance / 10
    lhs = ctx.cached(
        "lambda",
        index,
        lambda: lambda_quadrature(index, s, ctx.policy, tolerance),
        min(ctx.digits, ORACLE_DIGITS),
        s=s,
        method="quadrature",
    )
    rhs = ctx.evaluate(lambda_expansion(index), s)
    return Outcome.numeric(lhs, rhs, ctx.quadrature_tolerance, ctx.digits)


CIRCLED_CASES = [((2, 2), 1, 2), ((3, 2), 1, 1), ((2, 3), 2, 1)]
#: Smallest weight at which each object has a point that separates its variants.
VARIANT_WEIGHTS = {"circled-product": 4, "binomial": 3}

Sides = Tuple[FormalCombination, FormalCombination, Optional[int]]


def _variant_points(obj: str, weight_max: int) -> Iterator[Tuple[str, Dict[str, Sides]]]:
    if obj == "circled-product":
        for k, p, q in CIRCLED_CASES:
            if sum(k) <= weight_max:
                relations = {
                    mode: duality_relation(Index(k), p, q, circled=mode)
                    for mode in CIRCLED_MODES
                }
                label = f"k=({Index(k)}), p={p}, q={q}"
                yield label, {m: (r.lhs, r.rhs, None) for m, r in relations.items()}
        return
    for r in (1, 2, 3):
        if r + 1 > weight_max:
            continue
        expansion = lambda_expansion(Index((2,)).ones_prefix(r - 1))
        for s in (2, 3):
            yield f"r={r}, s={s}", {
                v: (expansion, closed_form_ones_two(r, v), s) for v in ONES_TWO_VARIANTS
            }


def _fixed(combination: FormalCombination, s: Optional[int]) -> FormalCombination:
    return combination.substitute(s) if s and combination.has_s else combination


def _coincide(sides: Dict[str, Sides]) -> bool:
    """Whether every variant reduces to the same identity at this point."""
    fixed = [(_fixed(lhs, s), _fixed(rhs, s)) for lhs, rhs, s in sides.values()]
    return all(pair == fixed[0] for pair in fixed[1:])


def _adjudicate(votes: List[Tuple[str, Dict[str, Outcome]]]) -> Outcome:
    """Name the variant that holds at every separating point, provided no other
    variant holds at any of them.
    """
    if not votes:
        return Outcome("", "", mp.inf, mpf(0), message="no point separates the variants")
    survivors = {
        label: tuple(name for name, o in outcomes.items() if o.passed)
        for label, outcomes in votes
    }
    found = "; ".join(
        f"{label}: {','.join(names) or 'none'}" for label, names in survivors.items()
    )
    distinct = set(survivors.values())
    if len(distinct) == 1 and len(next(iter(distinct))) == 1:
        (winner,) = distinct.pop()
        worst = max((o[winner] for _, o in votes), key=lambda o: o.abs_err)
        return worst._replace(winner=winner, message=found)
    every = (o for _, outcomes in votes for o in outcomes.values())
    closest = min(every, key=lambda o: o.abs_err)
    return closest._replace(abs_err=mp.inf, message=f"no consistent variant: {found}")


@register(
    "variant-adjudication",
    "Selects the reading of the correction product and of the closed-form binomial",
    "A(X)A(1) - A(X,1) is the b-insertion product; "
    "λ({1}_{r-1},2;s) uses binom(s+r-l-2, r-l-1)",
    ["numeric", "variant"],
    lambda w: [
        {"object": obj, "weight_max": w}
        for obj, weight in VARIANT_WEIGHTS.items()
        if weight <= w
    ],
)
def _variant_adjudication(params: JSONDict, ctx: CheckContext) -> Outcome:
    obj = params["object"]
    tol = ctx.duality_tolerance if obj == "circled-product" else ctx.tolerance
    votes = []
    for label, sides in _variant_points(obj, params["weight_max"]):
        if _coincide(sides):
            log.debug("%s at %s: the variants coincide", obj, label)
            continue
        outcomes = {
            name: ctx.compare(lhs, rhs, tol, s) for name, (lhs, rhs, s) in sides.items()
        }
        votes.append((label, outcomes))
    return _adjudicate(votes)


KNOWN_EVALUATIONS = {
    2: _tv((2, 2), coeff=-I) + _tv((1, 3), coeff=-2 * I),
    3: _tv((1, 4), coeff=-3 * I) + _tv((2, 3), coeff=-2 * I) + _tv((3, 2), coeff=-I),
}


@register(
    "known-evaluations",
    "Independently known evaluations of λ(2;s)",
    "λ(2;2) = -iT̃(2,2) - 2iT̃(1,3); λ(2;3) = -i(3T̃(1,4) + 2T̃(2,3) + T̃(3,2))",
    ["numeric"],
    lambda w: [{"s": s} for s in KNOWN_EVALUATIONS if s + 2 <= w],
)
def _known_evaluations(params: JSONDict, ctx: CheckContext) -> Outcome:
    s = params["s"]
    expansion = lambda_expansion(Index((2,)))
    return ctx.compare(expansion, KNOWN_EVALUATIONS[s], ctx.tolerance, s)


def _constants() -> Dict[int, Any]:
    return {1: mp.pi / 2, 2: 2 * mp.catalan, 3: mp.pi**3 / 16}


@register(
    "constants",
    "Depth-one T~ values with closed forms",
    "T̃(1) = π/2; T̃(2) = 2G; T̃(3) = π³/16",
    ["numeric"],
    lambda _: [{"index": [k]} for k in (1, 2, 3)],
)
def _constants_check(params: JSONDict, ctx: CheckContext) -> Outcome:
    index = _index(params)
    lhs = ttilde(index, ctx.policy)
    with mp.workdps(ctx.policy.working_dps(index.weight)):
        rhs = _constant(_constants()[index[0]])
        return Outcome.numeric(lhs, rhs, 10 * ctx.policy.tolerance, ctx.digits)


@register(
    "depth-one",
    "The nested series agrees with the Dirichlet beta function",
    "T̃(k) = 2β(k)",
    ["numeric"],
    lambda _: [{"k": k} for k in range(1, 13)],
)
def _depth_one(params: JSONDict, ctx: CheckContext) -> Outcome:
    k = params["k"]
    lhs = ttilde(Index((k,)), ctx.policy)
    rhs = dirichlet_beta(k, ctx.policy).scale(2)
    return Outcome.numeric(lhs, rhs, 10 * ctx.policy.tolerance, ctx.digits)


@register(
    "expansion-oracle",
    "The expansion holds along the lambda curve, not only under the integral",
    "A(k;tanh(t/2+πi/4)) = Σ c i^e ∏T̃(P) t^j/j! A(k';ie^{-t})",
    ["oracle"],
    lambda w: [
        {"index": list(entries), "t": t}
        for weight in range(1, min(w, 4) + 1)
        for entries in Helpers.all_compositions(weight)
        for t in ("1/2", "1", "2")
    ],
)
def _expansion_oracle(params: JSONDict, ctx: CheckContext) -> Outcome:
    index, t = _index(params), _fraction(params["t"])
    lhs = apoly_on_curve(index, t, ctx.policy)
    rhs = expansion_value(index, t, ctx.policy, ctx.values)
    return Outcome.numeric(lhs, rhs, ctx.oracle_tolerance, ctx.digits)


@register(
    "path-independence",
    "The arc and the lambda curve parametrisations reach the same values",
    "A(2;z) along z = e^{iθ} equals A(2;z) along z = tanh(t/2+πi/4) "
    "with tan(θ/2) = e^{-t}",
    ["oracle"],
    lambda _: [{"index": [2], "t": t} for t in ("1/2", "1", "2")],
)
def _path_independence(params: JSONDict, ctx: CheckContext) -> Outcome:
    index, t = _index(params), _fraction(params["t"])
    with mp.workdps(ctx.digits + 10):
        theta = 2 * mp.atan(mp.exp(-t))
    lhs = apoly_on_arc(index, theta, ctx.policy)
    rhs = apoly_on_curve(index, t, ctx.policy)
    return Outcome.numeric(lhs, rhs, ctx.oracle_tolerance, ctx.digits)


@register(
    "duality-involution",
    "Duality is a weight-preserving involution on admissible indices",
    "(k†)† = k, wt(k†) = wt(k), dep(k) + dep(k†) = wt(k)",
    ["symbolic", "property"],
    lambda _: [{"weight_max": 10}],
)
def _duality_involution(params: JSONDict, ctx: CheckContext) -> Outcome:
    broken = [
        str(index)
        for index in admissible_indices(params["weight_max"])
        if dual_index(dual_index(index)) != index
        or dual_index(index).weight != index.weight
        or dual_index(index).depth + index.depth != index.weight
    ]
    return Outcome.symbolic(broken, [], render=lambda found: "; ".join(found) or "none")


@register(
    "shuffle-mass",
    "Shuffles of words of lengths m and n have binom(m+n, m) terms",
    "Σ coefficients of u ш v = binom(wt u + wt v, wt u)",
    ["symbolic", "property"],
    lambda _: [{"weight_max": 6}],
)
def _shuffle_mass(params: JSONDict, ctx: CheckContext) -> Outcome:
    weight_max = params["weight_max"]
    indices = [
        Index(e) for w in range(1, weight_max) for e in Helpers.all_compositions(w)
    ]
    broken = [
        f"({u})ш({v})"
        for u in indices
        for v in indices
        if u.weight + v.weight <= weight_max
        and shuffle_product(u, v).mass != comb(u.weight + v.weight, u.weight)
    ]
    return Outcome.symbolic(broken, [], render=lambda found: "; ".join(found) or "none")


@register(
    "ipower-invariant",
    "Every expansion term carries the i-power and the weight of its index",
    "e + dep(k') ≡ wt(k) - dep(k) (mod 4), wt(P) + j + wt(k') = wt(k)",
    ["symbolic", "property"],
    lambda _: [{"weight_max": 8}],
)
def _ipower_invariant(params: JSONDict, ctx: CheckContext) -> Outcome:
    broken = []
    for weight in range(1, params["weight_max"] + 1):
        for entries in Helpers.all_compositions(weight):
            index = Index(entries)
            for term in expand_A(index):
                phase = term.e + term.residual.depth - weight + index.depth
                if phase % 4 or term.weight != weight:
                    broken.append(f"{index}: {term}")
    return Outcome.symbolic(broken, [], render=lambda found: "; ".join(found) or "none")


class Verifier(LoggingHandler):
    """Runs registered checks, turning every failure into a report."""

    def __init__(self, context: CheckContext) -> None:
        self.context = context

    def run_check(self, check_id: str, params: JSONDict) -> CheckReport:
        check = get_check(check_id)
        report = CheckReport(
            check.check_id, check.description, check.statement, params, "error",
            digits=self.context.digits,
        )
        start = time.perf_counter()
        try:
            outcome = check.run(params, self.context)
        except (ArithmeticError, ValueError) as exc:
            self._info("Check %s %s failed numerically: %s", check_id, params, exc)
            report.message = str(exc)
        except Exception as exc:  # pylint: disable=broad-except
            self._exc("Unexpected error in check %s with %s", check_id, params)
            report.message = f"{type(exc).__name__}: {exc}"
        else:
            report.lhs, report.rhs = outcome.lhs, outcome.rhs
            report.abs_err = mp.nstr(outcome.abs_err, 3)
            report.tol = mp.nstr(outcome.tol, 3)
            report.winner = outcome.winner
            report.message = outcome.message
            if outcome.winner:
                report.status = "ambiguous"
            else:
                report.status = "pass" if outcome.passed else "fail"
        report.seconds = round(time.perf_counter() - start, 3)
        self._info("%s %s: %s", check_id, params, report.status)
        return report

    def plan(
        self,
        check_ids: Optional[Iterable[str]] = None,
        tags: Optional[Iterable[str]] = None,
        weight_max: int = 5,
    ) -> List[Tuple[str, JSONDict]]:
        """Cases to run, ordered by check id and then by case order."""
        selected = ordset(check_ids or sorted(CHECKS))
        wanted = set(tags or ())
        cases = []
        for check_id in selected:
            check = get_check(check_id)
            if wanted and not wanted.intersection(check.tags):
                continue
            cases.extend((check_id, params) for params in check.cases(weight_max))
        return cases

    def run_suite(
        self,
        check_ids: Optional[Iterable[str]] = None,
        tags: Optional[Iterable[str]] = None,
        weight_max: int = 5,
        jobs: int = 1,
    ) -> Tuple[List[CheckReport], JSONDict]:
        cases = self.plan(check_ids, tags, weight_max)
        if jobs > 1 and len(cases) > 1:
            settings = self.context.settings
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                jobs_args = [(settings, c, p) for c, p in cases]
                reports = list(executor.map(_run_case, jobs_args))
        else:
            reports = [self.run_check(check_id, params) for check_id, params in cases]
        return reports, summarize(reports)


def _run_case(args: Tuple[JSONDict, str, JSONDict]) -> CheckReport:
    settings, check_id, params = args
    return Verifier(CheckContext.from_config(settings)).run_check(check_id, params)


def summarize(reports: List[CheckReport]) -> JSONDict:
    counts = {status: sum(r.status == status for r in reports) for status in STATUSES}
    return {"total": len(reports), **counts, "exit_code": exit_code(reports)}


def exit_code(reports: Iterable[CheckReport]) -> int:
    statuses = {report.status for report in reports}
    if "fail" in statuses:
        return EXIT_CODES["fail"]
    if "error" in statuses:
        return EXIT_CODES["numeric"]
    return EXIT_CODES["pass"]


def run_check(
    check_id: str, params: JSONDict, context: Optional[CheckContext] = None
) -> CheckReport:
    return Verifier(context or CheckContext()).run_check(check_id, params)


def run_suite(
    context: Optional[CheckContext] = None, **kwargs: Any
) -> Tuple[List[CheckReport], JSONDict]:
    return Verifier(context or CheckContext()).run_suite(**kwargs)
