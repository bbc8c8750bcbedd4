from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_permutations

from processing.coeffield import RatFunc, Q, monomial as mono, one, zero
from processing.symfunc import SymSeries

Exponent = Tuple[int, ...]


def monomial_order(e: Exponent):
    """Deterministic comparison order: total degree, then reverse-lexicographic exponents."""
    return sum(e), tuple(-x for x in e)


@dataclass
class PowerSeries:
    """
    Truncated power series in nvars commuting variables with RatFunc coefficients.
    Terms of total degree above degree_bound are dropped by every operation.
    """
    nvars: int
    degree_bound: int
    terms: Dict[Exponent, RatFunc] = field(default_factory=dict)  # exponent vector -> coefficient

    def __post_init__(self):
        self.terms = {e: c for e, c in self.terms.items() if sum(e) <= self.degree_bound and not c.is_zero()}

    @classmethod
    def constant(cls, c, nvars: int, degree_bound: int) -> "PowerSeries":
        return cls(nvars, degree_bound, {(0,) * nvars: RatFunc.coerce(c)})

    @classmethod
    def monomial(cls, exps: Sequence[int], nvars: int, degree_bound: int, coeff=1) -> "PowerSeries":
        return cls(nvars, degree_bound, {tuple(exps): RatFunc.coerce(coeff)})

    def _check(self, other: "PowerSeries"):
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} != {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries.constant(other, self.nvars, self.degree_bound)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return PowerSeries(self.nvars, min(self.degree_bound, other.degree_bound), out)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(self.nvars, self.degree_bound, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PowerSeries":
        c = RatFunc.coerce(c)
        if c.is_zero():
            return PowerSeries(self.nvars, self.degree_bound)
        return PowerSeries(self.nvars, self.degree_bound, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return self.scale(other)
        self._check(other)
        bound = min(self.degree_bound, other.degree_bound)
        out: Dict[Exponent, RatFunc] = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > bound:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                term = c1 * c2
                out[e] = out[e] + term if e in out else term
        return PowerSeries(self.nvars, bound, out)

    __rmul__ = __mul__

    def truncate(self, degree: int) -> "PowerSeries":
        return PowerSeries(self.nvars, min(degree, self.degree_bound), dict(self.terms))

    def coefficient(self, exps: Sequence[int]) -> RatFunc:
        return self.terms.get(tuple(exps), zero())

    def map_terms(self, fn: Callable[[Exponent, RatFunc], Tuple[Exponent, RatFunc]]) -> "PowerSeries":
        """Apply fn to every (exponent, coefficient) pair; colliding images add up."""
        out: Dict[Exponent, RatFunc] = {}
        for e, c in self.terms.items():
            e2, c2 = fn(e, c)
            out[e2] = out[e2] + c2 if e2 in out else c2
        return PowerSeries(self.nvars, self.degree_bound, out)

    def substitute(self, mapping: Dict[str, object]) -> "PowerSeries":
        return PowerSeries(self.nvars, self.degree_bound, {e: c.normalize().substitute(mapping) for e, c in self.terms.items()})

    def first_difference(self, other: "PowerSeries") -> Optional[Tuple[Exponent, RatFunc]]:
        """First monomial (in monomial_order) where the two series disagree, with the difference."""
        self._check(other)
        bound = min(self.degree_bound, other.degree_bound)
        for e in sorted(set(self.terms) | set(other.terms), key=monomial_order):
            if sum(e) > bound:
                continue
            diff = (self.coefficient(e) - other.coefficient(e)).normalize()
            if not diff.is_zero():
                return e, diff
        return None

    def is_zero(self) -> bool:
        return all(c.normalize().is_zero() for c in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.first_difference(other) is None


def product(factors: Iterable[PowerSeries], nvars: int, degree_bound: int) -> PowerSeries:
    out = PowerSeries.constant(1, nvars, degree_bound)
    for f in factors:
        out = out * f
    return out


def from_symmetric(f: SymSeries, nvars: int, offset: int, block: int, degree_bound: int) -> PowerSeries:
    """Expand f(x_{offset+1}, ..., x_{offset+block}) into monomials of an nvars-variable series."""
    if block == 0:
        return PowerSeries.constant(f.coefficient(()), nvars, degree_bound)
    out: Dict[Exponent, RatFunc] = {}
    for nu, c in f.coeffs.items():
        if nu.length > block or nu.weight > degree_bound:
            continue
        for perm in multiset_permutations(list(nu.padded(block))):
            e = (0,) * offset + tuple(perm) + (0,) * (nvars - offset - block)
            out[e] = out[e] + c if e in out else c
    return PowerSeries(nvars, degree_bound, out)


def unit_exponent(i: int, nvars: int) -> Exponent:
    return tuple(int(j == i) for j in range(nvars))


def add_exponents(*exps: Exponent) -> Exponent:
    return tuple(sum(col) for col in zip(*exps))


def infinite_ratio(alpha, beta, exps: Exponent, nvars: int, degree_bound: int, base: Optional[RatFunc] = None) -> PowerSeries:
    """
    (alpha z; base)_inf / (beta z; base)_inf with z = x^exps, by the q-binomial theorem:
        sum_k prod_{i<k} (beta - alpha base^i) / (base; base)_k z^k.
    """
    alpha, beta = RatFunc.coerce(alpha), RatFunc.coerce(beta)
    base = Q if base is None else base
    step = sum(exps)
    if step == 0:
        raise ValueError("the expansion variable must have positive degree")
    terms: Dict[Exponent, RatFunc] = {}
    coeff = one()
    base_k = one()
    k = 0
    while k * step <= degree_bound:
        terms[tuple(k * e for e in exps)] = coeff.normalize()
        coeff = coeff * (beta - alpha * base_k) / (1 - base_k * base)
        base_k = base_k * base
        k += 1
    return PowerSeries(nvars, degree_bound, terms)


def linear_factor(c, exps: Exponent, nvars: int, degree_bound: int) -> PowerSeries:
    """1 - c x^exps."""
    out = PowerSeries.constant(1, nvars, degree_bound)
    return out - PowerSeries.monomial(exps, nvars, degree_bound, c)


def inverse_linear_factor(c, exps: Exponent, nvars: int, degree_bound: int) -> PowerSeries:
    """1 / (1 - c x^exps) as a geometric series."""
    c = RatFunc.coerce(c)
    step = sum(exps)
    terms = {}
    power = one()
    k = 0
    while k * step <= degree_bound:
        terms[tuple(k * e for e in exps)] = power
        power = power * c
        k += 1
    return PowerSeries(nvars, degree_bound, terms)


def poch_partition_series(b, lam, exps: Exponent, nvars: int, degree_bound: int, inverse: bool = False) -> PowerSeries:
    """
    (b z)_lambda = prod_i prod_{k<lambda_i} (1 - b q^k t^{1-i} z) with z = x^exps, or its reciprocal.
    Only integer partitions (nonnegative parts) are accepted here.
    """
    b = RatFunc.coerce(b)
    out = PowerSeries.constant(1, nvars, degree_bound)
    for i, part in enumerate(lam):
        for k in range(part):
            c = b * mono(q=k, t=-i)
            f = inverse_linear_factor(c, exps, nvars, degree_bound) if inverse else linear_factor(c, exps, nvars, degree_bound)
            out = out * f
    return out
