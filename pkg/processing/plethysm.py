from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

from processing.coeffield import RatFunc, T, monomial, one, zero
from processing.partitions import as_partition
from processing.symfunc import SymSeries


@dataclass(frozen=True)
class Letters:
    """A finite alphabet x_1 + ... + x_k: p_r -> sum x_i^r."""
    letters: Tuple[RatFunc, ...]

    def power_sum(self, r: int) -> RatFunc:
        total = zero()
        for x in self.letters:
            total = total + x ** r
        return total

    def scaled(self, c: RatFunc) -> "Letters":
        return Letters(tuple(c * x for x in self.letters))


@dataclass(frozen=True)
class Binomial:
    """The element (u - v)/(1 - t): p_r -> (u^r - v^r)/(1 - t^r)."""
    u: RatFunc
    v: RatFunc

    def power_sum(self, r: int) -> RatFunc:
        return (self.u ** r - self.v ** r) / (1 - T ** r)

    def scaled(self, c: RatFunc) -> "Binomial":
        return Binomial(c * self.u, c * self.v)


Term = Union[Letters, Binomial]


@dataclass(frozen=True)
class AlphabetExpr:
    """
    Formal sum of alphabets. Power sums are additive over the terms, which is what
    f[X + Y] means for plethystic evaluation.
    """
    terms: Tuple[Term, ...] = ()

    def __add__(self, other: "AlphabetExpr") -> "AlphabetExpr":
        return AlphabetExpr(self.terms + other.terms)

    def scaled(self, c) -> "AlphabetExpr":
        """c A: p_r picks up c^r."""
        c = RatFunc.coerce(c)
        return AlphabetExpr(tuple(term.scaled(c) for term in self.terms))

    def power_sum(self, r: int) -> RatFunc:
        total = zero()
        for term in self.terms:
            total = total + term.power_sum(r)
        return total


def letters(*xs) -> AlphabetExpr:
    return AlphabetExpr((Letters(tuple(RatFunc.coerce(x) for x in xs)),))


def binomial_alphabet(u, v) -> AlphabetExpr:
    """(u - v)/(1 - t), e.g. binomial_alphabet(1, a) for (1-a)/(1-t)."""
    return AlphabetExpr((Binomial(RatFunc.coerce(u), RatFunc.coerce(v)),))


def empty_alphabet() -> AlphabetExpr:
    return AlphabetExpr()


def principal_letters(mu, n: int, scale=None) -> AlphabetExpr:
    """scale <mu>_n = scale (q^{mu_1} t^{n-1} + ... + q^{mu_n})."""
    mu = as_partition(mu)
    scale = one() if scale is None else RatFunc.coerce(scale)
    return letters(*(scale * monomial(q=m, t=n - i - 1) for i, m in enumerate(mu.padded(n))))


def mixed_alphabet(scale, mu, n: int, tail: Optional[AlphabetExpr] = None) -> AlphabetExpr:
    """scale <mu>_n + tail, e.g. a<mu> + (1-a)/(1-t)."""
    out = principal_letters(mu, n, scale)
    return out + tail if tail is not None else out


def pleth_eval(f: SymSeries, alphabet: AlphabetExpr) -> RatFunc:
    """f[A]: expand f in power sums and substitute p_r -> p_r[A]."""
    psums: Dict[int, RatFunc] = {}

    def p(r: int) -> RatFunc:
        if r not in psums:
            psums[r] = alphabet.power_sum(r)
        return psums[r]

    total = zero()
    for rho, c in f.power_sums().coeffs.items():
        term = c
        for r in rho:
            term = term * p(r)
        total = total + term
    return total.normalize()
