import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import mpmath
import numpy as np
import sympy
from sympy.utilities.iterables import multiset_permutations

from processing.coeffield import RatFunc, const, one, var
from processing.partitions import Partition, arm_leg, as_partition, cells, z_lambda
from processing.symfunc import SymSeries, evaluate, family_coefficients, macdonald_coefficients

logger = logging.getLogger(__name__)

ALPHA = var("alpha")


@lru_cache(maxsize=None)
def jack_pnorm(rho: Partition) -> RatFunc:
    """<p_rho, p_rho> = z_rho alpha^{l(rho)}."""
    return const(z_lambda(rho)) * ALPHA ** len(rho)


def jack_coefficients(lam) -> Dict[Partition, RatFunc]:
    return family_coefficients("jack", lam, jack_pnorm)


@dataclass
class JackPoly:
    """P^{(alpha)}_lambda in n variables; alpha is symbolic unless a rational value was fixed."""
    lam: Partition
    n: int
    alpha: Optional[Fraction]  # None keeps the indeterminate
    series: SymSeries  # monomial-basis coordinates

    def coefficient(self, nu) -> RatFunc:
        return self.series.coefficient(nu)

    def value_at_ones(self) -> RatFunc:
        return evaluate(self.series, [one()] * self.n)

    def normalized(self) -> "JackPoly":
        """P / P(1^n), equal to 1 at x = (1, ..., 1)."""
        return JackPoly(self.lam, self.n, self.alpha, self.series.scale(self.value_at_ones().inverse()))

    def numeric_terms(self, alpha_value) -> List[Tuple[Tuple[int, ...], float]]:
        """Expanded monomials (exponent vector, float coefficient) at a real alpha."""
        out = []
        for nu, c in sorted(self.series.coeffs.items()):
            if self.alpha is None:
                with mpmath.workdps(30):
                    value = float(c.evaluate({"alpha": mpmath.mpf(alpha_value)}))
            else:
                value = float(c.evaluate({}))
            for perm in multiset_permutations(list(nu.padded(self.n))):
                out.append((tuple(perm), value))
        return out

    def vectorized(self, alpha_value=None):
        """numpy callable on an (S, n) array of points."""
        terms = self.numeric_terms(alpha_value)

        def f(points: np.ndarray) -> np.ndarray:
            points = np.asarray(points, dtype=float)
            total = np.zeros(points.shape[0])
            for exps, c in terms:
                term = np.full(points.shape[0], c)
                for i, e in enumerate(exps):
                    if e:
                        term = term * points[:, i] ** e
                total += term
            return total
        return f


def jack_P(lam, n: int, alpha=None) -> JackPoly:
    """
    Jack polynomial P^{(alpha)}_lambda(x_1..x_n) by Gram-Schmidt against <p_rho, p_sigma> = delta z_rho alpha^{l(rho)}.
    A rational alpha is substituted into the exact coefficients.
    """
    lam = as_partition(lam)
    if lam.length > n:
        raise ValueError(f"l({list(lam)}) exceeds n = {n}")
    coeffs = jack_coefficients(lam)
    if alpha is not None:
        alpha = Fraction(alpha)
        coeffs = {nu: c.substitute({"alpha": const(alpha)}) for nu, c in coeffs.items()}
    return JackPoly(lam, n, alpha, SymSeries(dict(coeffs), n))


def normalized_jack(lam, n: int, alpha=None) -> JackPoly:
    return jack_P(lam, n, alpha).normalized()


def jack_value_formula(lam, n: int) -> RatFunc:
    """P^{(alpha)}_lambda(1^n) = prod_s (n - l'(s) + alpha a'(s)) / (alpha a(s) + l(s) + 1)."""
    lam = as_partition(lam)
    out = one()
    for s in cells(lam):
        a, ac, l, lc = arm_leg(lam, s)
        out = out * (const(n - lc) + ALPHA * ac) / (ALPHA * a + const(l + 1))
    return out.normalize()


def schur_oracle(lam, n: int) -> Dict[Partition, int]:
    """Monomial coefficients of s_lambda(x_1..x_n) as a ratio of alternants, computed independently with sympy."""
    lam = as_partition(lam)
    if lam.length > n:
        return {}
    xs = sympy.symbols(f"x1:{n + 1}")
    parts = lam.padded(n)
    num = sympy.Matrix(n, n, lambda i, j: xs[i] ** (parts[j] + n - 1 - j)).det()
    den = sympy.Matrix(n, n, lambda i, j: xs[i] ** (n - 1 - j)).det()
    quotient, rem = sympy.div(sympy.Poly(num, *xs), sympy.Poly(den, *xs))
    if not rem.is_zero:
        raise ArithmeticError(f"alternant of {list(lam)} is not divisible by the Vandermonde")
    out: Dict[Partition, int] = {}
    for exps, c in quotient.terms():
        if list(exps) == sorted(exps, reverse=True):
            out[Partition(exps)] = int(c)
    return out


def macdonald_jack_limit(lam, alpha, eps=mpmath.mpf("1e-6"), dps: int = 60) -> Dict[Partition, float]:
    """Macdonald P coefficients at q = 1 - eps, t = q^{1/alpha}; these tend to the Jack coefficients."""
    with mpmath.workdps(dps):
        q = 1 - mpmath.mpf(eps)
        t = q ** (1 / mpmath.mpf(alpha))
        return {nu: float(c.evaluate({"q": q, "t": t})) for nu, c in macdonald_coefficients(lam).items()}
