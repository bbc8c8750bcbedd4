import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_permutations

from processing.coeffield import (
    RatFunc, Q, T, b_norm, c_poly, cprime_poly, const, monomial, one, poch_int, poch_partition, zero,
)
from processing.partitions import (
    GeneralizedPartition, Partition, as_partition, contains, n_stat, partitions_of, z_lambda,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Series containers
# ---------------------------------------------------------------------------

@dataclass
class SymSeries:
    """
    Symmetric polynomial in the monomial basis, coefficients in RatFunc.
    n is the number of variables (None for the full ring of symmetric functions);
    degree_bound is the truncation degree D.
    """
    coeffs: Dict[Partition, RatFunc] = field(default_factory=dict)  # m_lambda -> coefficient
    n: Optional[int] = None  # variable count, None = unrestricted
    degree_bound: Optional[int] = None  # D, None = exact (finite support)
    _psums: Optional["PowerSumSeries"] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        clean = {}
        for lam, c in self.coeffs.items():
            lam = as_partition(lam)
            if self.n is not None and lam.length > self.n:
                continue
            if self.degree_bound is not None and lam.weight > self.degree_bound:
                continue
            c = RatFunc.coerce(c)
            if not c.is_zero():
                clean[lam] = c
        self.coeffs = clean

    def power_sums(self) -> "PowerSumSeries":
        """p-basis coordinates, computed once per series."""
        if self._psums is None:
            self._psums = to_power_sums(self)
        return self._psums

    def _bound(self, other: "SymSeries") -> Optional[int]:
        bounds = [b for b in (self.degree_bound, other.degree_bound) if b is not None]
        return min(bounds) if bounds else None

    def _n(self, other: "SymSeries") -> Optional[int]:
        ns = [m for m in (self.n, other.n) if m is not None]
        return min(ns) if ns else None

    def __add__(self, other: "SymSeries") -> "SymSeries":
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            out[lam] = out[lam] + c if lam in out else c
        return SymSeries(out, self._n(other), self._bound(other))

    def __neg__(self):
        return SymSeries({lam: -c for lam, c in self.coeffs.items()}, self.n, self.degree_bound)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SymSeries":
        c = RatFunc.coerce(c)
        return SymSeries({lam: v * c for lam, v in self.coeffs.items()}, self.n, self.degree_bound)

    def __mul__(self, other):
        if isinstance(other, SymSeries):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def restrict(self, n: int) -> "SymSeries":
        """Set x_{n+1} = x_{n+2} = ... = 0."""
        return SymSeries(dict(self.coeffs), n, self.degree_bound)

    def truncate(self, degree: int) -> "SymSeries":
        return SymSeries(dict(self.coeffs), self.n, degree)

    def coefficient(self, lam) -> RatFunc:
        return self.coeffs.get(as_partition(lam), zero())

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs.values())

    def __eq__(self, other):
        if not isinstance(other, SymSeries):
            return NotImplemented
        return (self - other).is_zero()

    def support(self) -> List[Partition]:
        return sorted(self.coeffs, key=lambda p: (p.weight, tuple(-x for x in p)))

    def scale_variables(self, z) -> "SymSeries":
        """f(zX): coefficient of m_lambda picks up z^{|lambda|}."""
        z = RatFunc.coerce(z)
        return SymSeries({lam: c * z ** lam.weight for lam, c in self.coeffs.items()}, self.n, self.degree_bound)


@dataclass
class PowerSumSeries:
    """The same data in the power-sum basis p_rho."""
    coeffs: Dict[Partition, RatFunc] = field(default_factory=dict)  # p_rho -> coefficient
    n: Optional[int] = None
    degree_bound: Optional[int] = None


# ---------------------------------------------------------------------------
# Transition matrices between p and m (per degree, exact rationals)
# ---------------------------------------------------------------------------

def _count_assignments(rho: Tuple[int, ...], lam: Tuple[int, ...]) -> int:
    """Number of maps from the parts of rho to the rows of lam with row sums equal to lam."""
    @lru_cache(maxsize=None)
    def go(idx: int, remaining: Tuple[int, ...]) -> int:
        if idx == len(rho):
            return 1 if not any(remaining) else 0
        total = 0
        r = rho[idx]
        for i, cap in enumerate(remaining):
            if cap >= r:
                total += go(idx + 1, remaining[:i] + (cap - r,) + remaining[i + 1:])
        return total

    return go(0, lam)


@lru_cache(maxsize=None)
def p_to_m(d: int) -> Dict[Partition, Dict[Partition, int]]:
    """p_rho = sum_lambda R[rho][lambda] m_lambda for |rho| = d."""
    parts = partitions_of(d)
    return {rho: {lam: c for lam in parts if (c := _count_assignments(tuple(rho), tuple(lam)))} for rho in parts}


@lru_cache(maxsize=None)
def m_to_p(d: int) -> Dict[Partition, Dict[Partition, Fraction]]:
    """m_lambda = sum_rho Rinv[lambda][rho] p_rho, by Gauss-Jordan over the rationals."""
    parts = partitions_of(d)
    k = len(parts)
    idx = {p: i for i, p in enumerate(parts)}
    R = p_to_m(d)
    # matrix A with A[rho][lam]; p = A m, so m = A^{-1} p
    A = [[Fraction(R[rho].get(lam, 0)) for lam in parts] for rho in parts]
    inv = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for col in range(k):
        pivot = next(r for r in range(col, k) if A[r][col] != 0)
        A[col], A[pivot] = A[pivot], A[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        inv[col] = [x / pv for x in inv[col]]
        for r in range(k):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    # inv = A^{-1}: rows indexed by lam, columns by rho
    return {lam: {rho: inv[idx[lam]][idx[rho]] for rho in parts if inv[idx[lam]][idx[rho]] != 0} for lam in parts}


def to_power_sums(f: SymSeries) -> PowerSumSeries:
    out: Dict[Partition, RatFunc] = {}
    for lam, c in f.coeffs.items():
        for rho, r in m_to_p(lam.weight)[lam].items():
            term = c * const(r)
            out[rho] = out[rho] + term if rho in out else term
    return PowerSumSeries({k: v for k, v in out.items() if not v.is_zero()}, f.n, f.degree_bound)


def from_power_sums(g: PowerSumSeries, n: Optional[int] = None) -> SymSeries:
    out: Dict[Partition, RatFunc] = {}
    for rho, c in g.coeffs.items():
        for lam, r in p_to_m(rho.weight)[rho].items():
            term = c * r
            out[lam] = out[lam] + term if lam in out else term
    return SymSeries(out, g.n if n is None else n, g.degree_bound)


def power_sum_sym(rho, n: Optional[int] = None) -> SymSeries:
    rho = as_partition(rho)
    return from_power_sums(PowerSumSeries({rho: one()}), n)


def monomial_sym(lam, n: Optional[int] = None) -> SymSeries:
    lam = as_partition(lam)
    return SymSeries({lam: one()}, n)


def multiply(f: SymSeries, g: SymSeries) -> SymSeries:
    """Product computed in the power-sum basis, where p_rho p_sigma = p_{rho cup sigma}."""
    bound = f._bound(g)
    fp, gp = f.power_sums(), g.power_sums()
    out: Dict[Partition, RatFunc] = {}
    for r1, c1 in fp.coeffs.items():
        for r2, c2 in gp.coeffs.items():
            if bound is not None and r1.weight + r2.weight > bound:
                continue
            rho = Partition(sorted(r1 + r2, reverse=True))
            term = c1 * c2
            out[rho] = out[rho] + term if rho in out else term
    return from_power_sums(PowerSumSeries(out, f._n(g), bound))


# ---------------------------------------------------------------------------
# Scalar products and Gram-Schmidt
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def qt_pnorm(rho: Partition) -> RatFunc:
    """<p_rho, p_rho> = z_rho prod_i (1 - q^{rho_i}) / (1 - t^{rho_i})."""
    out = const(z_lambda(rho))
    for r in rho:
        out = out * (1 - Q ** r) / (1 - T ** r)
    return out.normalize()


def pairing(fp: Dict[Partition, RatFunc], gp: Dict[Partition, RatFunc], pnorm: Callable[[Partition], RatFunc]) -> RatFunc:
    total = zero()
    for rho, c in fp.items():
        if rho in gp:
            total = total + c * gp[rho] * pnorm(rho)
    return total.normalize()


def scalar_product_qt(f: SymSeries, g: SymSeries) -> RatFunc:
    """Bilinear extension of <p_lambda, p_mu> = delta z_lambda prod (1-q^{lambda_i})/(1-t^{lambda_i})."""
    return pairing(f.power_sums().coeffs, g.power_sums().coeffs, qt_pnorm)


def gram_schmidt(d: int, pnorm: Callable[[Partition], RatFunc]) -> Dict[Partition, Dict[Partition, RatFunc]]:
    """
    Orthogonalize the monomial basis of degree d against the pairing defined by pnorm,
    walking the partitions in increasing lexicographic order (a linear extension of
    dominance). Returns the m-basis coordinates of each orthogonal polynomial.
    """
    parts = list(reversed(partitions_of(d)))  # (1^d) first
    minv = m_to_p(d)
    built: List[Tuple[Partition, Dict[Partition, RatFunc], RatFunc]] = []
    result: Dict[Partition, Dict[Partition, RatFunc]] = {}
    for lam in parts:
        vec = {rho: const(c) for rho, c in minv[lam].items()}
        m_lam = dict(vec)
        for mu, pmu, norm in built:
            coef = (pairing(m_lam, pmu, pnorm) / norm).normalize()
            if coef.is_zero():
                continue
            for rho, c in pmu.items():
                v = vec.get(rho, zero()) - coef * c
                vec[rho] = v
        vec = {rho: c.normalize() for rho, c in vec.items() if not c.is_zero()}
        built.append((lam, vec, pairing(vec, vec, pnorm)))
        m_coords = from_power_sums(PowerSumSeries(vec)).coeffs
        result[lam] = {mu: c.normalize() for mu, c in m_coords.items()}
        logger.debug("orthogonalized %s in degree %d", list(lam), d)
    return result


# ---------------------------------------------------------------------------
# Macdonald polynomials
# ---------------------------------------------------------------------------

class CoefficientStore:
    """Interface of a persistent coefficient cache: load/save m-basis coordinates."""

    def load(self, family: str, lam: Partition) -> Optional[Dict[Partition, RatFunc]]:
        return None

    def save(self, family: str, lam: Partition, coeffs: Dict[Partition, RatFunc]):
        pass


_STORE: CoefficientStore = CoefficientStore()
_MEMO: Dict[Tuple[str, Partition], Dict[Partition, RatFunc]] = {}
_SERIES: Dict[Tuple[str, Partition, Optional[int]], SymSeries] = {}


def set_store(store: Optional[CoefficientStore]):
    global _STORE
    _STORE = store if store is not None else CoefficientStore()


def clear_memo():
    _MEMO.clear()
    _SERIES.clear()
    _lr.cache_clear()


def family_coefficients(family: str, lam, pnorm: Callable[[Partition], RatFunc]) -> Dict[Partition, RatFunc]:
    """m-basis coordinates of an orthogonal family member, via memo, then store, then Gram-Schmidt."""
    lam = as_partition(lam)
    key = (family, lam)
    if key in _MEMO:
        return _MEMO[key]
    stored = _STORE.load(family, lam)
    if stored is not None:
        _MEMO[key] = stored
        return stored
    logger.info("building %s polynomials of degree %d", family, lam.weight)
    for mu, coeffs in gram_schmidt(lam.weight, pnorm).items():
        if (family, mu) not in _MEMO:
            _MEMO[(family, mu)] = coeffs
            _STORE.save(family, mu, coeffs)
    return _MEMO[key]


def macdonald_coefficients(lam) -> Dict[Partition, RatFunc]:
    return family_coefficients("macdonald", lam, qt_pnorm)


def macdonald_P(lam, n: Optional[int] = None) -> SymSeries:
    """P_lambda(x_1..x_n; q, t); the zero series when l(lambda) > n."""
    lam = as_partition(lam)
    if n is not None and lam.length > n:
        return SymSeries({}, n)
    key = ("macdonald", lam, n)
    if key not in _SERIES:
        _SERIES[key] = SymSeries(dict(macdonald_coefficients(lam)), n)
    return _SERIES[key]


def macdonald_Q(lam, n: Optional[int] = None) -> SymSeries:
    return macdonald_P(lam, n).scale(b_norm(lam))


def normalized_P(lam, n: Optional[int] = None) -> SymSeries:
    """P-normalization t^{n(lambda)} / c'_lambda P_lambda."""
    lam = as_partition(lam)
    return macdonald_P(lam, n).scale(T ** n_stat(lam) / cprime_poly(lam))


def normalized_Q(lam, n: Optional[int] = None) -> SymSeries:
    """Q-normalization t^{-n(lambda)} c'_lambda Q_lambda."""
    lam = as_partition(lam)
    return macdonald_Q(lam, n).scale(T ** (-n_stat(lam)) * cprime_poly(lam))


# ---------------------------------------------------------------------------
# Littlewood-Richardson coefficients and skew polynomials
# ---------------------------------------------------------------------------

def expand_in_family(f: SymSeries, coefficients: Callable[[Partition], Dict[Partition, RatFunc]]) -> Dict[Partition, RatFunc]:
    """Solve the unitriangular system f = sum c_lambda F_lambda, top partition first."""
    rest = dict(f.coeffs)
    out: Dict[Partition, RatFunc] = {}
    for d in sorted({lam.weight for lam in rest}):
        for lam in partitions_of(d):  # reverse-lex: dominant first
            c = rest.get(lam)
            if c is None or c.is_zero():
                continue
            c = c.normalize()
            out[lam] = c
            for mu, u in coefficients(lam).items():
                rest[mu] = rest.get(mu, zero()) - c * u
    return out


@lru_cache(maxsize=None)
def _lr(mu: Partition, nu: Partition) -> Tuple[Tuple[Partition, RatFunc], ...]:
    prod = multiply(macdonald_P(mu), macdonald_P(nu))
    coeffs = expand_in_family(prod, macdonald_coefficients)
    return tuple(sorted(((lam, c.normalize()) for lam, c in coeffs.items() if not c.is_zero()),
                        key=lambda x: tuple(-p for p in x[0])))


def lr_coefficients(mu, nu) -> Dict[Partition, RatFunc]:
    """q,t-Littlewood-Richardson coefficients f^lambda_{mu nu} of P_mu P_nu = sum f P_lambda."""
    return dict(_lr(as_partition(mu), as_partition(nu)))


def normalized_lr(mu, nu) -> Dict[Partition, RatFunc]:
    mu, nu = as_partition(mu), as_partition(nu)
    out = {}
    for lam, f in lr_coefficients(mu, nu).items():
        scale = T ** (n_stat(mu) + n_stat(nu) - n_stat(lam)) * cprime_poly(lam) / (cprime_poly(mu) * cprime_poly(nu))
        out[lam] = (f * scale).normalize()
    return out


def lr_coefficient(lam, mu, nu, normalized: bool = False) -> RatFunc:
    table = normalized_lr(mu, nu) if normalized else lr_coefficients(mu, nu)
    return table.get(as_partition(lam), zero())


def skew_Q(lam, mu, n: Optional[int] = None) -> SymSeries:
    """Q_{lambda/mu} = sum_nu f^lambda_{mu nu} Q_nu; zero unless mu is inside lambda."""
    lam, mu = as_partition(lam), as_partition(mu)
    if not contains(lam, mu):
        return SymSeries({}, n)
    out = SymSeries({}, n)
    for nu in partitions_of(lam.weight - mu.weight):
        f = lr_coefficient(lam, mu, nu)
        if not f.is_zero():
            out = out + macdonald_Q(nu, n).scale(f)
    return out


def skew_P(lam, mu, n: Optional[int] = None) -> SymSeries:
    """P_{lambda/mu} = b_mu / b_lambda Q_{lambda/mu}."""
    lam, mu = as_partition(lam), as_partition(mu)
    return skew_Q(lam, mu, n).scale(b_norm(mu) / b_norm(lam))


def normalized_skew_Q(lam, mu, n: Optional[int] = None) -> SymSeries:
    """Q-normalized skew polynomial, sum_nu f-normalized^lambda_{mu nu} Q-normalized_nu."""
    lam, mu = as_partition(lam), as_partition(mu)
    if not contains(lam, mu):
        return SymSeries({}, n)
    out = SymSeries({}, n)
    for nu in partitions_of(lam.weight - mu.weight):
        f = lr_coefficient(lam, mu, nu, normalized=True)
        if not f.is_zero():
            out = out + normalized_Q(nu, n).scale(f)
    return out


def normalized_skew_P(lam, mu, n: Optional[int] = None) -> SymSeries:
    lam, mu = as_partition(lam), as_partition(mu)
    scale = T ** (2 * n_stat(lam) - 2 * n_stat(mu)) * c_poly(mu) * cprime_poly(mu) / (c_poly(lam) * cprime_poly(lam))
    return normalized_skew_Q(lam, mu, n).scale(scale)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def monomial_value(nu: Partition, points: Sequence[RatFunc]) -> RatFunc:
    """m_nu(x_1, ..., x_k) as a sum over distinct permutations."""
    k = len(points)
    if nu.length > k:
        return zero()
    powers: Dict[Tuple[int, int], RatFunc] = {}
    total = zero()
    for perm in multiset_permutations(list(nu.padded(k))):
        term = one()
        for i, e in enumerate(perm):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = points[i] ** e
                term = term * powers[key]
        total = total + term
    return total


def evaluate(f: SymSeries, points: Sequence) -> RatFunc:
    points = [RatFunc.coerce(x) for x in points]
    total = zero()
    for nu, c in f.coeffs.items():
        if nu.length <= len(points):
            total = total + c * monomial_value(nu, points)
    return total.normalize()


def principal_point(mu, n: int, scale=None) -> List[RatFunc]:
    """<mu>_n scaled: x_i = scale q^{mu_i} t^{n-i}."""
    mu = as_partition(mu)
    scale = one() if scale is None else RatFunc.coerce(scale)
    return [scale * monomial(q=m, t=n - i - 1) for i, m in enumerate(mu.padded(n))]


def principal_spec(f: SymSeries, mu, scale=None, n: Optional[int] = None) -> RatFunc:
    n = f.n if n is None else n
    if n is None:
        raise ValueError("principal specialization needs a finite number of variables")
    return evaluate(f, principal_point(mu, n, scale))


def principal_value_formula(lam, n: int) -> RatFunc:
    """
    Closed form of the P-normalized polynomial at <0>_n:
    t^{2n(lambda)} / (q t^{n-1})_lambda prod_{i<j} (1 - q^{l_i-l_j} t^{j-i}) / (1 - t^{j-i})
        * (t^{j-i+1})_{l_i-l_j} / (q t^{j-i-1})_{l_i-l_j}
    """
    lam = as_partition(lam)
    if lam.length > n:
        return zero()
    p = lam.padded(n)
    out = T ** (2 * n_stat(lam)) / poch_partition(Q * T ** (n - 1), lam)
    for i in range(n):
        for j in range(i + 1, n):
            d = p[i] - p[j]
            out = out * (1 - monomial(q=d, t=j - i)) / (1 - T ** (j - i))
            out = out * poch_int(T ** (j - i + 1), d) / poch_int(Q * T ** (j - i - 1), d)
    return out.normalize()


def normalized_tilde(lam, n: int) -> SymSeries:
    """P_lambda / P_lambda(<0>_n)."""
    lam = as_partition(lam)
    P = macdonald_P(lam, n)
    return P.scale(principal_spec(P, Partition(), n=n).inverse())


def generalized_weight_factor(lam: GeneralizedPartition) -> RatFunc:
    """
    t^{n(lambda)} (q t^{n-1})_lambda / c'_lambda for lambda with possibly negative parts,
    through the shift-invariant product form prod_{i<j} (q t^{j-i})_{d} / (q t^{j-i-1})_{d}.
    """
    n = len(lam)
    out = T ** sum(i * p for i, p in enumerate(lam))
    for i in range(n):
        for j in range(i + 1, n):
            d = lam[i] - lam[j]
            out = out * poch_int(Q * T ** (j - i), d) / poch_int(Q * T ** (j - i - 1), d)
    return out.normalize()


def extended_P(lam: GeneralizedPartition) -> Tuple[SymSeries, int]:
    """P_lambda for lambda with negative parts as (P_kappa, s): P_lambda = (x_1...x_n)^s P_kappa."""
    kappa, s = lam.split()
    return macdonald_P(kappa, len(lam)), s
