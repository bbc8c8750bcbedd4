import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import mpmath
from sympy import Symbol, sympify
from sympy.polys.domains import ZZ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from processing.partitions import Partition, as_partition, cells, arm_leg, conjugate, n_stat

logger = logging.getLogger(__name__)

# Indeterminates are ordered canonically so that rings built in different places agree.
CANONICAL_ORDER = ("q", "t", "a", "b", "z", "w", "alpha")
BASE_NAMES = ("q", "t")

# gcd normalization policy: "always" cancels after every operation,
# "lazy" cancels only at comparison/serialization or when a fraction grows past the threshold.
GCD_POLICY = {"mode": "lazy", "cancel_threshold": 48}

Scalar = Union[int, Fraction]


class PolynomialZeroDivision(ZeroDivisionError):
    """Division by the zero polynomial."""


class PochhammerPole(ArithmeticError):
    """A factor of a q-shifted factorial that must be inverted is identically zero."""

    def __init__(self, base, index):
        super().__init__(f"pole in ({base})_{index}")
        self.base = base
        self.index = index


def configure_gcd(mode: str = "lazy", cancel_threshold: int = 48):
    if mode not in ("lazy", "always"):
        raise ValueError(f"unknown gcd mode {mode!r}")
    GCD_POLICY["mode"] = mode
    GCD_POLICY["cancel_threshold"] = int(cancel_threshold)


def _order_names(names: Iterable[str]) -> Tuple[str, ...]:
    names = set(names) | set(BASE_NAMES)
    known = [n for n in CANONICAL_ORDER if n in names]
    extra = sorted(n for n in names if n not in CANONICAL_ORDER)
    return tuple(known + extra)


@lru_cache(maxsize=None)
def get_ring(names: Tuple[str, ...]) -> PolyRing:
    """Integer polynomial ring over the given (canonically ordered) indeterminates."""
    return PolyRing(tuple(Symbol(n) for n in names), ZZ, lex)


def ring_for(names: Iterable[str]) -> PolyRing:
    return get_ring(_order_names(names))


def _names(ring: PolyRing) -> Tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols)


def _union_ring(r1: PolyRing, r2: PolyRing) -> PolyRing:
    if r1 is r2:
        return r1
    return ring_for(_names(r1) + _names(r2))


class RatFunc:
    """
    Element of Q(q, t, a, ...): a quotient of two integer polynomials.

    Canonical form (reached by ``normalize``): gcd(num, den) = 1 and the leading
    coefficient of den is positive. Depending on the gcd policy, intermediate values
    may carry a common factor; equality, hashing, zero tests and serialization never
    depend on that.
    """

    __slots__ = ("num", "den", "_canonical")

    def __init__(self, num, den=None, canonical: bool = False):
        if den is None:
            den = num.ring.one
        if num.ring is not den.ring:
            r = _union_ring(num.ring, den.ring)
            num, den = num.set_ring(r), den.set_ring(r)
        if not den:
            raise PolynomialZeroDivision("zero denominator")
        self.num = num
        self.den = den
        self._canonical = canonical

    # ----- constructors -----
    @classmethod
    def const(cls, value: Scalar, names: Sequence[str] = BASE_NAMES) -> "RatFunc":
        R = ring_for(names)
        value = Fraction(value)
        return cls(R.ground_new(value.numerator), R.ground_new(value.denominator), canonical=True)

    @classmethod
    def var(cls, name: str) -> "RatFunc":
        R = ring_for([name])
        return cls(R.gens[_names(R).index(name)], canonical=True)

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    @property
    def names(self) -> Tuple[str, ...]:
        return _names(self.ring)

    # ----- normalization -----
    def normalize(self) -> "RatFunc":
        if self._canonical:
            return self
        p, q = self.num.cancel(self.den)
        self.num, self.den, self._canonical = p, q, True
        return self

    def _maybe_cancel(self) -> "RatFunc":
        if GCD_POLICY["mode"] == "always":
            return self.normalize()
        if len(self.den) > 1 and len(self.num) + len(self.den) > GCD_POLICY["cancel_threshold"]:
            return self.normalize()
        return self

    def _lift(self, other: "RatFunc"):
        r = _union_ring(self.ring, other.ring)
        a = self if self.ring is r else RatFunc(self.num.set_ring(r), self.den.set_ring(r), self._canonical)
        b = other if other.ring is r else RatFunc(other.num.set_ring(r), other.den.set_ring(r), other._canonical)
        return a, b

    # ----- field operations -----
    def __add__(self, other):
        other = RatFunc.coerce(other)
        a, b = self._lift(other)
        if a.den == b.den:
            return RatFunc(a.num + b.num, a.den)._maybe_cancel()
        if b.den.is_ground and b.den == 1:
            return RatFunc(a.num + b.num * a.den, a.den)._maybe_cancel()
        if a.den.is_ground and a.den == 1:
            return RatFunc(a.num * b.den + b.num, b.den)._maybe_cancel()
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den)._maybe_cancel()

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, self._canonical)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) + (-self)

    def __mul__(self, other):
        other = RatFunc.coerce(other)
        a, b = self._lift(other)
        if not a.num or not b.num:
            return RatFunc(a.ring.zero, a.ring.one, canonical=True)
        return RatFunc(a.num * b.num, a.den * b.den)._maybe_cancel()

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise PolynomialZeroDivision("inverse of zero")
        if self.num.LC < 0:
            return RatFunc(-self.den, -self.num, self._canonical)
        return RatFunc(self.den, self.num, self._canonical)

    def __truediv__(self, other):
        other = RatFunc.coerce(other)
        if other.is_zero():
            raise PolynomialZeroDivision("division by the zero polynomial")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, self._canonical)

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        a, b = self._lift(other)
        return a.num * b.den == b.num * a.den

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(self.to_string())

    def __repr__(self):
        return f"RatFunc({self.to_string()})"

    def __str__(self):
        return self.to_string()

    # ----- substitution and evaluation -----
    def substitute(self, mapping: Dict[str, object]) -> "RatFunc":
        """
        Simultaneous substitution of indeterminates by RatFunc (or rational) values,
        e.g. {"q": q**2, "t": q**2, "a": -q**2}.
        """
        vals = {k: RatFunc.coerce(v) for k, v in mapping.items() if k in self.names}
        if not vals:
            return self
        R = self.ring
        for v in vals.values():
            R = _union_ring(R, v.ring)
        names = _names(R)
        num, den = self.num.set_ring(R), self.den.set_ring(R)
        subs = [(names.index(k), v.num.set_ring(R), v.den.set_ring(R)) for k, v in vals.items()]

        def homogenize(poly):
            degs = {i: poly.degree(R.gens[i]) if poly else 0 for i, _, _ in subs}
            degs = {i: max(d, 0) for i, d in degs.items()}
            out = R.zero
            for monom, coeff in poly.terms():
                monom = list(monom)
                term = R.one
                for i, r, s in subs:
                    e, monom[i] = monom[i], 0
                    if e:
                        term *= r ** e
                    if degs[i] - e:
                        term *= s ** (degs[i] - e)
                out += term.mul_term((tuple(monom), coeff))
            scale = R.one
            for i, _, s in subs:
                if degs[i]:
                    scale *= s ** degs[i]
            return out, scale

        n_h, n_s = homogenize(num)
        d_h, d_s = homogenize(den)
        new_den = d_h * n_s
        if not new_den:
            raise PolynomialZeroDivision(f"substitution {mapping} hits a pole of {self}")
        return RatFunc(n_h * d_s, new_den).normalize()

    def evaluate(self, values: Dict[str, object]):
        """Numeric value with every indeterminate replaced (mpmath numbers or Fractions)."""
        names = self.names
        exact = all(isinstance(v, (int, Fraction)) for v in values.values())

        def ev(poly):
            total = 0
            for monom, coeff in poly.terms():
                term = Fraction(int(coeff)) if exact else mpmath.mpf(int(coeff))
                for i, e in enumerate(monom):
                    if e:
                        term *= values[names[i]] ** e
                total += term
            return total

        d = ev(self.den)
        if d == 0:
            raise PolynomialZeroDivision(f"{self} has a pole at {values}")
        return ev(self.num) / d

    def degree_in(self, name: str) -> int:
        """Degree of the numerator minus that of the denominator in one indeterminate."""
        self.normalize()
        if name not in self.names:
            return 0
        g = self.ring.gens[self.names.index(name)]
        return self.num.degree(g) - self.den.degree(g)

    # ----- serialization -----
    def to_string(self) -> str:
        self.normalize()
        return f"({self.num})/({self.den})"

    @classmethod
    def parse(cls, text: str) -> "RatFunc":
        text = text.strip()
        if "/" in text and text.startswith("(") and text.endswith(")"):
            depth = 0
            for i, ch in enumerate(text):
                depth += ch == "("
                depth -= ch == ")"
                if depth == 0:
                    break
            if text[i + 1:i + 2] == "/":
                return cls._from_expr(text[1:i]) / cls._from_expr(text[i + 3:-1])
        return cls._from_expr(text)

    @classmethod
    def _from_expr(cls, text: str) -> "RatFunc":
        expr = sympify(text)
        names = [str(s) for s in expr.free_symbols]
        R = ring_for(names)
        num, den = expr.as_numer_denom()
        return cls(R.from_expr(num), R.from_expr(den)).normalize()


# ----- factories -----

def const(value: Scalar) -> RatFunc:
    return RatFunc.const(value)


def var(name: str) -> RatFunc:
    return RatFunc.var(name)


def zero() -> RatFunc:
    return RatFunc.const(0)


def one() -> RatFunc:
    return RatFunc.const(1)


def monomial(sign: int = 1, **exps: int) -> RatFunc:
    """
    A signed Laurent monomial such as a*t**(j-i-1) or -q**2, held as a RatFunc
    with the negative exponents moved to a monomial denominator.
    """
    R = ring_for(exps.keys())
    names = _names(R)
    up = [0] * len(names)
    down = [0] * len(names)
    for k, e in exps.items():
        if e >= 0:
            up[names.index(k)] = e
        else:
            down[names.index(k)] = -e
    num = R({tuple(up): ZZ(sign)})
    den = R({tuple(down): ZZ(1)})
    return RatFunc(num, den, canonical=True)


MonomialExpr = monomial

Q = var("q")
T = var("t")


def _is_identically_zero(x: RatFunc) -> bool:
    return x.is_zero()


def poch_int(b, k: int, base: Optional[RatFunc] = None) -> RatFunc:
    """
    (b; base)_k for integer k:
        k > 0 -> prod_{i<k} (1 - b base^i)
        k = 0 -> 1
        k < 0 -> 1 / prod_{i=1}^{-k} (1 - b base^{-i})
    Raises PochhammerPole when a factor of the inverted product vanishes identically.
    """
    b = RatFunc.coerce(b)
    base = Q if base is None else base
    if k == 0:
        return one()
    if k > 0:
        out = one()
        factor = b
        for _ in range(k):
            out = out * (1 - factor)
            factor = factor * base
        return out
    out = one()
    inv = base.inverse()
    factor = b * inv
    for _ in range(-k):
        f = 1 - factor
        if f.is_zero():
            raise PochhammerPole(b, k)
        out = out * f
        factor = factor * inv
    return out.inverse()


def reciprocal_poch_int(b, k: int, base: Optional[RatFunc] = None) -> RatFunc:
    """1/(b)_k with the convention that a pole of (b)_k makes the reciprocal 0 (so 1/(q)_{-N} = 0)."""
    try:
        return poch_int(b, k, base).inverse()
    except PochhammerPole:
        return zero()


def poch_partition(b, lam, base: Optional[RatFunc] = None, tparam: Optional[RatFunc] = None) -> RatFunc:
    """(b; q, t)_lambda = prod_i (b t^{1-i})_{lambda_i}; also accepts generalized (negative) parts."""
    b = RatFunc.coerce(b)
    tparam = T if tparam is None else tparam
    out = one()
    shift = one()
    for part in lam:
        if part:
            out = out * poch_int(b * shift, part, base)
        shift = shift / tparam
    return out


def reciprocal_poch_partition(b, lam, base: Optional[RatFunc] = None) -> RatFunc:
    """1/(b)_lambda, 0 when a row factor of a negative part has a pole."""
    try:
        return poch_partition(b, lam, base).inverse()
    except PochhammerPole:
        return zero()


def poch_partition_cells(b, lam) -> RatFunc:
    """Cell form prod_{s in lambda} (1 - b q^{a'(s)} t^{-l'(s)})."""
    b = RatFunc.coerce(b)
    out = one()
    for s in cells(lam):
        _, a_co, _, l_co = arm_leg(lam, s)
        out = out * (1 - b * monomial(q=a_co, t=-l_co))
    return out


def poch_multi(bases: Sequence, index, base: Optional[RatFunc] = None) -> RatFunc:
    """Condensed notation (b_1, ..., b_k)_N or (b_1, ..., b_k)_lambda."""
    out = one()
    for b in bases:
        if isinstance(index, int):
            out = out * poch_int(b, index, base)
        else:
            out = out * poch_partition(b, index, base)
    return out


def poch_ratio(num_bases: Sequence, den_bases: Sequence, k: int, base: Optional[RatFunc] = None) -> RatFunc:
    """
    prod (num_b)_k / prod (den_b)_k evaluated as one quotient of linear factors.
    Identical factors cancel first; a surviving zero factor upstairs makes the ratio 0,
    one downstairs raises PochhammerPole.
    """
    return poch_ratio_product([(num_bases, den_bases, k)], base)


def poch_ratio_product(items: Sequence[Tuple[Sequence, Sequence, int]], base: Optional[RatFunc] = None) -> RatFunc:
    """poch_ratio over several (num_bases, den_bases, k) blocks, with cancellation across blocks."""
    base = Q if base is None else base
    ups, downs = [], []

    def factors(b, k, sign_up):
        b = RatFunc.coerce(b)
        if k >= 0:
            f = b
            for _ in range(k):
                (ups if sign_up else downs).append(1 - f)
                f = f * base
        else:
            inv = base.inverse()
            f = b * inv
            for _ in range(-k):
                (downs if sign_up else ups).append(1 - f)
                f = f * inv

    for num_bases, den_bases, k in items:
        for b in num_bases:
            factors(b, k, True)
        for b in den_bases:
            factors(b, k, False)
    remaining = []
    for d in downs:
        for i, u in enumerate(ups):
            if u == d and not d.is_zero():
                del ups[i]
                break
        else:
            remaining.append(d)
    for d in remaining:
        if d.is_zero():
            raise PochhammerPole(d, 1)
    if any(u.is_zero() for u in ups):
        return zero()
    out = one()
    for u in ups:
        out = out * u
    for d in remaining:
        out = out / d
    return out


def limit_at_one(build, probe: str = "w") -> RatFunc:
    """
    Evaluate an expression whose individual Pochhammer factors may be singular at a
    specialization: build(e) receives the probe indeterminate e, the result is
    cancelled as one rational function and then e -> 1 is substituted.
    """
    return build(var(probe)).normalize().substitute({probe: 1})


@lru_cache(maxsize=None)
def _c_poly(lam: Tuple[int, ...]) -> RatFunc:
    out = one()
    for s in cells(Partition(lam)):
        a, _, l, _ = arm_leg(Partition(lam), s)
        out = out * (1 - monomial(q=a, t=l + 1))
    return out.normalize()


@lru_cache(maxsize=None)
def _cprime_poly(lam: Tuple[int, ...]) -> RatFunc:
    out = one()
    for s in cells(Partition(lam)):
        a, _, l, _ = arm_leg(Partition(lam), s)
        out = out * (1 - monomial(q=a + 1, t=l))
    return out.normalize()


def c_poly(lam) -> RatFunc:
    """c_lambda = prod_{s} (1 - q^{a(s)} t^{l(s)+1})."""
    return _c_poly(tuple(as_partition(lam)))


def cprime_poly(lam) -> RatFunc:
    """c'_lambda = prod_{s} (1 - q^{a(s)+1} t^{l(s)})."""
    return _cprime_poly(tuple(as_partition(lam)))


def c_poly_rows(lam, n: int) -> RatFunc:
    """Row form of c_lambda valid for any n >= l(lambda)."""
    lam = as_partition(lam)
    p = lam.padded(n)
    out = poch_partition(T ** n, lam)
    for i in range(n):
        for j in range(i + 1, n):
            d = p[i] - p[j]
            out = out * poch_int(T ** (j - i), d) / poch_int(T ** (j - i + 1), d)
    return out


def cprime_poly_rows(lam, n: int) -> RatFunc:
    lam = as_partition(lam)
    p = lam.padded(n)
    out = poch_partition(Q * T ** (n - 1), lam)
    for i in range(n):
        for j in range(i + 1, n):
            d = p[i] - p[j]
            out = out * poch_int(Q * T ** (j - i - 1), d) / poch_int(Q * T ** (j - i), d)
    return out


@lru_cache(maxsize=None)
def _b_norm(lam: Tuple[int, ...]) -> RatFunc:
    return (c_poly(lam) / cprime_poly(lam)).normalize()


def b_norm(lam) -> RatFunc:
    """b_lambda = c_lambda / c'_lambda."""
    return _b_norm(tuple(as_partition(lam)))


@lru_cache(maxsize=None)
def _tau(lam: Tuple[int, ...]) -> RatFunc:
    lam = Partition(lam)
    return monomial(sign=(-1) ** lam.weight, q=n_stat(conjugate(lam)), t=-n_stat(lam))


def tau(lam) -> RatFunc:
    """tau_lambda = (-1)^{|lambda|} q^{n(lambda')} t^{-n(lambda)}."""
    return _tau(tuple(as_partition(lam)))
