import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Any, List, Sequence, Tuple

import mpmath

logger = logging.getLogger(__name__)

WEIGHT_DPS = 40  # decimal digits for the sin-ratio weights
POLE_TOL = mpmath.mpf("1e-20")


class ChainConditionError(ValueError):
    """A chain weight has a pole: some sin(pi(beta + c gamma)) in a denominator vanishes."""


@dataclass(frozen=True)
class WeightedDomain:
    """One ordered cell of an integration chain together with its sin-ratio weight."""
    k1: int  # number of x variables
    k2: int  # number of y variables
    ordering: Tuple[int, ...]  # a = (a_1, ..., a_k1), 0 <= a_1 <= ... <= a_k1 <= k2
    weight: Any  # mpmath.mpf

    @property
    def word(self) -> Tuple[Tuple[str, int], ...]:
        return domain_order(self.ordering, self.k1, self.k2)

    def label(self) -> str:
        return "<".join(f"{f}{i}" for f, i in self.word)


def orderings(k1: int, k2: int) -> List[Tuple[int, ...]]:
    """All weakly increasing a with entries in [0, k2], in lexicographic order."""
    if k1 < 0 or k2 < 0:
        raise ValueError(f"chain sizes must be nonnegative, got ({k1}, {k2})")
    return list(combinations_with_replacement(range(k2 + 1), k1))


def domain_order(a: Sequence[int], k1: int, k2: int) -> Tuple[Tuple[str, int], ...]:
    """
    Interleaving word of I_a: x_i sits above y_1..y_{a_i} and below y_{a_i + 1}.
    Example: a = (1,), k1 = 1, k2 = 2 -> (("y",1), ("x",1), ("y",2)).
    """
    a = tuple(a)
    if len(a) != k1 or any(x > y for x, y in zip(a, a[1:])) or (a and (a[0] < 0 or a[-1] > k2)):
        raise ValueError(f"{a} is not an ordering sequence for ({k1}, {k2})")
    word = []
    placed = 0
    for i, ai in enumerate(a, start=1):
        while placed < ai:
            placed += 1
            word.append(("y", placed))
        word.append(("x", i))
    while placed < k2:
        placed += 1
        word.append(("y", placed))
    return tuple(word)


def ordering_from_word(word: Sequence[Tuple[str, int]], first: str = "x") -> Tuple[int, ...]:
    """Inverse of domain_order with `first` playing the x role."""
    seen_other = 0
    a = []
    for fam, _ in word:
        if fam == first:
            a.append(seen_other)
        else:
            seen_other += 1
    return tuple(a)


def swap_word(word: Sequence[Tuple[str, int]]) -> Tuple[Tuple[str, int], ...]:
    return tuple(("y" if f == "x" else "x", i) for f, i in word)


def _sinpi(x):
    return mpmath.sinpi(x)


def _check_denominator(value, context: str):
    if abs(value) < POLE_TOL:
        raise ChainConditionError(f"chain weight pole: {context} vanishes")


def non_integrality_holds(k1: int, k2: int, beta, gamma) -> bool:
    """beta + (i - k2 - 1) gamma is not an integer for 1 <= i <= min(k1, k2)."""
    with mpmath.workdps(WEIGHT_DPS):
        beta, gamma = mpmath.mpf(beta), mpmath.mpf(gamma)
        for i in range(1, min(k1, k2) + 1):
            v = beta + (i - k2 - 1) * gamma
            if abs(v - mpmath.nint(v)) < POLE_TOL:
                return False
    return True


def enumerate_chain(k1: int, k2: int, beta, gamma) -> List[WeightedDomain]:
    """
    C^{k1,k2}_{beta,gamma}: every ordering a with weight
        prod_i sin pi(beta - (i - a_i - k1 + k2) gamma) / sin pi(beta - (i - k1 + k2) gamma).
    """
    if not non_integrality_holds(k1, k2, beta, gamma):
        raise ChainConditionError(f"beta + (i-k2-1) gamma is an integer for beta={beta}, gamma={gamma}")
    out = []
    with mpmath.workdps(WEIGHT_DPS):
        beta, gamma = mpmath.mpf(beta), mpmath.mpf(gamma)
        dens = []
        for i in range(1, k1 + 1):
            d = _sinpi(beta - (i - k1 + k2) * gamma)
            _check_denominator(d, f"sin pi(beta - ({i - k1 + k2}) gamma)")
            dens.append(d)
        for a in orderings(k1, k2):
            w = mpmath.mpf(1)
            for i, ai in enumerate(a, start=1):
                w *= _sinpi(beta - (i - ai - k1 + k2) * gamma) / dens[i - 1]
            out.append(WeightedDomain(k1, k2, a, +w))
    logger.debug("chain (%d,%d) has %d domains", k1, k2, len(out))
    return out


def b_sequence(a: Sequence[int], k1: int, k2: int) -> Tuple[int, ...]:
    """Conjugation-complementation: b_j = #{i : a_i < j}, so that the two descriptions give the same cell."""
    return tuple(sum(1 for ai in a if ai < j) for j in range(1, k2 + 1))


def chain_b_form(k1: int, k2: int, beta, gamma) -> List[WeightedDomain]:
    """
    The same chain described through b = (b_1..b_k2), 0 <= b_1 <= ... <= b_k2 <= k1,
    with weights prod_j sin pi(beta + (j - b_j + k1 - k2 - 1) gamma) / sin pi(beta + (j - k2 - 1) gamma).
    Domains are returned labelled by the a-sequence of the same cell.
    """
    if not non_integrality_holds(k1, k2, beta, gamma):
        raise ChainConditionError(f"beta + (i-k2-1) gamma is an integer for beta={beta}, gamma={gamma}")
    out = []
    with mpmath.workdps(WEIGHT_DPS):
        beta, gamma = mpmath.mpf(beta), mpmath.mpf(gamma)
        dens = []
        for j in range(1, k2 + 1):
            d = _sinpi(beta + (j - k2 - 1) * gamma)
            _check_denominator(d, f"sin pi(beta + ({j - k2 - 1}) gamma)")
            dens.append(d)
        for b in orderings(k2, k1):
            w = mpmath.mpf(1)
            for j, bj in enumerate(b, start=1):
                w *= _sinpi(beta + (j - bj + k1 - k2 - 1) * gamma) / dens[j - 1]
            # the b-cell read with y in the x role
            word = swap_word(domain_order(b, k2, k1))
            out.append(WeightedDomain(k1, k2, ordering_from_word(word, "x"), +w))
    out.sort(key=lambda d: d.ordering)
    return out


def chain_tv(k1: int, k2: int, gamma) -> List[WeightedDomain]:
    """
    The beta = 1 chain with vanishing domains removed, indexed by M(i) = a_i + 1 subject to
    M(i) <= i - k1 + k2, weights prod_i sin pi((i - M(i) - k1 + k2 + 1) gamma) / sin pi((i - k1 + k2) gamma).
    """
    if k1 > k2:
        raise ChainConditionError(f"the beta = 1 chain needs k1 <= k2, got ({k1}, {k2})")
    out = []
    with mpmath.workdps(WEIGHT_DPS):
        gamma = mpmath.mpf(gamma)
        dens = []
        for i in range(1, k1 + 1):
            d = _sinpi((i - k1 + k2) * gamma)
            _check_denominator(d, f"sin pi({i - k1 + k2} gamma)")
            dens.append(d)
        for a in orderings(k1, k2):
            M = [ai + 1 for ai in a]
            if any(M[i - 1] > i - k1 + k2 for i in range(1, k1 + 1)):
                continue
            w = mpmath.mpf(1)
            for i, Mi in enumerate(M, start=1):
                w *= _sinpi((i - Mi - k1 + k2 + 1) * gamma) / dens[i - 1]
            out.append(WeightedDomain(k1, k2, a, +w))
    return out


def drop_vanishing(domains: Sequence[WeightedDomain], tol=mpmath.mpf("1e-25")) -> List[WeightedDomain]:
    return [d for d in domains if abs(d.weight) > tol]


def compare_chains(left: Sequence[WeightedDomain], right: Sequence[WeightedDomain], tol=mpmath.mpf("1e-25")) -> dict:
    """Domain-by-domain comparison keyed on the ordering; returns the first mismatch, if any."""
    lw = {d.ordering: d.weight for d in left}
    rw = {d.ordering: d.weight for d in right}
    if set(lw) != set(rw):
        missing = sorted(set(lw) ^ set(rw))
        return {"match": False, "mismatch": {"ordering": list(missing[0]), "reason": "domain present on one side only"}}
    worst = mpmath.mpf(0)
    for a in sorted(lw):
        with mpmath.workdps(WEIGHT_DPS):
            diff = abs(lw[a] - rw[a]) / max(abs(lw[a]), abs(rw[a]), mpmath.mpf(1))
        worst = max(worst, diff)
        if diff > tol:
            return {"match": False, "mismatch": {"ordering": list(a), "left": mpmath.nstr(lw[a], 20),
                                                 "right": mpmath.nstr(rw[a], 20)}}
    return {"match": True, "domains": len(lw), "max_rel_diff": mpmath.nstr(worst, 5)}
