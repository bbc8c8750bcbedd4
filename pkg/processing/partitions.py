from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Iterator, List, Optional, Tuple


class PartitionError(ValueError):
    """Raised for malformed partitions, cells outside a diagram, weight mismatches or box overflow."""


class Partition(tuple):
    """
    Weakly decreasing sequence of nonnegative integers with trailing zeros stripped.
    Two sequences that differ only in their string of zeros are the same partition;
    the empty tuple is the partition 0.

    Being a tuple subclass, a Partition is immutable, hashable, ordered lexicographically
    and serializes to JSON as a plain list such as [3, 1].
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for p in parts:
            if p < 0:
                raise PartitionError(f"not a partition: negative part in {parts}")
        for i in range(len(parts) - 1):
            if parts[i] < parts[i + 1]:
                raise PartitionError(f"not a partition: {parts} is not weakly decreasing")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        return super().__new__(cls, parts)

    def __repr__(self):
        return f"Partition({list(self)})"

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """1-based part lookup, zero beyond the length (the padded view)."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def padded(self, n: int) -> Tuple[int, ...]:
        if len(self) > n:
            raise PartitionError(f"{list(self)} has more than {n} parts")
        return tuple(self) + (0,) * (n - len(self))

    def conjugate(self) -> "Partition":
        return conjugate(self)


@dataclass(frozen=True)
class Cell:
    row: int  # 1-based row index i
    col: int  # 1-based column index j


def as_partition(parts) -> Partition:
    return parts if isinstance(parts, Partition) else Partition(parts)


@lru_cache(maxsize=None)
def _conjugate(parts: Tuple[int, ...]) -> Tuple[int, ...]:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= j) for j in range(1, parts[0] + 1))


def conjugate(lam) -> Partition:
    """lambda'_j = #{i : lambda_i >= j}."""
    lam = as_partition(lam)
    return Partition(_conjugate(tuple(lam)))


def arm_leg(lam, s: Cell) -> Tuple[int, int, int, int]:
    """
    Arm-length, arm-colength, leg-length and leg-colength of the cell s in lambda.
    Output:
        (a, a', l, l') = (lambda_i - j, j - 1, lambda'_j - i, i - 1)
    """
    lam = as_partition(lam)
    i, j = s.row, s.col
    if i < 1 or j < 1 or j > lam.part(i):
        raise PartitionError(f"cell ({i},{j}) outside diagram {list(lam)}")
    lamc = conjugate(lam)
    return lam.part(i) - j, j - 1, lamc.part(j) - i, i - 1


def cells(lam) -> Iterator[Cell]:
    lam = as_partition(lam)
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            yield Cell(i, j)


def n_stat(lam) -> int:
    """n(lambda) = sum (i-1) lambda_i."""
    return sum(i * p for i, p in enumerate(as_partition(lam)))


def multiplicity(lam, i: int) -> int:
    return sum(1 for p in as_partition(lam) if p == i)


def z_lambda(lam) -> int:
    """z_lambda = prod_i m_i! i^{m_i}, the centralizer order entering the power-sum scalar product."""
    lam = as_partition(lam)
    z = 1
    for i in set(lam):
        m = multiplicity(lam, i)
        z *= factorial(m) * i ** m
    return z


def dominance_leq(mu, lam) -> bool:
    mu, lam = as_partition(mu), as_partition(lam)
    if mu.weight != lam.weight:
        raise PartitionError(f"weight mismatch: |{list(mu)}| != |{list(lam)}|")
    s_mu = s_lam = 0
    for i in range(max(len(mu), len(lam))):
        s_mu += mu.part(i + 1)
        s_lam += lam.part(i + 1)
        if s_mu > s_lam:
            return False
    return True


def contains(lam, mu) -> bool:
    """True iff the diagram of mu sits inside the diagram of lambda."""
    lam, mu = as_partition(lam), as_partition(mu)
    if len(mu) > len(lam):
        return False
    return all(m <= l for m, l in zip(mu, lam))


def complement(lam, N: int, n: int) -> Partition:
    """Complement inside the rectangle (N^n): result_i = N - lambda_{n-i+1}."""
    lam = as_partition(lam)
    if len(lam) > n or (lam and lam[0] > N):
        raise PartitionError(f"{list(lam)} exceeds the box ({N}^{n})")
    padded = lam.padded(n)
    return Partition(N - padded[n - i - 1] for i in range(n))


@lru_cache(maxsize=None)
def _partitions_of(d: int, max_part: int) -> Tuple[Tuple[int, ...], ...]:
    # reverse-lexicographic: largest first part first
    if d == 0:
        return ((),)
    out = []
    for first in range(min(d, max_part), 0, -1):
        for rest in _partitions_of(d - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(d: int, max_length: Optional[int] = None, max_part: Optional[int] = None) -> List[Partition]:
    """All partitions of d in reverse-lexicographic order, optionally bounded."""
    if d < 0:
        return []
    bound = d if max_part is None else min(d, max_part)
    out = []
    for parts in _partitions_of(d, bound):
        if max_length is not None and len(parts) > max_length:
            continue
        out.append(Partition(parts))
    return out


def enumerate_partitions(max_weight: int, max_length: int, max_part: int) -> List[Partition]:
    """
    Every partition satisfying the bounds exactly once, graded by weight and
    reverse-lexicographic within a weight. The order is part of the report contract.
    """
    out = []
    for d in range(max_weight + 1):
        out.extend(partitions_of(d, max_length=max_length, max_part=max_part))
    return out


def in_box(N: int, n: int) -> List[Partition]:
    return enumerate_partitions(N * n, n, N)


class GeneralizedPartition(tuple):
    """
    Weakly decreasing integer sequence of fixed length n, negative parts allowed.
    Decomposes as kappa + (s^n) with kappa an honest partition whose n-th part is zero.
    """

    def __new__(cls, parts: Iterable[int]):
        parts = tuple(int(p) for p in parts)
        for i in range(len(parts) - 1):
            if parts[i] < parts[i + 1]:
                raise PartitionError(f"not weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    def shift(self, k: int) -> "GeneralizedPartition":
        return GeneralizedPartition(p + k for p in self)

    def split(self) -> Tuple[Partition, int]:
        if not self:
            return Partition(), 0
        s = self[-1]
        return Partition(p - s for p in self), s

    def is_partition(self) -> bool:
        return not self or self[-1] >= 0


def generalized_window(n: int, min_part: int, max_weight: int, max_part: Optional[int] = None) -> List[GeneralizedPartition]:
    """
    Generalized partitions of length n with last part >= min_part and weight <= max_weight,
    ordered by last part then by the shape of kappa.
    """
    if n == 0:
        return [GeneralizedPartition(())]
    out = []
    top = max_weight - min_part * (n - 1) if max_part is None else max_part
    for s in range(min_part, top + 1):
        budget = max_weight - n * s
        if budget < 0:
            break
        for kappa in enumerate_partitions(budget, n - 1, top - s):
            out.append(GeneralizedPartition(tuple(p + s for p in kappa.padded(n))))
    return out


def binom(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
