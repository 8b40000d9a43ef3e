"""Exact moments of a mosaic field with a fixed number of sets.

Sums over every pair (I, J) of subsets of {1..n}, weighting each pair by
P(x in C_I, y in C_J) = p1^|I&J| p2^|I-J| p3^|J-I| p4^(n-|I|J|). Index sets
are bitmasks; the inner sum over J is vectorised. Ground truth for the
closed forms in :mod:`models.analytics`.
"""
from __future__ import annotations

import logging
from typing import Callable, Optional, Sequence

import numpy as np

from models.distributions import CountDistribution, ValueDistribution
from models.exceptions import BudgetError, DomainError
from models.random_sets import check_hit_probabilities

logger = logging.getLogger(__name__)

ORACLE_MAX_N = 14
ORACLE_QUANTILE = 1.0 - 1e-10

# f(i, j) for one fixed n, vectorised over integer arrays
CellSize = Callable[[np.ndarray, np.ndarray], np.ndarray]
IndexMembers = Callable[[Sequence[int]], np.ndarray]


def _popcounts(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros(masks.size, dtype=np.int64)
    for bit in range(n):
        counts += (masks >> bit) & 1
    return counts


def _bit_lengths(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    lengths = np.zeros(masks.size, dtype=np.int64)
    for bit in range(n):
        lengths[(masks >> bit) > 0] = bit + 1
    return lengths


def _mask_members(mask: int, n: int):
    return [i + 1 for i in range(n) if mask >> i & 1]


class _Enumeration:
    """Per-n tables shared by the three mixed-moment sums of one report."""

    def __init__(self, n: int, f: Optional[CellSize], g_kind: str, family: Optional[IndexMembers]):
        if n > ORACLE_MAX_N:
            raise BudgetError(f"enumeration oracle handles n <= {ORACLE_MAX_N}, got n={n}")
        if n < 0:
            raise DomainError(f"n must be >= 0, got {n}")
        if f is None and family is None:
            raise DomainError("enumeration oracle needs f or an index family")
        self.n = n
        self.g_kind = g_kind
        self.masks = np.arange(1 << n, dtype=np.int64)
        self.pc = _popcounts(n)
        self.blen = _bit_lengths(n) if g_kind == "max_index" else None
        self.f = f
        self.id_matrix = None
        if family is not None:
            rows = [family(_mask_members(int(m), n)) for m in self.masks]
            width = max((int(r.max()) + 1 for r in rows if len(r)), default=0)
            self.id_matrix = np.zeros((self.masks.size, width), dtype=np.int64)
            for k, r in enumerate(rows):
                self.id_matrix[k, np.asarray(r, dtype=np.int64)] = 1

    def sizes(self) -> np.ndarray:
        """|I_I| for every I."""
        if self.id_matrix is not None:
            return self.id_matrix.sum(axis=1).astype(float)
        return np.asarray(self.f(self.pc, np.zeros_like(self.pc)), dtype=float)

    def overlaps(self, i: int) -> np.ndarray:
        """|I_I & I_J| for fixed I and every J."""
        if self.id_matrix is not None:
            return (self.id_matrix @ self.id_matrix[i]).astype(float)
        inter = self.pc[i & self.masks]
        sym = self.pc[i ^ self.masks]
        return np.asarray(self.f(inter, sym), dtype=float)

    def same_cell_value(self, i: int) -> np.ndarray:
        if self.g_kind == "constant":
            return np.ones(self.masks.size, dtype=bool)
        if self.g_kind == "injective":
            return self.masks == i
        if self.g_kind == "max_index":
            return self.blen == self.blen[i]
        raise DomainError(f"unknown g kind {self.g_kind!r}")

    def single(self, p: float, sizes: np.ndarray) -> float:
        weights = np.power(p, self.pc) * np.power(1.0 - p, self.n - self.pc)
        return float(weights @ sizes)

    def pair(self, p_x: float, p_y: float, p_xy: float, sizes: np.ndarray, value: ValueDistribution) -> float:
        p1, p2, p3 = p_xy, p_x - p_xy, p_y - p_xy
        p4 = max(0.0, 1.0 - p_x - p_y + p_xy)
        p2, p3 = max(p2, 0.0), max(p3, 0.0)
        total = 0.0
        for i in self.masks:
            i = int(i)
            only_i = self.pc[i & ~self.masks]
            only_j = self.pc[self.masks & ~i]
            inter = self.pc[i & self.masks]
            union = self.pc[i | self.masks]
            prob = (
                np.power(p1, inter) * np.power(p2, only_i)
                * np.power(p3, only_j) * np.power(p4, self.n - union)
            )
            shared = np.where(self.same_cell_value(i), self.overlaps(i), 0.0)
            total += float(prob @ (value.variance * shared + value.mean ** 2 * sizes[i] * sizes))
        return total


def enumerate_raw(n, f, g_kind, p_x, p_y, p_xy, value, family=None):
    """(mean_x, mean_y, E Z(x)Z(y), E Z(x)^2, E Z(y)^2) given N = n."""
    check_hit_probabilities(p_x, p_y, p_xy)
    table = _Enumeration(int(n), f, g_kind, family)
    sizes = table.sizes()
    mean_x = value.mean * table.single(p_x, sizes)
    mean_y = value.mean * table.single(p_y, sizes)
    mxy = table.pair(p_x, p_y, p_xy, sizes, value)
    mxx = table.pair(p_x, p_x, p_x, sizes, value)
    myy = table.pair(p_y, p_y, p_y, sizes, value)
    return np.array([mean_x, mean_y, mxy, mxx, myy])


def enumerate_raw_over_count(count: CountDistribution, f_for_n, g_kind, p_x, p_y, p_xy, value, family_for_n=None):
    """Raw moments mixed over N, truncated at the 1 - 1e-10 quantile."""
    table = count.series_table(mass=ORACLE_QUANTILE)
    if len(table) - 1 > ORACLE_MAX_N:
        raise BudgetError(
            f"count {count.kind} needs n up to {len(table) - 1} for the enumeration oracle, limit {ORACLE_MAX_N}"
        )
    raw = np.zeros(5)
    for n, weight in enumerate(table):
        if weight == 0.0:
            continue
        family = family_for_n(n) if family_for_n is not None else None
        f = f_for_n(n) if f_for_n is not None else None
        raw += weight * enumerate_raw(n, f, g_kind, p_x, p_y, p_xy, value, family)
    raw /= table.sum()
    logger.debug("oracle mixed over %d values of N", len(table))
    return raw
