"""Exact brute-force optima of modularity on small graphs.

``best_cut`` sweeps all ``2^(n-1)`` cuts, ``best_partition`` walks every set
partition once via restricted-growth strings.  Both break ties towards the
lexicographically smallest candidate and re-verify the winner through
:mod:`modspec.modularity`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import NumericalCheckError, OracleCapError
from .graph import Graph, Partition, VertexSet
from .modularity import build_modularity, modularity_Q, partition_modularity
from .spectral import eig_sym, sign_tolerance

__all__ = [
    "CUT_CAP",
    "PARTITION_CAP",
    "CutResult",
    "PartitionResult",
    "IndivisibilityResult",
    "OracleResult",
    "best_cut",
    "best_partition",
    "certify_indivisible",
    "solve",
]

CUT_CAP = 24
PARTITION_CAP = 12
_CHUNK = 1 << 15


def _tie_tol(g: Graph) -> float:
    return 1e-12 * max(1.0, g.volume)


def _cut_sweep(g: Graph):
    """Yield ``(codes, Q)`` chunks over all sets containing vertex 0.

    Bit ``k`` of a code says whether vertex ``k + 1`` is in the set.
    """
    n = g.n
    a, d, vol = g.adjacency, g.degree, g.volume
    bits = np.arange(n - 1, dtype=np.int64)
    total = 1 << (n - 1)
    for lo in range(0, total, _CHUNK):
        codes = np.arange(lo, min(total, lo + _CHUNK), dtype=np.int64)
        x = np.ones((len(codes), n))
        x[:, 1:] = (codes[:, None] >> bits) & 1
        q = np.einsum("ij,jk,ik->i", x, a, x) - (x @ d) ** 2 / vol
        yield codes, q


def _members(code: int, n: int) -> tuple[int, ...]:
    return (0,) + tuple(k + 1 for k in range(n - 1) if code >> k & 1)


@dataclass(frozen=True)
class CutResult:
    """Best cut ``{S, V - S}`` with ``0 in S``."""

    q_prime: float
    members: VertexSet
    modularity: float
    evaluated: int
    seconds: float


def best_cut(g: Graph, cap: int = CUT_CAP) -> CutResult:
    """Exact maximum of ``q(S) = 2 Q(S) / vol G`` over proper nonempty ``S``.

    Raises
    ------
    OracleCapError
        If ``n`` lies outside ``2..cap``.
    """
    if not 2 <= g.n <= cap:
        raise OracleCapError(f"best_cut handles 2 <= n <= {cap}; got n = {g.n}")
    t0 = time.perf_counter()
    full = (1 << (g.n - 1)) - 1
    tol = _tie_tol(g)
    best_q, tied = -np.inf, []
    for codes, q in _cut_sweep(g):
        q = np.where(codes == full, -np.inf, q)
        top = q.max()
        if top > best_q + tol:
            best_q, tied = top, []
        if top >= best_q - tol:
            tied.extend(int(c) for c in codes[q >= best_q - tol])
    members = min(_members(c, g.n) for c in tied)
    exact = modularity_Q(g, members)
    if abs(exact - best_q) > 1e-9 * max(1.0, g.volume):
        raise NumericalCheckError("best cut value does not re-verify")
    return CutResult(2 * exact / g.volume, VertexSet.of(g, members), exact, full,
                     time.perf_counter() - t0)


@dataclass(frozen=True)
class PartitionResult:
    """Optimal partition (the trivial one ``{V}`` included)."""

    q_star: float
    partition: Partition
    evaluated: int
    seconds: float


def best_partition(g: Graph, cap: int = PARTITION_CAP) -> PartitionResult:
    """Exact maximum of ``q(P)`` over all set partitions of ``V``.

    Partitions are generated as restricted-growth strings in lexicographic
    order and scored incrementally; the first strict maximum wins.
    """
    n = g.n
    if not 1 <= n <= cap:
        raise OracleCapError(f"best_partition handles 1 <= n <= {cap}; got n = {n}")
    if g.volume <= 0:
        raise ValueError("graph has no edges (vol G = 0); modularity is undefined")
    t0 = time.perf_counter()
    a = g.adjacency.tolist()
    d = g.degree.tolist()
    vol = g.volume
    tol = _tie_tol(g)
    labels = [0] * n
    vols: list[float] = []
    best = [-np.inf, None]
    leaves = [0]

    def visit(i: int, score: float) -> None:
        if i == n:
            leaves[0] += 1
            if score > best[0] + tol:
                best[0], best[1] = score, labels.copy()
            return
        row = a[i]
        links = [0.0] * (len(vols) + 1)
        for j in range(i):
            links[labels[j]] += row[j]
        di = d[i]
        for b in range(len(vols) + 1):
            if b == len(vols):
                vols.append(0.0)
            vb = vols[b]
            delta = row[i] + 2.0 * links[b] - ((vb + di) ** 2 - vb * vb) / vol
            labels[i] = b
            vols[b] = vb + di
            visit(i + 1, score + delta)
            vols[b] = vb
        vols.pop()

    labels[0] = 0
    vols.append(d[0])
    visit(1, a[0][0] - d[0] ** 2 / vol)
    rgs = best[1]
    blocks = [[i for i in range(n) if rgs[i] == b] for b in range(max(rgs) + 1)]
    part = Partition.of(g, blocks)
    q = partition_modularity(g, part)
    if abs(q * vol - best[0]) > 1e-9 * max(1.0, vol):
        raise NumericalCheckError("best partition value does not re-verify")
    return PartitionResult(q, part, leaves[0], time.perf_counter() - t0)


@dataclass(frozen=True)
class IndivisibilityResult:
    indivisible: bool
    witness: VertexSet | None
    max_modularity: float
    algebraically_indivisible: bool


def certify_indivisible(g: Graph, cap: int = CUT_CAP) -> IndivisibilityResult:
    """Decide exhaustively whether every proper subset has ``Q(S) <= 0``.

    The answer is checked against the one-way implication: a graph whose
    modularity matrix has no positive eigenvalue must be indivisible.
    """
    if g.n > cap:
        raise OracleCapError(f"certify_indivisible handles n <= {cap}; got n = {g.n}")
    m = build_modularity(g)
    algebraic = bool(eig_sym(m.matrix, "M").values[0] <= sign_tolerance(m.matrix))
    if g.n == 1:
        return IndivisibilityResult(True, None, 0.0, algebraic)
    cut = best_cut(g, cap)
    tol = 1e-10 * max(1.0, g.volume)
    indivisible = cut.modularity <= tol
    if algebraic and not indivisible:
        raise NumericalCheckError(
            "graph is algebraically indivisible but has a community; spectrum is unreliable")
    return IndivisibilityResult(indivisible, None if indivisible else cut.members,
                                cut.modularity, algebraic)


@dataclass(frozen=True)
class OracleResult:
    cut: CutResult | None
    partition: PartitionResult | None

    @property
    def q_prime(self) -> float | None:
        return self.cut.q_prime if self.cut else None

    @property
    def q_star(self) -> float | None:
        return self.partition.q_star if self.partition else None


def solve(g: Graph, cut_cap: int = CUT_CAP, partition_cap: int = PARTITION_CAP) -> OracleResult:
    """Run whichever oracles fit under their caps and cross-check them."""
    cut = best_cut(g, cut_cap) if 2 <= g.n <= cut_cap else None
    part = best_partition(g, partition_cap) if g.n <= partition_cap else None
    if cut and part:
        if part.q_star < cut.q_prime - 1e-12:
            raise NumericalCheckError("q_G below q'_G although every cut is a partition")
        floor = float(np.trace(build_modularity(g).matrix)) / g.volume
        if part.q_star < floor - 1e-12:
            raise NumericalCheckError("q_G below the singleton-partition value")
    return OracleResult(cut, part)
