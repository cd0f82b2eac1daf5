"""Inequalities linking modularity optima to the spectrum of ``M``.

Every check returns a :class:`BoundRecord` describing ``lhs <= rhs``.  A
record holds when ``rhs - lhs >= -1e-8 (1 + |rhs|)``.  Checks whose
left-hand side needs an exhaustive search report ``holds = None`` when
the graph exceeds the search cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import NumericalCheckError, PreconditionError
from .graph import Graph, Partition, VertexSet, require_connected
from .modularity import build_modularity, joint_modularity, modularity_Q
from .oracle import CUT_CAP, PARTITION_CAP, OracleResult, best_cut, solve
from .spectral import algebraic_connectivity, algebraic_modularity, eig_sym, sign_tolerance

__all__ = [
    "BoundRecord",
    "BoundsReport",
    "SweepResult",
    "bound_tolerance",
    "check_subset_bound",
    "check_subset_bound_all",
    "check_qprime_bound",
    "check_qG_upper",
    "check_qG_lower",
    "check_trace_product",
    "check_communities1",
    "check_communities2",
    "check_partition_cardinality",
    "sweep_cut",
    "verify_all",
]

SUBSET_SWEEP_CAP = 16


def bound_tolerance(rhs: float) -> float:
    return 1e-8 * (1.0 + abs(rhs))


@dataclass(frozen=True)
class BoundRecord:
    """One inequality ``lhs <= rhs`` and whether it held."""

    name: str
    lhs: float | None
    rhs: float | None
    slack: float | None
    holds: bool | None
    tolerance: float | None
    detail: str = ""

    @classmethod
    def compare(cls, name: str, lhs: float, rhs: float, detail: str = "") -> "BoundRecord":
        lhs, rhs = float(lhs), float(rhs)
        tol = bound_tolerance(rhs)
        slack = rhs - lhs
        return cls(name, lhs, rhs, slack, bool(slack >= -tol), tol, detail)

    @classmethod
    def skip(cls, name: str, reason: str, rhs: float | None = None) -> "BoundRecord":
        return cls(name, None, rhs, None, None, None, f"skipped: {reason}")

    @property
    def skipped(self) -> bool:
        return self.holds is None

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("name", "lhs", "rhs", "slack", "holds", "tolerance", "detail")}


@dataclass
class BoundsReport:
    """All bound records for one graph plus the exact optima used."""

    records: list[BoundRecord] = field(default_factory=list)
    q_G: float | None = None
    q_prime: float | None = None
    m_value: float | None = None

    @property
    def violations(self) -> list[BoundRecord]:
        return [r for r in self.records if r.holds is False]

    @property
    def holds(self) -> bool:
        return not self.violations

    def __getitem__(self, name: str) -> BoundRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "records": [r.to_dict() for r in self.records],
            "q_G": self.q_G,
            "q_prime": self.q_prime,
            "m_value": self.m_value,
            "holds": self.holds,
        }


def _m(g: Graph, m_value: float | None) -> float:
    if m_value is not None:
        return m_value
    require_connected(g, "m(G)")
    return algebraic_modularity(g).value


def _positive_count(g: Graph) -> int:
    mat = build_modularity(g).matrix
    return int(np.sum(eig_sym(mat, "M").values > sign_tolerance(mat)))


def check_subset_bound(g: Graph, s: Iterable[int], m_value: float | None = None) -> BoundRecord:
    """``Q(S) <= m(G) |S| |V - S| / n`` for one set ``S``."""
    vs = VertexSet.of(g, s)
    m = _m(g, m_value)
    q = modularity_Q(g, vs)
    return BoundRecord.compare("subset_bound", q, m * len(vs) * (g.n - len(vs)) / g.n,
                               f"S = {list(vs.members)}")


def check_subset_bound_all(g: Graph, cap: int = SUBSET_SWEEP_CAP,
                           m_value: float | None = None) -> BoundRecord:
    """The subset bound over every nonempty ``S``, reporting the tightest one.

    Sets containing vertex 0 suffice because both sides are invariant
    under complementation.
    """
    if g.n > cap:
        return BoundRecord.skip("subset_bound_all", f"n = {g.n} exceeds the sweep cap {cap}")
    m = _m(g, m_value)
    n = g.n
    codes = np.arange(1 << (n - 1), dtype=np.int64)
    x = np.ones((len(codes), n))
    x[:, 1:] = (codes[:, None] >> np.arange(n - 1)) & 1
    q = np.einsum("ij,jk,ik->i", x, g.adjacency, x) - (x @ g.degree) ** 2 / g.volume
    size = x.sum(axis=1)
    rhs = m * size * (n - size) / n
    tol = 1e-8 * (1.0 + np.abs(rhs))
    margin = rhs - q + tol
    if n >= 2:
        margin[-1] = np.inf  # S = V is an equality and says nothing
    worst = int(np.argmin(margin))
    members = [0] + [k + 1 for k in range(n - 1) if codes[worst] >> k & 1]
    ok = bool(np.all(rhs - q >= -tol))
    rec = BoundRecord.compare("subset_bound_all", q[worst], rhs[worst],
                              f"tightest of {len(codes)} sets: S = {members}")
    if rec.holds != ok:
        raise NumericalCheckError("tightest subset does not decide the sweep")
    return rec


def check_qprime_bound(g: Graph, cap: int = CUT_CAP, oracle: OracleResult | None = None,
                       m_value: float | None = None) -> BoundRecord:
    """Best cut modularity ``q'_G <= m(G) / (2 <d>)`` with ``<d> = vol G / n``."""
    m = _m(g, m_value)
    rhs = m * g.n / (2 * g.volume)
    q_prime = oracle.q_prime if oracle else (best_cut(g, cap).q_prime if g.n <= cap else None)
    if q_prime is None:
        return BoundRecord.skip("qprime_upper", f"n = {g.n} exceeds the cut oracle cap", rhs)
    return BoundRecord.compare("qprime_upper", q_prime, rhs)


def check_qG_upper(g: Graph, cap: int = PARTITION_CAP, oracle: OracleResult | None = None,
                   m_value: float | None = None) -> BoundRecord:
    """Best partition modularity ``q_G <= (n - 1) m(G) / vol G``."""
    m = _m(g, m_value)
    rhs = (g.n - 1) * m / g.volume
    q = oracle.q_star if oracle else (solve(g, 0, cap).q_star if g.n <= cap else None)
    if q is None:
        return BoundRecord.skip("qG_upper", f"n = {g.n} exceeds the partition oracle cap", rhs)
    return BoundRecord.compare("qG_upper", q, rhs)


def check_qG_lower(g: Graph, cap: int = PARTITION_CAP,
                   oracle: OracleResult | None = None) -> BoundRecord:
    """``q_G >= trace(M) / vol G``, the value of the all-singletons partition."""
    floor = float(np.trace(build_modularity(g).matrix)) / g.volume
    q = oracle.q_star if oracle else (solve(g, 0, cap).q_star if g.n <= cap else None)
    if q is None:
        return BoundRecord.skip("qG_lower", f"n = {g.n} exceeds the partition oracle cap")
    return BoundRecord.compare("qG_lower", floor, q)


def check_trace_product(a: np.ndarray, b: np.ndarray) -> BoundRecord:
    """``trace(AB) <= sum_i lambda_i(A) lambda_i(B)``, both spectra descending."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"need two square matrices of one order, got {a.shape} and {b.shape}")
    la = eig_sym(a, "A").values
    lb = eig_sym(b, "B").values
    return BoundRecord.compare("trace_product", float(np.sum(a * b.T)), float(la @ lb))


def check_communities1(g: Graph, sets: Iterable[Iterable[int]]) -> BoundRecord:
    """``k`` disjoint sets with ``vol S <= vol G / 2`` and ``2|E(S)| > |dS|`` force
    ``k - 1`` positive eigenvalues of ``M``.

    The record compares ``k - 1`` with the positive count and also fails if
    any ``Q(S_i)`` is not positive.

    Raises
    ------
    PreconditionError
        Naming each set and the hypothesis it fails.
    """
    vs = [VertexSet.of(g, s) for s in sets]
    problems = []
    seen: set[int] = set()
    for i, s in enumerate(vs):
        if not len(s):
            problems.append(f"set {i} is empty")
        if seen.intersection(s.members):
            problems.append(f"set {i} overlaps an earlier set")
        seen.update(s.members)
        if s.volume > g.volume / 2 * (1 + 1e-12):
            problems.append(f"set {i}: vol S = {s.volume:g} > vol G / 2 = {g.volume / 2:g}")
        if not s.internal_weight > s.boundary_weight:
            problems.append(f"set {i}: 2|E(S)| = {s.internal_weight:g} "
                            f"<= |dS| = {s.boundary_weight:g}")
    if problems:
        raise PreconditionError("; ".join(problems))
    qs = [modularity_Q(g, s) for s in vs]
    rec = BoundRecord.compare("communities1", len(vs) - 1, _positive_count(g),
                              f"Q(S_i) = {qs}")
    if min(qs, default=1.0) <= 0:
        rec = BoundRecord(rec.name, rec.lhs, rec.rhs, rec.slack, False, rec.tolerance,
                          rec.detail + "; some Q(S_i) <= 0")
    return rec


def check_communities2(g: Graph, p: Partition | Iterable[Iterable[int]]) -> BoundRecord:
    """A partition into ``k >= 2`` sets with ``Q(S_i) >= 0`` and pairwise
    ``Q(S_i, S_j) <= 0`` forces ``k - 1`` positive eigenvalues of ``M``.

    Raises
    ------
    PreconditionError
        If ``g`` is disconnected, ``k < 2``, or a modularity sign condition fails.
    """
    require_connected(g, "the community-count theorem")
    if not isinstance(p, Partition):
        p = Partition.of(g, p)
    blocks = list(p)
    if len(blocks) < 2:
        raise PreconditionError("the partition needs at least two sets")
    tol = 1e-10 * max(1.0, g.volume)
    problems = []
    for i, s in enumerate(blocks):
        q = modularity_Q(g, s)
        if q < -tol:
            problems.append(f"set {i}: Q(S) = {q:.6g} < 0")
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            qj = joint_modularity(g, blocks[i], blocks[j])
            if qj > tol:
                problems.append(f"sets {i},{j}: Q(S_i, S_j) = {qj:.6g} > 0")
    if problems:
        raise PreconditionError("; ".join(problems))
    return BoundRecord.compare("communities2", len(blocks) - 1, _positive_count(g))


def check_partition_cardinality(g: Graph, cap: int = PARTITION_CAP,
                                oracle: OracleResult | None = None) -> BoundRecord:
    """The optimal partition has at most ``#{lambda_i(M) > 0} + 1`` sets."""
    rhs = _positive_count(g) + 1
    part = oracle.partition if oracle else (solve(g, 0, cap).partition if g.n <= cap else None)
    if part is None:
        return BoundRecord.skip("partition_cardinality",
                                f"n = {g.n} exceeds the partition oracle cap", rhs)
    return BoundRecord.compare("partition_cardinality", len(part.partition), rhs)


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Best threshold cut of the ``m(G)`` eigenvector on a regular graph."""

    q_star: float
    best_set: VertexSet
    lower_bound: float
    holds: bool
    k: float
    m_value: float
    vector: np.ndarray
    corollary_lower: float
    corollary_upper: float
    q_prime: float | None
    corollary_holds: bool | None

    def records(self) -> list[BoundRecord]:
        out = [BoundRecord.compare("sweep_lower", self.lower_bound, self.q_star)]
        if self.q_prime is None:
            out.append(BoundRecord.skip("cheeger_lower", "q'_G not computed"))
            out.append(BoundRecord.skip("cheeger_upper", "q'_G not computed"))
        else:
            out.append(BoundRecord.compare("cheeger_lower", self.corollary_lower, self.q_prime))
            out.append(BoundRecord.compare("cheeger_upper", self.q_prime, self.corollary_upper))
        return out


def sweep_cut(g: Graph, cap: int = CUT_CAP) -> SweepResult:
    """Threshold sweep along the algebraic-modularity eigenvector ``f``.

    Every set ``{j : f_j >= w}`` for ``w`` a value of ``f`` other than the
    minimum (and likewise for ``-f``) is scored; ``Q*`` is the best score.
    The result records the lower bound
    ``((k/2)||f||_1 - ||f||_2 sqrt((k - m) k n / 2)) / (w_1 - w_n)`` and the
    two-sided estimate ``1/(2n) - sqrt((k - m)/(2k)) <= q'_G <= m/(2k)``,
    with ``q'_G`` taken from the cut oracle when ``n <= cap``.

    Raises
    ------
    PreconditionError
        If the graph is disconnected, weighted, has loops, is not regular,
        or the eigenvector is constant.
    """
    require_connected(g, "the sweep cut")
    if g.has_loops or not g.is_unweighted:
        raise PreconditionError("the sweep cut needs a simple unweighted graph")
    k = g.regular_degree()
    if k is None:
        raise PreconditionError(
            f"the sweep cut needs a k-regular graph; degrees range over [{g.d_min:g}, {g.d_max:g}]")
    am = algebraic_modularity(g)
    a_val, _ = algebraic_connectivity(g, "L")
    if abs(am.value - (k - a_val)) > 1e-8 * (1.0 + k):
        raise NumericalCheckError(f"m(G) = {am.value!r} but k - a(G) = {k - a_val!r}")
    f = am.vector
    w1, wn = float(f.max()), float(f.min())
    if w1 - wn <= 1e-12 * max(1.0, float(np.abs(f).max())):
        raise PreconditionError("the eigenvector is constant; no threshold cut exists")
    best, best_q = None, -math.inf
    for vec in (f, -f):
        for w in np.unique(vec)[1:]:
            s = np.nonzero(vec >= w)[0]
            q = modularity_Q(g, s)
            if q > best_q:
                best, best_q = s, q
    n, m = g.n, am.value
    lower = ((k / 2) * np.abs(f).sum()
             - np.linalg.norm(f) * math.sqrt(max(0.0, (k - m) * k * n / 2))) / (w1 - wn)
    holds = best_q >= lower - bound_tolerance(best_q)
    c_low = 1 / (2 * n) - math.sqrt(max(0.0, (k - m) / (2 * k)))
    c_up = m / (2 * k)
    q_prime = best_cut(g, cap).q_prime if n <= cap else None
    chain = None
    if q_prime is not None:
        chain = bool(c_low <= q_prime + bound_tolerance(q_prime)
                     and q_prime <= c_up + bound_tolerance(c_up))
    return SweepResult(best_q, VertexSet.of(g, best), float(lower), bool(holds), k, m, f,
                       c_low, c_up, q_prime, chain)


def verify_all(g: Graph, cut_cap: int = CUT_CAP, partition_cap: int = PARTITION_CAP) -> BoundsReport:
    """Run every applicable inequality on ``g``.

    Spectral bounds are skipped with a reason on disconnected graphs, exact
    ones when the oracle caps are exceeded.
    """
    report = BoundsReport()
    if g.volume <= 0:
        report.records.append(BoundRecord.skip("all", "graph has no edges"))
        return report
    oracle = OracleResult(
        best_cut(g, cut_cap) if 2 <= g.n <= cut_cap else None,
        solve(g, 0, partition_cap).partition if g.n <= partition_cap else None,
    )
    report.q_G, report.q_prime = oracle.q_star, oracle.q_prime
    recs = report.records
    if oracle.q_star is None:
        recs.append(BoundRecord.skip("qG_lower", f"n = {g.n} exceeds the partition oracle cap"))
    else:
        recs.append(check_qG_lower(g, partition_cap, oracle))
    connected = g.is_connected() and g.n >= 2
    spectral = ("subset_bound_all", "qprime_upper", "qG_upper", "partition_cardinality",
                "communities1", "communities2", "trace_product", "sweep_lower",
                "cheeger_lower", "cheeger_upper")
    if not connected:
        reason = "graph is disconnected" if g.n >= 2 else "graph has one vertex"
        recs.extend(BoundRecord.skip(name, reason) for name in spectral)
        return report
    m = algebraic_modularity(g).value
    report.m_value = m
    recs.append(check_subset_bound_all(g, m_value=m))
    for rec in (check_qprime_bound(g, cut_cap, oracle, m) if oracle.cut else
                BoundRecord.skip("qprime_upper", "cut oracle cap exceeded"),
                check_qG_upper(g, partition_cap, oracle, m) if oracle.partition else
                BoundRecord.skip("qG_upper", "partition oracle cap exceeded"),
                check_partition_cardinality(g, partition_cap, oracle) if oracle.partition else
                BoundRecord.skip("partition_cardinality", "partition oracle cap exceeded")):
        recs.append(rec)
    recs.extend(_partition_checks(g, oracle))
    if g.regular_degree() is not None and g.is_unweighted and not g.has_loops:
        recs.extend(sweep_cut(g, cut_cap).records())
    else:
        recs.extend(BoundRecord.skip(name, "graph is not simple and regular")
                    for name in ("sweep_lower", "cheeger_lower", "cheeger_upper"))
    return report


def _partition_checks(g: Graph, oracle: OracleResult) -> list[BoundRecord]:
    """Community-count and trace checks driven by the optimal partition."""
    names = ("communities1", "communities2", "trace_product")
    if oracle.partition is None:
        return [BoundRecord.skip(x, "partition oracle cap exceeded") for x in names]
    part = oracle.partition.partition
    out = []
    communities = [b for b in part
                   if b.volume <= g.volume / 2 and b.internal_weight > b.boundary_weight]
    out.append(check_communities1(g, communities) if communities else
               BoundRecord.skip("communities1", "no block of the optimal partition qualifies"))
    if len(part) >= 2:
        try:
            out.append(check_communities2(g, part))
        except PreconditionError as exc:
            out.append(BoundRecord.skip("communities2", str(exc)))
    else:
        out.append(BoundRecord.skip("communities2", "optimal partition is {V}"))
    z = part.index_matrix()
    out.append(check_trace_product(build_modularity(g).matrix, z @ z.T))
    return out
