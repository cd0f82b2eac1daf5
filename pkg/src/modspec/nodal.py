"""Signed nodal domains of vectors on a graph, and the domain-count theorems.

A strong nodal domain is a maximal connected set on which the vector is
strictly positive (or strictly negative); a weak one allows zeros but must
contain at least one nonzero entry.  Entries with ``|u_i| <= tau`` count as
zero, where ``tau = 1e-10 ||u||_inf`` unless given explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .errors import PreconditionError
from .graph import (Graph, VertexSet, _components_within, connected_components,
                    induced_subgraph, require_connected)
from .modularity import build_laplacians, build_modularity
from .spectral import Spectrum, eig_sym, eigen_counts

__all__ = [
    "NodalDomain",
    "NodalDomainReport",
    "NodalBoundReport",
    "zero_threshold",
    "orient",
    "strong_domains",
    "weak_domains",
    "nodal_domains",
    "property_violations",
    "check_positive_bound",
    "check_laplacian_bound",
    "check_general_theorem",
]

ZERO_RTOL = 1e-10


@dataclass(frozen=True)
class NodalDomain:
    vertices: VertexSet
    sign: int

    @property
    def members(self) -> tuple[int, ...]:
        return self.vertices.members


def zero_threshold(u: np.ndarray) -> float:
    return ZERO_RTOL * float(np.abs(u).max())


def _nonzero(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or not np.any(u != 0):
        raise ValueError("nodal domains are defined for nonzero vectors only")
    return u


def orient(u: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Return ``u`` or ``-u`` so that ``d'u >= 0``.

    When ``d'u`` vanishes to working precision the sign is fixed by making
    the first nonzero entry positive.
    """
    u = _nonzero(u)
    d = np.asarray(d, dtype=float)
    dot = float(d @ u)
    tol = 1e-10 * float(np.abs(d).sum()) * float(np.abs(u).max())
    if abs(dot) > tol:
        return u.copy() if dot > 0 else -u
    first = u[np.abs(u) > zero_threshold(u)][0]
    return u.copy() if first > 0 else -u


def _signed_components(g: Graph, u: np.ndarray, sign: int, mask: np.ndarray,
                       nonzero: np.ndarray) -> list[NodalDomain]:
    out = []
    for comp in _components_within(g, mask):
        if nonzero[comp].any():
            out.append(NodalDomain(VertexSet.of(g, comp), sign))
    return out


def _sorted(domains: list[NodalDomain]) -> list[NodalDomain]:
    return sorted(domains, key=lambda dm: (dm.members[0], -dm.sign, dm.members))


def strong_domains(g: Graph, u: np.ndarray, tau: float | None = None) -> list[NodalDomain]:
    """Components of ``{u > tau}`` and ``{u < -tau}``, with their signs."""
    u = _nonzero(u)
    tau = zero_threshold(u) if tau is None else tau
    nonzero = np.abs(u) > tau
    return _sorted(_signed_components(g, u, 1, u > tau, nonzero)
                   + _signed_components(g, u, -1, u < -tau, nonzero))


def weak_domains(g: Graph, u: np.ndarray, tau: float | None = None) -> list[NodalDomain]:
    """Components of ``{u >= -tau}`` and ``{u <= tau}`` holding a nonzero entry."""
    u = _nonzero(u)
    tau = zero_threshold(u) if tau is None else tau
    nonzero = np.abs(u) > tau
    return _sorted(_signed_components(g, u, 1, u >= -tau, nonzero)
                   + _signed_components(g, u, -1, u <= tau, nonzero))


@dataclass(frozen=True, eq=False)
class NodalDomainReport:
    """Strong and weak domains induced by one vector."""

    vector: np.ndarray
    tau: float
    strong: tuple[NodalDomain, ...]
    weak: tuple[NodalDomain, ...]
    oriented: bool | None

    def count(self, kind: str, sign: int | None = None) -> int:
        doms = self.strong if kind == "strong" else self.weak
        return sum(1 for dm in doms if sign is None or dm.sign == sign)

    @property
    def positive_strong(self) -> int:
        return self.count("strong", 1)

    @property
    def negative_strong(self) -> int:
        return self.count("strong", -1)

    @property
    def positive_weak(self) -> int:
        return self.count("weak", 1)

    @property
    def negative_weak(self) -> int:
        return self.count("weak", -1)

    @property
    def both_signs(self) -> bool:
        return self.positive_strong > 0 and self.negative_strong > 0


def nodal_domains(g: Graph, u: np.ndarray, degree_orient: bool = False,
                  tau: float | None = None) -> NodalDomainReport:
    """Enumerate the domains of ``u``, optionally orienting it by degree first."""
    u = _nonzero(u)
    if degree_orient:
        u = orient(u, g.degree)
    tau = zero_threshold(u) if tau is None else tau
    oriented = bool(g.degree @ u >= -1e-10 * g.volume * np.abs(u).max())
    return NodalDomainReport(u, tau, tuple(strong_domains(g, u, tau)),
                             tuple(weak_domains(g, u, tau)), oriented)


def _adjacent(g: Graph, s1, s2) -> bool:
    block = g.adjacency[np.ix_(list(s1), list(s2))].copy()
    for a, i in enumerate(s1):
        for b, j in enumerate(s2):
            if i == j:
                block[a, b] = 0
    return bool(block.any())


def property_violations(g: Graph, report: NodalDomainReport) -> list[str]:
    """Check the structural properties every domain family must have.

    Returns a list of human-readable violations; empty means all hold.
    """
    u, tau = report.vector, report.tau
    zero = np.abs(u) <= tau
    bad = []
    strong = [set(dm.members) for dm in report.strong]
    weak = [set(dm.members) for dm in report.weak]

    cover = set().union(*weak) if weak else set()
    if cover != set(range(g.n)):
        bad.append("P1: weak domains do not cover V")
    for a, b in combinations(strong, 2):
        if a & b:
            bad.append("P1: strong domains overlap")
    for s in strong:
        if not any(s <= w for w in weak):
            bad.append("P1: strong domain not inside any weak domain")
    if len(strong) < len(weak):
        bad.append("P1: fewer strong than weak domains")
    if not zero.any():
        same = sorted(map(sorted, strong)) == sorted(map(sorted, weak))
        if not same:
            bad.append("P1: zero-free vector but strong != weak")

    for dm in report.strong + report.weak:
        if zero[list(dm.members)].all():
            bad.append("P2: domain without a nonzero entry")
        if not all(np.sign(u[i]) == dm.sign for i in dm.members if not zero[i]):
            bad.append("P2: domain entries disagree with its sign")
    for da, db in combinations(report.weak, 2):
        common = set(da.members) & set(db.members)
        if common:
            if da.sign == db.sign:
                bad.append("P2: overlapping weak domains share a sign")
            if not zero[list(common)].all():
                bad.append("P2: weak domains overlap on a nonzero entry")

    for dm in report.strong + report.weak:
        if len(connected_components(induced_subgraph(g, dm.members))) != 1:
            bad.append(f"P3: domain {dm.members} is not connected")

    for family in (report.strong, report.weak):
        for da, db in combinations(family, 2):
            if da.sign == db.sign and _adjacent(g, da.members, db.members):
                bad.append("adjacent domains with equal sign")
    for da, db in combinations(report.weak, 2):
        for s1, s2 in ((da.members, db.members), (db.members, da.members)):
            if not _adjacent(g, s1, s2):
                continue
            rest = [j for j in s2 if j not in s1 and not zero[j]]
            if not rest or not g.adjacency[np.ix_(list(s1), rest)].any():
                bad.append("P4: adjacent weak domains lack a nonzero bridge")
    return bad


@dataclass(frozen=True, eq=False)
class NodalBoundReport:
    """Domain counts of one eigenvector against a theorem's budget."""

    matrix: str
    index: int | None
    eigenvalue: float
    ell: int
    ell_prime: int
    strong_bound: int
    weak_bound: int
    strong_count: int
    weak_count: int
    domains: NodalDomainReport
    holds: bool | None
    skipped: str | None = None
    tightened: bool = False


def _slack_check(g: Graph, u: np.ndarray, lam: float) -> float:
    """Largest violation of ``A u >= lam u``, zero if none."""
    gap = lam * u - g.adjacency @ u
    return float(max(0.0, gap.max()))


def check_general_theorem(g: Graph, u: np.ndarray, lam: float,
                          a_spectrum: Spectrum | None = None) -> NodalBoundReport:
    """Bound positive domains of any ``u`` with ``A u >= lam u`` componentwise.

    The strong count is at most the number of eigenvalues of ``A`` that are
    ``>= lam``, the weak count at most the number ``> lam``.  The bounds
    only apply when ``u`` takes both signs; otherwise the report is marked
    as skipped.
    """
    require_connected(g, "the nodal domain theorem")
    u = _nonzero(u)
    slack = 1e-9 * float(np.abs(g.adjacency).sum(axis=1).max()) * float(np.abs(u).max())
    violation = _slack_check(g, u, lam)
    if violation > slack:
        raise PreconditionError(f"A u >= lam u fails by {violation:.3e}")
    spec = a_spectrum or eig_sym(g.adjacency, "A")
    ell, ell_p = eigen_counts(spec, lam)
    rep = nodal_domains(g, u)
    both = rep.both_signs
    holds = (rep.positive_strong <= ell and rep.positive_weak <= ell_p) if both else None
    return NodalBoundReport("A", None, lam, ell, ell_p, ell, ell_p, rep.positive_strong,
                            rep.positive_weak, rep, holds,
                            None if both else "vector does not change sign")


def check_positive_bound(g: Graph, eigen_index: int, matrix_tag: str = "M",
                         m_spectrum: Spectrum | None = None,
                         a_spectrum: Spectrum | None = None) -> NodalBoundReport:
    """Check the positive-domain budget for the ``eigen_index``-th eigenvector.

    For ``M`` (1-based, descending) the eigenvector is oriented so that
    ``d'u >= 0``; it then has at most ``l + 1`` positive strong and
    ``l' + 1`` positive weak domains, and at most ``l`` positive strong
    ones when its eigenvalue is not an eigenvalue of ``A``.  For ``A`` the
    budgets are ``l`` and ``l'``.
    """
    require_connected(g, "the nodal domain theorem")
    a_spec = a_spectrum or eig_sym(g.adjacency, "A")
    if matrix_tag == "A":
        lam, u = a_spec.pair(eigen_index)
        return replace(check_general_theorem(g, u, lam, a_spec), index=eigen_index)
    if matrix_tag != "M":
        raise ValueError("matrix_tag must be 'M' or 'A'")
    spec = m_spectrum or eig_sym(build_modularity(g).matrix, "M")
    lam, u = spec.pair(eigen_index)
    u = orient(u, g.degree)
    ell, ell_p = eigen_counts(spec, lam)
    rep = nodal_domains(g, u)
    tau = 1e-8 * (1.0 + abs(lam))
    tightened = bool(np.abs(a_spec.values - lam).min() > tau)
    strong_bound = ell if tightened else ell + 1
    weak_bound = ell_p + 1
    if not rep.both_signs:
        return NodalBoundReport("M", eigen_index, lam, ell, ell_p, strong_bound, weak_bound,
                                rep.positive_strong, rep.positive_weak, rep, None,
                                "eigenvector does not change sign", tightened)
    holds = rep.positive_strong <= strong_bound and rep.positive_weak <= weak_bound
    return NodalBoundReport("M", eigen_index, lam, ell, ell_p, strong_bound, weak_bound,
                            rep.positive_strong, rep.positive_weak, rep, holds, None, tightened)


def check_laplacian_bound(g: Graph, eigen_index: int,
                          l_spectrum: Spectrum | None = None) -> NodalBoundReport:
    """Check the Laplacian nodal domain theorem for one eigenvector.

    ``eigen_index`` is 1-based in ascending order.  With ``l`` eigenvalues
    not larger than ``lam`` and ``l'`` strictly smaller, the vector has at
    most ``l`` strong and ``l' + 1`` weak domains (both signs counted).
    """
    require_connected(g, "the Laplacian nodal domain theorem")
    spec = l_spectrum or eig_sym(build_laplacians(g).laplacian, "L")
    lam, u = spec.pair(eigen_index, ascending=True)
    tau = 1e-8 * (1.0 + abs(lam))
    ell = int(np.sum(spec.values <= lam + tau))
    ell_p = int(np.sum(spec.values < lam - tau))
    rep = nodal_domains(g, u)
    strong, weak = len(rep.strong), len(rep.weak)
    holds = strong <= ell and weak <= ell_p + 1
    return NodalBoundReport("L", eigen_index, lam, ell, ell_p, ell, ell_p + 1, strong, weak,
                            rep, holds)
