"""Modularity and Laplacian matrices, and the modularity functionals.

The modularity of a vertex set is the excess of internal edge weight over
its Chung-Lu expectation, ``Q(S) = 2|E(S)| - vol(S)^2 / vol(G)``.  Every
evaluator here computes the quantity in more than one way and refuses to
return if the forms disagree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import NumericalCheckError
from .graph import Graph, Partition, VertexSet

__all__ = [
    "CHUNG_LU",
    "ERDOS_RENYI",
    "ModularityMatrix",
    "LaplacianPair",
    "build_modularity",
    "build_laplacians",
    "modularity_Q",
    "joint_modularity",
    "partition_modularity",
    "indivisibility_certificate",
]

CHUNG_LU = "chung-lu"
ERDOS_RENYI = "erdos-renyi"
_ALIASES = {"chung-lu": CHUNG_LU, "cl": CHUNG_LU, "erdos-renyi": ERDOS_RENYI, "er": ERDOS_RENYI}

# agreement between equivalent forms of Q, relative to vol G
_Q_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class ModularityMatrix:
    """Dense modularity matrix ``A - gamma * N`` for a null model ``N``.

    For the Chung-Lu model ``N = d d' / vol G``; for Erdos-Renyi
    ``N = p 1 1'`` with ``p = vol G / n^2``.
    """

    graph: Graph
    null_model: str
    gamma: float
    matrix: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Matrix-free product ``M @ x``; ``x`` may hold vectors as columns."""
        g = self.graph
        x = np.asarray(x, dtype=float)
        if self.null_model == CHUNG_LU:
            v = g.degree
            coef = self.gamma * (v @ x) / g.volume
        else:
            v = np.ones(g.n)
            coef = self.gamma * (g.volume / g.n ** 2) * x.sum(axis=0)
        return g.adjacency @ x - np.multiply.outer(v, coef)

    def quadratic(self, x: np.ndarray, y: np.ndarray | None = None) -> float:
        y = x if y is None else y
        return float(np.asarray(x) @ self.matrix @ np.asarray(y))

    @property
    def norm_inf(self) -> float:
        return float(np.abs(self.matrix).sum(axis=1).max())


@dataclass(frozen=True, eq=False)
class LaplacianPair:
    """``L = D - A`` and the average-graph Laplacian ``L0 = D - d d'/vol G``."""

    laplacian: np.ndarray
    average: np.ndarray


def _null_model_name(name: str) -> str:
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown null model {name!r}; use 'chung-lu' or 'erdos-renyi'") from None


def _require_volume(g: Graph) -> None:
    if g.volume <= 0:
        raise ValueError("graph has no edges (vol G = 0); modularity is undefined")


def build_modularity(g: Graph, null_model: str = CHUNG_LU, gamma: float = 1.0) -> ModularityMatrix:
    """Modularity matrix of ``g`` under the given null model.

    ``gamma`` scales the null-model term, so ``gamma = 0`` gives ``A`` and
    ``gamma = 1`` the standard matrix.
    """
    model = _null_model_name(null_model)
    if gamma < 0 or not math.isfinite(gamma):
        raise ValueError("gamma must be a finite nonnegative number")
    _require_volume(g)
    a, d = g.adjacency, g.degree
    if model == CHUNG_LU:
        m = a - gamma * np.outer(d, d) / g.volume
    else:
        m = a - gamma * (g.volume / g.n ** 2) * np.ones((g.n, g.n))
    m = 0.5 * (m + m.T)
    m.setflags(write=False)
    return ModularityMatrix(g, model, float(gamma), m)


def build_laplacians(g: Graph) -> LaplacianPair:
    """Return ``(L, L0)``; their difference ``L0 - L`` is the modularity matrix."""
    _require_volume(g)
    a, d = g.adjacency, g.degree
    lap = np.diag(d) - a
    avg = np.diag(d) - np.outer(d, d) / g.volume
    for x in (lap, avg):
        x.setflags(write=False)
    return LaplacianPair(lap, avg)


def _check(a: float, b: float, scale: float, what: str) -> None:
    if abs(a - b) > _Q_RTOL * max(1.0, scale):
        raise NumericalCheckError(f"{what}: {a!r} != {b!r}")


def _standard(g: Graph, m: ModularityMatrix | None) -> ModularityMatrix:
    if m is None:
        return build_modularity(g)
    if m.graph is not g or m.null_model != CHUNG_LU or m.gamma != 1.0:
        raise ValueError("Q(S) is defined with the Chung-Lu matrix at gamma = 1 of the same graph")
    return m


def modularity_Q(g: Graph, s: Iterable[int], m: ModularityMatrix | None = None) -> float:
    """Modularity ``Q(S) = 2|E(S)| - vol(S)^2 / vol(G)``.

    The value is cross-checked against ``vol S vol S' / vol G - |dS|`` and
    against the quadratic form ``1_S' M 1_S``.
    """
    _require_volume(g)
    vs = VertexSet.of(g, s)
    vol_g = g.volume
    q = vs.internal_weight - vs.volume ** 2 / vol_g
    q_cut = vs.volume * (vol_g - vs.volume) / vol_g - vs.boundary_weight
    m = _standard(g, m)
    x = vs.indicator
    q_quad = m.quadratic(x)
    _check(q, q_cut, vol_g, "Q(S) disagrees with the cut form")
    _check(q, q_quad, vol_g, "Q(S) disagrees with 1_S' M 1_S")
    return q


def joint_modularity(g: Graph, s1: Iterable[int], s2: Iterable[int],
                     m: ModularityMatrix | None = None) -> float:
    """Joint modularity ``|E(S1,S2)| - vol S1 vol S2 / vol G`` of disjoint sets.

    Also verifies ``1_S1' M 1_S2`` and the merge identity
    ``Q(S1 u S2) = Q(S1) + Q(S2) + 2 Q(S1, S2)``.
    """
    _require_volume(g)
    a = VertexSet.of(g, s1)
    b = VertexSet.of(g, s2)
    if set(a.members) & set(b.members):
        raise ValueError("joint modularity needs disjoint vertex sets")
    m = _standard(g, m)
    bridge = float(g.adjacency[np.ix_(a.mask, b.mask)].sum())
    value = bridge - a.volume * b.volume / g.volume
    _check(value, m.quadratic(a.indicator, b.indicator), g.volume,
           "Q(S1,S2) disagrees with 1_S1' M 1_S2")
    merged = modularity_Q(g, a.members + b.members, m)
    split = modularity_Q(g, a, m) + modularity_Q(g, b, m) + 2 * value
    _check(merged, split, g.volume, "merge identity failed")
    return value


def partition_modularity(g: Graph, p: Partition | Iterable[Iterable[int]],
                         m: ModularityMatrix | None = None) -> float:
    """Newman-Girvan modularity ``q(P) = sum_i Q(S_i) / vol G``.

    Cross-checked against ``trace(Z' M Z) / vol G`` with ``Z`` the index
    matrix of the partition.
    """
    if not isinstance(p, Partition):
        p = Partition.of(g, p)
    elif p.blocks and p.blocks[0].n != g.n:
        raise ValueError("partition belongs to a graph of different order")
    m = _standard(g, m)
    total = sum(modularity_Q(g, b, m) for b in p)
    z = p.index_matrix()
    _check(total, float(np.trace(z.T @ m.matrix @ z)), g.volume,
           "q(P) disagrees with trace(Z' M Z)")
    return total / g.volume


def indivisibility_certificate(g: Graph) -> tuple[int, int] | None:
    """Find an edge ``ij`` whose endpoints alone form a community.

    For unit-weight loopless edges the test is ``d_i + d_j < sqrt(2 vol G)``;
    in general it is ``(d_i + d_j)^2 < vol G * (2 a_ij + a_ii + a_jj)``,
    i.e. ``Q({i, j}) > 0``.  ``None`` means no edge qualifies, which proves
    nothing about indivisibility.
    """
    _require_volume(g)
    a, d = g.adjacency, g.degree
    for i, j, w in g.edges():
        if i != j and (d[i] + d[j]) ** 2 < g.volume * (2 * w + a[i, i] + a[j, j]):
            return i, j
    return None
