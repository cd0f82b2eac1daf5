"""Weighted undirected graphs, vertex subsets and partitions.

All arithmetic is done on dense vertex indices ``0..n-1``; external labels
are kept only for input and output.  A loop of weight ``w`` on vertex ``i``
is stored as ``A[i, i] = w`` and contributes ``w`` (not ``2w``) to the
degree, so that ``d = A @ 1`` always holds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GraphFormatError, NumericalCheckError, PreconditionError

__all__ = [
    "Graph",
    "VertexSet",
    "Partition",
    "parse_graph",
    "format_edge_list",
    "induced_subgraph",
    "connected_components",
    "boundary_and_volume",
    "require_connected",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Finite undirected graph with nonnegative weights and optional loops.

    Parameters
    ----------
    adjacency : (n, n) array_like
        Symmetric nonnegative weight matrix.  Diagonal entries are loop
        weights.
    labels : sequence of str, optional
        External vertex identifiers, one per row.  Defaults to
        ``"0", "1", ...``.
    """

    adjacency: np.ndarray
    labels: tuple[str, ...] = ()
    degree: np.ndarray = field(init=False, repr=False)
    volume: float = field(init=False)

    def __post_init__(self):
        a = np.array(self.adjacency, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be a square matrix")
        if a.shape[0] < 1:
            raise ValueError("a graph needs at least one vertex")
        if not np.all(np.isfinite(a)):
            raise ValueError("adjacency has non-finite entries")
        if np.any(a < 0):
            raise ValueError("edge weights must be nonnegative")
        scale = max(1.0, float(np.abs(a).max()))
        if np.abs(a - a.T).max() > 1e-12 * scale:
            raise ValueError("adjacency is not symmetric")
        a = 0.5 * (a + a.T)
        labels = tuple(str(x) for x in self.labels) if self.labels else tuple(
            str(i) for i in range(a.shape[0]))
        if len(labels) != a.shape[0]:
            raise ValueError("need one label per vertex")
        if len(set(labels)) != len(labels):
            raise ValueError("vertex labels must be unique")
        object.__setattr__(self, "adjacency", _frozen(a))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "degree", _frozen(a.sum(axis=1)))
        object.__setattr__(self, "volume", float(self.degree.sum()))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, float] | tuple[int, int]],
                   labels: Sequence[str] | None = None) -> "Graph":
        """Build a graph on ``n`` vertices from ``(i, j[, w])`` triples.

        Repeated edges are summed.
        """
        a = np.zeros((n, n))
        for e in edges:
            i, j = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if w < 0:
                raise ValueError(f"negative weight on edge {i}-{j}")
            a[i, j] += w
            if i != j:
                a[j, i] += w
        return cls(a, tuple(labels) if labels else ())

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def d_min(self) -> float:
        return float(self.degree.min())

    @property
    def d_max(self) -> float:
        return float(self.degree.max())

    @property
    def has_loops(self) -> bool:
        return bool(np.any(np.diag(self.adjacency) > 0))

    @property
    def is_unweighted(self) -> bool:
        a = self.adjacency
        return bool(np.all((a == 0) | (a == 1)))

    def edges(self) -> list[tuple[int, int, float]]:
        """Stored edges ``(i, j, w)`` with ``i <= j``, row-major order."""
        iu, ju = np.nonzero(np.triu(self.adjacency))
        return [(int(i), int(j), float(self.adjacency[i, j])) for i, j in zip(iu, ju)]

    def neighbors(self, i: int) -> np.ndarray:
        """Indices adjacent to ``i``, excluding ``i`` itself."""
        row = self.adjacency[i]
        nb = np.nonzero(row)[0]
        return nb[nb != i]

    def regular_degree(self, rtol: float = 1e-12) -> float | None:
        """Common degree if the graph is regular, else ``None``."""
        d = self.degree
        if d.max() - d.min() <= rtol * max(1.0, d.max()):
            return float(d[0])
        return None

    def is_connected(self) -> bool:
        return len(connected_components(self)) == 1

    def vertex_set(self, members: Iterable[int]) -> "VertexSet":
        return VertexSet.of(self, members)

    def index_of(self, label: str) -> int:
        return self.labels.index(str(label))


@dataclass(frozen=True)
class VertexSet:
    """A subset ``S`` of the vertices together with its weighted counts.

    ``internal_weight`` is ``1_S' A 1_S`` (twice the internal edge weight,
    loops counted once), ``boundary_weight`` the total weight of edges with
    exactly one end in ``S``.
    """

    members: tuple[int, ...]
    n: int
    volume: float
    internal_weight: float
    boundary_weight: float

    @classmethod
    def of(cls, g: Graph, members: Iterable[int]) -> "VertexSet":
        if isinstance(members, VertexSet):
            members = members.members
        idx = sorted({int(i) for i in members})
        if idx and (idx[0] < 0 or idx[-1] >= g.n):
            raise IndexError(f"vertex index out of range for n={g.n}")
        mask = np.zeros(g.n, dtype=bool)
        mask[idx] = True
        a = g.adjacency
        return cls(
            members=tuple(idx),
            n=g.n,
            volume=float(g.degree[mask].sum()),
            internal_weight=float(a[np.ix_(mask, mask)].sum()),
            boundary_weight=float(a[np.ix_(mask, ~mask)].sum()),
        )

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, i: object) -> bool:
        return i in self.members

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[list(self.members)] = True
        return m

    @property
    def indicator(self) -> np.ndarray:
        """Characteristic vector ``1_S`` as floats."""
        return self.mask.astype(float)

    def complement(self, g: Graph) -> "VertexSet":
        return VertexSet.of(g, np.nonzero(~self.mask)[0])


@dataclass(frozen=True)
class Partition:
    """Disjoint cover of the vertex set by nonempty blocks."""

    blocks: tuple[VertexSet, ...]

    @classmethod
    def of(cls, g: Graph, blocks: Iterable[Iterable[int]]) -> "Partition":
        sets = tuple(VertexSet.of(g, b) for b in blocks)
        seen: set[int] = set()
        for s in sets:
            if len(s) == 0:
                raise ValueError("partition blocks must be nonempty")
            if seen.intersection(s.members):
                raise ValueError("partition blocks overlap")
            seen.update(s.members)
        if seen != set(range(g.n)):
            raise ValueError("partition blocks do not cover the vertex set")
        return cls(sets)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self.blocks)

    def index_matrix(self) -> np.ndarray:
        """The ``n x k`` matrix whose columns are the block indicators."""
        return np.column_stack([b.indicator for b in self.blocks])


def parse_graph(text: str) -> Graph:
    """Parse an edge-list document.

    Each non-blank line is ``u v [w]``; ``w`` defaults to 1.  A line with a
    single token declares an isolated vertex.  Lines starting with ``#``
    are comments.  Labels are mapped to indices in order of first
    appearance; repeated edges are summed; ``u == v`` is a loop.

    Raises
    ------
    GraphFormatError
        On an empty document, a malformed line, or a negative or
        non-numeric weight.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    index: dict[str, int] = {}
    edges: list[tuple[int, int, float]] = []

    def vid(label: str) -> int:
        if label not in index:
            index[label] = len(index)
        return index[label]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 1:
            vid(parts[0])
            continue
        if len(parts) > 3:
            raise GraphFormatError(f"line {lineno}: expected 'u v [w]', got {raw!r}")
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphFormatError(
                    f"line {lineno}: non-numeric weight {parts[2]!r}") from None
            if not np.isfinite(w):
                raise GraphFormatError(f"line {lineno}: weight must be finite")
            if w < 0:
                raise GraphFormatError(f"line {lineno}: negative weight {w}")
        edges.append((vid(parts[0]), vid(parts[1]), w))

    if not index:
        raise GraphFormatError("empty edge-list document")
    return Graph.from_edges(len(index), edges, labels=list(index))


def format_edge_list(g: Graph, header: str | None = None) -> str:
    """Serialize ``g`` in the format accepted by :func:`parse_graph`."""
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    touched = set()
    for i, j, w in g.edges():
        lines.append(f"{g.labels[i]} {g.labels[j]} {w!r}")
        touched.update((i, j))
    lines.extend(g.labels[i] for i in range(g.n) if i not in touched)
    return "\n".join(lines) + "\n"


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph on ``s`` whose adjacency is the principal submatrix ``A(S)``."""
    idx = list(VertexSet.of(g, s).members)
    if not idx:
        raise ValueError("cannot induce a subgraph on an empty vertex set")
    return Graph(g.adjacency[np.ix_(idx, idx)], tuple(g.labels[i] for i in idx))


def _components_within(g: Graph, allowed: np.ndarray) -> list[list[int]]:
    """Breadth-first components of the subgraph induced by ``allowed``."""
    seen = ~allowed.copy()
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in g.neighbors(i):
                if not seen[j]:
                    seen[j] = True
                    comp.append(int(j))
                    queue.append(j)
        comps.append(sorted(comp))
    return comps


def connected_components(g: Graph) -> list[VertexSet]:
    """Connected components, ordered by smallest member index."""
    return [VertexSet.of(g, c) for c in _components_within(g, np.ones(g.n, dtype=bool))]


def boundary_and_volume(g: Graph, s: Iterable[int]) -> tuple[float, float, float]:
    """Return ``(|dS|, vol S, 2|E(S)|)`` for a vertex subset, weighted.

    The identity ``vol S = 2|E(S)| + |dS|`` is checked before returning.
    """
    vs = VertexSet.of(g, s)
    if abs(vs.volume - vs.internal_weight - vs.boundary_weight) > 1e-12 * max(1.0, g.volume):
        raise NumericalCheckError("volume identity vol S = 2|E(S)| + |dS| failed")
    return vs.boundary_weight, vs.volume, vs.internal_weight


def require_connected(g: Graph, what: str = "this operation") -> None:
    """Raise :class:`PreconditionError` unless ``g`` is connected."""
    k = len(connected_components(g))
    if k != 1:
        raise PreconditionError(
            f"{what} assumes a connected graph; input has {k} components")
