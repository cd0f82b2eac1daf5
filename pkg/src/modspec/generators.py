"""Graph families with known answers, plus seeded random graphs.

Every random generator takes an integer seed and uses
``numpy.random.default_rng``, so a fixed seed reproduces the same graph on
any platform with the same numpy bit generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .graph import Graph

__all__ = [
    "FAMILIES",
    "FamilySpec",
    "StarClosedForm",
    "star_with_loops",
    "clique_of_cliques",
    "chung_lu_sample",
    "standard",
    "random_connected",
    "random_regular",
    "triangle_bridge",
]


@dataclass(frozen=True)
class StarClosedForm:
    """Exact spectrum of the modularity matrix of a looped star.

    The modularity matrix has eigenvalue 0 on ``1``, ``alpha`` with
    multiplicity ``m - 1`` on ``e_1 - e_j``, and ``lambda_bar`` on
    ``v_bar = (-1, ..., -1, m)``.
    """

    alpha: float
    beta: float
    m: int
    volume: float
    degrees: tuple[float, ...]
    lambda_bar: float
    v_bar: tuple[float, ...]
    dominant: bool
    orientable: bool

    def eigenvalues(self) -> np.ndarray:
        """All ``m + 1`` eigenvalues in nonincreasing order."""
        vals = [0.0, self.lambda_bar] + [self.alpha] * (self.m - 1)
        return np.sort(np.array(vals))[::-1]

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha, "beta": self.beta, "m": self.m,
            "volume": self.volume, "degrees": list(self.degrees),
            "eigenvalues": [
                {"value": 0.0, "multiplicity": 1, "vector": "ones"},
                {"value": self.alpha, "multiplicity": self.m - 1, "vector": "e_1 - e_j"},
                {"value": self.lambda_bar, "multiplicity": 1, "vector": list(self.v_bar)},
            ],
            "lambda_bar": self.lambda_bar,
            "dominant": self.dominant,
            "orientable": self.orientable,
        }


def star_with_loops(alpha: float, beta: float, m: int) -> tuple[Graph, StarClosedForm]:
    """Star with ``m`` leaves, unit spokes, leaf loops ``alpha`` and root loop ``beta``.

    Leaves are vertices ``0..m-1`` (labels ``1..m``); the root is vertex
    ``m`` (label ``m+1``).
    """
    if alpha < 0 or beta < 0:
        raise ValueError("loop weights alpha and beta must be nonnegative")
    if int(m) != m or m < 2:
        raise ValueError("m must be an integer >= 2")
    m = int(m)
    n = m + 1
    a = np.zeros((n, n))
    a[:m, m] = a[m, :m] = 1.0
    a[np.arange(m), np.arange(m)] = alpha
    a[m, m] = beta
    g = Graph(a, tuple(str(i + 1) for i in range(n)))
    vol = m * (2 + alpha) + beta
    form = StarClosedForm(
        alpha=float(alpha), beta=float(beta), m=m, volume=float(vol),
        degrees=tuple([1.0 + alpha] * m + [float(beta + m)]),
        lambda_bar=(alpha * beta - m) * (m + 1) / vol,
        v_bar=tuple([-1.0] * m + [float(m)]),
        dominant=alpha * beta - m > (alpha + 1) ** 2,
        orientable=alpha + 1 <= beta + m,
    )
    return g, form


def clique_of_cliques(p: int, q: int, m: int) -> Graph:
    """A ``p``-clique whose vertex 0 is joined to one vertex of each of ``m`` ``q``-cliques.

    The ``p``-clique occupies vertices ``0..p-1``; copy ``c`` occupies
    ``p + c q .. p + (c+1) q - 1`` and is attached through its first vertex.
    """
    for name, v, lo in (("p", p, 2), ("q", q, 2), ("m", m, 1)):
        if int(v) != v or v < lo:
            raise ValueError(f"{name} must be an integer >= {lo}")
    n = p + m * q
    edges = list(combinations(range(p), 2))
    for c in range(m):
        base = p + c * q
        edges += [(base + i, base + j) for i, j in combinations(range(q), 2)]
        edges.append((0, base))
    return Graph.from_edges(n, edges)


def chung_lu_sample(d, seed: int, loops: bool = False) -> Graph:
    """Draw each pair ``ij`` independently with probability ``d_i d_j / sum(d)``.

    With ``loops=True`` the pairs ``ii`` are drawn too (probability
    ``d_i^2 / sum(d)``); a loop adds 1 to the degree, which makes the
    expected degree of ``i`` exactly ``d_i``.
    """
    d = np.asarray(d, dtype=float)
    if d.ndim != 1 or len(d) < 1 or np.any(d < 0):
        raise ValueError("degree sequence must be a nonempty nonnegative vector")
    total = d.sum()
    if not d.max() ** 2 < total:
        raise ValueError("need max(d)^2 < sum(d) so that every d_i d_j / sum(d) is a probability")
    rng = np.random.default_rng(seed)
    prob = np.outer(d, d) / total
    draw = rng.random(prob.shape)
    hit = np.triu(draw < prob, k=0 if loops else 1)
    a = hit.astype(float)
    a = a + np.triu(a, 1).T
    return Graph(a)


def standard(family: str, n: int | None = None) -> Graph:
    """Clique ``K_n``, star ``K_{1,n-1}``, cycle ``C_n``, path ``P_n`` or the Petersen graph."""
    family = family.lower().replace("_", "-")
    if family == "petersen":
        if n not in (None, 10):
            raise ValueError("the Petersen graph has 10 vertices")
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return Graph.from_edges(10, outer + spokes + inner)
    if n is None or int(n) != n:
        raise ValueError(f"{family} needs an integer n")
    n = int(n)
    if family in ("clique", "complete"):
        if n < 1:
            raise ValueError("clique needs n >= 1")
        return Graph.from_edges(n, combinations(range(n), 2))
    if family == "star":
        if n < 2:
            raise ValueError("star needs n >= 2")
        return Graph.from_edges(n, [(0, j) for j in range(1, n)])
    if family == "cycle":
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if family == "path":
        if n < 1:
            raise ValueError("path needs n >= 1")
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    raise ValueError(f"unknown family {family!r}")


def triangle_bridge() -> Graph:
    """Two triangles ``{0,1,2}`` and ``{3,4,5}`` joined by the edge 2-3."""
    return Graph.from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


def random_connected(n: int, p: float, seed: int, max_tries: int = 10_000) -> Graph:
    """Erdos-Renyi ``G(n, p)`` conditioned on connectivity by rejection."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        upper = np.triu(rng.random((n, n)) < p, 1).astype(float)
        g = Graph(upper + upper.T)
        if g.is_connected():
            return g
    raise RuntimeError(f"no connected G({n}, {p}) after {max_tries} draws")


def random_regular(k: int, n: int, seed: int, max_tries: int = 10_000) -> Graph:
    """Uniform simple connected ``k``-regular graph by the pairing model."""
    if (n * k) % 2 or k >= n:
        raise ValueError("need k < n and n * k even")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), k)
    for _ in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        keys = {tuple(sorted(map(int, e))) for e in pairs}
        if len(keys) < len(pairs):
            continue
        g = Graph.from_edges(n, sorted(keys))
        if g.is_connected():
            return g
    raise RuntimeError(f"no simple connected {k}-regular graph on {n} vertices found")


@dataclass(frozen=True)
class FamilySpec:
    """A named family plus its parameters; ``build`` returns graph and metadata."""

    family: str
    params: dict = field(default_factory=dict)

    def build(self) -> tuple[Graph, dict]:
        fam, p = self.family, dict(self.params)
        meta: dict = {"family": fam, "params": p}
        if fam == "star-loops":
            g, form = star_with_loops(p["alpha"], p["beta"], p["m"])
            meta["closed_form"] = form.to_dict()
        elif fam == "clique-of-cliques":
            g = clique_of_cliques(p["p"], p["q"], p["m"])
            meta["positive_domain"] = list(range(p["p"]))
        elif fam == "chung-lu":
            g = chung_lu_sample(p["degrees"], p["seed"], p.get("loops", False))
            meta["seed"] = p["seed"]
        elif fam == "random-regular":
            g = random_regular(p["k"], p["n"], p["seed"])
            meta["seed"] = p["seed"]
        elif fam in FAMILIES:
            g = standard(fam, p.get("n"))
        else:
            raise ValueError(f"unknown family {fam!r}")
        return g, meta


FAMILIES = ("star-loops", "clique-of-cliques", "chung-lu", "random-regular",
            "clique", "star", "cycle", "path", "petersen")
