"""Certified symmetric eigendecompositions and the derived graph invariants.

Eigenvalues are always stored in nonincreasing order.  Laplacian users who
want the usual ascending convention call :meth:`Spectrum.ascending`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NumericalCheckError, PreconditionError
from .graph import Graph, VertexSet, require_connected
from .modularity import (CHUNG_LU, ModularityMatrix, build_laplacians, build_modularity,
                         modularity_Q)

__all__ = [
    "Spectrum",
    "SpectralSummary",
    "AlgebraicModularity",
    "Bisection",
    "InterlacingReport",
    "FiedlerChain",
    "eig_sym",
    "ones_complement_basis",
    "algebraic_modularity",
    "algebraic_connectivity",
    "eigen_counts",
    "sign_tolerance",
    "spectral_bisect",
    "interlacing_check",
    "fiedler_chain",
    "spectral_summary",
]

RESIDUAL_RTOL = 1e-9
ORTHO_TOL = 1e-9
SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenpairs of a symmetric matrix with residual certificates.

    Attributes
    ----------
    values : ndarray
        Eigenvalues ``lambda_1 >= ... >= lambda_n``.
    vectors : ndarray
        Orthonormal eigenvectors, one per column, matching ``values``.
    residuals : ndarray
        ``||X v_i - lambda_i v_i||_2`` for each pair.
    tag : str
        Which matrix this is (``"A"``, ``"M"``, ``"L"``, ``"L0"``...).
    norm : float
        Spectral norm ``max |lambda_i|``.
    """

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    tag: str
    norm: float

    def __len__(self) -> int:
        return len(self.values)

    def pair(self, index: int, ascending: bool = False) -> tuple[float, np.ndarray]:
        """1-based eigenpair, counted from the top (or bottom if ``ascending``)."""
        n = len(self.values)
        if not 1 <= index <= n:
            raise IndexError(f"eigenvector index must lie in 1..{n}, got {index}")
        k = n - index if ascending else index - 1
        return float(self.values[k]), self.vectors[:, k].copy()

    def ascending(self) -> tuple[np.ndarray, np.ndarray]:
        return self.values[::-1].copy(), self.vectors[:, ::-1].copy()


def eig_sym(x: np.ndarray, tag: str = "X") -> Spectrum:
    """Full eigendecomposition of a symmetric matrix.

    LAPACK's Householder tridiagonalisation does the work; this wrapper
    orders the pairs, verifies residuals and orthogonality, and rejects
    non-symmetric input.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError("eig_sym needs a square matrix")
    scale = float(np.abs(x).max()) if x.size else 0.0
    if x.size and np.abs(x - x.T).max() > SYMMETRY_RTOL * max(scale, 1e-300):
        raise ValueError(f"matrix {tag} is not symmetric")
    sym = 0.5 * (x + x.T)
    try:
        w, v = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericalCheckError(f"eigensolver did not converge on {tag}: {exc}") from exc
    w, v = w[::-1].copy(), v[:, ::-1].copy()
    residuals = np.linalg.norm(sym @ v - v * w, axis=0)
    norm = float(np.abs(w).max()) if len(w) else 0.0
    bound = RESIDUAL_RTOL * max(norm, np.finfo(float).tiny)
    if np.any(residuals > bound):
        raise NumericalCheckError(
            f"residual certificate failed on {tag}: max {residuals.max():.3e} > {bound:.3e}")
    if len(w) and np.abs(v.T @ v - np.eye(len(w))).max() > ORTHO_TOL:
        raise NumericalCheckError(f"eigenvectors of {tag} are not orthonormal")
    for arr in (w, v, residuals):
        arr.setflags(write=False)
    return Spectrum(w, v, residuals, tag, norm)


def ones_complement_basis(n: int) -> np.ndarray:
    """Orthonormal basis of the complement of the all-ones vector.

    Built from the Householder reflector that maps ``1`` onto a multiple of
    ``e_1``; its last ``n - 1`` columns span ``1``-perp exactly.
    """
    if n < 2:
        raise ValueError("the complement of 1 is trivial for n < 2")
    v = np.ones(n)
    v[0] += np.sqrt(n)
    h = np.eye(n) - 2.0 * np.outer(v, v) / (v @ v)
    return h[:, 1:]


def sign_tolerance(matrix: np.ndarray) -> float:
    """Zero threshold for eigenvalue sign counts, ``1e-8 max(1, ||X||_inf)``."""
    return 1e-8 * max(1.0, float(np.abs(matrix).sum(axis=1).max()))


class AlgebraicModularity(NamedTuple):
    value: float
    vector: np.ndarray
    multiplicity: int


def _deflated_top(matrix: np.ndarray, tag: str, largest: bool = True):
    n = matrix.shape[0]
    basis = ones_complement_basis(n)
    spec = eig_sym(basis.T @ matrix @ basis, tag=f"{tag} on 1-perp")
    k = 0 if largest else n - 2
    value = float(spec.values[k])
    vec = basis @ spec.vectors[:, k]
    tol = sign_tolerance(matrix)
    mult = int(np.sum(np.abs(spec.values - value) <= tol))
    return value, vec / np.linalg.norm(vec), mult


def algebraic_modularity(g: Graph, m: ModularityMatrix | None = None) -> AlgebraicModularity:
    """Largest Rayleigh quotient of ``M`` over vectors orthogonal to ``1``.

    Returns the value, a unit maximiser lifted back to ``R^n``, and the
    multiplicity of the value within the deflated spectrum.
    """
    require_connected(g, "algebraic modularity")
    if g.n < 2:
        raise PreconditionError("algebraic modularity needs at least two vertices")
    if m is None:
        m = build_modularity(g)
    return AlgebraicModularity(*_deflated_top(m.matrix, "M"))


def algebraic_connectivity(g: Graph, which: str = "L") -> tuple[float, np.ndarray]:
    """Second-smallest eigenvalue of ``L`` (or of ``L0``) and its eigenvector.

    Connectivity makes the kernel exactly ``span{1}``, so the value is
    the smallest eigenvalue on ``1``-perp.
    """
    require_connected(g, "algebraic connectivity")
    if g.n < 2:
        raise PreconditionError("algebraic connectivity needs at least two vertices")
    lap = build_laplacians(g)
    try:
        matrix = {"L": lap.laplacian, "L0": lap.average}[which]
    except KeyError:
        raise ValueError("which must be 'L' or 'L0'") from None
    value, vec, _ = _deflated_top(matrix, which, largest=False)
    return value, vec


def eigen_counts(spec: Spectrum, lam: float, tau: float | None = None) -> tuple[int, int]:
    """Count eigenvalues ``>= lam`` and ``> lam`` (with multiplicity).

    Equality is decided with ``tau = 1e-8 (1 + |lam|)`` unless given.
    """
    if tau is None:
        tau = 1e-8 * (1.0 + abs(lam))
    w = spec.values
    return int(np.sum(w >= lam - tau)), int(np.sum(w > lam + tau))


@dataclass(frozen=True, eq=False)
class Bisection:
    """Outcome of sign rounding the algebraic-modularity eigenvector."""

    members: VertexSet
    modularity: float
    vector: np.ndarray
    m_value: float
    multiplicity: int


def spectral_bisect(g: Graph) -> Bisection:
    """Split ``g`` by the signs of the algebraic-modularity eigenvector.

    The eigenvector is oriented so that ``d'x >= 0`` and the positive
    vertices form the returned set.  Vertices where the vector vanishes are
    put on whichever side gives the larger ``Q``.
    """
    from .nodal import orient  # nodal imports this module

    am = algebraic_modularity(g)
    if am.value <= 0:
        warnings.warn(f"m(G) = {am.value:.3g} <= 0: the graph is algebraically indivisible",
                      RuntimeWarning, stacklevel=2)
    x = orient(am.vector, g.degree)
    tau = 1e-10 * np.abs(x).max()
    pos = np.nonzero(x > tau)[0]
    zero = np.nonzero(np.abs(x) <= tau)[0]
    candidates = [pos]
    if len(zero):
        candidates.append(np.union1d(pos, zero))
    best, best_q = None, -np.inf
    for c in candidates:
        if 0 < len(c) < g.n:
            q = modularity_Q(g, c)
            if q > best_q:
                best, best_q = c, q
    if best is None:
        raise PreconditionError("no cut found: the relaxed solution does not change sign")
    return Bisection(VertexSet.of(g, best), best_q, x, am.value, am.multiplicity)


@dataclass(frozen=True, eq=False)
class InterlacingReport:
    """Margins of ``l_1(A) >= l_1(M) >= l_2(A) >= ... >= l_n(M)``."""

    a_values: np.ndarray
    m_values: np.ndarray
    margins: np.ndarray
    tolerance: float
    holds: bool


def interlacing_check(g: Graph, m: ModularityMatrix | None = None) -> InterlacingReport:
    """Verify that ``A`` and ``M = A - (rank one psd)`` interlace."""
    if m is None:
        m = build_modularity(g)
    a = eig_sym(g.adjacency, "A").values
    mv = eig_sym(m.matrix, "M").values
    margins = np.empty(2 * g.n - 1)
    margins[0::2] = a - mv
    margins[1::2] = mv[:-1] - a[1:]
    tol = 1e-8 * max(1.0, float(np.abs(a).max()))
    return InterlacingReport(a, mv, margins, tol, bool(margins.min() >= -tol))


class FiedlerChain(NamedTuple):
    """``d_min - a(G) <= a(G0) - a(G) <= m(G) <= d_max - a(G)``."""

    lower: float
    connectivity_gap: float
    m_value: float
    upper: float
    holds: bool


def fiedler_chain(g: Graph, tol: float = 1e-8) -> FiedlerChain:
    a_g, _ = algebraic_connectivity(g, "L")
    a_g0, _ = algebraic_connectivity(g, "L0")
    m_g = algebraic_modularity(g).value
    chain = (g.d_min - a_g, a_g0 - a_g, m_g, g.d_max - a_g)
    slack = tol * max(1.0, g.d_max)
    holds = all(chain[i] <= chain[i + 1] + slack for i in range(3))
    return FiedlerChain(*chain, holds)


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    """Headline spectral invariants of a connected graph."""

    m_value: float
    m_multiplicity: int
    m_vector: np.ndarray
    a_value: float
    a0_value: float
    fiedler_vector: np.ndarray
    lambda_1: float
    leading_vector: np.ndarray
    n_pos: int
    n_neg: int
    n_zero: int
    sign_tolerance: float
    null_model: str = CHUNG_LU
    gamma: float = 1.0
    spectra: dict = field(default_factory=dict, repr=False)


def spectral_summary(g: Graph, null_model: str = CHUNG_LU, gamma: float = 1.0) -> SpectralSummary:
    """Compute spectra of ``A``, ``M``, ``L``, ``L0`` and the summary numbers."""
    m = build_modularity(g, null_model, gamma)
    lap = build_laplacians(g)
    spectra = {
        "A": eig_sym(g.adjacency, "A"),
        "M": eig_sym(m.matrix, "M"),
        "L": eig_sym(lap.laplacian, "L"),
        "L0": eig_sym(lap.average, "L0"),
    }
    am = algebraic_modularity(g, m)
    a_val, fiedler = algebraic_connectivity(g, "L")
    a0_val, _ = algebraic_connectivity(g, "L0")
    mspec = spectra["M"]
    tau = sign_tolerance(m.matrix)
    w = mspec.values
    n_pos = int(np.sum(w > tau))
    n_neg = int(np.sum(w < -tau))
    return SpectralSummary(
        m_value=am.value, m_multiplicity=am.multiplicity, m_vector=am.vector,
        a_value=a_val, a0_value=a0_val, fiedler_vector=fiedler,
        lambda_1=float(w[0]), leading_vector=mspec.vectors[:, 0].copy(),
        n_pos=n_pos, n_neg=n_neg, n_zero=g.n - n_pos - n_neg, sign_tolerance=tau,
        null_model=m.null_model, gamma=m.gamma, spectra=spectra,
    )
