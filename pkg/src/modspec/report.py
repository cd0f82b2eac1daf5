"""Report assembly and stable JSON serialization.

Documents are plain dicts of JSON types.  ``dumps`` sorts keys and writes
floats with Python's shortest round-trip representation, so equal inputs
give byte-identical output and ``json.loads`` recovers every float exactly.
Timings are deliberately left out of reports for the same reason.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .bounds import BoundsReport
from .graph import Graph
from .nodal import NodalBoundReport, NodalDomainReport
from .spectral import (FiedlerChain, InterlacingReport, SpectralSummary, fiedler_chain,
                       interlacing_check, spectral_summary)

__all__ = [
    "SCHEMA_VERSION",
    "TOLERANCES",
    "jsonable",
    "dumps",
    "graph_metadata",
    "analysis_report",
    "domains_document",
    "bounds_document",
]

SCHEMA_VERSION = "1"

TOLERANCES = {
    "bound": "1e-8 * (1 + |rhs|)",
    "eigen_count": "1e-8 * (1 + |lambda|)",
    "eigenvalue_sign": "1e-8 * max(1, ||M||_inf)",
    "eigen_residual": "1e-9 * ||X||_2",
    "eigen_orthogonality": 1e-9,
    "nodal_zero": "1e-10 * ||u||_inf",
    "q_forms": "1e-10 * max(1, vol G)",
}


def jsonable(obj: Any) -> Any:
    """Convert numpy scalars and arrays, tuples and dataclass-like values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r} in report")
        return x + 0.0  # folds -0.0 into 0.0
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def graph_metadata(g: Graph) -> dict:
    return {
        "n": g.n,
        "volume": g.volume,
        "d_min": g.d_min,
        "d_max": g.d_max,
        "regular": g.regular_degree() is not None,
        "connected": g.is_connected(),
        "loops": g.has_loops,
        "unweighted": g.is_unweighted,
        "labels": list(g.labels),
    }


def _summary_doc(s: SpectralSummary, labels) -> dict:
    return {
        "null_model": s.null_model,
        "gamma": s.gamma,
        "m": s.m_value,
        "m_multiplicity": s.m_multiplicity,
        "a": s.a_value,
        "a0": s.a0_value,
        "lambda_1_M": s.lambda_1,
        "sign_counts": {"positive": s.n_pos, "negative": s.n_neg, "zero": s.n_zero},
        "sign_tolerance": s.sign_tolerance,
        "spectra": {
            tag: {
                "values": spec.values,
                "order": "descending",
                "max_residual": float(spec.residuals.max()),
            }
            for tag, spec in s.spectra.items()
        },
        "m_vector": dict(zip(labels, s.m_vector.tolist())),
        "fiedler_vector": dict(zip(labels, s.fiedler_vector.tolist())),
    }


def _interlacing_doc(r: InterlacingReport) -> dict:
    return {"holds": r.holds, "min_margin": float(r.margins.min()), "tolerance": r.tolerance}


def _chain_doc(c: FiedlerChain) -> dict:
    return {
        "d_min_minus_a": c.lower,
        "a0_minus_a": c.connectivity_gap,
        "m": c.m_value,
        "d_max_minus_a": c.upper,
        "holds": c.holds,
    }


def analysis_report(g: Graph, null_model: str = "chung-lu", gamma: float = 1.0,
                    version: str = "", seed: int | None = None) -> dict:
    """Graph metadata, spectral summary, interlacing and the Fiedler chain.

    The interlacing and chain checks use the standard modularity matrix;
    the spectral summary uses the requested null model and resolution.
    """
    s = spectral_summary(g, null_model, gamma)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": version,
        "seed": seed,
        "graph": graph_metadata(g),
        "spectral": _summary_doc(s, g.labels),
        "interlacing": _interlacing_doc(interlacing_check(g)),
        "fiedler_chain": _chain_doc(fiedler_chain(g)),
        "tolerances": TOLERANCES,
    }


def _domains_list(g: Graph, domains) -> list[dict]:
    return [{"sign": d.sign, "vertices": [g.labels[i] for i in d.members]} for d in domains]


def domains_document(g: Graph, r: NodalBoundReport, version: str = "") -> dict:
    rep: NodalDomainReport = r.domains
    convention = ("1-based, ascending eigenvalues" if r.matrix == "L"
                  else "1-based, descending eigenvalues")
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": version,
        "matrix": r.matrix,
        "index": r.index,
        "index_convention": convention,
        "eigenvalue": r.eigenvalue,
        "vector": dict(zip(g.labels, rep.vector.tolist())),
        "oriented": rep.oriented,
        "zero_threshold": rep.tau,
        "strong": _domains_list(g, rep.strong),
        "weak": _domains_list(g, rep.weak),
        "bound": {
            "ell": r.ell,
            "ell_prime": r.ell_prime,
            "strong_bound": r.strong_bound,
            "weak_bound": r.weak_bound,
            "strong_count": r.strong_count,
            "weak_count": r.weak_count,
            "counts": "all domains" if r.matrix == "L" else "positive domains",
            "tightened": r.tightened,
            "holds": r.holds,
            "skipped": r.skipped,
        },
    }


def bounds_document(g: Graph, report: BoundsReport, version: str = "") -> dict:
    doc = report.to_dict()
    doc.update(schema_version=SCHEMA_VERSION, tool_version=version, graph=graph_metadata(g))
    return doc
