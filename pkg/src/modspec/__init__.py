"""Spectral analysis of graph modularity.

Builds modularity and Laplacian matrices, certified eigendecompositions,
nodal domains of eigenvectors, exact modularity optima for small graphs
and checks of the inequalities that relate them.
"""

__version__ = "0.1.0"

from .errors import GraphFormatError, NumericalCheckError, OracleCapError, PreconditionError
from .graph import (Graph, Partition, VertexSet, boundary_and_volume, connected_components,
                    format_edge_list, induced_subgraph, parse_graph)
from .modularity import (ModularityMatrix, build_laplacians, build_modularity,
                         indivisibility_certificate, joint_modularity, modularity_Q,
                         partition_modularity)
from .spectral import (Spectrum, algebraic_connectivity, algebraic_modularity, eig_sym,
                       eigen_counts, fiedler_chain, interlacing_check, spectral_bisect,
                       spectral_summary)
from .nodal import (check_general_theorem, check_laplacian_bound, check_positive_bound,
                    nodal_domains, orient, strong_domains, weak_domains)
from .oracle import best_cut, best_partition, certify_indivisible, solve
from .bounds import BoundRecord, BoundsReport, sweep_cut, verify_all
from .generators import (FamilySpec, chung_lu_sample, clique_of_cliques, standard,
                         star_with_loops)
