"""Rainbow CSS codes from edge-coloured flag graphs.

Levelled graphs multiply into flag products whose simplex graphs carry
maximal and rainbow subgraph families; picking families per Pauli side
yields CSS codes with transversal diagonal gates in the third level of
the Clifford hierarchy.  The package covers the full pipeline: factor
graphs and gluings, flag enumeration, subgraph censuses, stabilizer
assembly over GF(2), logical bases, distance searches, triorthogonality
checks with CCZ interaction censuses, and edge contraction of the
supporting lattices.
"""

from rainbow.assembly import (
    Assignment,
    AssemblyError,
    CssCode,
    assemble,
    coloured_logicals,
    logical_basis,
    predicted_k,
    rebase_z_logicals,
)
from rainbow.contraction import (
    ContractedGraph,
    ContractibilityReport,
    contract,
    contracted_code,
    contractibility_check,
)
from rainbow.distance import (
    DistanceError,
    DistanceReport,
    exact_distance_upto,
    isd_upper_bound,
)
from rainbow.graphs import (
    GraphError,
    LevelledGraph,
    glue,
    load_graph,
    make_complete_bipartite,
    make_cycle,
    make_figure_eight,
    parse_factor,
    save_graph,
)
from rainbow.products import (
    Flag,
    ProductGraph,
    SimplexGraph,
    build_simplex_graph,
    cartesian_product,
    enumerate_flags,
)
from rainbow.strings import StringLabel, install_strings, labelled_interactions
from rainbow.subgraphs import (
    Subgraph,
    clique_census,
    maximal_subgraphs,
    rainbow_multi,
    rainbow_rank,
    rainbow_two,
)
from rainbow.transversal import (
    Bipartition,
    TransversalError,
    TriorthReport,
    ccz_interactions,
    check_triorthogonality,
    find_bipartition,
    orientation_bipartition,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "AssemblyError",
    "Bipartition",
    "ContractedGraph",
    "ContractibilityReport",
    "CssCode",
    "DistanceError",
    "DistanceReport",
    "Flag",
    "GraphError",
    "LevelledGraph",
    "ProductGraph",
    "SimplexGraph",
    "StringLabel",
    "Subgraph",
    "TransversalError",
    "TriorthReport",
    "assemble",
    "build_simplex_graph",
    "cartesian_product",
    "ccz_interactions",
    "check_triorthogonality",
    "clique_census",
    "coloured_logicals",
    "contract",
    "contracted_code",
    "contractibility_check",
    "enumerate_flags",
    "exact_distance_upto",
    "find_bipartition",
    "glue",
    "install_strings",
    "isd_upper_bound",
    "labelled_interactions",
    "load_graph",
    "logical_basis",
    "make_complete_bipartite",
    "make_cycle",
    "make_figure_eight",
    "maximal_subgraphs",
    "orientation_bipartition",
    "parse_factor",
    "predicted_k",
    "rainbow_multi",
    "rainbow_rank",
    "rainbow_two",
    "rebase_z_logicals",
    "save_graph",
    "__version__",
]
