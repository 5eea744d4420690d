"""Topological series invariants of negative definite plumbing trees."""
from .graph_model import (
    GraphError,
    ResolutionGraph,
    ValidationReport,
    blow_up_free,
    induced_subgraph,
    load_graph,
    parse_graph,
    validate,
    valency,
)
from .lattice import GroupClass, Lattice, lattice_of
from .laufer import artin_cycle, artin_trace_increments, classify, compute_J, compute_s
from .series import (
    FactoredRationalFunction,
    MultiSeries,
    ReducedSeries,
    binomial_coefficient_chi,
    expand_factored,
    h_select,
    project,
    series_sub_difference,
)
from .invariants import (
    acampo_zeta,
    chi_sum_lhs,
    hilbert_from_p,
    multiplicity_vector,
    n_poly_from_graph,
    p_laufer,
    superisolated_n_poly,
    z_h_series,
    z_reduced,
    z_relative,
    z_series,
)

__version__ = "0.1.0"
