"""Lower-bound constructions, verifiers and exact solvers for p-centered colorings."""

__version__ = "0.1.0"

from .centered import (
    Coloring,
    SplitColoring,
    Verdict,
    Witness,
    find_threats,
    is_p1p2_centered,
    is_p_centered,
    is_p_centered_bruteforce,
    reduction_check,
    split_palette,
)
from .expansion import MinorModel, nabla_r_exact, nabla_r_greedy, verify_model
from .generators import (
    FamilyParams,
    clique,
    cycle,
    debski_graph,
    debski_size,
    debski_subdivided,
    gnp,
    gnp_degrees,
    grid,
    path,
    standard,
    star,
)
from .graph import Graph, connected_components, max_degree, subdivide, treedepth_exact
from .random_lb import (
    ProbeParams,
    degree_window,
    find_pair_path,
    janson_delta_upper,
    janson_mu,
    janson_report,
    janson_zero_prob,
    lower_bound_experiment,
    q_threshold,
    select_pairs,
)
from .solver import chi_p_exact, chi_p_greedy, chromatic_number_exact, star_chromatic_exact

__all__ = [name for name in dir() if not name.startswith("_")]
