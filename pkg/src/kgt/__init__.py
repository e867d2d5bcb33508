"""Finite k-graphs, skew products, covering towers and their simplicity checks."""

from .core import (
    Edge,
    KGraph,
    Path,
    build,
    compose,
    factor,
    paths_of_degree,
    structural_checks,
    validate_kgraph,
    vertex_at,
    are_isomorphic,
    is_isomorphism,
)
from .groups import (
    Cocycle,
    CocycleChain,
    FiniteGroup,
    ProfiniteElement,
    QuotientChain,
    bd_chain,
    s3_chain,
    trivial_chain,
    validate_chain,
    validate_cocycle,
)
from .constructions import (
    CoveringMap,
    TowerGraph,
    build_tower,
    covering_from_quotient,
    profinite_skew_bijection,
    projlim_path,
    projlim_paths,
    skew_product,
    to_dot,
    tower_from_chain,
    validate_covering,
)
from .analysis import (
    InfinitePathSpec,
    is_cofinal,
    is_simple_tower,
    find_lp_triples,
    local_periodicity_check,
    reach_set,
    thm51_condition_ii,
    tower_path_build,
    tower_path_decompose,
)

__version__ = "0.1.0"
