"""Pure (strict) Nash equilibria of evolutionary games on networks."""

from .equilibria import (
    IdsEquivalence,
    ProfileClassification,
    PureProfile,
    Verdict,
    best_response_oracle,
    classify_pure,
    enumerate_classified,
    ids_equivalence,
    jacobian_at,
    lambda_v,
    neighbor_counts,
    unique_sne_condition,
)
from .game import EgnInstance, GameClass, PayoffMatrix, classify_game, load_instance
from .graph import (
    Graph,
    caterpillar,
    enumerate_independent_dominating_sets,
    erdos_renyi,
    from_edge_list,
    star,
)
from .report import bundled_path

__version__ = "0.1.0"
