"""Co-evolution of an item-based collaborative-filtering recommender and its users."""

from ._core import (
    ContractViolation,
    InvalidInput,
    Network,
    RewiringConfig,
    __version__,
    density_sweep,
    evaluate,
    gini,
    herfindahl,
    hysteresis_run,
    icf_scores,
    ingest_ratings,
    item_similarity,
    modify_density,
    popularity_rank_curve,
    read_snapshot,
    run_to_stationarity,
    sweep,
    synthetic_network,
    theta_sweep,
    top_list,
    top_share,
    write_snapshot,
)

__all__ = [
    "ContractViolation",
    "InvalidInput",
    "Network",
    "RewiringConfig",
    "__version__",
    "density_sweep",
    "evaluate",
    "gini",
    "herfindahl",
    "hysteresis_run",
    "icf_scores",
    "ingest_ratings",
    "item_similarity",
    "modify_density",
    "popularity_rank_curve",
    "read_snapshot",
    "run_to_stationarity",
    "sweep",
    "synthetic_network",
    "theta_sweep",
    "top_list",
    "top_share",
    "write_snapshot",
]
