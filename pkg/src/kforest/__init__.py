"""Resource-augmented k-forest: certified moat growing inside a penalty search."""
from .model import (
    DemandPair, Edge, Instance, InstanceStats, InvalidInstance, WeightedGraph,
    connected_demands, cut_edges, cut_separates, fmt_rat, parse_rat, validate_instance,
)
from .pcgst import PcgstOutcome, prune_forest, removal_count, run_pcgst
from .search import SearchConfig, solve_kforest
from .oracle import brute_force_opt, check_theorem_bound
from .instance_io import GeneratorSpec, generate, parse_instance, serialize_instance

__version__ = "0.1.0"
