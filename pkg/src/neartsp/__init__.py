"""Tours on complete graphs that are metric except at a few vertices.

The package measures how far an instance is from metric in two ways (the
count of vertices touching violating triangles and the size of a minimum
violating set), and provides solvers whose guarantees are parameterized by
those counts, alongside exact oracles, seeded generators, reporting, and a
command-line harness.
"""

from .errors import (
    BudgetExceeded,
    CapExceeded,
    GenerationFailed,
    InstanceFormatError,
    InvariantViolation,
    NearTSPError,
    NotMetric,
    ParityViolated,
    StructureViolated,
)
from .graph import (
    TriangleViolation,
    VertexPartition,
    WeightedGraph,
    bad_vertices_p,
    format_instance,
    is_metric,
    load_instance,
    min_violating_set,
    parse_instance,
    save_instance,
    violating_triangles,
)
from .structures import EdgeSet, Forest, Matching, MultiEdgeSet, Tour, Tree
from .prims import (
    BRUTE_FORCE_CAP,
    HELD_KARP_CAP,
    brute_force_tour,
    eulerian_tour,
    held_karp_path,
    held_karp_tour,
    min_weight_perfect_matching,
    mst,
    spanning_t_forest,
)
from .metric import christofides, shortcut_metric
from .alg_p import CHAIN_CAP, ChainSet, alg1, alg2, enumerate_bad_chains
from .alg_q import ORDERED_CHAIN_CAP, OrderedChainGuess, alg4, enumerate_ordered_chains
from .report import SolveReport, render_ratio, reports_to_csv
from .generate import (
    GeneratorSpec,
    gen_planted,
    gen_random_metric,
    generate,
    suite_specs,
)
from .solver import ALGORITHMS, attach_oracle, solve
from .estimator import NearMetricTSP
from . import safety

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BRUTE_FORCE_CAP",
    "BudgetExceeded",
    "CHAIN_CAP",
    "CapExceeded",
    "ChainSet",
    "EdgeSet",
    "Forest",
    "GenerationFailed",
    "GeneratorSpec",
    "HELD_KARP_CAP",
    "InstanceFormatError",
    "InvariantViolation",
    "Matching",
    "MultiEdgeSet",
    "NearMetricTSP",
    "NearTSPError",
    "NotMetric",
    "ORDERED_CHAIN_CAP",
    "OrderedChainGuess",
    "ParityViolated",
    "SolveReport",
    "StructureViolated",
    "Tour",
    "Tree",
    "TriangleViolation",
    "VertexPartition",
    "WeightedGraph",
    "alg1",
    "alg2",
    "alg4",
    "attach_oracle",
    "bad_vertices_p",
    "brute_force_tour",
    "christofides",
    "enumerate_bad_chains",
    "enumerate_ordered_chains",
    "eulerian_tour",
    "format_instance",
    "gen_planted",
    "gen_random_metric",
    "generate",
    "held_karp_path",
    "held_karp_tour",
    "is_metric",
    "load_instance",
    "min_violating_set",
    "min_weight_perfect_matching",
    "mst",
    "parse_instance",
    "render_ratio",
    "reports_to_csv",
    "safety",
    "save_instance",
    "shortcut_metric",
    "solve",
    "spanning_t_forest",
    "suite_specs",
    "violating_triangles",
    "__version__",
]
