"""regionkit: contiguity-constrained regionalization of count data.

Normalizes per-region activity counts into proportions, builds a region
adjacency graph, groups regions by greedy minimum-spanning-tree cuts
under a within-group SSD objective, and selects the group count with the
Calinski-Harabasz pseudo F-statistic.
"""

from .contiguity import (
    ContiguityGraph,
    from_adjacency_list,
    knn_augment,
    repair_connectivity,
    rook_adjacency,
)
from .errors import InfeasibleError, InputError, ParseError, RegionKitError
from .estimator import SkaterRegions, as_contiguity_graph
from .geometry import RegionShape, load_geojson
from .ingest import (
    CountTable,
    FeatureMatrix,
    RegionNote,
    RegionRecord,
    filter_regions,
    load_counts,
    normalize,
    read_name_list,
)
from .model_select import (
    FStatEntry,
    FStatSeries,
    calinski_harabasz,
    scan_k,
    select_best,
)
from .plotting import plot_fstat
from .report import export_geojson
from .skater import (
    Partition,
    WeightedGraph,
    best_cut,
    edge_costs,
    mst,
    nested_partitions,
    partition,
    partition_is_contiguous,
    ssd,
)
from .synth import PlantedDataset, PlantedScenario, adjusted_rand_index, generate

__version__ = "0.1.0"

__all__ = [
    "CountTable",
    "ContiguityGraph",
    "FStatEntry",
    "FStatSeries",
    "FeatureMatrix",
    "InfeasibleError",
    "InputError",
    "ParseError",
    "Partition",
    "PlantedDataset",
    "PlantedScenario",
    "RegionKitError",
    "RegionNote",
    "RegionRecord",
    "RegionShape",
    "SkaterRegions",
    "WeightedGraph",
    "adjusted_rand_index",
    "as_contiguity_graph",
    "best_cut",
    "calinski_harabasz",
    "edge_costs",
    "export_geojson",
    "filter_regions",
    "from_adjacency_list",
    "generate",
    "knn_augment",
    "load_counts",
    "load_geojson",
    "mst",
    "nested_partitions",
    "normalize",
    "partition",
    "partition_is_contiguous",
    "plot_fstat",
    "read_name_list",
    "repair_connectivity",
    "rook_adjacency",
    "scan_k",
    "select_best",
    "ssd",
    "__version__",
]
