"""antnet: path-length network features via ant colony optimization.

Builds one complete weighted network per class of a labeled dataset, uses
the best node-covering path length found by an ant colony as a feature of
each network, and measures how that feature's distribution shifts when
points are inserted — same-class, nearby, intermediate, or from another
class.
"""

from .aco import (
    CLOSED_TOUR,
    OPEN_PATH,
    AcoParams,
    OracleRow,
    TourSolution,
    TransitionContext,
    brute_force_optimum,
    construct_solution,
    heuristic_matrix,
    init_pheromone,
    nearest_neighbor_length,
    oracle_comparison,
    resolve_tau0,
    solve,
    tour_length,
    transition_probabilities,
    update_pheromone,
    with_seed,
)
from .clustering import KMeansConfig, KMeansResult, kmeans, majority_vote_mapping
from .config import (
    ExperimentConfig,
    KvReader,
    apply_overrides,
    config_from_file_text,
    parse_bool,
    parse_floats,
    parse_formats,
    parse_kv_text,
)
from .core import (
    AntnetError,
    DistanceMatrix,
    InputError,
    LabeledDataset,
    LogicError,
    NumericError,
    RngSeed,
    build_distance_matrix,
    concat_datasets,
    euclidean_distance,
    pairwise_distances,
    standard_normals,
    zscore_normalize,
)
from .datagen import (
    CIRCLE_BLOB,
    LINE,
    POLYGON,
    SHAPE_KINDS,
    Fragment,
    GaussianBlobSpec,
    ShapeSpec,
    dataset_summary,
    gen_dataset,
    gen_gaussian_blob,
    gen_shape,
    list_presets,
    load_csv,
    load_preset,
    parse_dataset_spec,
    save_csv,
)
from .feature import (
    BoxplotStats,
    ExperimentReport,
    PhaseReport,
    PhaseSpec,
    aco_feature,
    baseline_phase,
    boxplot_stats,
    combine_scores,
    farthest_other_class,
    generate_default_phases,
    read_report_json,
    report_from_dict,
    report_to_dict,
    run_experiment,
    run_insertion_protocol,
    sample_class_members,
    write_report_csv,
    write_report_json,
)
from .network import ClassNetwork, build_class_networks, insert_points

__version__ = "0.1.0"

__all__ = [
    "AcoParams",
    "AntnetError",
    "BoxplotStats",
    "CIRCLE_BLOB",
    "CLOSED_TOUR",
    "ClassNetwork",
    "DistanceMatrix",
    "ExperimentConfig",
    "ExperimentReport",
    "Fragment",
    "GaussianBlobSpec",
    "InputError",
    "KMeansConfig",
    "KMeansResult",
    "KvReader",
    "LINE",
    "LabeledDataset",
    "LogicError",
    "NumericError",
    "OPEN_PATH",
    "OracleRow",
    "POLYGON",
    "PhaseReport",
    "PhaseSpec",
    "RngSeed",
    "SHAPE_KINDS",
    "ShapeSpec",
    "TourSolution",
    "TransitionContext",
    "aco_feature",
    "apply_overrides",
    "baseline_phase",
    "boxplot_stats",
    "brute_force_optimum",
    "build_class_networks",
    "build_distance_matrix",
    "combine_scores",
    "concat_datasets",
    "config_from_file_text",
    "construct_solution",
    "dataset_summary",
    "euclidean_distance",
    "farthest_other_class",
    "gen_dataset",
    "gen_gaussian_blob",
    "gen_shape",
    "generate_default_phases",
    "heuristic_matrix",
    "init_pheromone",
    "insert_points",
    "kmeans",
    "list_presets",
    "load_csv",
    "load_preset",
    "majority_vote_mapping",
    "nearest_neighbor_length",
    "oracle_comparison",
    "pairwise_distances",
    "parse_bool",
    "parse_dataset_spec",
    "parse_floats",
    "parse_formats",
    "parse_kv_text",
    "read_report_json",
    "report_from_dict",
    "report_to_dict",
    "resolve_tau0",
    "run_experiment",
    "run_insertion_protocol",
    "sample_class_members",
    "save_csv",
    "solve",
    "standard_normals",
    "tour_length",
    "transition_probabilities",
    "update_pheromone",
    "with_seed",
    "write_report_csv",
    "write_report_json",
    "zscore_normalize",
]
