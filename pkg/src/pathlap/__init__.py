"""k-path Laplacian consensus toolkit.

Builds random directed networks, the k-path Laplacian operator family, and
one-hop / exponentially weighted multi-hop consensus dynamics; packages
trajectory prefixes and final consensus values into supervised JSONL
datasets with native baseline evaluation.
"""

from .consensus import (
    CaseType,
    ConsensusConfig,
    ConsensusRun,
    UpdateOperator,
    base_epsilon,
    build_update,
    initial_state,
    run_consensus,
)
from .dataset import (
    Dataset,
    DatasetManifest,
    GenerationSpec,
    TrajectorySample,
    export_flat_csv,
    generate_dataset,
    generate_sample,
    read_dataset,
    replay_sample,
    write_dataset,
)
from .errors import (
    ConnectivityError,
    DegenerateGraphError,
    GenerationError,
    ParameterError,
    PathlapError,
    SchemaError,
    StepSizeError,
)
from .evaluate import EvalReport, Strategy, baseline_predict, evaluate_dataset, mape, rmse
from .graphs import (
    DirectedGraph,
    GraphModel,
    GraphModelSpec,
    UndirectedGraph,
    default_params,
    is_connected,
    orient,
    read_edge_list,
    sample_undirected,
    write_edge_list,
)
from .operators import (
    UNREACHABLE,
    DistanceMatrix,
    DistanceMode,
    KPathDecomposition,
    MultiHopOperator,
    all_pairs_distances,
    diameter,
    directed_laplacian,
    k_path_decomposition,
    multi_hop_operator,
)
from .spectral import (
    SpectralReport,
    fiedler_value,
    k_path_components,
    spectral_report,
    zero_multiplicity,
)

__version__ = "0.1.0"
