"""Graph mining at desk scale: community detection, node embedding,
whole-graph embedding, evaluation, and a reproducible CLI.

All estimators follow one lifecycle: construct with inspectable default
hyperparameters, ``fit``, then read results with ``get_embedding`` /
``get_memberships``.  All randomness flows through
:class:`~graphmine.graph_core.RandomSource`, so every result is a pure
function of its inputs and seeds.
"""

from .errors import (
    ConnectivityRetryExhausted,
    DegenerateSplit,
    DimensionMismatch,
    DisconnectedGraph,
    DuplicateEdge,
    EmptyCorpus,
    GraphContractError,
    GraphMineError,
    GraphTooLarge,
    IncompleteFeatureMap,
    IncompleteMembership,
    InputContractError,
    IsolatedNode,
    LengthMismatch,
    MatrixTooLarge,
    NoConvergence,
    NotFitted,
    NotSymmetric,
    OutOfRangeNode,
    RankTooLarge,
    SelfLoop,
    SingleClassTest,
    TooManyEdges,
)
from .graph_core import (
    Graph,
    RandomSource,
    SparseMatrix,
    ValidationReport,
    build_graph,
    erdos_renyi_gnm,
    normalized_laplacian,
    transition_matrix,
    triangles_per_node,
    validate_graph,
)
from .linalg import (
    DENSE_SIZE_CAP,
    EigenDecomposition,
    SvdResult,
    eig_symmetric,
    eigvals_symmetric,
    randomized_svd,
)
from .community import (
    LabelPropagationModel,
    ScdModel,
    SymNmfModel,
    canonicalize_memberships,
    lp_fit,
    modularity,
    scd_fit,
    symnmf_fit,
)
from .node_embedding import (
    NETMF_NODE_CAP,
    DeepWalkModel,
    NetMfModel,
    SkipGramParams,
    WalkCorpus,
    WalkletsModel,
    deepwalk_fit,
    generate_walks,
    netmf_fit,
    sgns_pair_gradients,
    sgns_pair_loss,
    sgns_train,
    walklets_fit,
)
from .graph_embedding import (
    GraphCorpus,
    NetLsdModel,
    SfModel,
    WlFeatureSet,
    WlSvdModel,
    netlsd_fit,
    sf_fit,
    wl_features,
    wl_svd_fit,
)
from .evaluation import (
    SoftmaxModel,
    SplitIndices,
    auc,
    nmi,
    softmax_fit,
    softmax_loss_and_gradient,
    softmax_predict,
    train_test_split,
)
from .io import (
    format_float,
    read_corpus_jsonl,
    read_edge_list,
    read_embedding_csv,
    read_labels_csv,
    read_membership,
    write_edge_list,
    write_embedding_csv,
    write_labels_csv,
    write_membership,
)

__version__ = "0.1.0"
