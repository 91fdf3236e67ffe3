"""Exact partition functions of vertex models on multigraphs, and the
alternating-sum identities that characterize them."""

from .certify import (
    ParamOracle,
    Sweep,
    Witness,
    alt_sum_contract,
    alt_sum_pins,
    check_multiplicative,
    counterexample_f,
    counterexample_oracle,
    directed_alt_sum_contract,
    directed_alt_sum_pins,
    function_oracle,
    model_oracle,
    search_violation,
    sweep,
    table_oracle,
    thm2_implies_thm1_check,
)
from .connection import LabeledFamily, connection_slice, enumerate_labeled, rank_bound_check
from .errors import (
    CapExceededError,
    GraphError,
    GraphSizeError,
    MixedRingError,
    ModelDegreeError,
    ModelError,
    OutsideTableError,
    PinMapError,
    VertexModelError,
)
from .graphs import (
    DirectedMultigraph,
    LabeledGraph,
    Multigraph,
    PinMap,
    add_pins,
    canonical_form,
    contract_pins,
    cycle_graph,
    directed_add_pins,
    directed_canonical_form,
    directed_contract_pins,
    directed_disjoint_union,
    directed_pendant_reduction,
    disjoint_union,
    enumerate_graphs,
    glue_labeled,
    is_isomorphic,
    labeled_canonical_form,
    pendant_reduction,
    path_graph,
)
from .models import (
    DirectedVertexModel,
    VertexModel,
    exact_rank,
    model_from_function,
    moment_slice,
    random_model,
    random_rank_r_model,
    rank_r_model,
)
from .partition import directed_partition, partition_batch, partition_brute, partition_contract
from .scalars import Gaussian, format_scalar, parse_scalar
from .symbolic import (
    QuantumGraph,
    XPolynomial,
    YPolynomial,
    ZPolynomial,
    diagram_check,
    kernel_generator_contract,
    kernel_generator_pins,
    mu,
    p_poly,
    p_quantum,
    sigma,
    tau,
)

__version__ = "0.1.0"
