"""Simulator for two-level theories with limited information content."""

__version__ = "0.1.0"

from .geometry import (
    DimensionMismatch,
    InvalidState,
    QubitEmbedding,
    TheoryLevel,
    apply_rotation,
    axis,
    canonical_masks,
    collapse,
    measure_prob,
    qubit_embedding,
    random_rotation,
    sample_outcome,
    state_vector,
)
from .oracle import (
    BooleanFunction,
    ParityQuestion,
    black_box_transform,
    classical_query,
    position_oracle,
    query_capability,
    single_query,
)
from .designs import (
    ComplementarityTable,
    CompositeQuestion,
    bose_bush_bound,
    build_table,
    classify_question,
    parameter_counts,
    verify_table,
)
from .infometrics import ComplementaryFrame, InfoMeasure, invariance_scan, single_info, total_info
from .dimwitness import (
    BallSampler,
    analytic_freq,
    analytic_freq_multi,
    ball_volume,
    disc_halfdisc_demo,
    fit_dimension,
    purity_drift,
    sample_means,
)
from .rng import make_stream
