"""Welch bounds for approximate Schauder frames in finite-dimensional l^p spaces."""
from .asf import (
    DualPair,
    LpSpace,
    analysis,
    frame_operator,
    gram,
    hilbert_embed,
    is_normalized,
    normalization_report,
    pairing,
    synthesis,
    tightness,
    trace_S,
    trace_S2,
)
from .bounds import (
    BoundRecord,
    BoundReport,
    classical_bounds,
    discrete_welch_max_check,
    discrete_welch_sum_check,
    full_report,
    gerzon,
    gram_rank_check,
    hadamard_rank_check,
    p_sum_check,
    trace_power_check,
    welch_rhs,
)
from .continuous import (
    ContinuousASF,
    FiniteMeasure,
    cont_frame_operator,
    cont_metrics,
    cont_p_check,
    cont_trace,
    cont_trace2,
    cont_trace_power_check,
    cont_welch_check,
    partition_construction,
)
from .errors import WelchError
from .metrics import equiangularity, frame_correlation, pseudo_frame_potential, rms_cross
from .numkernel import ToleranceConfig, eigen, hadamard_power, numerical_rank, spectral_verdict, trace_power
from .optimize import SearchConfig, SearchResult, etf_search, grassmannian_search, potential_minimize
from .symlift import explicit_lift, lifted_frame_spectrum, lifted_gram, sym_dim

from types import ModuleType as _Module

__all__ = sorted(k for k, v in globals().items() if not k.startswith("_") and not isinstance(v, _Module))
