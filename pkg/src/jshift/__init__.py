"""Exact dynamics of weighted backward shifts on spaces of bounded sequences.

The package decides whether a backward weighted shift on l-infinity is a
J-class (equivalently J^mix-class) operator, produces finite growth
certificates, builds the explicit approximating vectors that realise
extended-limit-set membership, and probes approximation errors on finite
coordinate windows.  All decisions are made in exact rational arithmetic.
"""

__version__ = "0.1.0"

from jshift.errors import (
    DomainError,
    GeneratorRefusal,
    DiagonalFailure,
    InconclusiveParametersError,
    SpecFormatError,
    UnsupportedRepresentationError,
)
from jshift.weights import (
    Ambient,
    BlockAlternating,
    Constant,
    EventuallyPeriodic,
    Exactness,
    ProductValue,
    Table,
    TwoSidedEventuallyPeriodic,
    WeightSpec,
    inf_window_product,
    operator_norm,
    prefix_product,
    weight_at,
    window_product,
)
from jshift.vectors import (
    ComplexRational,
    FiniteVector,
    TailConstantVector,
    apply_shift,
    distance_sup,
    is_c0,
    sup_norm,
)
from jshift.criteria import (
    Classification,
    GrowthCertificate,
    Verdict,
    classify_bilateral,
    classify_j0,
    classify_salas_lp,
    classify_unilateral,
    find_growth_certificate,
    lower_bound_at,
)
from jshift.witness import (
    LazyWitness,
    WitnessFamily,
    WitnessGenerator,
    bilateral_obstruction,
    build_witness,
    c0_obstruction,
    diagonal_combine,
    mixing_family,
    verify_witness,
)
from jshift.probe import (
    ProbeQuery,
    ProbeReport,
    min_preimage_norm,
    min_window_error,
    probe_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
