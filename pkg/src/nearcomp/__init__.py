"""Exact-rational toolkit for sequences that converge with a known modulus only along probes."""

from .coding import (
    PrefixCode,
    decide_enumerated_member,
    decide_prefix_member,
    kc_assign,
    lengths_from_weights,
    prefix_free,
)
from .compression import CompressionResult, Diagonal, anti_cauchy, compress, diagonal
from .core import (
    BallCode,
    Rational,
    ball,
    dyadic,
    format_rational,
    nu_q,
    nu_q_index,
    pair,
    parse_rational,
    rational,
    unpair,
)
from .errors import (
    HorizonExceeded,
    KraftOverflow,
    MassExceeded,
    ModulusViolated,
    NearcompError,
    SignUndecidable,
    TieUndecidable,
    UnboundednessUnverified,
    WeightNotPositive,
    WitnessInsideBall,
    ZeroWitnessNotFound,
)
from .extraction import (
    LabeledBall,
    QuaternarySupport,
    Side,
    decode_quaternary,
    embed_indicator_sum,
    extract_support,
    label_ball,
    locate,
    quaternary_value,
)
from .field import (
    Polynomial,
    SignedInterval,
    creal_add,
    creal_inv,
    creal_mul,
    creal_neg,
    poly_eval,
    refine_root,
    sqrt_real,
)
from .harness import (
    ModulusTable,
    Violation,
    brute_min_modulus,
    check_cauchy_modulus,
    check_modulus,
    falsify_cauchy,
    probe_suite,
)
from .sequences import (
    ModulusedReal,
    ModulusEvaluator,
    Probe,
    RealSequenceGrid,
    SequenceEvaluator,
)

__version__ = "0.1.0"
