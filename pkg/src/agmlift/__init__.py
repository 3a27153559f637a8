"""2-adic AGM recursions, canonical theta lifting, and point counting."""

from .agm import (
    AgmState,
    agm_iterate,
    agm_step,
    bridge_to_agm,
    level_descent_squares,
    projective_ratios,
    random_descent_pair,
    transform_identities,
    verify_descent_scale,
)
from .canlift import (
    LiftResult,
    ThetaPoint,
    extract_omega,
    j_from_lambda,
    lambda_invariant,
    lift_canonical,
    mumford_quadric_check,
    residual_general,
    residual_level2,
)
from .counting import (
    CountResult,
    CurveSpec,
    brute_count,
    count_points,
    init_seed,
    point_order_check,
)
from .errors import AgmliftError, ComputationError, InvalidInputError
from .padic import ABOVE_PRECISION, PadicElement, PadicField, newton_root
from .thetagrid import ThetaIndex, character, character_matrix_det, hadamard_apply

__version__ = "0.1.0"

__all__ = [
    "ABOVE_PRECISION",
    "AgmState",
    "AgmliftError",
    "ComputationError",
    "CountResult",
    "CurveSpec",
    "InvalidInputError",
    "LiftResult",
    "PadicElement",
    "PadicField",
    "ThetaIndex",
    "ThetaPoint",
    "agm_iterate",
    "agm_step",
    "bridge_to_agm",
    "brute_count",
    "character",
    "character_matrix_det",
    "count_points",
    "extract_omega",
    "hadamard_apply",
    "init_seed",
    "j_from_lambda",
    "lambda_invariant",
    "level_descent_squares",
    "lift_canonical",
    "mumford_quadric_check",
    "newton_root",
    "point_order_check",
    "projective_ratios",
    "random_descent_pair",
    "residual_general",
    "residual_level2",
    "transform_identities",
    "verify_descent_scale",
]
