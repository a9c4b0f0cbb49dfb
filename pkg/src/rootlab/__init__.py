"""Root selectors, tracking, and obstruction certificates for monic families."""
from .families import (
    BranchFamily,
    PresetInfo,
    constant_loop,
    cubic_fold,
    load_preset,
    preset_registry,
    quad_complex_loop,
    quartic_real_loop,
    quintic_real_family,
)
from .holder import HolderReport
from .monodromy import (
    BranchCertificate,
    CheckRecord,
    CollisionOnLoopError,
    LoopPermutation,
    NotClosedError,
    PeriodicityViolatedError,
    SeparationFailureError,
    branch_elimination_certificate,
    degree5_certificate,
    loop_permutation,
)
from .poly import (
    InvalidInputError,
    MonicPoly,
    RootMultiset,
    evaluate,
    from_roots,
    residual,
)
from .quad import (
    CustomSelector,
    FullRootSet,
    Region,
    Selector,
    WitnessReport,
    classify,
    complement,
    continuity_scan,
    custom_root,
    discontinuity_witness,
    discriminant,
    enumerate_continuous,
    xi_root,
)
from .solver import NoConvergenceError, SolveControls, polish, solve_all
from .stability import (
    BoundReport,
    DomainBox,
    Ivp,
    StepTooLargeError,
    char_poly,
    holder_exponent_at,
    hurwitz_stable,
    lambda_bar,
    lambda_bar_modulus_scan,
    solve_ivp,
    verify_bound,
)
from .tracking import (
    CoefficientPath,
    LocalSelectionReport,
    StepUnderflowError,
    TrackControls,
    TrajectoryBundle,
    local_selection,
    match_roots,
    track,
)

__version__ = "0.1.0"

__all__ = [
    "BranchCertificate",
    "BranchFamily",
    "BoundReport",
    "CheckRecord",
    "CoefficientPath",
    "CollisionOnLoopError",
    "CustomSelector",
    "DomainBox",
    "FullRootSet",
    "HolderReport",
    "InvalidInputError",
    "Ivp",
    "LocalSelectionReport",
    "LoopPermutation",
    "MonicPoly",
    "NoConvergenceError",
    "NotClosedError",
    "PeriodicityViolatedError",
    "PresetInfo",
    "Region",
    "RootMultiset",
    "Selector",
    "SeparationFailureError",
    "SolveControls",
    "StepTooLargeError",
    "StepUnderflowError",
    "TrackControls",
    "TrajectoryBundle",
    "WitnessReport",
    "branch_elimination_certificate",
    "char_poly",
    "classify",
    "complement",
    "constant_loop",
    "continuity_scan",
    "cubic_fold",
    "custom_root",
    "degree5_certificate",
    "discontinuity_witness",
    "discriminant",
    "enumerate_continuous",
    "evaluate",
    "from_roots",
    "holder_exponent_at",
    "hurwitz_stable",
    "lambda_bar",
    "lambda_bar_modulus_scan",
    "load_preset",
    "local_selection",
    "loop_permutation",
    "match_roots",
    "polish",
    "preset_registry",
    "quad_complex_loop",
    "quartic_real_loop",
    "quintic_real_family",
    "residual",
    "solve_all",
    "solve_ivp",
    "track",
    "verify_bound",
    "xi_root",
]
