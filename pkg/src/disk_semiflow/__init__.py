"""Numerical toolkit for one-parameter semigroups of holomorphic self-maps
of the unit disk: Berkson-Porta generators, guarded ODE flows, Koenigs
linearizers by quadrature, half-plane lifting, boundary probes, and a
closed-form model gallery with a deterministic audit CLI."""

from .herglotz import (
    NevanlinnaData,
    RieszHerglotzData,
    eval_H,
    eval_Hprime,
    eval_p_disk,
    integrand_bound_check,
)
from .generator import (
    BerksonPortaData,
    GeneratorFn,
    decompose,
    eval_G,
    generator_fn,
    lambda_at_origin,
    validate_positivity,
)
from .semiflow import (
    FlowConfig,
    SemigroupModel,
    dw_point,
    flow,
    generator_residual,
    model_from_generator,
    semigroup_residual,
    trajectory,
)
from .koenigs import (
    KoenigsFunction,
    abel_residual,
    boundary_koenigs_fn,
    halfplane_conjugate,
    interior_koenigs_fn,
    koenigs_boundary,
    koenigs_interior,
    schroeder_residual,
)
from .lifting import (
    LiftedModel,
    conjugation_residual,
    lift_flow,
    lifted_generator,
    lifted_koenigs,
)
from .boundary import (
    ApproachPath,
    BoundaryPointReport,
    StolzAngle,
    angular_limit,
    boundary_report,
    classify_point,
    dilation,
    equicontinuity_modulus,
    koenigs_signature,
    long_time_boundary,
    time_equicontinuity,
    unrestricted_probe,
)
from .gallery import (
    GalleryEntry,
    channel_semigroup,
    gallery_ids,
    gallery_model,
    slit_map_forward,
    slit_map_inverse,
)

__version__ = "0.1.0"

__all__ = [
    "NevanlinnaData",
    "RieszHerglotzData",
    "eval_H",
    "eval_Hprime",
    "eval_p_disk",
    "integrand_bound_check",
    "BerksonPortaData",
    "GeneratorFn",
    "decompose",
    "eval_G",
    "generator_fn",
    "lambda_at_origin",
    "validate_positivity",
    "FlowConfig",
    "SemigroupModel",
    "dw_point",
    "flow",
    "generator_residual",
    "model_from_generator",
    "semigroup_residual",
    "trajectory",
    "KoenigsFunction",
    "abel_residual",
    "boundary_koenigs_fn",
    "halfplane_conjugate",
    "interior_koenigs_fn",
    "koenigs_boundary",
    "koenigs_interior",
    "schroeder_residual",
    "LiftedModel",
    "conjugation_residual",
    "lift_flow",
    "lifted_generator",
    "lifted_koenigs",
    "ApproachPath",
    "BoundaryPointReport",
    "StolzAngle",
    "angular_limit",
    "boundary_report",
    "classify_point",
    "dilation",
    "equicontinuity_modulus",
    "koenigs_signature",
    "long_time_boundary",
    "time_equicontinuity",
    "unrestricted_probe",
    "GalleryEntry",
    "channel_semigroup",
    "gallery_ids",
    "gallery_model",
    "slit_map_forward",
    "slit_map_inverse",
]
