"""Equivariant motion planning and topological complexity on linear Z/p spheres."""

from .action import CyclicLinearAction, SpherePoint, standard_action, validate
from .euler import (
    BurnsideElement,
    GCWComplex,
    VFieldExistence,
    euler_definition,
    euler_fixed_point_formula,
    linear_sphere_gcw,
    orbit_space_euler,
    vector_field_exists_predicate,
    weak_gap_check,
)
from .planner import (
    DomainId,
    PlannedPath,
    domain_membership,
    geodesic_planner,
    hemisphere_cover,
    hemisphere_product_planner,
    plan,
    select_planner_kind,
    three_domain_planner,
    two_domain_planner,
)
from .tc_oracle import (
    SphereQuery,
    TCValue,
    cat_g_sphere,
    propagate_bounds,
    tc_equivariant,
    tc_invariant,
    tc_sphere,
)
from .verify import VerifyConfig, VerifyReport, run_verify, uniform_sphere_sampler
from .vfield import TangentField, field_certificate, j_field, projection_field

__version__ = "0.1.0"
