"""Curvature of highest-weight orbits and focal-radius bounds from root data."""

__version__ = "0.1.0"

from .rootsys import (  # noqa: E402
    CartanType,
    RootSystem,
    build_root_system,
    inner,
    isoparametric_check,
    pairing,
    parse_cartan_type,
    weight_from_fundamental,
)
from .chevalley import build_chevalley, bracket, verify_jacobi  # noqa: E402
from .hwmodule import make_context, shapovalov_inner  # noqa: E402
from .curvature import c_delta, estimate_sum, maximize_sff, phi_set, sff_gram, sff_value_sq  # noqa: E402
from .bounds import combine_constants, focal_lower_bound, table1_constant  # noqa: E402
