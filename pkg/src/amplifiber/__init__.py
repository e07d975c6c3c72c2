"""Exact fibers, chamber fans and JK-residue canonical functions of amplituhedra."""

__version__ = "0.1.0"

from .errors import (AmplifiberError, DegeneracyError, GenericityError, PoleError,
                     PositivityError, UnsupportedError, ValidationError)
from .exact import (RatMatrix, Rational, det, levi_civita, orth_complement, pluecker,
                    rank, solve_cramer)
from .grassmann import (AmplituhedronInstance, Chart, FiberFrame, amplituhedron_map,
                        build_Z_moment_curve, fiber_frame, fiber_point, is_totally_positive,
                        sample_frame, sample_positive_C)
from .forms import (AffineHyperplane, FiberForm, affine_forms, boundary_normal,
                    cyclic_interval, fiber_denominator, general_fiber_form_value)
from .fans import (ChamberFan, Containment, GalePair, RaySystem, cone_contains,
                   enumerate_chambers, gale_transform, monte_carlo_completeness,
                   rays_from_frame, secondary_fan_polytope)
from .jk import (CanonicalValue, Triangulation, bracket, canonical_all_chambers,
                 canonical_function, conjecture_check, dissection_from_cone,
                 geomchar_identity, jk_residue, parity_dual, residue_at_cone,
                 triangle_canonical, triangulation_from_chamber)
