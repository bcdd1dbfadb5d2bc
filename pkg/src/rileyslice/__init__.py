"""Computational geometry of the parabolic and elliptic Riley slices.

Farey words and their trace polynomials, pleating-ray continuation, cusp
enumeration, interior certification via ray neighbourhoods, the classical
discreteness bounds, and limit-set rendering for the two-generator groups
<X, Y_rho> with cone orders (a, b).
"""

from .errors import (BranchTrackingError, ContinuationError, NumericRangeError,
                     RileySliceError, RootConvergenceError, SeedFailureError,
                     ValidationError)
from .farey import (APEX, FareyWord, Slope, farey_neighbors, farey_sequence,
                    farey_word, make_slope, stern_brocot)
from .limitset import GroupWord, LimitSetCloud, enumerate_reduced, limit_set, rasterize
from .moebius import (INF, ConeOrders, MapClass, MapKind, MoebiusMap,
                      PARABOLIC_ORDERS, chordal_distance, classify, fixed_points,
                      generator_pair, jorgensen_value)
from .pleating import (CuspPoint, ExtendedRayPoint, RayTrace, cusp_point,
                       elliptic_ray_points, in_neighborhood, neighborhood_check,
                       ray_seed, trace_ray)
from .raster import Raster, Viewport
from .slices import (BoundReport, SlicePoint, Verdict, classical_bounds,
                     classify_point, cusp_cloud, render_slice)
from .traces import (TracePolynomial, farey_polynomial_direct,
                     farey_polynomial_recursive, farey_trace, poly_eval,
                     poly_roots, word_matrix)

__version__ = "0.1.0"
