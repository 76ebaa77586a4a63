"""Tripod configurations and triple normals of closed curves.

Computes, certifies, and counts triples of concurrent normals of closed
curves in the Euclidean plane, on the unit sphere (one hemisphere), and
in the Poincare disk, plus the analogous configurations of regular
polygons.
"""

__version__ = "0.1.0"

from .geometry import (
    EUCLIDEAN,
    HYPERBOLIC,
    SPHERE,
    GeodesicLine,
    GeometryError,
    get_geometry,
    intersect_lines,
    circle_through_chord,
)
from .curves import (
    SampledCurve,
    SupportCurve,
    disk_radial_curve,
    ellipse,
    equidistant,
    evolute,
    limacon,
    parametric_curve,
    reconstruct,
    sphere_radial_curve,
    verify_rotation_index,
)
from .euclidean import (
    TripodConfiguration,
    delta_curve_test,
    enumerate_classes,
    equidistant_invariance_check,
    find_tripods,
    theorem_lower_bound,
)
from .triple_normal import (
    Triangle,
    antipedal_triangle,
    fermat_point,
    max_circumscribing_triangle,
    solve_triple_normal,
    tau_center,
)
from .polygons import RegularPolygon, check_polygon_tripod, enumerate_regular
from .morse import (
    classify_boundary_critical,
    find_diameters,
    find_interior_critical_points,
    morse_bookkeeping,
)
from .minors import hyperbolic_minor_checks
