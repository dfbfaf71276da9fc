"""Constants for swlag."""

from typing import Final

REPORT_SCHEMA: Final = "swlag-report/1"
FLOAT_DIGITS: Final = 17

# Exit codes
EXIT_OK: Final = 0
EXIT_RESIDUAL_FAILURE: Final = 1
EXIT_CONFIG_ERROR: Final = 2

# Largest argument of exp that does not underflow in double precision
EXP_UNDERFLOW: Final = 745.0

# Safe-point predicate
SAFE_ZERO_DISTANCE: Final = 0.02
SAFE_BOUNDARY_DISTANCE: Final = 0.05

# Unit-modulus tolerance for boundary data
UNIT_MODULUS_TOL: Final = 1e-12

# Quadrature
MIN_NODES: Final = 8
SINGULAR_CELL_CUTOFF: Final = 1e-4
WINDING_DEFECT_MAX: Final = 0.1
WINDING_MAX_STEPS: Final = 2**20

# Exclusion schedule
EXCLUSION_CAP: Final = 1e-4
PATCH_RADIUS_FACTOR: Final = 0.25
MARGIN_START_LEVEL: Final = 8
MARGIN_LEVELS: Final = 3
STABILITY_MAX: Final = 0.05

# Fits and classification
FIT_MIN_R2: Final = 0.99
CLASSIFY_MIN_R2: Final = 0.999
DOMINANCE_MIN: Final = 10.0


class Tolerance:
    """Relative thresholds of the verification suite."""

    CONFORMAL = 1e-9
    LAGRANGIAN = 1e-9
    QUATERNIONIC = 1e-9
    GRADIENT_IDENTITY = 1e-10
    WEAK_RESIDUAL = 1e-8
    DELTA_MASS = 1e-6
    WINDING_DEFECT = 0.01
