import enum

class PotentialConvention(str, enum.Enum):
    CLASSIC = "classic"
    POTENTIAL = "potential"

class ProjectionStatus(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    STATIONARY_GRADIENT = "stationary_gradient"
    ESCAPED = "escaped"
    HIT_BOUNDARY = "hit_boundary"

class DiagnosticKind(str, enum.Enum):
    DEGENERATE_SEGMENT = "degenerate_segment"
    NEAR_DUPLICATE_VERTEX = "near_duplicate_vertex"
    ZERO_CURRENT = "zero_current"
    SELF_INTERSECTION = "self_intersection"

class Severity(str, enum.Enum):
    WARNING = "warning"
    ERROR = "error"

class CommandEnum(str, enum.Enum):
    EVAL = "eval"
    SURFACE = "surface"
    SECTIONS = "sections"
    CURVATURE = "curvature"
    TRACE = "trace"
    SCAN = "scan"
    VALIDATE = "validate"

class TargetKind(str, enum.Enum):
    CONSTANT = "constant"
    LINEAR = "linear"
    RADIAL = "radial"

class SeedMode(str, enum.Enum):
    GRID = "grid"
    FILE = "file"

class CurvatureMethod(str, enum.Enum):
    TENSOR = "tensor"
    STENCIL = "stencil"
