from typing import Optional

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class OmegaSurfError(Exception):
    """Base error. Carries the process exit code the CLI should return."""

    exit_code: int = EXIT_FAILURE

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


# --- input errors (exit 2) ---

class ParseError(OmegaSurfError):
    exit_code = EXIT_USAGE


class SchemaError(OmegaSurfError):
    exit_code = EXIT_USAGE


class DegenerateInput(OmegaSurfError):
    exit_code = EXIT_USAGE


class ConventionError(OmegaSurfError):
    exit_code = EXIT_USAGE


# --- numerical errors (exit 1) ---

class ApexOnBoundaryLine(OmegaSurfError):
    def __init__(self, loop_index: int = -1, vertex_index: int = -1, detail: Optional[str] = None):
        self.loop_index = int(loop_index)
        self.vertex_index = int(vertex_index)
        super().__init__(
            detail or f"Evaluation point lies on a boundary line (loop {self.loop_index}, vertex {self.vertex_index})"
        )


class DegenerateTriangle(OmegaSurfError):
    pass


class StationaryGradient(OmegaSurfError):
    pass


class SingularStencil(OmegaSurfError):
    pass


class NotStarShaped(OmegaSurfError):
    pass
