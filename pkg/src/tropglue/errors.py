"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""


class TropGlueError(Exception):
    code = "ERROR"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_json(self):
        out = {"code": self.code, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


class MalformedInputError(TropGlueError, ValueError):
    code = "MALFORMED"


class InfeasibleError(TropGlueError):
    code = "INFEASIBLE"


class EmptyPolyhedronError(TropGlueError):
    code = "EMPTY_POLYHEDRON"


class InvalidStratumError(TropGlueError):
    code = "INVALID_STRATUM"


class NoRayError(TropGlueError):
    code = "NO_RAY"


class ZeroVectorError(TropGlueError):
    code = "ZERO_VECTOR"


class BrokenPathError(TropGlueError):
    code = "BROKEN_PATH"


class DisconnectedError(TropGlueError):
    code = "DISCONNECTED"


class LabelClashError(TropGlueError):
    code = "LABEL_CLASH"


class UnbalancedError(TropGlueError):
    code = "UNBALANCED"


class GenusTooSmallError(TropGlueError):
    code = "GENUS_TOO_SMALL"


class NonTransverseError(TropGlueError):
    code = "NON_TRANSVERSE"
