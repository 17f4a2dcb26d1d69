"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``code`` so the CLI can emit a
JSON payload on failure.
"""


class MOPError(Exception):
    code = "MOPError"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def payload(self):
        out = {"error": self.code, "message": str(self)}
        out.update({k: str(v) for k, v in self.details.items()})
        return out


class OrderOverflow(MOPError):
    code = "OrderOverflow"


class QuadratureFailure(MOPError):
    code = "QuadratureFailure"


class NotAnAtom(MOPError):
    code = "NotAnAtom"


class NonPerfectIndex(MOPError):
    code = "NonPerfectIndex"


class ZeroNormalization(MOPError):
    code = "ZeroNormalization"


class DegenerateIndex(MOPError):
    code = "DegenerateIndex"


class DiagonalPoint(MOPError):
    code = "DiagonalPoint"


class NotInV(MOPError):
    code = "NotInV"


class UnsupportedMeasure(MOPError):
    code = "UnsupportedMeasure"


class OnAxisWithoutMode(MOPError):
    code = "OnAxisWithoutMode"


class InsufficientSamples(MOPError):
    code = "InsufficientSamples"


class IllConditionedWarning(RuntimeWarning):
    """Moment system condition estimate exceeded the warning threshold."""
