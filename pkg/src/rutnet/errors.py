"""Error types shared across the package.

Every domain error carries a stable ``code`` (its class name) so the CLI can
print single-line machine-parsable messages and the HTTP service can map
failures to status codes without string matching.
"""


class RutnetError(Exception):
    @property
    def code(self) -> str:
        return type(self).__name__


# mixture domain
class InvalidGrade(RutnetError):
    pass


class OutOfBoundsPass(RutnetError):
    pass


class InvalidMixture(RutnetError):
    pass


# dataset
class HeaderMismatch(RutnetError):
    pass


class MalformedRow(RutnetError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class NonmonotonicCurve(RutnetError):
    pass


class EmptyDataset(RutnetError):
    pass


class InsufficientData(RutnetError):
    pass


# neural engine
class BadDims(RutnetError):
    pass


class TrainingDiverged(RutnetError):
    pass


class DimensionMismatch(RutnetError):
    pass


class ShapeMismatch(RutnetError):
    pass


class StaleCache(RutnetError):
    pass


# evaluation
class LengthMismatch(RutnetError):
    pass


class EmptyInput(RutnetError):
    pass


class DegenerateVariance(RutnetError):
    pass


# prediction
class UnknownFactor(RutnetError):
    pass


class BadGrid(RutnetError):
    pass


class MissingThreshold(RutnetError):
    pass


# artifact serialization
class SchemaError(RutnetError):
    pass


class VersionMismatch(RutnetError):
    pass
