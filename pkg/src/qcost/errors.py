"""Exception hierarchy shared across the package."""


class QCostError(Exception):
    """Base class for every error raised by qcost."""


class InvalidGate(QCostError, ValueError):
    pass


class UnknownKind(QCostError, ValueError):
    pass


class OracleTooLarge(QCostError):
    pass


class NotClassical(QCostError):
    pass


class RoleMismatch(QCostError):
    pass


class NotCommutable(QCostError):
    pass


class NoPrimaryOutputs(QCostError):
    pass


class VerificationError(QCostError):
    """A rewrite pass produced a circuit that is not equivalent to its input."""

    def __init__(self, pass_name: str, message: str = ""):
        self.pass_name = pass_name
        super().__init__(message or f"pass {pass_name!r} broke equivalence")


class NonInjectiveMap(QCostError, ValueError):
    pass


class WireOutOfRange(QCostError, ValueError):
    pass


class UnknownLibrary(QCostError, ValueError):
    pass


class InvalidTemplate(QCostError):
    def __init__(self, template_id: str, message: str = ""):
        self.template_id = template_id
        super().__init__(message or f"template {template_id!r} does not reduce to identity")


class ParseError(QCostError):
    """Malformed input text. ``line`` is 1-based, or None when not tied to a line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnsupportedGate(ParseError):
    pass


class DuplicateWireInGate(ParseError):
    pass


class UndeclaredVariable(ParseError):
    pass


class UnserializableGate(QCostError):
    pass
