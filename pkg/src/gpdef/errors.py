"""Exception hierarchy shared by every layer of the workbench.

All errors derive from :class:`GpdefError` so callers (notably the CLI) can
map them to exit codes in one place.  Input errors (bad text, bad shapes,
violated relations) derive from :class:`InputError`.
"""

from __future__ import annotations


class GpdefError(Exception):
    """Base class for all workbench errors."""


class InputError(GpdefError):
    """Something wrong with user supplied data (exit code 2 in the CLI)."""


class PresentationError(InputError):
    """Base class for DSL diagnostics; carries an optional source position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class DSLSyntaxError(PresentationError):
    """The text does not follow the grammar; names the expected token."""

    def __init__(self, message, line=None, column=None, expected=None):
        self.expected = expected
        super().__init__(message, line, column)


class UndeclaredName(PresentationError):
    pass


class DuplicateName(PresentationError):
    pass


class NonComposablePath(PresentationError):
    pass


class NonAdmissibleRelation(PresentationError):
    pass


class ShapeMismatch(PresentationError):
    pass


class UnknownArrow(PresentationError):
    pass


class NonComposableWalk(PresentationError):
    pass


class ImmediateInverse(PresentationError):
    pass


class NotFiniteDimensional(GpdefError):
    """Raised when an irreducible path reaches the rewriting length bound."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class FieldMismatch(GpdefError):
    pass


class SidedStructureMismatch(GpdefError):
    pass


class AlgebraMismatch(GpdefError):
    pass


class RelationViolated(InputError):
    """A module's matrices do not satisfy a relation of the algebra."""

    def __init__(self, relation: str, entry=None, value=None):
        self.relation = relation
        self.entry = entry
        self.value = value
        msg = f"relation {relation} does not act as zero"
        if entry is not None:
            msg += f" (entry {entry} equals {value})"
        super().__init__(msg)


class ZeroModule(GpdefError):
    pass


class FieldTooSmall(GpdefError):
    pass


class NotSpecialBiserial(InputError):
    pass


class InvalidString(InputError):
    pass


class DimensionGuardExceeded(GpdefError):
    pass


class PreconditionFailed(GpdefError):
    """A verifier's hypotheses do not hold; ``certificate`` names which one."""

    def __init__(self, certificate: str, detail: str = "", **data):
        self.certificate = certificate
        self.data = data
        super().__init__(f"precondition failed: {certificate}" + (f" ({detail})" if detail else ""))


class NoLiftSupplied(GpdefError):
    pass


class InvarianceViolation(GpdefError):
    """An invariance comparison failed; the offending report is attached."""

    def __init__(self, report):
        self.report = report
        super().__init__("invariance check failed")
