"""
xmodlink Errors
Exception hierarchy for groups, crossed modules, pairs, diagrams and the CLI
"""

from typing import Optional, Sequence


class XmodlinkError(ValueError):
    """Root of every xmodlink error; carries an optional witness tuple"""

    def __init__(self, message: str, witness: Optional[Sequence] = None):
        self.witness = tuple(witness) if witness is not None else None
        if self.witness is not None:
            message = f"{message} (witness: {', '.join(str(w) for w in self.witness)})"
        super().__init__(message)


# === ALGEBRA ==========================================================
class AlgebraError(XmodlinkError):
    pass


class NonAssociative(AlgebraError):
    pass


class NoIdentity(AlgebraError):
    pass


class NoInverse(AlgebraError):
    pass


class IndexOutOfRange(AlgebraError):
    pass


class BoundExceeded(AlgebraError):
    pass


class SingularGenerator(AlgebraError):
    pass


class GroupMismatch(AlgebraError):
    pass


class NotNormal(AlgebraError):
    pass


class NotAHomomorphism(AlgebraError):
    pass


# === CROSSED MODULES, RACKS, EXTENSIONS ===============================
class XmodError(XmodlinkError):
    pass


class NotAnAction(XmodError):
    pass


class NotAutomorphisms(XmodError):
    pass


class Peiffer1Violation(XmodError):
    pass


class Peiffer2Violation(XmodError):
    pass


class NotBijective(XmodError):
    pass


class SelfDistributivityViolation(XmodError):
    pass


class NotClosed(XmodError):
    pass


class CocycleViolation(XmodError):
    pass


class NonAbelianV(XmodError):
    pass


class NotSurjective(XmodError):
    pass


class KernelNotCentral(XmodError):
    pass


# === PAIRS ============================================================
class PairError(XmodlinkError):
    pass


class IncompleteTable(PairError):
    pass


class SizeMismatch(PairError):
    pass


# === DIAGRAMS =========================================================
class DiagramError(XmodlinkError):
    pass


class SignatureMismatch(DiagramError):
    pass


class EmptyDiagram(DiagramError):
    pass


class ClosureShapeMismatch(DiagramError):
    pass


# === CATEGORICAL GROUP ================================================
class CatGroupError(XmodlinkError):
    pass


class NotComposable(CatGroupError):
    pass


class ModuleMismatch(CatGroupError):
    pass


class InconsistentColours(CatGroupError):
    pass


# === INVARIANTS =======================================================
class InvariantError(XmodlinkError):
    pass


class WordSignatureMismatch(InvariantError):
    pass


class NotAStringKnot(InvariantError):
    pass


class MultipleComponents(InvariantError):
    pass


# === TEXT FORMATS =====================================================
class FormatError(XmodlinkError):
    """Parse failure located at path:line:column"""

    def __init__(self, message: str, path: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None):
        self.path = path
        self.line = line
        self.column = column
        location = [str(part) for part in (path or "<text>", line, column) if part is not None]
        super().__init__(f"{':'.join(location)}: {message}")


class UnknownToken(FormatError):
    pass


class TextSignatureMismatch(FormatError, SignatureMismatch):
    """Signature mismatch found while parsing a .tng text"""
    pass


# === COMMAND LINE =====================================================
class CommandError(XmodlinkError):
    pass


class UnknownVerb(CommandError):
    pass


class MissingOption(CommandError):
    pass


class FileNotFound(CommandError):
    pass


class UnknownBuiltin(CommandError):
    pass
