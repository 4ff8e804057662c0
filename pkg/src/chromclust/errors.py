"""Exception taxonomy shared across the package.

Four failure families, kept deliberately coarse: malformed data
(StructuralError), inputs that exceed a documented size cap
(CapacityError), violated call preconditions (ContractError), and
internal checks that should never fire on correct code
(DiagnosticError).  Everything derives from ChromclustError so callers
can catch the whole family at once.
"""


class ChromclustError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(ChromclustError):
    """Malformed instance, clustering, or serialized payload."""


class CapacityError(ChromclustError):
    """Input exceeds a documented size limit (no silent truncation)."""


class ContractError(ChromclustError):
    """A documented precondition of the called function was violated."""


class DiagnosticError(ChromclustError):
    """Internal invariant failed; indicates a bug, not bad input."""
