"""Exception hierarchy shared across the package."""


class QdtError(Exception):
    """Base class for all errors raised by this package."""


# --- configuration / engine ---

class MalformedConfig(QdtError):
    """config.json is invalid JSON or contains values of the wrong type."""


class QueryAborted(QdtError):
    """The user typed "exit" (or pressed the abort control) at a query."""


class NodeRevisited(QdtError):
    """A node identifier was executed twice; the run graph must be acyclic."""


class NodeFailure(QdtError):
    """A node raised during execute; carries the node id and the cause."""

    def __init__(self, node_id: str, cause: Exception):
        super().__init__(f"node '{node_id}' failed: {cause}")
        self.node_id = node_id
        self.cause = cause


class InterpretFailure(QdtError):
    """A node raised during interpret_result on the backward pass."""

    def __init__(self, node_id: str, cause: Exception):
        super().__init__(f"interpret_result of node '{node_id}' failed: {cause}")
        self.node_id = node_id
        self.cause = cause


class StepBudgetExceeded(QdtError):
    """The forward pass ran past the configured node-execution budget."""


class IoFailure(QdtError):
    """Persisting run artifacts failed."""


# --- queries ---

class NoAnswerAvailable(QdtError):
    """Automated mode reached a query that has no default value."""


class InvalidScriptedAnswer(QdtError):
    """A scripted answer failed the query's validation."""


# --- builders ---

class UnknownHyperparameter(QdtError):
    """set_value was called with a name the builder does not declare."""


class ValueRejected(QdtError):
    """A candidate hyperparameter value failed its type or test check."""


class UnboundHyperparameter(QdtError):
    """build was called while hyperparameters without defaults are unbound."""

    def __init__(self, names):
        super().__init__(f"unbound hyperparameters: {', '.join(names)}")
        self.names = list(names)


# --- problems ---

class SizeTooSmall(QdtError):
    """Requested random instance is below the problem class minimum size."""


class MissingField(QdtError):
    """An instance record lacks a required field."""


class ShapeMismatch(QdtError):
    """An instance record field has the wrong shape or inconsistent sizes."""


class UnsupportedEncoding(QdtError):
    """The problem class does not support the requested direct encoding."""


class InvalidSolutionShape(QdtError):
    """A solution payload does not match the instance (length, range...)."""


class UndecodableState(QdtError):
    """A bitstring cannot be decoded, even after repair."""


# --- encodings ---

class UnsupportedConstraints(QdtError):
    """The encoder cannot express the problem's constraint groups."""


class DegreeOverflow(QdtError):
    """Encoding would produce terms above degree two in the binary variables."""


class LengthMismatch(QdtError):
    """A bit or spin vector does not match the model size."""


# --- circuits ---

class TooFewQubits(QdtError):
    """A circuit template needs more qubits than requested."""


class QasmSyntaxError(QdtError):
    """Input text does not match the accepted OpenQASM 3 subset."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class UnsupportedFeature(QdtError):
    """A construct outside the accepted OpenQASM 3 subset."""

    def __init__(self, construct: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}unsupported construct '{construct}'")
        self.construct = construct
        self.line = line


class QubitIndexOutOfRange(QdtError):
    """A gate addresses a qubit index outside the declared register."""


class SizeMismatch(QdtError):
    """Circuit and model sizes disagree."""


class UnboundParameter(QdtError):
    """simulate was called with unbound symbolic parameters."""


class TooManyQubits(QdtError):
    """Circuit exceeds the statevector simulator qubit cap."""


# --- solvers ---

class TooManyVariables(QdtError):
    """Model exceeds the exhaustive-search variable cap."""


# --- service ---

class BadOverrides(QdtError):
    """Session creation received invalid configuration overrides."""
