class PbnError(Exception):
    """Base class for toolkit errors."""


class ModelError(PbnError):
    """An invalid network description (bad references, probabilities, names)."""


class CapExceededError(PbnError):
    """A configured size cap (in-degree, node count, mode count, edge count) was exceeded."""


class SynthesisError(PbnError):
    """A synthesized controller failed its own verification; indicates a bug."""
