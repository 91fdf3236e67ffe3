"""Exception hierarchy. Every error a caller should handle derives from
``VertexModelError``."""


class VertexModelError(Exception):
    pass


class GraphError(VertexModelError, ValueError):
    pass


class GraphSizeError(GraphError):
    pass


class PinMapError(VertexModelError, ValueError):
    pass


class ModelError(VertexModelError, ValueError):
    pass


class ModelDegreeError(ModelError):
    """The model was declared with a degree cap below a vertex degree it must serve."""


class MixedRingError(VertexModelError, TypeError):
    pass


class CapExceededError(VertexModelError):
    """A configured work cap (edges, tensor width, |U|) would be exceeded."""


class OutsideTableError(VertexModelError, KeyError):
    """A table-backed oracle was asked about a graph it has no value for."""
