"""Exception hierarchy shared by the kernel, solver, network and I/O layers.

Every exception carries a short ``category`` string that the CLI prints as the
machine-parsable part of its error line.
"""


class HermG1Error(Exception):
    category = "Error"


class GeometryError(HermG1Error):
    category = "GeometryError"


class DegenerateSystemError(GeometryError):
    """The rows of a homogeneous system are linearly dependent."""

    category = "DegenerateSystem"

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class IdealPointError(GeometryError):
    category = "IdealPoint"


class ZeroVectorError(GeometryError):
    category = "ZeroVector"


class DegenerateTangentsError(GeometryError):
    category = "DegenerateTangents"

    def __init__(self, message, corner=None, slot=None):
        super().__init__(message)
        self.corner = corner
        self.slot = slot


class ProjectionCollapseError(GeometryError):
    category = "ProjectionCollapse"

    def __init__(self, message, corner=None, slot=None):
        super().__init__(message)
        self.corner = corner
        self.slot = slot


class TopologyError(HermG1Error):
    category = "TopologyError"


class NonManifoldEdgeError(TopologyError):
    category = "NonManifoldEdge"


class InvalidIndexError(TopologyError):
    category = "InvalidIndex"


class DegenerateFaceError(TopologyError):
    category = "DegenerateFace"


class InputError(HermG1Error):
    category = "InputError"


class ParseError(InputError):
    category = "ParseError"


class SchemaError(InputError):
    category = "SchemaError"
