"""Exception types shared across the package."""


class PlaneCarveError(Exception):
    """Base class for all library errors."""


class ParseError(PlaneCarveError):
    """Malformed PLG / tree / script text."""


class BadTwin(PlaneCarveError):
    """Dart pairing is not a fixed-point-free involution."""


class NotPlanar(PlaneCarveError):
    """Rotation system violates the Euler relation on some component."""


class Disconnected(PlaneCarveError):
    """Operation requires a connected graph."""


class Edgeless(PlaneCarveError):
    """Operation requires at least one edge."""


class UnknownVertex(PlaneCarveError):
    pass


class Overlap(PlaneCarveError):
    """Vertex sets overlap where they must be disjoint."""


class SelfLoopContract(PlaneCarveError):
    pass


class NotIncident(PlaneCarveError):
    pass


class DirectedMismatch(PlaneCarveError):
    """Directed lift must consume a head dart and a tail dart at the vertex."""


class CrossingArc(PlaneCarveError):
    """Chosen lift arc would cross another edge incident to the vertex."""


class BadAddress(PlaneCarveError):
    """Script step references a dart/edge/vertex absent at that point."""


class LabelMismatch(PlaneCarveError):
    """Carving tree does not label exactly the vertex set of the graph."""


class GraphMismatch(PlaneCarveError):
    pass


class PairIsLinked(PlaneCarveError):
    pass


class LeafEndpoint(PlaneCarveError):
    pass


class DisconnectedAssumptionViolated(PlaneCarveError):
    pass


class Not2VC(PlaneCarveError):
    pass


class Unrooted(PlaneCarveError):
    pass


class NoCertificate(PlaneCarveError):
    pass


class NoOuterFace(PlaneCarveError):
    pass


class TooLarge(PlaneCarveError):
    """Input exceeds the configured size cap for an exhaustive routine."""


class BadSize(PlaneCarveError):
    pass


class BadWitness(PlaneCarveError):
    pass


class NotEdgeDisjoint(PlaneCarveError):
    pass


class UndirectedAmbiguity(PlaneCarveError):
    pass


class SelfLoopContractImage(PlaneCarveError):
    pass


class InternalInvariantError(PlaneCarveError):
    """A guaranteed property failed at runtime; indicates a bug."""
