"""Exception taxonomy shared across the package."""


class HrgError(Exception):
    """Base class for all package-specific errors."""


class MalformedInput(HrgError):
    """Structurally broken input: dangling refs, duplicate ids, bad JSON."""


class ColorOutOfRange(MalformedInput):
    """Edge color outside 1..k."""


class NotComposable(HrgError):
    """Attempt to compose morphisms whose source/range do not match."""


class DegreeOutOfRange(HrgError):
    """Segment request outside 0 <= m <= n <= d(lambda)."""


class Disconnected(HrgError):
    """Operation requires a connected graph."""


class NotASkewProduct(HrgError):
    """Quotient requested of something not built by skew_product."""


class NotAnAutomorphism(HrgError):
    """Vertex/edge bijection fails to preserve the presentation."""


class AutomorphismsDontCommute(HrgError):
    """Crossed product needs pairwise commuting automorphisms."""


class NotABijection(HrgError):
    """Map expected to be a bijection is not."""


class NotYangBaxter(HrgError):
    """The braid identity fails; carries a witness triple."""

    def __init__(self, triple):
        super().__init__(f"Yang-Baxter identity fails at {triple!r}")
        self.triple = triple


class NonFunctorialCocycle(HrgError):
    """Edge labels violate a factorization square."""


class WindowTooSmall(HrgError):
    """A lazy construction needs morphisms outside the materialized window."""


class UnknownName(HrgError):
    """Catalog lookup for a name that is not registered."""


class UnsupportedOrder(HrgError):
    """Projective plane order outside the supported set."""


class TriellaAxiomViolation(HrgError):
    """One of the triple-set axioms fails; carries axiom tag and witness."""

    def __init__(self, axiom, witness):
        super().__init__(f"axiom {axiom} fails at {witness!r}")
        self.axiom = axiom
        self.witness = witness


class ShapeMismatch(HrgError):
    """Requested factorization shape does not sum to the word's shape."""


class ShapeTooSmall(HrgError):
    """Unit maps need shape >= (1,1)."""


class NotSinglyConnected(HrgError):
    """Operation requires a singly connected window."""


class WindowExhausted(HrgError):
    """Lazy graph cannot answer a query at the requested radius."""


class ShiftEquivalentDetected(HrgError):
    """Separation test given two streams that are shift equivalent."""
