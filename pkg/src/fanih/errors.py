"""Exception hierarchy for the fan intersection-cohomology engine."""


class FanIHError(Exception):
    """Base class for all engine errors."""


class ParseError(FanIHError):
    """Malformed input file or literal."""


# --- fan construction -------------------------------------------------------

class FanError(FanIHError):
    """Invalid fan data."""


class NotStrictlyConvex(FanError):
    """A cone contains a line (is not pointed)."""


class RedundantRay(FanError):
    """A listed generator is not an extreme ray of its cone."""


class OverlappingCones(FanError):
    """Two cones share interior points."""


class NotCommonFace(FanError):
    """Two cones intersect in a set that is not a common face."""


class NotPurelyDimensional(FanError):
    """Maximal cones do not all have the same dimension."""


class ConeNotInFan(FanError):
    """Referenced cone id or ray set is not part of the fan."""


class RayNotInterior(FanError):
    """Subdivision ray does not pass through the cone's relative interior."""


class NotFullDim(FanError):
    """Polytope is not full-dimensional."""


class StrictConvexityFailed(FanError):
    """A conewise linear function is not strictly convex across some wall."""


# --- graded algebra ---------------------------------------------------------

class NotAFace(FanIHError):
    """Restriction requested to a cone that is not a face."""


class TruncationTooLow(FanIHError):
    """A module generator may exist above the degree truncation bound."""


# --- sheaves ----------------------------------------------------------------

class NotFree(FanIHError):
    """A stalk presentation failed the freeness bookkeeping."""


class BookkeepingMismatch(FanIHError):
    """Decomposition multiplicities do not reproduce the stalk degrees."""


# --- duality ----------------------------------------------------------------

class NotAFacetForm(FanIHError):
    """Linear form does not cut out the requested facet nonnegatively."""


class LiftFailed(FanIHError):
    """A section could not be lifted through a restriction map."""


class LiftNotUnique(FanIHError):
    """A homomorphism lift expected to be unique has a nontrivial kernel."""


class LiftMissing(FanIHError):
    """A homomorphism lift expected to exist has no solution."""


class QuasiConvexityUnknown(FanIHError):
    """Duality asserted only on fans recognized as quasi-convex."""


# --- invariants -------------------------------------------------------------

class FaceLatticeTooLarge(FanIHError):
    """Desk-scale guard: face lattice exceeds the configured size limit."""
