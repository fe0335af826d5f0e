"""Exception types shared across the library."""


class InvalidType(ValueError):
    """The requested family/rank/parameter is not a finite Coxeter type."""


class NegativeRoot(ValueError):
    """A positive root was required."""


class LemmaViolation(RuntimeError):
    """An orbit-structure guarantee failed; signals an implementation bug."""


class OrbitExhausted(RuntimeError):
    """The rotation orbit never reached a negative simple vertex; a bug."""


class NotAFace(ValueError):
    """The vertex set is not pairwise compatible."""


class NotAFacet(ValueError):
    """The face is not maximal."""


class NotRecognized(ValueError):
    """The graph is not the 1-skeleton of any generalized cluster complex."""


class NotAnAutomorphism(ValueError):
    """The permutation does not preserve the compatibility graph."""


class InvalidDiagramSymmetry(ValueError):
    """The simple-root permutation does not preserve the Coxeter matrix."""


class RelationViolation(RuntimeError):
    """A defining relation between named maps failed; signals a bug."""


class RankTooSmall(ValueError):
    """The operation is only meaningful for rank at least 2."""


class VerificationFailure(RuntimeError):
    """A clause of the automorphism-group verification failed."""

    def __init__(self, clause: str, message: str = ""):
        self.clause = clause
        super().__init__(message or f"verification clause failed: {clause}")


class IncompatibleDegree(ValueError):
    """Permutations act on vertex sets of different sizes."""
