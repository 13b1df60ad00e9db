"""Exception hierarchy.

Every error carries a short ``condition`` string naming the mathematical
hypothesis that failed, which the command line surfaces verbatim.
"""

__all__ = [
    "AffineCharError",
    "RankMismatch",
    "SingularSublattice",
    "NotSublattice",
    "NotInjective",
    "NotSymmetric",
    "NotPositive",
    "NotLocalInjection",
    "NotCovering",
    "NotBlockDiagonal",
    "SplitFailure",
    "ParityMismatch",
    "ClosureCapExceeded",
    "NotEquivariant",
    "NotRegular",
    "GroupingFailure",
    "NotBijective",
    "SceneError",
]


class AffineCharError(ValueError):
    condition = "invalid input"

    def __init__(self, message, **witness):
        super().__init__(message)
        self.witness = witness

    def to_dict(self):
        return {
            "error": type(self).__name__,
            "condition": self.condition,
            "message": str(self),
            "witness": {k: _plain(v) for k, v in sorted(self.witness.items())},
        }


def _plain(value):
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


class RankMismatch(AffineCharError):
    condition = "objects must live on tori of matching rank"


class SingularSublattice(AffineCharError):
    condition = "sublattice must have full rank (nonzero determinant)"


class NotSublattice(AffineCharError):
    condition = "inner lattice must be contained in the outer lattice"


class NotInjective(AffineCharError):
    condition = "matrix must have full column rank"


class NotSymmetric(AffineCharError):
    condition = "level matrix must be symmetric"


class NotPositive(AffineCharError):
    condition = "level must be positive (-K positive definite)"


class NotLocalInjection(AffineCharError):
    condition = "morphism must be a local injection (injective tangent map)"


class NotCovering(AffineCharError):
    condition = "morphism must be a finite covering (square, nonzero determinant)"


class NotBlockDiagonal(AffineCharError):
    condition = "level must split as a product of the two factor levels"


class SplitFailure(AffineCharError):
    condition = "product splitting of the orbit space must be a bijection"


class ParityMismatch(AffineCharError):
    condition = "classes of odd degree vanish"


class ClosureCapExceeded(AffineCharError):
    condition = "Weyl group closure exceeded the element cap"


class NotEquivariant(AffineCharError):
    condition = "level must be Weyl-equivariant (w K w^T = K)"


class NotRegular(AffineCharError):
    condition = "orbit must be regular (trivial stabilizer)"


class GroupingFailure(AffineCharError):
    condition = ("image of a regular orbit must split into regular W(H)-orbits "
                 "(decomposable condition)")


class NotBijective(AffineCharError):
    condition = "rho-shift must be a bijection onto the regular orbits"


class SceneError(AffineCharError):
    condition = "scene file must be well formed with resolvable references"
