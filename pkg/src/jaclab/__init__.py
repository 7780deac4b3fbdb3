"""jaclab: exact analysis of rational maps R^n -> R^n for invertibility.

Everything is exact rational arithmetic: Sturm sequences for real roots,
resultants for elimination, and three-valued verdicts (PROVED / REFUTED /
UNKNOWN) wherever a property is not decidable at desk scale.
"""

__version__ = "0.1.0"

from .algebra import AlgebraError, MultiPoly, RatFunc, UniPoly
from .maps import RatMap, Status, Verdict, parse_map, serialize

__all__ = ["AlgebraError", "MultiPoly", "RatFunc", "UniPoly", "RatMap", "Status", "Verdict",
           "parse_map", "serialize", "__version__"]
