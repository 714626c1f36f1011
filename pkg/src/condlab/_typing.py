from __future__ import annotations

from typing import Any, TYPE_CHECKING, TypeAlias, Callable, Literal, Mapping, TypeVar

if TYPE_CHECKING:
    import numpy as np
    import numpy.typing as npt

    FloatArray: TypeAlias = npt.NDArray[np.float64]
    IntArray: TypeAlias = npt.NDArray[np.int64]
    ArrayLike: TypeAlias = npt.ArrayLike
else:
    FloatArray: TypeAlias = Any
    IntArray: TypeAlias = Any
    ArrayLike: TypeAlias = Any

DistributionKind: TypeAlias = Literal["polytail", "point", "grid"]
NormalizationMode: TypeAlias = Literal["adaptive", "deterministic"]
NetworkPhase: TypeAlias = Literal["FGR", "BE"]
CyclePhase: TypeAlias = Literal["left", "bulk", "right"]
KingmanRegime: TypeAlias = Literal["condensation", "no-condensation"]
OutputFormat: TypeAlias = Literal["csv", "json"]
TailMethod: TypeAlias = Literal["closed", "quadrature"]

# A sequence supplied as an oracle: maps an integer index array to its values.
SequenceOracle: TypeAlias = Callable[["IntArray"], "FloatArray"]
# A deterministic normalisation sequence k -> Z_k, vectorised over index arrays.
NormalizationOracle: TypeAlias = Callable[["IntArray"], "FloatArray"]

ConfigDict: TypeAlias = dict[str, Any]
ColumnMapping: TypeAlias = Mapping[str, Any]

_ResultT = TypeVar("_ResultT")
