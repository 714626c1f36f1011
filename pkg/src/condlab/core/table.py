"""
Result Tables.

Column-oriented containers for experiment results. A table keeps its columns in
insertion order and renders through a pandas DataFrame: CSV text (header row, '.'
decimal separator, LF endings, floats with ``float_digits`` significant digits) or a
JSON document with the same content.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

import numpy as np
import pandas as pd

from .config import get_config
from ..exceptions import ParameterError
from .._typing import ColumnMapping


def format_value(value: Any, digits: int | None = None) -> str:
    """Canonical text of one cell; floats use ``digits`` significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        d = int(get_config("float_digits", digits))
        return f"{v:.{d}g}"
    return str(value)

def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else format_value(v)
    return value


@dataclass
class ResultTable:
    """
    Named, equally long columns plus free-form scalar metadata.

    Examples:
        >>> t = ResultTable.from_columns({"x": [1.0, 2.0], "mass": [0.1, 0.2]})
        >>> t.to_csv().splitlines()[0]
        'x,mass'
    """
    columns: dict[str, np.ndarray] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_columns(cls, columns: ColumnMapping, meta: Mapping[str, Any] | None = None) -> ResultTable:
        table = cls(meta=dict(meta or {}))
        for name, values in columns.items():
            table.add(name, values)
        return table

    @classmethod
    def scalar(cls, name: str, value: Any, meta: Mapping[str, Any] | None = None) -> ResultTable:
        return cls.from_columns({name: [value]}, meta)

    def add(self, name: str, values: Any) -> None:
        arr = np.atleast_1d(np.asarray(values))
        if self.columns and arr.shape[0] != len(self):
            raise ParameterError(name, arr.shape[0], f"column length must equal {len(self)}")
        self.columns[name] = arr

    def __len__(self) -> int:
        return 0 if not self.columns else int(next(iter(self.columns.values())).shape[0])

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def rows(self) -> Iterator[tuple[Any, ...]]:
        yield from self.to_frame().itertuples(index=False, name=None)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({name: values for name, values in self.columns.items()})

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, meta: Mapping[str, Any] | None = None) -> ResultTable:
        return cls.from_columns({str(name): frame[name].to_numpy() for name in frame.columns}, meta)

    def to_csv(self, digits: int | None = None) -> str:
        d = int(get_config("float_digits", digits))
        frame = self.to_frame()
        for name in frame.select_dtypes(include="bool").columns:
            frame[name] = frame[name].map(format_value)
        return frame.to_csv(index=False, float_format=f"%.{d}g", na_rep="nan", lineterminator="\n")

    def to_json_obj(self) -> dict[str, Any]:
        split = self.to_frame().to_dict(orient="split", index=False)
        return {
            "columns": [str(c) for c in split["columns"]],
            "rows": [[_json_value(v) for v in row] for row in split["data"]],
            "meta": {k: _json_value(v) for k, v in self.meta.items()},
        }
