import logging
from pathlib import Path
from typing import List, NamedTuple, Optional

import numpy as np

from bregman_info.errors import DomainViolation

logger = logging.getLogger(__name__)

WEIGHT_HEADER = "weight"


class CsvTable(NamedTuple):
    header: Optional[List[str]]
    values: np.ndarray


class WeightedRows(NamedTuple):
    weights: np.ndarray
    points: np.ndarray


def _is_number(field: str) -> bool:
    try:
        float(field)
    except ValueError:
        return False
    return True


def read_table(path: Path) -> CsvTable:
    """
    Comma-separated numeric table; a first line with any non-numeric field is
    taken as the header.
    """
    path = Path(path)
    with path.open(encoding='utf-8-sig') as handle:
        first = handle.readline().strip()
    if not first:
        raise DomainViolation(f"{path} is empty")
    fields = [field.strip() for field in first.split(',')]
    header = None if all(_is_number(field) for field in fields) else fields
    try:
        values = np.loadtxt(path, delimiter=',', skiprows=1 if header else 0, ndmin=2, encoding='utf-8-sig')
    except ValueError as e:
        raise DomainViolation(f"{path} is not a numeric CSV table: {e}")
    if values.size == 0:
        raise DomainViolation(f"{path} has no data rows")
    if header is not None and len(header) != values.shape[1]:
        raise DomainViolation(f"{path} header has {len(header)} fields but rows have {values.shape[1]}")
    if not np.all(np.isfinite(values)):
        raise DomainViolation(f"{path} contains non-finite values")
    return CsvTable(header=header, values=values)


def _weight_index(table: CsvTable, weights_column: Optional[str]) -> Optional[int]:
    if weights_column is None:
        if table.header and table.header[0].lower() == WEIGHT_HEADER:
            return 0
        return None
    if table.header and weights_column in table.header:
        return table.header.index(weights_column)
    if weights_column.isdigit() and int(weights_column) < table.values.shape[1]:
        return int(weights_column)
    raise DomainViolation(f"weight column {weights_column!r} not found")


def normalize_weights(weights: np.ndarray) -> np.ndarray:
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(weights < 0):
        raise DomainViolation("weights must be nonnegative")
    total = float(np.sum(weights))
    if total <= 0:
        raise DomainViolation("weights must have a positive sum")
    if abs(total - 1.0) > 1e-12:
        logger.info(f"Weights sum to {total!r}; renormalizing")
    return weights / total


def read_weighted_rows(path: Path, weights_column: Optional[str] = None, require_weights: bool = False) -> WeightedRows:
    """Data rows with their weights; uniform weights when the table has no weight column."""
    table = read_table(path)
    index = _weight_index(table, weights_column)
    if index is None:
        if require_weights:
            raise DomainViolation(f"{path} needs a leading weight column")
        n = table.values.shape[0]
        return WeightedRows(weights=np.full(n, 1.0 / n), points=table.values)
    points = np.delete(table.values, index, axis=1)
    if points.shape[1] == 0:
        raise DomainViolation(f"{path} has a weight column but no data columns")
    return WeightedRows(weights=normalize_weights(table.values[:, index]), points=points)


def read_joint(path: Path, weights_column: Optional[str] = None) -> WeightedRows:
    """Row marginal mu (leading weight column) and conditional rows of a joint distribution."""
    table = read_table(path)
    index = _weight_index(table, weights_column)
    if index is None:
        index = 0
    points = np.delete(table.values, index, axis=1)
    if points.shape[1] == 0:
        raise DomainViolation(f"{path} needs at least one conditional column")
    return WeightedRows(weights=normalize_weights(table.values[:, index]), points=points)


def read_matrix(path: Path) -> np.ndarray:
    return read_table(path).values


def read_point_and_direction(path: Path):
    values = read_table(path).values
    if values.shape[0] != 2:
        raise DomainViolation(f"{path} must hold exactly two rows: the point x and the direction delta")
    return values[0], values[1]
