"""CSV loading with strict schema validation against the cfmlab formats."""

from __future__ import annotations

import csv
from pathlib import Path

STEPS_COLUMNS = (
    "t", "S", "pool_price", "x1", "x2", "fee_income", "hat_f",
    "arb_profit", "noise_venue", "noise_side", "noise_size",
)
STEPS_TEXT_COLUMNS = ("noise_venue", "noise_side")

SWEEP_COLUMNS = ("gamma", "sigma", "lambda", "mean_diff", "std_diff", "n_paths")


class SchemaError(ValueError):
    """Input CSV does not match the expected column schema."""


def _validate_header(found: list[str], expected: tuple[str, ...], path: Path) -> None:
    for column in expected:
        if column not in found:
            raise SchemaError(f"{path}: missing column: {column}")
    for column in found:
        if column not in expected:
            raise SchemaError(f"{path}: unexpected column: {column}")
    if tuple(found) != expected:
        raise SchemaError(f"{path}: column order mismatch: expected {','.join(expected)}")


def _load(path: Path, expected: tuple[str, ...], text_columns: tuple[str, ...]) -> dict[str, list]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header "
                              f"{','.join(expected)}") from None
        _validate_header(header, expected, path)
        columns: dict[str, list] = {name: [] for name in expected}
        for row_number, row in enumerate(reader, start=2):
            if len(row) != len(expected):
                raise SchemaError(f"{path}: row {row_number} has {len(row)} fields, "
                                  f"expected {len(expected)}")
            for name, cell in zip(expected, row):
                if name in text_columns:
                    columns[name].append(cell)
                else:
                    try:
                        columns[name].append(float(cell))
                    except ValueError:
                        raise SchemaError(
                            f"{path}: row {row_number}, column {name}: "
                            f"not a number: {cell!r}") from None
    return columns


def load_steps(path: str | Path) -> dict[str, list]:
    """Per-step simulation output (may be header-only)."""
    return _load(Path(path), STEPS_COLUMNS, STEPS_TEXT_COLUMNS)


def load_sweep(path: str | Path) -> dict[str, list]:
    """Grid aggregation output (may be header-only)."""
    return _load(Path(path), SWEEP_COLUMNS, ())
