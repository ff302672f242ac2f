"""Readers for the CSV tables written by the sbqa tool.

Each reader checks the header and returns a dict of column name to list.
Numeric columns are converted to float (int for index-like columns).
"""

import csv
from pathlib import Path

SWEEP_COLUMNS = ["omega", "T", "p_error", "n_max", "steps_per_unit", "flags"]
TRACE_COLUMNS = ["t", "solution", "excited_solution", "spin_error", "other"]
FAIRNESS_COLUMNS = ["lambda", "s_sb", "c", "O_sb", "O_ising", "gap_sb", "gap_ising"]
LEVELS_COLUMNS = ["s", "index", "energy", "label", "spin_fidelity", "mean_bosons"]
LABELS = {"solution", "excited_solution", "spin_error", "other"}

_INTS = {"n_max", "steps_per_unit", "index"}
_TEXT = {"flags", "label"}


class SchemaError(ValueError):
    pass


def _read(path, expected=None):
    with open(Path(path), newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise SchemaError(f"{path}: empty table")
    header = rows[0]
    if expected is not None and header != expected:
        raise SchemaError(f"{path}: header {header} != {expected}")
    table = {name: [] for name in header}
    for n, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise SchemaError(f"{path}:{n}: {len(row)} cells, expected {len(header)}")
        for name, cell in zip(header, row):
            if name in _TEXT:
                table[name].append(cell)
            elif name in _INTS:
                table[name].append(int(cell))
            else:
                table[name].append(float(cell))
    return table


def read_sweep(path):
    table = _read(path, SWEEP_COLUMNS)
    table["flags"] = [[f for f in cell.split(";") if f] for cell in table["flags"]]
    return table


def read_trace(path):
    return _read(path, TRACE_COLUMNS)


def read_fairness(path):
    return _read(path, FAIRNESS_COLUMNS)


def read_levels(path):
    table = _read(path, LEVELS_COLUMNS)
    unknown = set(table["label"]) - LABELS
    if unknown:
        raise SchemaError(f"{path}: unknown labels {sorted(unknown)}")
    return table


def read_spectrum(path):
    table = _read(path)
    names = list(table)
    if names[0] != "s" or names[-2:] != ["relevant_gap", "O"]:
        raise SchemaError(f"{path}: unexpected header {names}")
    levels = names[1:-2]
    if levels != [f"E{i}" for i in range(len(levels))]:
        raise SchemaError(f"{path}: energy columns must be E0..E{len(levels) - 1}")
    return table
