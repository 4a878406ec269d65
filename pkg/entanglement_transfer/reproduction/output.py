"""This module writes sweep results as CSV tables with a metadata preamble
and as gnuplot scripts that plot them."""

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List

import pandas as pd

from entanglement_transfer.errors import OutputError

FLOAT_FORMAT = "%.12g"
# a series axis with more distinct values than this is drawn as a surface
MAX_CURVES = 8


@dataclass
class ResultTable:
    "Rows of one sweep in grid order plus the metadata describing the run."

    frame: pd.DataFrame
    metadata: Dict[str, str] = field(default_factory=dict)
    axes: List[str] = field(default_factory=list)
    quantity: str = ""

    @property
    def columns(self):
        return list(self.frame.columns)

    def value_columns(self):
        "Entanglement columns, the ones that are plotted."
        return [name for name in self.frame.columns if name.startswith("E_")]


def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def emit_csv(table, path, skip=()):
    """
    Write the table as CSV preceded by `# key: value` metadata lines.

    :param skip: Metadata keys left out, e.g. the wall time when comparing runs.
    :raises OutputError: if the file cannot be written.
    """
    try:
        _ensure_parent(path)
        with open(path, "w", newline="", encoding="utf-8") as stream:
            for key, value in table.metadata.items():
                if key in skip:
                    continue
                stream.write(f"# {key}: {value}\n")
            table.frame.to_csv(stream, index=False, float_format=FLOAT_FORMAT, na_rep="nan")
    except OSError as error:
        raise OutputError(f"cannot write {path}: {error}") from error
    logging.info("wrote %s rows to %s", len(table.frame), path)


def _plot_lines(table, csv_name):
    columns = table.columns
    values = table.value_columns()
    axes = table.axes
    if not axes:
        return ["# no swept axis, nothing to plot"]

    x_axis = axes[-1]
    x_col = columns.index(x_axis) + 1
    lines = [
        f"set xlabel '{x_axis}'",
        "set ylabel 'entanglement'",
        f"set title '{table.quantity}'",
        "set key outside",
    ]
    series = axes[0] if len(axes) > 1 else None
    if series is not None and table.frame[series].nunique() > MAX_CURVES:
        y_col = columns.index(series) + 1
        lines.append(f"set ylabel '{series}'")
        lines.append("set zlabel 'entanglement'")
        lines.append("set dgrid3d 40,40")
        lines.append("set hidden3d")
        plots = [
            f"'{csv_name}' using {x_col}:{y_col}:{columns.index(name) + 1} "
            f"with lines title '{name}'"
            for name in values
        ]
        lines.append("splot " + ", \\\n      ".join(plots))
        return lines

    plots = []
    for name in values:
        y_col = columns.index(name) + 1
        if series is None:
            plots.append(f"'{csv_name}' using {x_col}:{y_col} with lines title '{name}'")
            continue
        s_col = columns.index(series) + 1
        for level in table.frame[series].unique():
            plots.append(
                f"'{csv_name}' using {x_col}:(${s_col} == {level:.12g} ? ${y_col} : 1/0) "
                f"with lines title '{name}, {series}={level:.12g}'"
            )
    lines.append("plot " + ", \\\n     ".join(plots))
    return lines


def emit_plotscript(table, path, csv_path):
    """
    Write a gnuplot script that draws the entanglement columns of the CSV
    at `csv_path` against the last swept axis: one curve per value of the
    first axis, or a surface when that axis has many values.

    :raises OutputError: if the file cannot be written.
    """
    csv_name = os.path.relpath(csv_path, os.path.dirname(os.path.abspath(path)))
    header = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
    ]
    text = "\n".join(header + _plot_lines(table, csv_name)) + "\n"
    try:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8") as stream:
            stream.write(text)
    except OSError as error:
        raise OutputError(f"cannot write {path}: {error}") from error
    logging.info("wrote plot script %s", path)
