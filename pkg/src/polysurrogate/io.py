"""CSV and SVG writers for region tables, disjointness tables and traces."""

from __future__ import annotations

import csv

import numpy as np

from .regions import Category

PALETTE = {
    Category.STRICT: "#f5f5dc",  # beige
    Category.INCONSISTENT: "#ffb6c1",  # pink
    Category.HALLUCINATION: "#a52a2a",  # auburn
    Category.BOUNDARY: "#808080",  # gray
}


def _comment(fh, invocation):
    if invocation:
        fh.write(f"# {invocation}\n")


def write_region_csv(table, fh, invocation=None):
    _comment(fh, invocation)
    d = table.points.shape[1]
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([f"x{k}" for k in range(1, d + 1)] + ["category", "outcome"])
    for row in table.rows():
        writer.writerow([f"{x:.10g}" for x in row[:d]] + list(row[d:]))


def write_pairwise_csv(rows, labels, fh, invocation=None):
    _comment(fh, invocation)
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["y", "yhat", "distance"])
    for y, yh, dist in rows:
        writer.writerow([labels[y], labels[yh], f"{dist:.12g}"])


def write_trace_csv(trace, fh, invocation=None):
    _comment(fh, invocation)
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["step", "loss", "grad_norm"])
    for t, (loss, g) in enumerate(zip(trace.loss_curve, trace.grad_norm_curve)):
        writer.writerow([t, f"{loss:.12g}", f"{g:.12g}"])


def region_svg(table, cell=6, invocation=None):
    """Color-coded raster of a two-dimensional region table."""
    if len(table.grid.shape) != 2:
        raise ValueError("SVG output needs a two-dimensional grid")
    nx, ny = table.grid.shape
    width, height = nx * cell, ny * cell
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if invocation:
        parts.append(f"<!-- {invocation} -->")
    parts.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    for (i, j), category in zip(np.asarray(table.grid_index), table.categories):
        x, y = i * cell, (ny - 1 - j) * cell  # second axis points up
        parts.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{PALETTE[category]}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
