"""Serialization: "p/q" fraction strings, configuration JSON, decay CSV.

Every rational number leaving the package is rendered as an explicit
numerator/denominator pair "p/q" (so "0/1", "5/3", "-7/2"), never as a
decimal; inputs accept the same strings as well as plain integers.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Sequence, Union

from .errors import MalformedInput
from .exactgeom import RayVector
from .localformula import CrossingConfiguration, EulerReport

DECAY_HEADER = (
    "L",
    "N",
    "N_boundary",
    "X",
    "k_min",
    "k_max",
    "bound",
    "formula_value",
)


def format_fraction(value) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def parse_fraction(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"not a fraction: {text!r}") from exc
    raise MalformedInput(f"not a fraction: {text!r}")


def ray_to_json(ray: RayVector) -> list[str]:
    return [format_fraction(c) for c in ray.coords]


def ray_from_json(coords: Sequence) -> RayVector:
    return RayVector([parse_fraction(c) for c in coords])


def _load_json(source: Union[str, Path, dict]) -> dict:
    if isinstance(source, dict):
        return source
    try:
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read JSON from {source}: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedInput(f"{source} must contain a JSON object")
    return data


def load_points(source: Union[str, Path, dict]) -> tuple[RayVector, ...]:
    """A {"points": [[p/q, ...], ...]} document as canonical rays."""
    data = _load_json(source)
    points = data.get("points")
    if not isinstance(points, list) or not points:
        raise MalformedInput('expected a nonempty "points" array')
    return tuple(ray_from_json(p) for p in points)


def configuration_to_json(cfg: CrossingConfiguration) -> dict:
    return {
        "dim": cfg.dim,
        "bordered": [ray_to_json(p) for p in cfg.bordered],
        "regular": [ray_to_json(p) for p in cfg.regular],
    }


def configuration_from_json(data: dict) -> CrossingConfiguration:
    if "configuration" in data and "dim" not in data:
        # Torus pipeline dumps wrap the configuration in crossing metadata.
        data = data["configuration"]
    for key in ("dim", "bordered", "regular"):
        if key not in data:
            raise MalformedInput(f'crossing configuration lacks "{key}"')
    return CrossingConfiguration(
        dim=int(data["dim"]),
        bordered=tuple(ray_from_json(p) for p in data["bordered"]),
        regular=tuple(ray_from_json(p) for p in data["regular"]),
    )


def load_configurations(source: Union[str, Path, dict]) -> list[CrossingConfiguration]:
    """A {"crossings": [{dim, bordered, regular}, ...]} document."""
    data = _load_json(source)
    items = data.get("crossings")
    if not isinstance(items, list):
        raise MalformedInput('expected a "crossings" array')
    return [configuration_from_json(item) for item in items]


def decay_row(L: int, report: EulerReport) -> dict:
    return {
        "L": L,
        "N": report.n_inner,
        "N_boundary": report.n_boundary,
        "X": report.crossings,
        "k_min": report.k_min,
        "k_max": report.k_max,
        "bound": report.bound,
        "formula_value": report.formula_value,
    }


def write_decay_csv(path: Union[str, Path], rows: Sequence[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DECAY_HEADER)
        for row in rows:
            writer.writerow(
                [
                    str(int(row[key]))
                    if key not in ("bound", "formula_value")
                    else format_fraction(row[key])
                    for key in DECAY_HEADER
                ]
            )


def read_decay_csv(path: Union[str, Path]) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration as exc:
            raise MalformedInput(f"{path} is empty") from exc
        if header != DECAY_HEADER:
            raise MalformedInput(f"unexpected CSV header {header!r}")
        rows = []
        for line in reader:
            if len(line) != len(DECAY_HEADER):
                raise MalformedInput(f"short CSV row {line!r}")
            row = dict(zip(DECAY_HEADER, line))
            for key in DECAY_HEADER:
                row[key] = (
                    parse_fraction(row[key])
                    if key in ("bound", "formula_value")
                    else int(row[key])
                )
            rows.append(row)
    return rows


def crossings_to_json(data) -> dict:
    """Full dump of one pipeline run (region, base ray, every crossing)."""
    region = data.region
    return {
        "L": data.L,
        "base_ray": ray_to_json(data.v0),
        "region": {
            "attempt": region.attempt,
            "shear_x": format_fraction(region.shear_x),
            "shear_y": format_fraction(region.shear_y),
            "margin": format_fraction(region.margin),
            "corners": [[format_fraction(c) for c in corner] for corner in region.corners],
        },
        "inner_cells": sorted(data.inner_cells),
        "boundary_cells": sorted(data.boundary_cells),
        "crossings": [
            {
                "position": [format_fraction(c) for c in crossing.position],
                "edge_h": crossing.branch_h.edge,
                "lift_h": list(crossing.branch_h.lift),
                "tangent_h": [format_fraction(c) for c in crossing.branch_h.tangent],
                "edge_v": crossing.branch_v.edge,
                "lift_v": list(crossing.branch_v.lift),
                "tangent_v": [format_fraction(c) for c in crossing.branch_v.tangent],
                "swapped": crossing.swapped,
                "regular_lifts": [list(u) for u in crossing.regular_lifts],
                "configuration": configuration_to_json(cfg),
            }
            for crossing, cfg in zip(data.crossings, data.configurations)
        ],
    }


def write_crossings_json(path: Union[str, Path], data) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(crossings_to_json(data), fh, indent=2, sort_keys=True)
        fh.write("\n")
