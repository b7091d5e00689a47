"""Reading and writing joints and mechanisms.

Joint JSON::

    {"s_labels": [...], "x_labels": [...], "pmf": [[row per s], ...], "tol": 1e-9}

Joint CSV: a header row whose first cell is ignored and whose remaining cells
are the x labels, then one row per s with its label in the first column.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .probability import DEFAULT_TOL, DistributionError, JointDistribution, validate_joint
from .watchdog import Mechanism


class InputError(ValueError):
    """A joint or mechanism file could not be parsed."""


def joint_from_dict(data, source: str = "<input>", **kwargs) -> JointDistribution:
    if not isinstance(data, dict):
        raise InputError(f"{source}: top-level JSON value must be an object")
    if "pmf" not in data:
        raise InputError(f"{source}: missing key 'pmf'")
    tol = data.get("tol", DEFAULT_TOL)
    if tol is None:
        tol = DEFAULT_TOL
    if not isinstance(tol, (int, float)):
        raise InputError(f"{source}: key 'tol' must be a number")
    for key in ("s_labels", "x_labels"):
        if key in data and not isinstance(data[key], list):
            raise InputError(f"{source}: key {key!r} must be a list")
    if not isinstance(data["pmf"], list) or not all(isinstance(row, list) for row in data["pmf"]):
        raise InputError(f"{source}: key 'pmf' must be a list of rows")
    try:
        return validate_joint(data["pmf"], data.get("s_labels"), data.get("x_labels"), tol=tol, **kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DistributionError):
            raise type(exc)(f"{source}: {exc}") from None
        raise InputError(f"{source}: key 'pmf': {exc}") from None


def read_joint_json(path, **kwargs) -> JointDistribution:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    return joint_from_dict(data, str(path), **kwargs)


def read_joint_csv(path, tol: float = DEFAULT_TOL, **kwargs) -> JointDistribution:
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh) if any(cell.strip() for cell in row)]
    if len(rows) < 2:
        raise InputError(f"{path}: need a header row and at least one data row")
    x_labels = [cell.strip() for cell in rows[0][1:]]
    s_labels, pmf = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(x_labels) + 1:
            raise InputError(f"{path}:{lineno}: expected {len(x_labels) + 1} cells, got {len(row)}")
        s_labels.append(row[0].strip())
        try:
            pmf.append([float(cell) for cell in row[1:]])
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
    try:
        return validate_joint(pmf, s_labels, x_labels, tol=tol, **kwargs)
    except DistributionError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def read_joint(path, **kwargs) -> JointDistribution:
    """Load a joint from ``.json`` or ``.csv`` (chosen by suffix)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_joint_csv(path, **kwargs)
    return read_joint_json(path, **kwargs)


def write_joint_json(joint: JointDistribution, path) -> None:
    Path(path).write_text(json.dumps(joint.to_dict(), indent=2) + "\n")


def write_mechanism_json(mechanism: Mechanism, path) -> None:
    Path(path).write_text(json.dumps(mechanism.to_dict(), indent=2) + "\n")


def read_mechanism_json(path) -> Mechanism:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    for key in ("input_labels", "output_labels", "transition"):
        if key not in data:
            raise InputError(f"{path}: missing key {key!r}")
    return Mechanism.from_dict(data)
