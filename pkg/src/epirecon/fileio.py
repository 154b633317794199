"""CSV and JSON serialization shared by the CLI and the tests.

Every float is written with 17 significant digits so values round-trip
exactly and repeated runs diff byte-for-byte. Files use LF line endings.
"""

import json
import numpy as np

from .chains import DerivativeChain
from .errors import BadArgs
from .integrate import Trajectory

SCHEMA_VERSION = "1"


def fmt(x) -> str:
    return format(float(x), ".17g")


def _write_lines(path, lines):
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_trajectory_csv(path, traj: Trajectory, state_names) -> None:
    lines = ["t," + ",".join(state_names)]
    for t, row in zip(traj.times, traj.states):
        lines.append(fmt(t) + "," + ",".join(fmt(v) for v in row))
    _write_lines(path, lines)


def write_observations_csv(path, times, outputs) -> None:
    outputs = np.atleast_2d(np.asarray(outputs, dtype=float))
    if outputs.shape[0] == 1 and len(times) > 1:
        outputs = outputs.T
    names = ["y"] if outputs.shape[1] == 1 else [
        f"y{i + 1}" for i in range(outputs.shape[1])]
    lines = ["t," + ",".join(names)]
    for t, row in zip(times, outputs):
        lines.append(fmt(t) + "," + ",".join(fmt(v) for v in row))
    _write_lines(path, lines)


def _chain_headers(chain: DerivativeChain):
    headers = []
    if len(chain.values) == 1:
        order = chain.orders[0]
        headers = ["y"] + [f"y{k}" for k in range(1, order + 1)]
    else:
        for c, ch in enumerate(chain.values):
            base = f"y{c + 1}"
            headers.append(base)
            headers.extend(f"{base}_{k}" for k in range(1, ch.shape[0]))
    return headers


def write_chain_csv(path, chain: DerivativeChain) -> None:
    lines = ["t," + ",".join(_chain_headers(chain))]
    stacked = np.vstack(chain.values)
    for j, t in enumerate(chain.times):
        lines.append(fmt(t) + "," + ",".join(fmt(v) for v in stacked[:, j]))
    _write_lines(path, lines)


def _read_csv(path):
    with open(path) as fh:
        rows = [line.strip() for line in fh if line.strip()]
    if not rows:
        raise BadArgs(f"{path}: empty file")
    header = rows[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in rows[1:]])
    if data.ndim != 2 or data.shape[1] != len(header):
        raise BadArgs(f"{path}: ragged rows")
    return header, data


def read_observations_csv(path):
    """Returns (times, outputs (n, m)); accepts plain observation files."""
    header, data = _read_csv(path)
    if header[0] != "t":
        raise BadArgs(f"{path}: first column must be 't'")
    return data[:, 0], data[:, 1:]


def read_chain_csv(path) -> DerivativeChain:
    """Parse a chain CSV (t, y, y1, ... or t, y1, y1_1, ..., y2, ...)."""
    header, data = _read_csv(path)
    if header[0] != "t":
        raise BadArgs(f"{path}: first column must be 't'")
    cols = header[1:]
    times = data[:, 0]
    if not cols:
        raise BadArgs(f"{path}: no value columns")
    if cols[0] == "y":
        values = [data[:, 1:].T.copy()]
    else:
        channels: dict = {}
        for j, name in enumerate(cols):
            base = name.split("_")[0]
            channels.setdefault(base, []).append(data[:, 1 + j])
        values = [np.vstack(channels[b]) for b in sorted(channels)]
    return DerivativeChain(times=times, values=values)


def has_derivative_columns(path) -> bool:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    cols = header[1:]
    if "y" in cols:
        return any(c.startswith("y") and c[1:].isdigit() for c in cols)
    return any("_" in c for c in cols)


def json_17g(obj) -> str:
    """Serialize to JSON with floats at 17 significant digits."""
    return _json_value(obj, 0)


def _json_value(obj, indent) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(str(k))}: {_json_value(v, indent + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{inner}{_json_value(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    return json.dumps(obj)


def write_json(path, payload: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(json_17g(payload) + "\n")
