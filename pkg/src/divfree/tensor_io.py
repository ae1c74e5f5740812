"""Serialization of tensor fields and related gridded data.

Two interchangeable containers, both round-tripping bit-exactly:

CSV ("DFTF-CSV v1")
    Header lines start with '#':  format tag, then grid metadata as
    ``key=value`` (d, n_t, n_x, t_range, x_range, periodic, rank tag).
    Body: one row per cell in row-major (t, x_1, .., x_d) order, columns are
    the upper-triangular matrix entries s_00, s_01, .., s_0d, s_11, .. in
    row-major order, written with ``repr`` (shortest exact float form).

Binary ("DFTF-BIN v1")
    Magic ``b"DFTFBIN1\\n"``, 8-byte little-endian length of a UTF-8 JSON
    header (grid metadata, array names, shapes, dtype), then the raw
    little-endian float64 payloads in header order.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .tensor_field import GridSpec, SymTensorField

__all__ = [
    "save_field_csv", "load_field_csv",
    "save_field_binary", "load_field_binary",
    "save_arrays_binary", "load_arrays_binary",
    "save_particles_csv", "load_particles_csv",
    "save_grid_state", "load_grid_state",
    "save_flow", "load_flow",
]

_CSV_TAG = "DFTF-CSV v1"
_BIN_MAGIC = b"DFTFBIN1\n"


def _triu_indices(n: int):
    return np.triu_indices(n)


def _grid_meta(grid: GridSpec) -> dict:
    return {
        "d": grid.d,
        "t_range": list(grid.t_range),
        "x_range": [list(r) for r in grid.x_range],
        "n_t": grid.n_t,
        "n_x": list(grid.n_x),
        "periodic": list(grid.periodic),
    }


def _grid_from_meta(meta: dict) -> GridSpec:
    return GridSpec(
        d=int(meta["d"]),
        t_range=tuple(meta["t_range"]),
        x_range=tuple(tuple(r) for r in meta["x_range"]),
        n_t=int(meta["n_t"]),
        n_x=tuple(meta["n_x"]),
        periodic=tuple(bool(p) for p in meta["periodic"]),
    )


def save_field_csv(path, S: SymTensorField, rank_tag: str = "symtensor") -> None:
    grid = S.grid
    n = grid.n
    iu, ju = _triu_indices(n)
    flat = S.values.reshape(-1, n, n)[:, iu, ju]
    lines = [f"# {_CSV_TAG}", f"# rank={rank_tag}"]
    for key, val in _grid_meta(grid).items():
        lines.append(f"# {key}={json.dumps(val)}")
    cols = ",".join(f"s_{i}{j}" for i, j in zip(iu, ju))
    lines.append(f"# columns={cols}")
    for row in flat:
        lines.append(",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_field_csv(path) -> SymTensorField:
    meta = {}
    rows = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, val = body.partition("=")
                meta[key.strip()] = val
            elif body != _CSV_TAG:
                raise ValueError(f"unrecognized tensor CSV tag: {body!r}")
            continue
        rows.append([float(tok) for tok in line.split(",")])
    grid = _grid_from_meta({k: json.loads(meta[k]) for k in
                            ("d", "t_range", "x_range", "n_t", "n_x", "periodic")})
    n = grid.n
    iu, ju = _triu_indices(n)
    flat = np.asarray(rows, dtype=float)
    if flat.shape != (int(np.prod(grid.shape)), len(iu)):
        raise ValueError("cell count or column count does not match header")
    vals = np.zeros((flat.shape[0], n, n))
    vals[:, iu, ju] = flat
    vals[:, ju, iu] = flat
    return SymTensorField(grid, vals.reshape(*grid.shape, n, n))


def save_arrays_binary(path, header: dict, arrays: dict[str, np.ndarray]) -> None:
    """Generic container: JSON header + named float64 arrays."""
    head = dict(header)
    head["arrays"] = [{"name": k, "shape": list(np.shape(v))} for k, v in arrays.items()]
    blob = json.dumps(head, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_BIN_MAGIC)
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        for v in arrays.values():
            fh.write(np.ascontiguousarray(v, dtype="<f8").tobytes())


def load_arrays_binary(path) -> tuple[dict, dict[str, np.ndarray]]:
    with open(path, "rb") as fh:
        magic = fh.read(len(_BIN_MAGIC))
        if magic != _BIN_MAGIC:
            raise ValueError("not a DFTF binary container")
        (hlen,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        arrays = {}
        for spec in header.pop("arrays"):
            shape = tuple(spec["shape"])
            count = int(np.prod(shape)) if shape else 1
            buf = fh.read(8 * count)
            arrays[spec["name"]] = np.frombuffer(buf, dtype="<f8").reshape(shape).copy()
    return header, arrays


def save_field_binary(path, S: SymTensorField, rank_tag: str = "symtensor") -> None:
    grid = S.grid
    n = grid.n
    iu, ju = _triu_indices(n)
    flat = S.values.reshape(-1, n, n)[:, iu, ju]
    header = {"kind": "symtensor_field", "rank": rank_tag, "grid": _grid_meta(grid)}
    save_arrays_binary(path, header, {"triu": flat})


def load_field_binary(path) -> SymTensorField:
    header, arrays = load_arrays_binary(path)
    if header.get("kind") != "symtensor_field":
        raise ValueError("container does not hold a symmetric tensor field")
    grid = _grid_from_meta(header["grid"])
    n = grid.n
    iu, ju = _triu_indices(n)
    flat = arrays["triu"]
    vals = np.zeros((flat.shape[0], n, n))
    vals[:, iu, ju] = flat
    vals[:, ju, iu] = flat
    return SymTensorField(grid, vals.reshape(*grid.shape, n, n))


# ---------------------------------------------------------------------------
# kinetic states and flow snapshots
# ---------------------------------------------------------------------------

def save_particles_csv(path, state) -> None:
    """Particle list as CSV columns x_1..x_d, xi_1..xi_d, w (exact floats)."""
    d = state.d
    cols = [f"x_{i}" for i in range(d)] + [f"xi_{i}" for i in range(d)] + ["w"]
    lines = [",".join(cols)]
    for xi_row, x_row, w in zip(state.xi, state.x, state.w):
        lines.append(",".join(repr(float(v))
                              for v in (*x_row, *xi_row, float(w))))
    Path(path).write_text("\n".join(lines) + "\n")


def load_particles_csv(path):
    from .kinetic import ParticleState
    lines = Path(path).read_text().splitlines()
    cols = lines[0].split(",")
    d = sum(c.startswith("x_") for c in cols)
    rows = np.array([[float(tok) for tok in line.split(",")]
                     for line in lines[1:] if line.strip()])
    return ParticleState(rows[:, :d], rows[:, d:2 * d], rows[:, 2 * d])


def save_grid_state(path, state, rank_tag: str = "kinetic_density") -> None:
    """Velocity-space density in the binary container, with a rank tag."""
    header = {"kind": "kinetic_grid", "rank": rank_tag, "d": state.d}
    arrays = {"f": state.f}
    for i, ax in enumerate(state.x_axes):
        arrays[f"x_axis_{i}"] = ax
    for i, ax in enumerate(state.xi_axes):
        arrays[f"xi_axis_{i}"] = ax
    save_arrays_binary(path, header, arrays)


def load_grid_state(path):
    from .kinetic import GridState
    header, arrays = load_arrays_binary(path)
    if header.get("kind") != "kinetic_grid":
        raise ValueError("container does not hold a kinetic grid density")
    d = int(header["d"])
    return GridState(tuple(arrays[f"x_axis_{i}"] for i in range(d)),
                     tuple(arrays[f"xi_axis_{i}"] for i in range(d)),
                     arrays["f"])


def save_flow(path, flow) -> None:
    """Trajectory snapshot: primitive fields plus the functional sidecar."""
    f = flow.functionals
    header = {"kind": "euler_flow", "gamma": flow.gamma,
              "A": flow.A, "model": flow.model, "grid": _grid_meta(flow.grid)}
    arrays = {"times": flow.times, "rho": flow.rho, "u": flow.u,
              "func_t": f.t, "func_M": f.M, "func_Q": f.Q, "func_E": f.E,
              "func_I": f.I, "func_pi": f.pi, "func_extra": f.extra,
              "func_J": f.J, "func_p_int": f.p_int}
    if flow.e is not None:
        arrays["e"] = flow.e
    save_arrays_binary(path, header, arrays)


def load_flow(path):
    from .euler import EulerFlow, GlobalFunctionals
    header, arrays = load_arrays_binary(path)
    if header.get("kind") != "euler_flow":
        raise ValueError("container does not hold a flow snapshot")
    grid = _grid_from_meta(header["grid"])
    func = GlobalFunctionals(
        t=arrays["func_t"], M=arrays["func_M"], Q=arrays["func_Q"],
        E=arrays["func_E"], I=arrays["func_I"], pi=arrays["func_pi"],
        extra=arrays["func_extra"], J=arrays["func_J"],
        p_int=arrays["func_p_int"])
    return EulerFlow(grid, arrays["times"], arrays["rho"], arrays["u"],
                     arrays.get("e"), header["gamma"], header["A"], func)
