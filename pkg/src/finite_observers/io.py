"""State and series export.

Binary state dump layout (all little-endian)::

    int32    D        number of lattice coordinates
    int32    n        points per coordinate
    float64  L        box length
    complex128[n**D]  amplitudes, C order, coordinate order of the lattice
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from .frame import FrameSpec
from .lattice import Lattice, LatticeState, PhysConstants

HEADER = struct.Struct("<iid")


def write_state_csv(state: LatticeState, path) -> None:
    """One row per grid point: the coordinates, then re and im."""
    lat = state.lattice
    x = lat.x()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x_{c}" for c in lat.coords] + ["re", "im"])
        for idx in np.ndindex(*lat.shape):
            a = state.amplitudes[idx]
            w.writerow([repr(float(x[k])) for k in idx] + [repr(float(a.real)), repr(float(a.imag))])


def dump_state(state: LatticeState, path) -> None:
    lat = state.lattice
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(lat.D, lat.n, float(lat.L)))
        fh.write(np.ascontiguousarray(state.amplitudes, dtype="<c16").tobytes())


def read_dump(path) -> tuple[int, int, float, np.ndarray]:
    """Return (D, n, L, amplitudes) from a binary dump."""
    raw = Path(path).read_bytes()
    D, n, L = HEADER.unpack_from(raw)
    amp = np.frombuffer(raw, dtype="<c16", offset=HEADER.size)
    if amp.size != n ** D:
        raise ValueError(f"dump holds {amp.size} amplitudes, header says {n ** D}")
    return D, n, L, amp.reshape((n,) * D).copy()


def load_state(path, frame: FrameSpec, constants: PhysConstants | None = None) -> LatticeState:
    D, n, L, amp = read_dump(path)
    if D != len(frame.bodies):
        raise ValueError("dump dimension does not match the frame")
    return LatticeState(amp, frame, Lattice(frame.bodies, n, L), constants or PhysConstants())


def write_rows(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r])


TRAJECTORY_HEADER = ("t", "body", "mean_x", "mean_p", "dx", "dp", "energy")


def write_trajectory_csv(path, rows) -> None:
    write_rows(path, TRAJECTORY_HEADER, rows)
