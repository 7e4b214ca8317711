import csv

import numpy as np

from finite_observers import FrameSpec, Lattice, LatticeState
from finite_observers.io import HEADER, dump_state, load_state, read_dump, write_state_csv


def test_binary_round_trip(tmp_path, frame_s):
    lat = Lattice.for_frame(frame_s, 16, 40.0)
    rng = np.random.default_rng(0)
    psi = LatticeState(rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16)), frame_s, lat)
    path = tmp_path / "psi.bin"
    dump_state(psi, path)
    raw = path.read_bytes()
    assert len(raw) == HEADER.size + 16 * 16 * 16
    assert HEADER.unpack_from(raw) == (2, 16, 40.0)
    D, n, L, amp = read_dump(path)
    assert np.array_equal(amp, psi.amplitudes)
    assert np.array_equal(load_state(path, frame_s).amplitudes, psi.amplitudes)


def test_csv_snapshot(tmp_path):
    f = FrameSpec.create("s", 1, {"i": 1})
    lat = Lattice.for_frame(f, 8, 10.0)
    psi = LatticeState(np.exp(-lat.x() ** 2) * (1 + 0.5j), f, lat)
    path = tmp_path / "psi.csv"
    write_state_csv(psi, path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["x_i", "re", "im"]
    assert len(rows) == 9
    assert float(rows[1][0]) == -5.0
    assert complex(float(rows[5][1]), float(rows[5][2])) == psi.amplitudes[4]
