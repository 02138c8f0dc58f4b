"""CSV writers for energy series / convergence tables and the binary snapshot format.

Snapshot layout (all little-endian)::

    b"MPFC1\\0"            6 bytes
    nx, ny                 int64 each
    lx, ly                 float64 each
    data                   nx * ny float64, row-major with j outer, i inner
"""
import contextlib
import struct

import numpy as np

from .errors import SnapshotError
from .experiments import ConvergenceRow
from .grid import BoundaryKind, GridSpec

ENERGY_HEADER = "t,energy_original,energy_pseudo_tilde,mass,r,psi_hminus1"
CONVERGENCE_HEADER = "N,err_phi,rate_phi,err_gradlap,rate_gradlap,err_r,rate_r"

MAGIC = b"MPFC1\x00"
_HEADER = struct.Struct("<qqdd")
MAX_CELLS = 1 << 40


def fmt(x):
    """17 significant digits: enough to round-trip any double."""
    return format(float(x), ".17g")


@contextlib.contextmanager
def _text_sink(sink):
    if hasattr(sink, "write"):
        yield sink
    else:
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def write_energy_csv(series, sink):
    if len(series) == 0:
        raise ValueError("energy series is empty")
    with _text_sink(sink) as out:
        out.write(ENERGY_HEADER + "\n")
        for row in series.rows():
            out.write(",".join(fmt(v) for v in row) + "\n")


def write_convergence_csv(rows, sink):
    rows = list(rows)
    if not rows:
        raise ValueError("no convergence rows")
    with _text_sink(sink) as out:
        out.write(CONVERGENCE_HEADER + "\n")
        for row in rows:
            cells = [
                str(row.n),
                fmt(row.err_phi),
                "" if row.rate_phi is None else fmt(row.rate_phi),
                fmt(row.err_gradlap),
                "" if row.rate_gradlap is None else fmt(row.rate_gradlap),
                fmt(row.err_r),
                "" if row.rate_r is None else fmt(row.rate_r),
            ]
            out.write(",".join(cells) + "\n")


def read_convergence_csv(text):
    lines = text.strip("\n").split("\n")
    if lines[0] != CONVERGENCE_HEADER:
        raise ValueError(f"unexpected header {lines[0]!r}")
    rows = []
    for line in lines[1:]:
        n, ep, rp, eg, rg, er, rr = line.split(",")
        opt = lambda s: None if s == "" else float(s)  # noqa: E731
        rows.append(ConvergenceRow(int(n), float(ep), float(eg), float(er), opt(rp), opt(rg), opt(rr)))
    return rows


def read_energy_csv(text):
    """Parse an energy CSV into a dict of column name -> float array."""
    lines = text.strip("\n").split("\n")
    if lines[0] != ENERGY_HEADER:
        raise ValueError(f"unexpected header {lines[0]!r}")
    names = ENERGY_HEADER.split(",")
    data = np.array([[float(c) for c in line.split(",")] for line in lines[1:]]).reshape(-1, len(names))
    return {name: data[:, k] for k, name in enumerate(names)}


def snapshot_bytes(grid, field):
    field = grid.check_field(field)
    data = np.ascontiguousarray(field.T, dtype="<f8")
    return MAGIC + _HEADER.pack(grid.nx, grid.ny, grid.lx, grid.ly) + data.tobytes()


def write_snapshot(grid, field, path):
    payload = snapshot_bytes(grid, field)
    with open(path, "wb") as fh:
        fh.write(payload)


def parse_snapshot(payload, bc=BoundaryKind.NEUMANN):
    if len(payload) < len(MAGIC) or payload[: len(MAGIC)] != MAGIC:
        raise SnapshotError("bad magic: not an MPFC1 snapshot")
    offset = len(MAGIC)
    if len(payload) < offset + _HEADER.size:
        raise SnapshotError("truncated snapshot header")
    nx, ny, lx, ly = _HEADER.unpack_from(payload, offset)
    offset += _HEADER.size
    if nx < 1 or ny < 1 or nx > MAX_CELLS or ny > MAX_CELLS or nx * ny > MAX_CELLS:
        raise SnapshotError(f"snapshot dimensions out of range: {nx} x {ny}")
    expected = nx * ny * 8
    available = len(payload) - offset
    if available < expected:
        raise SnapshotError(f"truncated snapshot: expected {expected} data bytes, found {available}")
    if available > expected:
        raise SnapshotError(f"{available - expected} trailing bytes after snapshot data")
    try:
        grid = GridSpec(nx, ny, lx, ly, bc)
    except ValueError as exc:
        raise SnapshotError(f"invalid grid in snapshot: {exc}") from None
    data = np.frombuffer(payload, dtype="<f8", count=nx * ny, offset=offset)
    return grid, np.ascontiguousarray(data.reshape(ny, nx).T, dtype=np.float64)


def read_snapshot(path, bc=BoundaryKind.NEUMANN):
    """Return ``(grid, field)``; the file does not record the boundary kind."""
    with open(path, "rb") as fh:
        return parse_snapshot(fh.read(), bc)
