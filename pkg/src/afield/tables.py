"""CSV field tables with a ``#`` metadata block."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .field import VACUUM, Medium, energy_density, poynting

COLUMNS = ("x", "y", "z", "t", "re_ax", "im_ax", "re_ay", "im_ay", "re_az", "im_az", "w", "px", "py", "pz")

FLOAT_FMT = "%.17g"


@dataclass
class FieldTable:
    """Rows ``(x, y, z, t, Re/Im A, W, P)`` plus string metadata."""

    rows: np.ndarray
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_field(cls, points, t, values, medium: Medium = VACUUM, meta=None):
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        A = np.asarray(values, dtype=complex).reshape(-1, 3)
        tt = np.broadcast_to(np.asarray(t, dtype=float), (len(pts),))
        rows = np.empty((len(pts), len(COLUMNS)))
        rows[:, 0:3] = pts
        rows[:, 3] = tt
        rows[:, 4:10:2] = A.real
        rows[:, 5:10:2] = A.imag
        rows[:, 10] = energy_density(A)
        rows[:, 11:14] = poynting(A, medium)
        info = {"epsilon": repr(medium.epsilon), "mu": repr(medium.mu)}
        info.update(meta or {})
        return cls(rows, info)

    @property
    def field_values(self):
        return self.rows[:, 4:10:2] + 1j * self.rows[:, 5:10:2]

    def w_residual(self):
        """Largest ``|W - |A|^2 / 2|`` over the rows, relative to ``max(1, W)``."""
        if len(self.rows) == 0:
            return 0.0
        w = energy_density(self.field_values)
        return float(np.max(np.abs(self.rows[:, 10] - w) / np.maximum(1.0, np.abs(w))))

    def to_text(self):
        buf = io.StringIO()
        for key in sorted(self.meta):
            buf.write(f"# {key}: {self.meta[key]}\n")
        buf.write(",".join(COLUMNS) + "\n")
        if len(self.rows):
            np.savetxt(buf, self.rows, fmt=FLOAT_FMT, delimiter=",")
        return buf.getvalue()

    def write(self, path):
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def read(cls, path):
        meta, body = {}, []
        header = None
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if line.startswith("#"):
                key, _, val = line[1:].partition(":")
                meta[key.strip()] = val.strip()
            elif header is None:
                header = tuple(line.split(","))
                if header != COLUMNS:
                    raise ValueError(f"unexpected columns {header}")
            elif line.strip():
                body.append([float(v) for v in line.split(",")])
        rows = np.array(body, dtype=float).reshape(-1, len(COLUMNS))
        return cls(rows, meta)
