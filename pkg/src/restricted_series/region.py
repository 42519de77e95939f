"""Open regions of the unit disk built from disks and wedges.

A :class:`RegionSpec` is the union of its pieces intersected with the open
unit disk, together with a boundary point ``zeta`` it accumulates at.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .core import Angle, complex_to_json, to_complex


def _angle_gap(a: float, b: float) -> float:
    """Absolute angular distance in [0, pi]."""
    d = math.fmod(a - b, 2.0 * math.pi)
    if d > math.pi:
        d -= 2.0 * math.pi
    elif d < -math.pi:
        d += 2.0 * math.pi
    return abs(d)


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        return np.abs(z - self.center) < self.radius

    def bbox(self) -> tuple[float, float, float, float]:
        c, r = self.center, self.radius
        return c.real - r, c.real + r, c.imag - r, c.imag + r

    def to_json(self) -> dict:
        return {"disk": {"center": complex_to_json(self.center), "radius": self.radius}}


@dataclass(frozen=True)
class Wedge:
    """``{re_lo < Re z < re_hi, |arg z - arg_center| < half_angle}``."""

    re_lo: float
    re_hi: float
    arg_center: float
    half_angle: float

    def __post_init__(self):
        if not self.re_lo < self.re_hi:
            raise ValueError("wedge needs re_lo < re_hi")
        if not self.half_angle > 0:
            raise ValueError("wedge half_angle must be positive")

    def contains(self, z: complex) -> bool:
        if z == 0 or not self.re_lo < z.real < self.re_hi:
            return False
        return _angle_gap(cmath.phase(z), self.arg_center) < self.half_angle

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        d = np.angle(z) - self.arg_center
        d = np.abs((d + np.pi) % (2.0 * np.pi) - np.pi)
        return (z.real > self.re_lo) & (z.real < self.re_hi) & (d < self.half_angle) & (z != 0)

    def bbox(self) -> tuple[float, float, float, float]:
        return self.re_lo, self.re_hi, -1.0, 1.0

    def to_json(self) -> dict:
        return {
            "wedge": {
                "re_lo": self.re_lo,
                "re_hi": self.re_hi,
                "arg_center": self.arg_center,
                "half_angle": self.half_angle,
            }
        }


Piece = Union[Disk, Wedge]


def piece_from_json(obj: dict) -> Piece:
    if "disk" in obj:
        d = obj["disk"]
        return Disk(to_complex(d["center"]), float(d["radius"]))
    if "wedge" in obj:
        w = obj["wedge"]
        return Wedge(float(w["re_lo"]), float(w["re_hi"]), float(w["arg_center"]), float(w["half_angle"]))
    raise ValueError(f"unknown region piece {obj!r}")


def parse_piece(text: str) -> Piece:
    """``disk:<re>,<im>,<radius>`` or ``wedge:<re_lo>,<re_hi>,<arg_center>,<half_angle>``."""
    kind, _, rest = text.partition(":")
    nums = [float(x) for x in rest.split(",") if x.strip()]
    if kind == "disk" and len(nums) == 3:
        return Disk(complex(nums[0], nums[1]), nums[2])
    if kind == "wedge" and len(nums) == 4:
        return Wedge(*nums)
    raise ValueError(f"cannot parse region piece {text!r}")


@dataclass(frozen=True)
class RegionSpec:
    pieces: tuple[Piece, ...]
    accumulation_point: Angle

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "accumulation_point", Angle.of(self.accumulation_point))
        if not self.pieces:
            raise ValueError("a region needs at least one piece")

    @classmethod
    def default_disk(cls, zeta: Angle, offset: float = 0.95, radius: float = 0.1) -> RegionSpec:
        """``Disk(offset*zeta, radius)`` intersected with the unit disk."""
        zeta = Angle.of(zeta)
        return cls((Disk(offset * zeta.value, radius),), zeta)

    @property
    def zeta(self) -> complex:
        return self.accumulation_point.value

    def contains(self, z: complex) -> bool:
        z = complex(z)
        return abs(z) < 1.0 and any(p.contains(z) for p in self.pieces)

    def contains_array(self, z: np.ndarray) -> np.ndarray:
        inside = np.zeros(z.shape, dtype=bool)
        for p in self.pieces:
            inside |= p.contains_array(z)
        return inside & (np.abs(z) < 1.0)

    def _candidates_near(self, d: float) -> Iterator[complex]:
        zeta = self.zeta
        for s in (0.5, 0.25, 0.75, 0.125, 0.9):
            yield zeta * (1.0 - s * d)
        for frac in (0.5, 0.25, 0.9):
            for k in range(64):
                yield zeta + frac * d * cmath.exp(2j * math.pi * k / 64)

    def point_near(self, d: float) -> complex | None:
        """A point of the region within distance ``d`` of ``zeta``, radial first."""
        for z in self._candidates_near(d):
            if abs(z - self.zeta) < d and self.contains(z):
                return z
        return None

    def point_on_circle_near(self, rho: float, d: float) -> complex | None:
        """A point of modulus ``rho`` in the region within ``d`` of ``zeta``."""
        if not 0 < rho < 1:
            return None
        theta0 = cmath.phase(self.zeta)
        if abs(rho - 1.0) >= d:
            return None
        half = 2.0 * math.asin(min(1.0, math.sqrt(max(d * d - (1 - rho) ** 2, 0.0)) / 2.0 / math.sqrt(rho)))
        for k in range(0, 33):
            for sign in ((1,) if k == 0 else (1, -1)):
                z = cmath.rect(rho, theta0 + sign * half * k / 33)
                if abs(z - self.zeta) < d and self.contains(z):
                    return z
        return None

    def has_accumulation(self, levels: int = 6) -> bool:
        return all(self.point_near(10.0**-k) is not None for k in range(1, levels + 1))

    def validate(self) -> None:
        """Raise ``ValueError`` unless the region accumulates at ``zeta``."""
        if not self.has_accumulation():
            raise ValueError("region does not accumulate at its accumulation point")

    def sample(self, rng: np.random.Generator, count: int, r_max: float = 1.0) -> np.ndarray:
        """Random points of the region (restricted to ``|z| <= r_max``).

        Candidates are drawn in fixed-size blocks, so the first ``k`` points
        do not depend on ``count``.
        """
        out: list[np.ndarray] = []
        got = 0
        block = 4096
        for _ in range(10_000):
            if got >= count:
                break
            piece_ix = rng.integers(len(self.pieces), size=block)
            u = rng.random((block, 2))
            z = np.empty(block, dtype=complex)
            for i, p in enumerate(self.pieces):
                sel = piece_ix == i
                if isinstance(p, Disk):
                    rr = p.radius * np.sqrt(u[sel, 0])
                    z[sel] = p.center + rr * np.exp(2j * np.pi * u[sel, 1])
                else:
                    x = p.re_lo + (p.re_hi - p.re_lo) * u[sel, 0]
                    th = p.arg_center + p.half_angle * (2.0 * u[sel, 1] - 1.0)
                    z[sel] = x * (1.0 + 1j * np.tan(th))
            ok = self.contains_array(z) & (np.abs(z) <= r_max)
            acc = z[ok]
            out.append(acc)
            got += acc.size
        if got < count:
            raise ValueError("region sampling failed; region may be empty")
        return np.concatenate(out)[:count]

    def to_json(self) -> dict:
        return {
            "pieces": [p.to_json() for p in self.pieces],
            "accumulation_point": self.accumulation_point.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> RegionSpec:
        return cls(
            tuple(piece_from_json(p) for p in obj["pieces"]),
            Angle.from_json(obj["accumulation_point"]),
        )
