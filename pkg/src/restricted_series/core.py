"""Domain types, truncated power-series evaluation and affine normalization.

A power series here is ``f(z) = sum(lam_n * z**n)`` whose coefficients are
drawn from a finite :class:`CoefficientSet`. Only finitely many coefficients
are ever materialized (a :class:`SparseAssignment`); everything beyond the
last listed index is controlled by :func:`tail_bound`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

# Inflation applied to every rigorous bound so floating roundoff stays below
# the acceptance tolerances (all >= 1e-9).
BOUND_INFLATION = 1.0 + 1e-12
MEMBERSHIP_TOL = 1e-12

# cos/sin of 2*pi*k/12, exact where the value is rational.
_SQ3_2 = math.sqrt(3.0) / 2.0
_TWELFTH_ROOTS = (
    complex(1.0, 0.0),
    complex(_SQ3_2, 0.5),
    complex(0.5, _SQ3_2),
    complex(0.0, 1.0),
    complex(-0.5, _SQ3_2),
    complex(-_SQ3_2, 0.5),
    complex(-1.0, 0.0),
    complex(-_SQ3_2, -0.5),
    complex(-0.5, -_SQ3_2),
    complex(0.0, -1.0),
    complex(0.5, -_SQ3_2),
    complex(_SQ3_2, -0.5),
)


def to_complex(x: Any) -> complex:
    """Accept a number or a ``[re, im]`` pair."""
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"expected [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    return complex(x)


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


# --------------------------------------------------------------------------
# Angles on the unit circle
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Angle:
    """A unimodular point ``e(turns) = exp(2*pi*i*turns)``.

    Exact angles carry a :class:`~fractions.Fraction` so roots of unity are
    recognized without floating comparisons. Float angles are treated as
    irrational, except that integer and half-integer floats are promoted to
    the exact points 1 and -1.
    """

    turns: Fraction | float
    exact: bool = False

    def __post_init__(self):
        t = self.turns
        if isinstance(t, bool):
            raise TypeError("turns must be numeric")
        if isinstance(t, float) and not self.exact:
            if not math.isfinite(t):
                raise ValueError("turns must be finite")
            if (2.0 * t).is_integer():
                t = Fraction(t)
        if isinstance(t, (int, Fraction)) or self.exact:
            t = t if isinstance(t, Fraction) else Fraction(repr(t) if isinstance(t, float) else t)
            object.__setattr__(self, "turns", t % 1)
            object.__setattr__(self, "exact", True)
        else:
            object.__setattr__(self, "turns", math.fmod(float(t), 1.0) % 1.0)

    @classmethod
    def of(cls, value: Angle | Fraction | float | int) -> Angle:
        return value if isinstance(value, Angle) else cls(value)

    @classmethod
    def parse(cls, text: str) -> Angle:
        """Parse ``turns:<value>`` with an optional ``exact`` marker.

        ``p/q`` and integer literals are always exact; decimals only with the
        marker (``turns:0.25 exact`` or ``turns:0.25:exact``).
        """
        s = text.strip()
        if s.startswith("turns:"):
            s = s[len("turns:"):]
        parts = s.replace(":", " ").split()
        if not parts:
            raise ValueError(f"cannot parse angle {text!r}")
        exact = len(parts) > 1 and parts[1] == "exact"
        if len(parts) > 2 or (len(parts) == 2 and not exact):
            raise ValueError(f"cannot parse angle {text!r}")
        lit = parts[0]
        if "/" in lit or lit.lstrip("+-").isdigit():
            return cls(Fraction(lit), True)
        if exact:
            return cls(Fraction(lit), True)
        return cls(float(lit))

    @property
    def denominator(self) -> int | None:
        return self.turns.denominator if self.exact else None

    @property
    def is_real_point(self) -> bool:
        """True for the points 1 and -1."""
        return self.exact and self.turns.denominator in (1, 2)

    @property
    def is_lattice_root(self) -> bool:
        """True for the six roots +-i, +-w, +-w^2 (w = e(1/3))."""
        return self.exact and self.turns.denominator in (3, 4, 6)

    @property
    def value(self) -> complex:
        return self.power(1)

    @property
    def radians(self) -> float:
        return 2.0 * math.pi * float(self.turns)

    def power_turns(self, n: int) -> Fraction | float:
        if self.exact:
            return (self.turns * n) % 1
        return math.fmod(n * self.turns, 1.0)

    def power(self, n: int) -> complex:
        t = self.power_turns(n)
        if self.exact and 12 % t.denominator == 0:
            return _TWELFTH_ROOTS[int(t * 12)]
        return cmath.rect(1.0, 2.0 * math.pi * float(t))

    def powers(self, start: int, count: int) -> np.ndarray:
        """``zeta**n`` for ``n = start, ..., start+count-1``."""
        n = np.arange(start, start + count, dtype=np.int64)
        if self.exact:
            p, q = self.turns.numerator, self.turns.denominator
            k = (n % q) * p % q
            if 12 % q == 0:
                table = np.array(_TWELFTH_ROOTS, dtype=complex)
                return table[k * (12 // q)]
            frac = k / q
        else:
            frac = np.mod(n.astype(np.float64) * self.turns, 1.0)
        return np.exp(2j * np.pi * frac)

    def to_json(self) -> dict:
        if self.exact:
            t = self.turns
            turns: Any = f"{t.numerator}/{t.denominator}"
        else:
            turns = self.turns
        return {"turns": turns, "exact": self.exact}

    @classmethod
    def from_json(cls, obj: dict) -> Angle:
        turns = obj["turns"]
        if obj.get("exact", False):
            return cls(Fraction(str(turns)), True)
        return cls(float(turns))


# --------------------------------------------------------------------------
# Coefficient sets and assignments
# --------------------------------------------------------------------------


@dataclass(frozen=True, init=False)
class CoefficientSet:
    """A finite set of admissible coefficients (order preserved, no repeats)."""

    elements: tuple[complex, ...]
    sup_modulus: float

    def __init__(self, elements: Iterable[Any]):
        seen: list[complex] = []
        for e in elements:
            z = to_complex(e)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError("coefficients must be finite")
            if z not in seen:
                seen.append(z)
        if len(seen) < 2:
            raise ValueError("a coefficient set needs at least two distinct elements")
        object.__setattr__(self, "elements", tuple(seen))
        object.__setattr__(self, "sup_modulus", max(abs(z) for z in seen))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> complex:
        return self.elements[i]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.elements, dtype=complex)

    def find(self, value: complex, tol: float = MEMBERSHIP_TOL) -> int | None:
        """Index of the element within ``tol*(1+|value|)`` of ``value``."""
        value = complex(value)
        d = np.abs(self.array - value)
        i = int(np.argmin(d))
        return i if d[i] <= tol * (1.0 + abs(value)) else None

    def index(self, value: complex) -> int:
        i = self.find(value)
        if i is None:
            raise ValueError(f"{value!r} is not an element of the coefficient set")
        return i

    def __contains__(self, value: object) -> bool:
        return self.find(complex(value)) is not None  # type: ignore[arg-type]

    @property
    def zero_index(self) -> int | None:
        for i, z in enumerate(self.elements):
            if z == 0:
                return i
        return None

    def scaled(self, c: complex) -> CoefficientSet:
        return CoefficientSet(c * z for z in self.elements)

    def to_json(self) -> list[list[float]]:
        return [complex_to_json(z) for z in self.elements]

    @classmethod
    def from_json(cls, obj: Sequence[Any]) -> CoefficientSet:
        return cls(obj)


@dataclass(frozen=True, init=False)
class SparseAssignment:
    """Finitely many ``(index, value)`` pairs with strictly increasing indices.

    Indices that are not listed contribute nothing to :func:`eval_prefix`;
    a certificate is only meaningful with such gaps when 0 is admissible.
    """

    terms: tuple[tuple[int, complex], ...]

    def __init__(self, terms: Iterable[tuple[int, Any]] = ()):
        out = tuple((int(n), to_complex(v)) for n, v in terms)
        for (n0, _), (n1, _) in zip(out, out[1:]):
            if n1 <= n0:
                raise ValueError("indices must be strictly increasing")
        if out and out[0][0] < 0:
            raise ValueError("indices must be natural numbers")
        object.__setattr__(self, "terms", out)

    @classmethod
    def dense(cls, values: Iterable[Any], start: int = 0) -> SparseAssignment:
        return cls((start + k, v) for k, v in enumerate(values))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def indices(self) -> list[int]:
        return [n for n, _ in self.terms]

    @property
    def values(self) -> list[complex]:
        return [v for _, v in self.terms]

    @property
    def max_index(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    def as_dict(self) -> dict[int, complex]:
        return dict(self.terms)

    def is_contiguous(self) -> bool:
        return all(n == k for k, (n, _) in enumerate(self.terms))

    def to_json(self) -> list:
        return [[n, complex_to_json(v)] for n, v in self.terms]

    @classmethod
    def from_json(cls, obj: Sequence[Any]) -> SparseAssignment:
        return cls((n, v) for n, v in obj)


@dataclass(frozen=True)
class Certificate:
    """Finite, re-checkable witness that ``|f(tau) - target| < epsilon``.

    The claim covers *every* continuation of the assignment beyond its last
    index: ``tail_bound`` bounds those terms using only ``sup |lambda|``.
    ``info`` carries engine diagnostics and is not part of the JSON schema.
    """

    tau: complex
    assignment: SparseAssignment
    target: complex
    epsilon: float
    achieved_error: float
    tail_bound: float
    info: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def margin(self) -> float:
        return self.epsilon - (self.achieved_error + self.tail_bound)

    def to_json(self) -> dict:
        return {
            "tau": complex_to_json(self.tau),
            "assignment": self.assignment.to_json(),
            "target": complex_to_json(self.target),
            "epsilon": self.epsilon,
            "achieved_error": self.achieved_error,
            "tail_bound": self.tail_bound,
        }

    @classmethod
    def from_json(cls, obj: dict) -> Certificate:
        expected = {"tau", "assignment", "target", "epsilon", "achieved_error", "tail_bound"}
        if set(obj) != expected:
            raise ValueError(f"certificate fields must be exactly {sorted(expected)}")
        return cls(
            tau=to_complex(obj["tau"]),
            assignment=SparseAssignment.from_json(obj["assignment"]),
            target=to_complex(obj["target"]),
            epsilon=float(obj["epsilon"]),
            achieved_error=float(obj["achieved_error"]),
            tail_bound=float(obj["tail_bound"]),
        )


@dataclass(frozen=True)
class AffineTransform:
    """``lambda -> (lambda - shift) / scale`` and its inverse."""

    scale: complex = 1.0
    shift: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "scale", complex(self.scale))
        object.__setattr__(self, "shift", complex(self.shift))
        if self.scale == 0:
            raise ValueError("scale must be nonzero")

    @classmethod
    def identity(cls) -> AffineTransform:
        return cls(1.0, 0.0)

    def forward(self, value: complex) -> complex:
        return (value - self.shift) / self.scale

    def backward(self, value: complex) -> complex:
        return self.scale * value + self.shift

    def backward_dense(self, assignment: SparseAssignment) -> SparseAssignment:
        """Back-transport to a dense assignment on ``0..max_index``.

        Missing normalized indices are normalized zeros, i.e. ``shift``.
        """
        d = assignment.as_dict()
        return SparseAssignment.dense(
            self.backward(d.get(n, 0.0)) for n in range(assignment.max_index + 1)
        )

    def to_json(self) -> dict:
        return {"scale": complex_to_json(self.scale), "shift": complex_to_json(self.shift)}


# --------------------------------------------------------------------------
# Operations
# --------------------------------------------------------------------------


def _check_inside(z: complex) -> complex:
    z = complex(z)
    if not abs(z) < 1.0:
        raise ValueError(f"|z| must be < 1, got {abs(z)!r}")
    return z


def eval_prefix(assignment: SparseAssignment, z: complex) -> complex:
    """Evaluate ``sum(value * z**index)`` by Horner steps across index gaps."""
    z = _check_inside(z)
    terms = assignment.terms
    if not terms:
        return 0j
    acc = 0j
    prev = terms[-1][0]
    for n, v in reversed(terms):
        gap = prev - n
        if gap:
            acc *= z if gap == 1 else z**gap
        acc += v
        prev = n
    if prev:
        acc *= z**prev
    return acc


def tail_bound(sup_modulus: float, r: float, start_index: int) -> float:
    """Upper bound for ``|sum_{n >= start} lam_n z**n|`` when ``|z| <= r``."""
    if sup_modulus < 0 or start_index < 0:
        raise ValueError("sup_modulus and start_index must be nonnegative")
    if not 0.0 <= r < 1.0:
        raise ValueError(f"r must lie in [0, 1), got {r!r}")
    if sup_modulus == 0:
        return 0.0
    return sup_modulus * r**start_index / (1.0 - r) * BOUND_INFLATION


def normalize_affine(
    lam: CoefficientSet, a: complex, b: complex
) -> tuple[CoefficientSet, AffineTransform]:
    """Map ``a -> 0`` and ``b -> 1``; element order is preserved."""
    ia, ib = lam.find(a), lam.find(b)
    if ia is None or ib is None:
        raise ValueError("a and b must be elements of the coefficient set")
    if ia == ib:
        raise ValueError("a and b must be distinct")
    t = AffineTransform(scale=lam[ib] - lam[ia], shift=lam[ia])
    out = [t.forward(z) for z in lam]
    out[ia], out[ib] = 0j, 1 + 0j
    return CoefficientSet(out), t


def geometric_block(tau: complex, length: int | None) -> complex:
    """``sum_{n < length} tau**n``; ``None`` means the full series."""
    if length is None:
        return 1.0 / (1.0 - tau)
    return (1.0 - tau**length) / (1.0 - tau)


def transport_target(
    w: complex, tau: complex, t: AffineTransform, length: int | None = None
) -> complex:
    """Target in normalized coordinates for a certificate at ``tau``.

    With ``length=None`` every coefficient of the infinite series is shifted,
    giving ``(w - shift/(1 - tau)) / scale``; with a finite ``length`` only
    indices ``0..length-1`` are.
    """
    tau = _check_inside(tau)
    return (complex(w) - t.shift * geometric_block(tau, length)) / t.scale
