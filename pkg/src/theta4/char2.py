"""Exact combinatorics of theta characteristics over GF(2).

A characteristic of genus g is a pair (a1, a2) of g-bit vectors.  It indexes
both a theta function and a two-torsion point, and carries a parity
(-1)^(a1.a2).  The symplectic pairing and the quadratic forms kappa_c take
values in {+1, -1}; signs are plain Python ints throughout.

Coordinate conventions fixed here, used consistently by every other module:

* canonical index: the 2g-bit integer whose high g bits are a1 and low g bits
  are a2, most significant bit first; all enumerations sort by it.
* kappa_c(a) = (-1)^(a1.a2 + c1.a2 + c2.a1), the quadratic refinement of the
  pairing attached to the characteristic c.
* translation acts by componentwise GF(2) addition of the pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

MAX_GENUS = 6

Bits = tuple[int, ...]


def d_plus(g: int) -> int:
    """Number of even characteristics in genus g: 2^(g-1) (2^g + 1)."""
    return 2 ** (g - 1) * (2**g + 1)


def d_minus(g: int) -> int:
    """Number of odd characteristics in genus g: 2^(g-1) (2^g - 1)."""
    return 2 ** (g - 1) * (2**g - 1)


def _check_genus(g: int) -> None:
    if not isinstance(g, int) or not 1 <= g <= MAX_GENUS:
        raise ValueError(f"genus must be an integer in 1..{MAX_GENUS}, got {g!r}")


def _dot(u: Bits, v: Bits) -> int:
    return sum(x & y for x, y in zip(u, v)) & 1


def _xor(u: Bits, v: Bits) -> Bits:
    return tuple(x ^ y for x, y in zip(u, v))


def _bits_to_int(bits: Bits) -> int:
    value = 0
    for b in bits:
        value = value << 1 | b
    return value


def _int_to_bits(value: int, g: int) -> Bits:
    return tuple((value >> (g - 1 - k)) & 1 for k in range(g))


@dataclass(frozen=True)
class Characteristic:
    """A pair of g-bit vectors over GF(2), ordered by canonical index."""

    a1: Bits
    a2: Bits

    def __post_init__(self) -> None:
        a1 = tuple(self.a1)
        a2 = tuple(self.a2)
        if len(a1) != len(a2):
            raise ValueError(f"a1 and a2 must have equal length, got {len(a1)} and {len(a2)}")
        _check_genus(len(a1))
        if any(b not in (0, 1) for b in a1 + a2):
            raise ValueError(f"coordinates must be bits in {{0, 1}}: {a1}, {a2}")
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)

    @property
    def g(self) -> int:
        return len(self.a1)

    @property
    def index(self) -> int:
        """Canonical index: high g bits a1, low g bits a2, MSB first."""
        return _bits_to_int(self.a1) << self.g | _bits_to_int(self.a2)

    @property
    def is_zero(self) -> bool:
        return not any(self.a1) and not any(self.a2)

    @classmethod
    def zero(cls, g: int) -> "Characteristic":
        _check_genus(g)
        return cls((0,) * g, (0,) * g)

    @classmethod
    def from_index(cls, g: int, index: int) -> "Characteristic":
        _check_genus(g)
        if not 0 <= index < 4**g:
            raise ValueError(f"index {index} out of range for genus {g}")
        return cls(_int_to_bits(index >> g, g), _int_to_bits(index & (2**g - 1), g))

    @classmethod
    def from_ints(cls, g: int, a1: int, a2: int) -> "Characteristic":
        """Build from two integers read as g-bit vectors, MSB first."""
        _check_genus(g)
        if not (0 <= a1 < 2**g and 0 <= a2 < 2**g):
            raise ValueError(f"integer halves must lie in 0..{2 ** g - 1}, got {a1}, {a2}")
        return cls(_int_to_bits(a1, g), _int_to_bits(a2, g))

    @classmethod
    def from_json(cls, obj: object, g: int | None = None) -> "Characteristic":
        """Accept {"a1": [bits], "a2": [bits]} or {"a1": int, "a2": int}."""
        if not isinstance(obj, dict) or set(obj) - {"a1", "a2"}:
            raise ValueError(f"characteristic JSON must be an object with keys a1, a2: {obj!r}")
        halves = []
        for key in ("a1", "a2"):
            value = obj.get(key)
            if isinstance(value, (list, tuple)):
                halves.append(tuple(int(b) for b in value))
            elif isinstance(value, int):
                if g is None:
                    raise ValueError("integer characteristic halves need an explicit genus")
                if not 0 <= value < 2**g:
                    raise ValueError(f"{key}={value} out of range for genus {g}")
                halves.append(_int_to_bits(value, g))
            else:
                raise ValueError(f"{key} must be a bit list or an integer, got {value!r}")
        return cls(halves[0], halves[1])

    def to_json(self) -> dict:
        return {"a1": list(self.a1), "a2": list(self.a2)}

    def __str__(self) -> str:
        return "".join(map(str, self.a1)) + "," + "".join(map(str, self.a2))


def _check_same_genus(a: Characteristic, b: Characteristic) -> None:
    if a.g != b.g:
        raise ValueError(f"genus mismatch: {a.g} vs {b.g}")


@lru_cache(maxsize=None)
def _all_characteristics(g: int) -> tuple[Characteristic, ...]:
    return tuple(Characteristic.from_index(g, i) for i in range(4**g))


def enumerate_characteristics(g: int) -> list[Characteristic]:
    """All 4^g characteristics of genus g, ascending by canonical index."""
    _check_genus(g)
    return list(_all_characteristics(g))


def parity(c: Characteristic) -> int:
    """+1 for even characteristics (a1.a2 = 0 over GF(2)), -1 for odd."""
    return -1 if _dot(c.a1, c.a2) else 1


def weil_pairing(a: Characteristic, b: Characteristic) -> int:
    """Symplectic pairing (-1)^(a1.b2 + a2.b1); symmetric and bilinear."""
    _check_same_genus(a, b)
    return -1 if (_dot(a.a1, b.a2) ^ _dot(a.a2, b.a1)) else 1


def kappa_value(c: Characteristic, a: Characteristic) -> int:
    """Quadratic form kappa_c(a) = (-1)^(a1.a2 + c1.a2 + c2.a1).

    Satisfies kappa_c(a + b) = kappa_c(a) kappa_c(b) <a, b> for every a, b;
    for c = 0 it reduces to the parity of a.
    """
    _check_same_genus(c, a)
    e = _dot(a.a1, a.a2) ^ _dot(c.a1, a.a2) ^ _dot(c.a2, a.a1)
    return -1 if e else 1


def translate(b: Characteristic, c: Characteristic) -> Characteristic:
    """Translate c by b: componentwise GF(2) sum of the pairs.

    The translated form satisfies
    kappa_value(translate(b, c), x) = weil_pairing(b, x) * kappa_value(c, x).
    """
    _check_same_genus(b, c)
    return Characteristic(_xor(c.a1, b.a1), _xor(c.a2, b.a2))


@lru_cache(maxsize=None)
def _even_points_cached(c: Characteristic) -> tuple[Characteristic, ...]:
    return tuple(a for a in _all_characteristics(c.g) if kappa_value(c, a) == 1)


def even_points(c: Characteristic) -> list[Characteristic]:
    """The d+ points where kappa_c = +1, in canonical order (zero is first)."""
    if parity(c) != 1:
        raise ValueError(f"even_points needs an even characteristic, got odd {c}")
    return list(_even_points_cached(c))


def even_characteristics(g: int) -> list[Characteristic]:
    """The d+ even characteristics of genus g, in canonical order."""
    _check_genus(g)
    return list(_even_points_cached(Characteristic.zero(g)))


def isometry_to_even_points(kappa0: Characteristic, b: Characteristic) -> Characteristic:
    """Map an even pair b into even_points(kappa0), preserving the pairing.

    b is fixed when <kappa0, b> = +1 and shifted by kappa0 otherwise.  Over
    the even pairs this is a bijection onto even_points(kappa0) with
    <psi(a), psi(b)> = <a, b>, which is what lines the normalized evaluation
    matrix up with the canonical sign matrix for any even kappa0.
    """
    if parity(kappa0) != 1:
        raise ValueError(f"alignment needs an even kappa0, got odd {kappa0}")
    if parity(b) != 1:
        raise ValueError(f"alignment is defined on even pairs, got odd {b}")
    if weil_pairing(kappa0, b) == 1:
        return b
    return translate(kappa0, b)
