"""63-bit 3D Morton codes over a fixed-point grid, with low-bit masking.

Bit ``b`` of x lands at code bit ``3b``, y at ``3b + 1``, t at ``3b + 2``.
Each coordinate carries 21 bits, so bit 63 of a code is always clear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

BITS = 21
LIMIT = 1 << BITS
_SPREAD_MASKS = (
    (32, 0x1F00000000FFFF),
    (16, 0x1F0000FF0000FF),
    (8, 0x100F00F00F00F00F),
    (4, 0x10C30C30C30C30C3),
    (2, 0x1249249249249249),
)
_M21 = LIMIT - 1


class MortonRangeError(ValueError):
    pass


@dataclass(frozen=True)
class QuantConfig:
    """Fixed-point grid: ``scale`` subunits per map unit, ``mask_bits`` low code bits dropped."""

    scale: int = 2
    mask_bits: int = 18

    def __post_init__(self) -> None:
        if self.scale < 1 or self.scale & (self.scale - 1):
            raise ValueError(f"scale must be a positive power of two, got {self.scale}")
        if not 0 <= self.mask_bits <= 63:
            raise ValueError(f"mask_bits must be in [0, 63], got {self.mask_bits}")

    def check_extent(self, extent: float) -> None:
        if self.scale * extent >= LIMIT:
            raise MortonRangeError(
                f"scale {self.scale} x extent {extent} does not fit {BITS}-bit coordinates"
            )


def _spread(v: int) -> int:
    v &= _M21
    for shift, m in _SPREAD_MASKS:
        v = (v | (v << shift)) & m
    return v


def _compact(v: int) -> int:
    v &= 0x1249249249249249
    v = (v | (v >> 2)) & 0x10C30C30C30C30C3
    v = (v | (v >> 4)) & 0x100F00F00F00F00F
    v = (v | (v >> 8)) & 0x1F0000FF0000FF
    v = (v | (v >> 16)) & 0x1F00000000FFFF
    v = (v | (v >> 32)) & _M21
    return v


# byte-wise spread tables: _LUT[d][j][b] is byte j of a coordinate spread into dimension d
_LUT = tuple(
    tuple(tuple(_spread(b << (8 * j)) << d for b in range(256)) for j in range(3)) for d in range(3)
)
(_X0, _X1, _X2), (_Y0, _Y1, _Y2), (_T0, _T1, _T2) = _LUT


def encode3(xi: int, yi: int, ti: int) -> int:
    if not (0 <= xi < LIMIT and 0 <= yi < LIMIT and 0 <= ti < LIMIT):
        raise MortonRangeError(f"grid coordinate out of range: {(xi, yi, ti)}")
    return (
        _X0[xi & 255] | _X1[(xi >> 8) & 255] | _X2[xi >> 16]
        | _Y0[yi & 255] | _Y1[(yi >> 8) & 255] | _Y2[yi >> 16]
        | _T0[ti & 255] | _T1[(ti >> 8) & 255] | _T2[ti >> 16]
    )


def decode3(code: int) -> tuple[int, int, int]:
    return (_compact(code), _compact(code >> 1), _compact(code >> 2))


def mask(code: int, k: int) -> int:
    """Clear the ``k`` least significant bits of ``code``."""
    return code & ~((1 << k) - 1)


def quantize(v: float, scale: int) -> int:
    return math.floor(v * scale)


def key_of(p, cfg: QuantConfig) -> int:
    """Masked Morton key of a space-time point ``(x, y, t)``."""
    return make_keyer(cfg)(p)


def make_keyer(cfg: QuantConfig):
    """Specialized ``key_of`` for one configuration; this is on the planner's hot path."""
    s = cfg.scale
    keep = ~((1 << cfg.mask_bits) - 1)
    floor = math.floor
    X0, X1, X2, Y0, Y1, Y2, T0, T1, T2 = _X0, _X1, _X2, _Y0, _Y1, _Y2, _T0, _T1, _T2

    def keyer(p) -> int:
        xi = floor(p[0] * s)
        yi = floor(p[1] * s)
        ti = floor(p[2] * s)
        if xi >= LIMIT or yi >= LIMIT or ti >= LIMIT or xi < 0 or yi < 0 or ti < 0:
            raise MortonRangeError(f"point {tuple(p)} quantizes outside the {BITS}-bit grid")
        return keep & (
            X0[xi & 255] | X1[(xi >> 8) & 255] | X2[xi >> 16]
            | Y0[yi & 255] | Y1[(yi >> 8) & 255] | Y2[yi >> 16]
            | T0[ti & 255] | T1[(ti >> 8) & 255] | T2[ti >> 16]
        )

    return keyer
