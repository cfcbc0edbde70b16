"""Fixed-length bit string helpers.

Bit strings of length n are passed around either as tuples of 0/1 ints or as
integer encodings.  The encoding convention used everywhere in this package:
bit 1 of the string is the most significant bit of the integer, so the string
"011" (x1=0, x2=1, x3=1) encodes to 3 and enumeration order 0..2**n-1 matches
reading the strings as binary numerals.
"""

from __future__ import annotations

import numpy as np

from .errors import ArgumentContractError


def int_to_bits(value: int, n: int) -> tuple[int, ...]:
    """Decode an integer into an n-bit tuple, most significant bit first."""
    if not 0 <= value < (1 << n):
        raise ArgumentContractError(f"value {value} does not fit in {n} bits")
    return tuple((value >> (n - 1 - i)) & 1 for i in range(n))


def bits_to_int(bits: tuple[int, ...]) -> int:
    """Encode a bit tuple into an integer, most significant bit first."""
    value = 0
    for b in bits:
        if b not in (0, 1):
            raise ArgumentContractError(f"bit value {b!r} is not 0 or 1")
        value = (value << 1) | b
    return value


def bit_of(value: int, position: int, n: int) -> int:
    """Bit at 1-based ``position`` of the n-bit encoding of ``value``."""
    if not 1 <= position <= n:
        raise ArgumentContractError(f"bit position {position} outside 1..{n}")
    return (value >> (n - position)) & 1


def dot_mod2(x: int, y: int) -> int:
    """Inner product of two bit strings mod 2 (parity of the AND)."""
    return bin(x & y).count("1") & 1


def hamming_weight(value: int) -> int:
    return bin(value).count("1")


def unit_string(position: int, n: int) -> int:
    """Encoding of the weight-1 string with its single 1 at 1-based ``position``."""
    if not 1 <= position <= n:
        raise ArgumentContractError(f"position {position} outside 1..{n}")
    return 1 << (n - position)


def bit_table(n: int) -> np.ndarray:
    """(2**n, n) array whose row v is the bit tuple of v."""
    values = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((values[:, None] >> shifts[None, :]) & 1).astype(np.int64)
