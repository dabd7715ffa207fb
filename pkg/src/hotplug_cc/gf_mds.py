"""GF(2^m) arithmetic and a Reed-Solomon erasure codec.

Symbol blocks are 1-D numpy arrays of field elements (``uint8`` for m=8,
``uint16`` for m=16). Field addition is XOR, so a sum of blocks is their
bitwise XOR.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

__all__ = [
    "GF256_POLY",
    "GF65536_POLY",
    "GaloisField",
    "RsCodec",
    "bytes_to_symbols",
    "decode_from",
    "encode",
    "field_for_length",
    "get_field",
    "join_subfiles",
    "make_codec",
    "split_file",
    "symbols_to_bytes",
]

# x^8 + x^4 + x^3 + x^2 + 1
GF256_POLY = 0x11D
# x^16 + x^12 + x^3 + x + 1
GF65536_POLY = 0x1100B


class GaloisField:
    """GF(2^m) with log/antilog tables over the primitive element 2."""

    def __init__(self, m: int, poly: int):
        self.m = m
        self.poly = poly
        self.order = 1 << m
        self.dtype = np.uint8 if m <= 8 else np.uint16
        self.symbol_bytes = (m + 7) // 8
        q1 = self.order - 1
        exp = np.zeros(2 * q1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(q1):
            if i and x == 1:
                raise ValueError(f"2 is not primitive modulo {poly:#x}")
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.order:
                x ^= poly
        if x != 1:
            raise ValueError(f"{poly:#x} is not a primitive polynomial of degree {m}")
        exp[q1:] = exp[:q1]
        self.exp = exp
        self.log = log
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()

    def __repr__(self) -> str:
        return f"GaloisField(m={self.m}, poly={self.poly:#x})"

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp_list[self._log_list[a] + self._log_list[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._exp_list[(self.order - 1 - self._log_list[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp_list[(self._log_list[a] * e) % (self.order - 1)]

    def element(self, i: int) -> int:
        """i-th element of the canonical enumeration 0, 1, g, g^2, ..."""
        if not 0 <= i < self.order:
            raise IndexError(f"field has {self.order} elements, asked for #{i}")
        return 0 if i == 0 else self._exp_list[i - 1]

    def scale(self, c: int, block: np.ndarray) -> np.ndarray:
        """Multiply every symbol of ``block`` by the scalar ``c``."""
        if c == 0:
            return np.zeros_like(block)
        if c == 1:
            return block.copy()
        out = self.exp[self.log[block] + self._log_list[c]].astype(self.dtype)
        out[block == 0] = 0
        return out

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Element-wise product of two symbol arrays."""
        out = self.exp[self.log[a] + self.log[b]].astype(self.dtype)
        out[(a == 0) | (b == 0)] = 0
        return out


@lru_cache(maxsize=None)
def get_field(m: int) -> GaloisField:
    if m == 8:
        return GaloisField(8, GF256_POLY)
    if m == 16:
        return GaloisField(16, GF65536_POLY)
    raise ValueError(f"unsupported extension degree {m}; use 8 or 16")


def field_for_length(n: int) -> GaloisField:
    """Smallest supported field with at least ``n`` distinct evaluation points."""
    if n <= 256:
        return get_field(8)
    if n <= 65536:
        return get_field(16)
    raise ValueError(f"code length {n} exceeds GF(2^16)")


@dataclass(frozen=True)
class RsCodec:
    """[n, k] polynomial-evaluation code; ``generator[r][c] = points[c] ** r``."""

    field: GaloisField
    n: int
    k: int
    points: tuple[int, ...]
    generator: tuple[tuple[int, ...], ...]


def make_codec(n: int, k: int, field: GaloisField | None = None) -> RsCodec:
    if field is None:
        field = field_for_length(n)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n} k={k}")
    if n > field.order:
        raise ValueError(f"n={n} exceeds the {field.order} elements of {field}")
    points = tuple(field.element(i) for i in range(n))
    generator = tuple(tuple(field.pow(x, r) for x in points) for r in range(k))
    return RsCodec(field=field, n=n, k=k, points=points, generator=generator)


def _block_length(blocks: Sequence[np.ndarray]) -> int:
    lengths = {len(b) for b in blocks}
    if len(lengths) != 1:
        raise ValueError(f"blocks have unequal lengths {sorted(lengths)}")
    return lengths.pop()


def _combine(field: GaloisField, coeffs: Sequence[int], blocks: Sequence[np.ndarray]) -> np.ndarray:
    acc = np.zeros(len(blocks[0]), dtype=field.dtype)
    for c, block in zip(coeffs, blocks):
        if c:
            acc ^= field.scale(c, block)
    return acc


def encode(codec: RsCodec, message: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Coded block f is ``sum_r generator[r][f] * message[r]``, symbol by symbol."""
    if len(message) != codec.k:
        raise ValueError(f"expected {codec.k} message blocks, got {len(message)}")
    _block_length(message)
    G = codec.generator
    return [
        _combine(codec.field, [G[r][f] for r in range(codec.k)], message)
        for f in range(codec.n)
    ]


def _invert(field: GaloisField, matrix: list[list[int]]) -> list[list[int]]:
    n = len(matrix)
    aug = [row[:] + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            # the MDS property rules this out for distinct coordinates
            raise ArithmeticError("singular sub-matrix; generator is not MDS")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = field.inv(aug[col][col])
        aug[col] = [field.mul(inv_p, x) for x in aug[col]]
        for r in range(n):
            factor = aug[r][col]
            if r != col and factor:
                aug[r] = [x ^ field.mul(factor, y) for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def decode_from(
    codec: RsCodec, coords: Sequence[int], values: Sequence[np.ndarray]
) -> list[np.ndarray]:
    """Recover the k message blocks from k coded blocks at 1-based ``coords``."""
    coords = list(coords)
    if len(coords) != codec.k or len(values) != codec.k:
        raise ValueError(f"need exactly {codec.k} coordinates and blocks")
    if len(set(coords)) != len(coords):
        raise ValueError(f"repeated coordinates in {coords}")
    if any(not 1 <= c <= codec.n for c in coords):
        raise ValueError(f"coordinates must lie in 1..{codec.n}")
    _block_length(values)
    # values[j] = sum_r G[r][c_j] * m[r]  =>  m = inv(A) values with A[j][r] = G[r][c_j]
    A = [[codec.generator[r][c - 1] for r in range(codec.k)] for c in coords]
    A_inv = _invert(codec.field, A)
    return [_combine(codec.field, A_inv[r], values) for r in range(codec.k)]


def bytes_to_symbols(data: bytes, field: GaloisField) -> np.ndarray:
    if len(data) % field.symbol_bytes:
        raise ValueError("byte length is not a whole number of symbols")
    if field.symbol_bytes == 1:
        return np.frombuffer(data, dtype=np.uint8).copy()
    return np.frombuffer(data, dtype=">u2").astype(np.uint16)


def symbols_to_bytes(block: np.ndarray, field: GaloisField) -> bytes:
    if field.symbol_bytes == 1:
        return block.astype(np.uint8).tobytes()
    return block.astype(">u2").tobytes()


def split_file(data: bytes, k: int, field: GaloisField) -> list[np.ndarray]:
    """Zero-pad ``data`` and cut it into ``k`` equal symbol blocks."""
    unit = k * field.symbol_bytes
    padded = data + bytes(-len(data) % unit)
    if not padded:
        padded = bytes(unit)
    symbols = bytes_to_symbols(padded, field)
    return [chunk.copy() for chunk in np.split(symbols, k)]


def join_subfiles(blocks: Sequence[np.ndarray], field: GaloisField, length: int) -> bytes:
    return b"".join(symbols_to_bytes(b, field) for b in blocks)[:length]
