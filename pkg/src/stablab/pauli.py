"""Phase-free Pauli operators stored as bit-packed X/Z masks."""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

WORD = 64


class DimensionError(ValueError):
    """Operands live on qubit spaces of different size."""


class QubitIndex(NamedTuple):
    """Where a qubit sits: cell dimension, cell id and species."""

    dim: int
    cell: int
    species: str  # "sigma" | "tau" | "single"


def n_words(n: int) -> int:
    return (n + WORD - 1) // WORD


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 vector (qubit i -> bit i) into little-endian uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.shape[-1]
    pad = n_words(n) * WORD - n
    if pad:
        widths = [(0, 0)] * (bits.ndim - 1) + [(0, pad)]
        bits = np.pad(bits, widths)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    raw = np.ascontiguousarray(words).view(np.uint8)
    return np.unpackbits(raw, axis=-1, bitorder="little")[..., :n]


def _parity(words: np.ndarray) -> int:
    return int(np.bitwise_count(words).sum()) & 1


class PauliOperator:
    """Element of the n-qubit Pauli group modulo phases.

    Immutable; ``*`` is the group product (componentwise XOR).
    """

    __slots__ = ("n", "x", "z", "_hash")

    def __init__(self, n: int, x: np.ndarray, z: np.ndarray):
        w = n_words(n)
        x = np.ascontiguousarray(x, dtype=np.uint64)
        z = np.ascontiguousarray(z, dtype=np.uint64)
        if x.shape != (w,) or z.shape != (w,):
            raise DimensionError(f"mask shape {x.shape}/{z.shape} does not fit {n} qubits")
        x.flags.writeable = False
        z.flags.writeable = False
        self.n = n
        self.x = x
        self.z = z
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        w = n_words(n)
        return cls(n, np.zeros(w, np.uint64), np.zeros(w, np.uint64))

    @classmethod
    def from_bits(cls, x_bits, z_bits) -> "PauliOperator":
        x_bits = np.asarray(x_bits, dtype=np.uint8) & 1
        z_bits = np.asarray(z_bits, dtype=np.uint8) & 1
        if x_bits.shape != z_bits.shape:
            raise DimensionError("x and z bit vectors differ in length")
        return cls(x_bits.shape[0], pack_bits(x_bits), pack_bits(z_bits))

    @classmethod
    def from_support(cls, n: int, x: Iterable[int] = (), z: Iterable[int] = ()) -> "PauliOperator":
        """Build from qubit positions; repeated positions cancel pairwise."""
        w = n_words(n)

        def words(pos) -> np.ndarray:
            arr = np.fromiter(pos, dtype=np.int64)
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise IndexError("qubit position out of range")
            out = np.zeros(w, dtype=np.uint64)
            np.bitwise_xor.at(out, arr >> 6, np.left_shift(np.uint64(1), (arr & 63).astype(np.uint64)))
            return out

        return cls(n, words(x), words(z))

    @classmethod
    def from_hex(cls, text: str) -> "PauliOperator":
        n_str, xh, zh = text.strip().split(":")
        n = int(n_str)
        w = n_words(n)

        def words(h: str) -> np.ndarray:
            val = int(h, 16) if h else 0
            if val >> n:
                raise ValueError("mask has bits beyond n_qubits")
            return np.array([(val >> (WORD * i)) & 0xFFFFFFFFFFFFFFFF for i in range(w)], dtype=np.uint64)

        return cls(n, words(xh), words(zh))

    # -- views ------------------------------------------------------------
    def x_bits(self) -> np.ndarray:
        return unpack_bits(self.x, self.n)

    def z_bits(self) -> np.ndarray:
        return unpack_bits(self.z, self.n)

    def symplectic(self) -> np.ndarray:
        """Packed row ``[x | z]`` with 2n columns, for GF(2) work."""
        return pack_bits(np.concatenate([self.x_bits(), self.z_bits()]))

    def x_support(self) -> np.ndarray:
        return np.flatnonzero(self.x_bits())

    def z_support(self) -> np.ndarray:
        return np.flatnonzero(self.z_bits())

    def support(self) -> np.ndarray:
        return np.flatnonzero(unpack_bits(self.x | self.z, self.n))

    @property
    def weight(self) -> int:
        return int(np.bitwise_count(self.x | self.z).sum())

    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    # -- algebra ----------------------------------------------------------
    def _check(self, other: "PauliOperator") -> None:
        if self.n != other.n:
            raise DimensionError(f"{self.n} qubits vs {other.n} qubits")

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        self._check(other)
        return PauliOperator(self.n, self.x ^ other.x, self.z ^ other.z)

    def commutes(self, other: "PauliOperator") -> bool:
        self._check(other)
        return _parity((self.x & other.z) ^ (self.z & other.x)) == 0

    def restrict(self, keep: np.ndarray) -> "PauliOperator":
        """Zero every qubit where boolean vector ``keep`` is False."""
        mask = pack_bits(np.asarray(keep, dtype=np.uint8))
        return PauliOperator(self.n, self.x & mask, self.z & mask)

    def to_hex(self) -> str:
        digits = max(1, (self.n + 3) // 4)

        def h(words: np.ndarray) -> str:
            val = 0
            for i, wv in enumerate(words.tolist()):
                val |= int(wv) << (WORD * i)
            return format(val, f"0{digits}x")

        return f"{self.n}:{h(self.x)}:{h(self.z)}"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.x.tobytes(), self.z.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        xs = self.x_support().tolist()
        zs = self.z_support().tolist()
        if len(xs) + len(zs) > 12:
            return f"PauliOperator(n={self.n}, weight={self.weight})"
        return f"PauliOperator(n={self.n}, x={xs}, z={zs})"


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    return a * b


def product(ops: Sequence[PauliOperator], n: int | None = None) -> PauliOperator:
    if not ops:
        if n is None:
            raise ValueError("empty product needs n")
        return PauliOperator.identity(n)
    x = np.bitwise_xor.reduce([o.x for o in ops])
    z = np.bitwise_xor.reduce([o.z for o in ops])
    return PauliOperator(ops[0].n, x, z)


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    return a.commutes(b)


def weight(a: PauliOperator) -> int:
    return a.weight


def support(a: PauliOperator, layout: Sequence[QubitIndex] | None = None) -> list:
    """Qubit positions carrying a non-identity factor, or their ``QubitIndex`` labels."""
    pos = a.support().tolist()
    if layout is None:
        return pos
    return [layout[i] for i in pos]
