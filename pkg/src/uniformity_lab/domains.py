"""Enumeration of the group F_p^n with a fixed base-p lexicographic order.

Point i has coordinate vector digits(i) written big-endian: coordinate 0 is
the most significant digit, so enumeration order equals lexicographic order on
coordinate tuples.  All group arithmetic used by the transforms, norms and
counting loops is done on integer indices through the tables built here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import check_modulus

MAX_DOMAIN_SIZE = 2**26  # keeps index tables within platform-native ints / memory


@dataclass(frozen=True, eq=True)
class GroupDomain:
    p: int
    n: int

    def __post_init__(self):
        check_modulus(self.p)
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.p**self.n > MAX_DOMAIN_SIZE:
            raise ValueError(f"domain size {self.p}^{self.n} exceeds supported maximum")

    @property
    def size(self) -> int:
        return self.p**self.n

    @property
    def places(self) -> np.ndarray:
        return _places(self.p, self.n)

    @property
    def digits(self) -> np.ndarray:
        """(size, n) array; row i is the coordinate vector of point i."""
        return _digits(self.p, self.n)

    def index_of(self, vec) -> int:
        v = np.asarray(vec, dtype=np.int64) % self.p
        if v.shape != (self.n,):
            raise ValueError("vector does not match domain dimension")
        return int(v @ self.places)

    def indices_of(self, vecs: np.ndarray) -> np.ndarray:
        V = np.asarray(vecs, dtype=np.int64) % self.p
        return V @ self.places

    def vector_of(self, index: int) -> np.ndarray:
        return self.digits[index].copy()

    @property
    def add_table(self) -> np.ndarray:
        """(size, size) table: entry [i, j] is the index of point_i + point_j."""
        return _add_table(self.p, self.n)

    @property
    def neg_table(self) -> np.ndarray:
        return _neg_table(self.p, self.n)

    def scalar_mul_table(self, c: int) -> np.ndarray:
        """(size,) table: index of c * point_i."""
        return _scalar_mul_table(self.p, self.n, int(c) % self.p)

    def add_indices(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Indices of point_a + point_b, elementwise, without the full table."""
        return ((self.digits[a] + self.digits[b]) % self.p) @ self.places


@lru_cache(maxsize=None)
def domain(p: int, n: int) -> GroupDomain:
    return GroupDomain(p, n)


@lru_cache(maxsize=None)
def _places(p: int, n: int) -> np.ndarray:
    out = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _digits(p: int, n: int) -> np.ndarray:
    idx = np.arange(p**n, dtype=np.int64)
    out = (idx[:, None] // _places(p, n)[None, :]) % p
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _add_table(p: int, n: int) -> np.ndarray:
    digits = _digits(p, n)
    places = _places(p, n)
    N = p**n
    out = np.empty((N, N), dtype=np.int64)
    # row-chunked to bound the (chunk, N, n) intermediate
    chunk = max(1, 2**22 // max(N, 1))
    for start in range(0, N, chunk):
        stop = min(start + chunk, N)
        out[start:stop] = ((digits[start:stop, None, :] + digits[None, :, :]) % p) @ places
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _neg_table(p: int, n: int) -> np.ndarray:
    out = ((-_digits(p, n)) % p) @ _places(p, n)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _scalar_mul_table(p: int, n: int, c: int) -> np.ndarray:
    out = ((c * _digits(p, n)) % p) @ _places(p, n)
    out.setflags(write=False)
    return out
