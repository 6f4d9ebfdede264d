"""Linear algebra and polynomial arithmetic over GF(2).

Matrices are stored row-packed in uint64 words (column c lives in word
c // 64 at bit c % 64).  Polynomials are Python ints, bit i being the
coefficient of x^i.
"""

from __future__ import annotations

import numpy as np


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix of shape (m, c) into uint64 words, shape (m, ceil(c/64))."""
    bits = np.asarray(bits, dtype=np.uint8)
    m, c = bits.shape
    words = (c + 63) // 64
    padded = np.zeros((m, words * 64), dtype=np.uint8)
    padded[:, :c] = bits
    as_bytes = np.packbits(padded, axis=1, bitorder="little")
    return as_bytes.view("<u8").reshape(m, words).copy()


def unpack_rows(packed: np.ndarray, ncols: int) -> np.ndarray:
    as_bytes = np.ascontiguousarray(packed).view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return bits[:, :ncols]


def rref(packed: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a packed matrix.

    Returns the reduced matrix (first len(pivots) rows nonzero) and the
    pivot column list.  The input is not modified.
    """
    mat = np.array(packed, dtype=np.uint64, copy=True)
    m = mat.shape[0]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == m:
            break
        w, b = divmod(col, 64)
        colbits = (mat[row:, w] >> np.uint64(b)) & np.uint64(1)
        hits = np.flatnonzero(colbits)
        if hits.size == 0:
            continue
        piv = row + int(hits[0])
        if piv != row:
            mat[[row, piv]] = mat[[piv, row]]
        mask = ((mat[:, w] >> np.uint64(b)) & np.uint64(1)).astype(bool)
        mask[row] = False
        if mask.any():
            mat[mask] ^= mat[row]
        pivots.append(col)
        row += 1
    return mat, pivots


def rank(packed: np.ndarray, ncols: int) -> int:
    return len(rref(packed, ncols)[1])


def nullspace(packed: np.ndarray, ncols: int) -> np.ndarray:
    """Basis of {x : M x = 0} as a 0/1 array of shape (dim, ncols)."""
    mat, pivots = rref(packed, ncols)
    r = len(pivots)
    reduced = unpack_rows(mat[:r], ncols) if r else np.zeros((0, ncols), np.uint8)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = np.zeros((len(free), ncols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = reduced[i, f]
    return basis


def row_relations(vectors: np.ndarray) -> np.ndarray:
    """Dependencies among the rows of a 0/1 matrix.

    Returns a basis of {c : sum_k c_k * vectors[k] = 0} with shape (dim, len(vectors)).
    """
    vectors = np.asarray(vectors, dtype=np.uint8)
    e = vectors.shape[0]
    augmented = np.concatenate([vectors, np.eye(e, dtype=np.uint8)], axis=1)
    width = vectors.shape[1]
    mat, pivots = rref(pack_rows(augmented), width + e)
    dep_pivots = [p for p in pivots if p < width]
    bits = unpack_rows(mat, width + e)
    # rows beyond the data pivots have zero data part; their tails are the relations
    rows = bits[len(dep_pivots):]
    rows = rows[~rows[:, :width].any(axis=1)]
    tails = rows[:, width:]
    return tails[tails.any(axis=1)]


# ---------------------------------------------------------------- polynomials

def poly_degree(a: int) -> int:
    return a.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def poly_mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(poly_mul(a, b), m)


def poly_powmod(a: int, e: int, m: int) -> int:
    result = 1
    a = poly_mod(a, m)
    while e:
        if e & 1:
            result = poly_mulmod(result, a, m)
        a = poly_mulmod(a, a, m)
        e >>= 1
    return poly_mod(result, m)


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_from_exponents(exponents) -> int:
    value = 0
    for e in exponents:
        value ^= 1 << e
    return value


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Rabin's test: x^(2^n) = x mod f and gcd(x^(2^(n/p)) - x, f) = 1 for primes p | n."""
    n = poly_degree(f)
    if n < 1:
        return False
    if n == 1:
        return True

    def x_pow_2k(k):
        r = 0b10
        for _ in range(k):
            r = poly_mulmod(r, r, f)
        return r

    if x_pow_2k(n) != poly_mod(0b10, f):
        return False
    for p in _prime_factors(n):
        h = x_pow_2k(n // p) ^ 0b10
        if poly_gcd(f, h) != 1:
            return False
    return True


def multiplicative_order_of_x(f: int) -> int:
    """Order of x in GF(2)[x]/(f) for irreducible f, using the factorization of 2^n - 1."""
    n = poly_degree(f)
    group = (1 << n) - 1
    order = group
    for p in _prime_factors(group):
        while order % p == 0 and poly_powmod(0b10, order // p, f) == 1:
            order //= p
    return order


def is_primitive(f: int) -> bool:
    n = poly_degree(f)
    return is_irreducible(f) and multiplicative_order_of_x(f) == (1 << n) - 1


def brute_force_order_of_x(f: int, limit: int | None = None) -> int:
    """Walk powers of x until 1 reappears (small degrees only)."""
    n = poly_degree(f)
    limit = limit or (1 << n)
    r = poly_mod(0b10, f)
    for k in range(1, limit + 1):
        if r == 1:
            return k
        r <<= 1
        if r >> n & 1:
            r ^= f
    raise ValueError("order exceeds limit")

