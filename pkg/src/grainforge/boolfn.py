"""Boolean functions as truth tables and ANF polynomials, plus spectral and algebraic properties.

Input x = (x1, ..., xn) maps to table index sum x_i * 2^(i-1), so x1 is the
least significant bit.  ANF monomials are stored the same way: bit i-1 of
a monomial mask means X_i is a factor; mask 0 is the constant 1.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import gf2

MAX_TABLE_VARS = 24
# packed bits allowed in one annihilator elimination (about 256 MiB)
AI_MEMORY_CEILING_BITS = 1 << 31


@dataclass(frozen=True, eq=False)
class TruthTable:
    n: int
    bits: np.ndarray

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if bits.shape != (1 << self.n,):
            raise ValueError(f"table for n={self.n} needs {1 << self.n} entries, got {bits.shape}")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def weight(self) -> int:
        return int(self.bits.sum(dtype=np.int64))

    def __call__(self, x: int) -> int:
        return int(self.bits[x])

    def __eq__(self, other):
        return isinstance(other, TruthTable) and self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.n, self.bits.tobytes()))

    def complement(self) -> "TruthTable":
        return TruthTable(self.n, self.bits ^ 1)


@dataclass(frozen=True)
class AnfPoly:
    n: int
    monomials: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "monomials", frozenset(self.monomials))
        limit = 1 << self.n
        for m in self.monomials:
            if not 0 <= m < limit:
                raise ValueError(f"monomial {m:#x} uses variables beyond X{self.n}")

    @classmethod
    def from_terms(cls, n: int, terms) -> "AnfPoly":
        """Build from iterables of 1-based variable indices; repeated terms cancel."""
        acc: set[int] = set()
        for term in terms:
            mask = 0
            for i in term:
                mask |= 1 << (i - 1)
            acc ^= {mask}
        return cls(n, frozenset(acc))

    def __xor__(self, other: "AnfPoly") -> "AnfPoly":
        return AnfPoly(max(self.n, other.n), self.monomials ^ other.monomials)

    def shifted(self, offset: int, n: int) -> "AnfPoly":
        """Rename X_i to X_{i+offset} inside an n-variable space."""
        return AnfPoly(n, frozenset(m << offset for m in self.monomials))

    def evaluate(self, x: int) -> int:
        return sum(1 for m in self.monomials if x & m == m) & 1

    def terms(self) -> list[tuple[int, ...]]:
        out = []
        for m in self.monomials:
            out.append(tuple(i + 1 for i in range(self.n) if m >> i & 1))
        return sorted(out, key=lambda t: (len(t), t))


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    n: int
    values: np.ndarray

    def __getitem__(self, alpha: int) -> int:
        return int(self.values[alpha])


@dataclass(frozen=True)
class SpectralProfile:
    nl: int
    lb: Fraction
    resiliency: int


@dataclass(frozen=True)
class AIResult:
    """ai is exact when a witness exists; otherwise ai = max_deg + 1 is only a lower bound."""

    ai: int
    exact: bool
    witness: AnfPoly | None = None
    annihilates_complement: bool = False

    def __str__(self):
        return str(self.ai) if self.exact else f">{self.ai - 1}"


def _check_vars(n: int):
    if not 0 <= n <= MAX_TABLE_VARS:
        raise ValueError(f"full-table operations support 0..{MAX_TABLE_VARS} variables, got {n}")


def mobius_inplace(a: np.ndarray, n: int) -> np.ndarray:
    """Binary Möbius transform of a uint8 array of length 2^n (its own inverse)."""
    for i in range(n):
        view = a.reshape(-1, 2, 1 << i)
        view[:, 1, :] ^= view[:, 0, :]
    return a


def fwht_inplace(a: np.ndarray, n: int) -> np.ndarray:
    """Unnormalized Walsh-Hadamard butterfly over an integer array of length 2^n."""
    for i in range(n):
        view = a.reshape(-1, 2, 1 << i)
        lo = view[:, 0, :].copy()
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] = lo - view[:, 1, :]
    return a


def popcounts(n: int) -> np.ndarray:
    w = np.zeros(1 << n, dtype=np.int8)
    for i in range(n):
        w.reshape(-1, 2, 1 << i)[:, 1, :] += 1
    return w


def anf_to_tt(anf: AnfPoly) -> TruthTable:
    _check_vars(anf.n)
    coeffs = np.zeros(1 << anf.n, dtype=np.uint8)
    if anf.monomials:
        coeffs[np.fromiter(anf.monomials, dtype=np.int64)] = 1
    return TruthTable(anf.n, mobius_inplace(coeffs, anf.n))


def tt_to_anf(tt: TruthTable) -> AnfPoly:
    coeffs = mobius_inplace(tt.bits.copy(), tt.n)
    return AnfPoly(tt.n, frozenset(int(m) for m in np.flatnonzero(coeffs)))


def walsh_spectrum(tt: TruthTable) -> WalshSpectrum:
    _check_vars(tt.n)
    values = 1 - 2 * tt.bits.astype(np.int32)
    return WalshSpectrum(tt.n, fwht_inplace(values, tt.n))


def spectral_profile(tt: TruthTable, spectrum: WalshSpectrum | None = None) -> SpectralProfile:
    spectrum = spectrum or walsh_spectrum(tt)
    peak = int(np.abs(spectrum.values).max())
    nl = (1 << (tt.n - 1)) - peak // 2 if tt.n else 0
    lb = Fraction(peak, 1 << tt.n)
    return SpectralProfile(nl, lb, resiliency_order(spectrum))


def resiliency_order(spectrum: WalshSpectrum) -> int:
    """Largest m with W(alpha) = 0 for every wt(alpha) <= m; -1 when unbalanced."""
    if spectrum.values[0] != 0:
        return -1
    weights = popcounts(spectrum.n)
    nonzero = weights[spectrum.values != 0]
    return int(nonzero.min()) - 1


def degree(anf: AnfPoly) -> int:
    return max((m.bit_count() for m in anf.monomials), default=0)


def correlation_at(tt: TruthTable, alpha: int) -> Fraction:
    """W_f(alpha) / 2^n computed by direct summation (one coefficient only)."""
    if not 0 <= alpha < 1 << tt.n:
        raise ValueError("mask out of range")
    idx = np.arange(1 << tt.n, dtype=np.int64)
    parity = np.zeros(1 << tt.n, dtype=np.uint8)
    masked = idx & alpha
    for i in range(tt.n):
        parity ^= ((masked >> i) & 1).astype(np.uint8)
    signs = 1 - 2 * (tt.bits ^ parity).astype(np.int64)
    return Fraction(int(signs.sum()), 1 << tt.n)


def direct_sum(f: TruthTable, g: TruthTable) -> TruthTable:
    """f(X) xor g(Y) with X = first f.n variables (low index bits), Y the next g.n."""
    _check_vars(f.n + g.n)
    bits = np.bitwise_xor.outer(g.bits, f.bits).reshape(-1)
    return TruthTable(f.n + g.n, bits)


def from_function(n: int, fn) -> TruthTable:
    """Tabulate a Python predicate taking the index-packed input."""
    return TruthTable(n, np.fromiter((fn(x) & 1 for x in range(1 << n)), dtype=np.uint8, count=1 << n))


def variable_columns(n: int) -> list[np.ndarray]:
    """0/1 arrays of each variable over all 2^n inputs."""
    idx = np.arange(1 << n, dtype=np.int64)
    return [((idx >> i) & 1).astype(np.uint8) for i in range(n)]


# ------------------------------------------------------------- algebraic immunity

def monomials_up_to(n: int, d: int) -> list[int]:
    out = []
    for k in range(d + 1):
        for combo in combinations(range(n), k):
            out.append(sum(1 << i for i in combo))
    return out


def _evaluation_rows(points: np.ndarray, monos: list[int]) -> np.ndarray:
    """0/1 matrix M[x, j] = 1 iff monomial j divides point x."""
    pts = points.astype(np.int64)[:, None]
    ms = np.asarray(monos, dtype=np.int64)[None, :]
    return ((pts & ms) == ms).astype(np.uint8)


def find_annihilator(support: np.ndarray, n: int, d: int, rng_seed: int = 0) -> AnfPoly | None:
    """A nonzero polynomial of degree <= d vanishing on every point of `support`, or None.

    Rows are added in batches: the kernel of a row subset contains the true
    kernel, and the candidate space is then cut down exactly by evaluating
    each basis polynomial on the whole support.
    """
    monos = monomials_up_to(n, d)
    ncols = len(monos)
    if support.size == 0:
        return AnfPoly(n, frozenset({0}))
    order = np.random.default_rng(rng_seed).permutation(support.size)
    points = support[order]
    take = min(points.size, ncols + 64)
    while True:
        if take * ncols > AI_MEMORY_CEILING_BITS:
            raise MemoryError(f"annihilator matrix {take}x{ncols} exceeds the memory ceiling")
        rows = gf2.pack_rows(_evaluation_rows(points[:take], monos))
        basis = gf2.nullspace(rows, ncols)
        if basis.shape[0] == 0:
            return None
        if take == points.size:
            return _poly_from_coeffs(n, monos, basis[0])
        if basis.shape[0] <= 64 or take * 2 >= points.size:
            break
        take = min(points.size, take * 2)
    # exact restriction of the candidate space
    values = np.empty((basis.shape[0], support.size), dtype=np.uint8)
    for k, vec in enumerate(basis):
        tt = anf_to_tt(_poly_from_coeffs(n, monos, vec))
        values[k] = tt.bits[support]
    relations = gf2.row_relations(values)
    if relations.shape[0] == 0:
        return None
    combo = (relations[0].astype(np.int64) @ basis.astype(np.int64)) & 1
    return _poly_from_coeffs(n, monos, combo)


def _poly_from_coeffs(n: int, monos: list[int], coeffs) -> AnfPoly:
    return AnfPoly(n, frozenset(m for m, c in zip(monos, coeffs) if c))


def algebraic_immunity(tt: TruthTable, max_deg: int | None = None) -> AIResult:
    _check_vars(tt.n)
    cap = math.ceil(tt.n / 2) if max_deg is None else max_deg
    ones = np.flatnonzero(tt.bits)
    zeros = np.flatnonzero(tt.bits ^ 1)
    for d in range(cap + 1):
        for complement, support in ((False, ones), (True, zeros)):
            g = find_annihilator(support, tt.n, d)
            if g is not None:
                return AIResult(d, True, g, complement)
    return AIResult(cap + 1, False)


def is_annihilator(g: AnfPoly, tt: TruthTable, complement: bool = False) -> bool:
    target = tt.bits ^ 1 if complement else tt.bits
    gb = anf_to_tt(AnfPoly(tt.n, g.monomials)).bits
    return bool(g.monomials) and not np.any(gb & target)


# ------------------------------------------------------------------ ANF text

_VAR = re.compile(r"^x(\d+)$")


def parse_anf(text: str, n: int | None = None) -> AnfPoly:
    """Parse `x1*x2 + x3 + 1` style text (case-insensitive, whitespace ignored)."""
    cleaned = re.sub(r"\s+", "", text.lower())
    if not cleaned:
        raise ValueError("empty ANF")
    terms = []
    top = 0
    for raw in cleaned.split("+"):
        if raw == "":
            raise ValueError(f"malformed ANF: {text!r}")
        if raw == "1":
            terms.append(())
            continue
        if raw == "0":
            continue
        idx = []
        for factor in raw.split("*"):
            m = _VAR.match(factor)
            if not m or int(m.group(1)) < 1:
                raise ValueError(f"bad factor {factor!r} in ANF")
            idx.append(int(m.group(1)))
        if len(set(idx)) != len(idx):
            idx = sorted(set(idx))
        top = max(top, *idx)
        terms.append(tuple(idx))
    n = top if n is None else n
    if top > n:
        raise ValueError(f"ANF uses x{top} but only {n} variables declared")
    return AnfPoly.from_terms(n, terms)


def format_anf(anf: AnfPoly) -> str:
    if not anf.monomials:
        return "0"
    parts = []
    for term in anf.terms():
        parts.append("*".join(f"x{i}" for i in term) if term else "1")
    return " + ".join(parts)


def log2_text(value: Fraction) -> str:
    """Render a positive value as 2^e, exact when it is a power of two."""
    if value == 0:
        return "0"
    num, den = abs(value.numerator), value.denominator
    sign = "-" if value < 0 else ""
    if num & (num - 1) == 0 and den & (den - 1) == 0:
        return f"{sign}2^{num.bit_length() - den.bit_length()}"
    return f"{sign}2^{math.log2(num) - math.log2(den):.3f}"
