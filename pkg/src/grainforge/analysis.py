"""Linear approximations of keystream-bit sums and their bias.

For a set T of offsets and a mask gamma over the LFSR window, the bit

    b = <gamma, lambda_{t..t+r-1}> xor z_{t+i} for i in T

is rewritten in terms of the window bits lambda_{t..t+r-1}, eta_{t..t+s-1}
by substituting the NFSR feedback relation. Three routes compute its bias:

* exact_model_bias enumerates the rewritten expression over all window
  assignments (window bits independent and uniform);
* convolution_bias combines the Walsh spectra of the copies of h and g;
* empirical_bias clocks the actual cipher from random states.

Index-set sums such as T+Q1 follow XOR semantics: a position hit an even
number of times cancels.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .boolfn import TruthTable, log2_text, spectral_profile, walsh_spectrum
from .engine import GrainParams
from .funlib import FunctionBundle, mm_lb

MAX_WINDOW_BITS = 30
MAX_COMPACT_BITS = 24
CHUNK_BITS = 20
MIN_SAMPLES = 1000


class WindowTooLarge(ValueError):
    pass


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("GRAINFORGE_THREADS", "")))
    except ValueError:
        return min(8, os.cpu_count() or 1)


def _check_T(T) -> tuple[int, ...]:
    T = tuple(sorted(set(int(i) for i in T)))
    if not T:
        raise ValueError("T must be non-empty")
    if T[0] < 0:
        raise ValueError("T holds non-negative offsets")
    return T


def _sumset(a, b) -> set[int]:
    return {x + y for x in a for y in b}


def _xor_sumset(a, b) -> frozenset[int]:
    out: set[int] = set()
    for x in a:
        for y in b:
            out ^= {x + y}
    return frozenset(out)


def _s1_prime(p: GrainParams, T) -> frozenset[int]:
    return frozenset(set(T) ^ (set(p.S1) | {p.kappa1}))


def window_bounds(p: GrainParams, T) -> tuple[int, int]:
    T = _check_T(T)
    s1p = _s1_prime(p, T)
    r = 1 + max(max(_sumset(p.Q1, T), default=0), max(p.P1, default=0), max(_sumset(p.Q0, T), default=0))
    s = 1 + max(max(_sumset(p.P1, p.S0), default=0), max(_sumset(p.P1, s1p), default=0),
                max(_sumset(p.P0, T), default=0))
    return r, s


def mask_of(positions) -> int:
    m = 0
    for i in positions:
        m |= 1 << i
    return m


def support(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class ApproxSpec:
    T: tuple[int, ...]
    gamma: int
    instance: GrainParams

    def __post_init__(self):
        object.__setattr__(self, "T", _check_T(self.T))
        r, _ = window_bounds(self.instance, self.T)
        if self.gamma < 0 or self.gamma >> r:
            raise ValueError(f"gamma must fit in the {r}-bit LFSR window")

    @property
    def t_card(self) -> int:
        return len(self.T)


@dataclass(frozen=True)
class IndexSets:
    B: frozenset[int]
    C: frozenset[int]
    D: frozenset[int]
    D_parts: dict
    E: frozenset[int]
    E_parts: dict
    F: frozenset[int]
    F_parts: dict
    S1_prime: frozenset[int]
    r: int
    s: int
    gamma_prime: int
    delta_mask: int


def index_sets(p: GrainParams, T, gamma: int) -> IndexSets:
    spec = ApproxSpec(T, gamma, p)
    T = spec.T
    r, s = window_bounds(p, T)
    s1p = _s1_prime(p, T)
    B = _xor_sumset(T, p.Q1) ^ frozenset(p.P1) ^ support(gamma)
    C = _xor_sumset(p.P1, s1p)
    D_parts = {i: frozenset(q + i for q in p.Q0) for i in T}
    E_parts = {i: frozenset(q + i for q in p.P0) for i in T}
    F_parts = {j: frozenset(q + j for q in p.S0) for j in p.P1}
    union = lambda parts: frozenset().union(*parts.values())
    return IndexSets(B, C, union(D_parts), D_parts, union(E_parts), E_parts, union(F_parts), F_parts,
                     s1p, r, s, mask_of(B), mask_of(C))


def necessary_condition(p: GrainParams, T, gamma: int) -> bool:
    """False means the bias is exactly zero under the window model."""
    ix = index_sets(p, T, gamma)
    return ix.B <= ix.D and ix.C <= (ix.E | ix.F)


# ------------------------------------------------------------------- epsilons

def linear_bias(f: FunctionBundle) -> Fraction:
    """Exact linear bias; bent families beyond table range use the closed form."""
    if f.n <= 24:
        return spectral_profile(f.table()).lb
    if f.family in ("g2k", "h2k"):
        return mm_lb(f.n // 2)
    raise ValueError(f"{f.name}: {f.n} variables is beyond full-table range")


@dataclass(frozen=True)
class EpsilonBounds:
    t_card: int
    eps_h: Fraction
    eps_g: Fraction | None
    note: str = ""

    def lines(self) -> list[str]:
        out = [f"t: {self.t_card}", f"eps_h: {log2_text(self.eps_h)}"]
        out.append(f"eps_g: {log2_text(self.eps_g)}" if self.eps_g is not None else f"eps_g: inapplicable ({self.note})")
        return out


def epsilon_bounds(p: GrainParams, t_card: int) -> EpsilonBounds:
    if t_card < 1:
        raise ValueError("t_card must be at least 1")
    eps_h = linear_bias(p.h) ** t_card
    if len(_sumset(p.S0, p.P1)) != len(p.S0) * len(p.P1):
        return EpsilonBounds(t_card, eps_h, None, "S0+P1 is not a cartesian sum")
    return EpsilonBounds(t_card, eps_h, linear_bias(p.g) ** len(p.P1))


# ------------------------------------------------------- exact window model

def _h_input_positions(p: GrainParams, i: int):
    """For the copy of h at offset i: per input, ('L' or 'N', window position)."""
    w = p._wiring
    pos: list = [None] * p.h.n
    for k, idx in w["hL"]:
        pos[k] = ("L", idx + i)
    for k, idx in w["hN"]:
        pos[k] = ("N", idx + i)
    return pos


def _window_size_check(r: int, s: int, limit: int = MAX_WINDOW_BITS):
    if r + s > limit:
        raise WindowTooLarge(f"window has r+s = {r + s} bits; limit is {limit}")


def exact_model_bias(p: GrainParams, T, gamma: int) -> Fraction:
    """Average of (-1)^b over all 2^(r+s) window assignments, evaluated term by term."""
    spec = ApproxSpec(T, gamma, p)
    T = spec.T
    r, s = window_bounds(p, T)
    _window_size_check(r, s)
    s1p = sorted(_s1_prime(p, T))
    g_tab = p.g.table().bits
    h_tab = p.h.table().bits
    # window index: bits 0..r-1 are lambda, r..r+s-1 are eta
    lam = lambda k: k
    eta = lambda k: r + k
    lin = [lam(k) for k in range(r) if gamma >> k & 1]
    lin += [lam(i + j) for i in T for j in p.Q1]
    lin += [lam(j) for j in p.P1]
    lin += [eta(i + j) for j in p.P1 for i in s1p]
    h_copies = []
    for i in T:
        h_copies.append([lam(k) if reg == "L" else eta(k) for reg, k in _h_input_positions(p, i)])
    g_copies = [[eta(q + j) for q in p.S0] for j in p.P1]
    total_bits = r + s

    def run(start: int, count: int) -> int:
        idx = np.arange(start, start + count, dtype=np.int64)
        cols: dict[int, np.ndarray] = {}

        def bit(k):
            if k not in cols:
                cols[k] = ((idx >> k) & 1).astype(np.uint8)
            return cols[k]

        b = np.zeros(count, dtype=np.uint8)
        for k in lin:
            b ^= bit(k)
        for positions, tab in [(c, h_tab) for c in h_copies] + [(c, g_tab) for c in g_copies]:
            x = np.zeros(count, dtype=np.int32)
            for slot, k in enumerate(positions):
                x |= bit(k).astype(np.int32) << slot
            b ^= tab[x]
        ones = int(b.sum(dtype=np.int64))
        return count - 2 * ones

    chunk = 1 << min(CHUNK_BITS, total_bits)
    starts = range(0, 1 << total_bits, chunk)
    with ThreadPoolExecutor(thread_count()) as pool:
        acc = sum(pool.map(lambda st: run(st, chunk), starts))
    return Fraction(acc, 1 << total_bits)


# ------------------------------------------------------ convolution route

def walsh_values(tt: TruthTable) -> np.ndarray:
    return walsh_spectrum(tt).values.astype(np.int64)


def xor_convolve(dense: np.ndarray, masks: np.ndarray, values: np.ndarray) -> np.ndarray:
    """out[x] = sum_k values[k] * dense[x xor masks[k]], exact integers."""
    idx = np.arange(dense.size, dtype=np.int64)
    out = np.zeros_like(dense)
    for m, v in zip(masks.tolist(), values.tolist()):
        if v:
            out += v * dense[idx ^ m]
    return out


def _compact_spectrum(fn_n: int, walsh: np.ndarray, coords: list[int]):
    """Map each input mask of a copy to a mask over the compact coordinates."""
    masks = np.zeros(1 << fn_n, dtype=np.int64)
    for k, c in enumerate(coords):
        sel = (np.arange(1 << fn_n) >> k) & 1
        masks |= sel.astype(np.int64) << c
    return masks, walsh


def h_copies_spectrum(p: GrainParams, ix: IndexSets, T) -> tuple[np.ndarray, dict, dict, int]:
    """Walsh-scaled spectrum of the XOR of the h copies over compact (D, E) coordinates.

    The returned array, divided by 2^(n*#T), is corr of that XOR at each compact mask.
    """
    d_pos = sorted(ix.D)
    e_pos = sorted(ix.E)
    dim = len(d_pos) + len(e_pos)
    if dim > MAX_COMPACT_BITS:
        raise WindowTooLarge(f"{dim} distinct h-input positions; limit is {MAX_COMPACT_BITS}")
    if p.h.n * len(T) > 62:
        raise WindowTooLarge("products of h spectra would overflow 64-bit integers")
    l_index = {k: c for c, k in enumerate(d_pos)}
    n_index = {k: len(d_pos) + c for c, k in enumerate(e_pos)}
    wh = walsh_values(p.h.table())
    acc = np.zeros(1 << dim, dtype=np.int64)
    acc[0] = 1
    for i in T:
        coords = [l_index[k] if reg == "L" else n_index[k] for reg, k in _h_input_positions(p, i)]
        masks, vals = _compact_spectrum(p.h.n, wh, coords)
        acc = xor_convolve(acc, masks, vals)
    return acc, l_index, n_index, p.h.n * len(T)


def g_copies_correlation(p: GrainParams, ix: IndexSets):
    """corr of the XOR of the g copies as a function of an eta-window mask."""
    wg = walsh_values(p.g.table())
    n0 = p.g.n
    cartesian = all(len(a & b) == 0 for a, b in _pairs(list(ix.F_parts.values())))
    if cartesian:
        def corr(beta: int) -> Fraction:
            if support(beta) - ix.F:
                return Fraction(0)
            out = Fraction(1)
            for j in p.P1:
                m = 0
                for slot, q in enumerate(p.S0):
                    m |= (beta >> (q + j) & 1) << slot
                out *= Fraction(int(wg[m]), 1 << n0)
            return out
        return corr, True
    f_pos = sorted(ix.F)
    f_index = {k: c for c, k in enumerate(f_pos)}
    acc = np.zeros(1 << len(f_pos), dtype=object)
    acc[:] = 0
    acc[0] = 1
    for j in p.P1:
        coords = [f_index[q + j] for q in p.S0]
        masks, vals = _compact_spectrum(n0, wg, coords)
        idx = np.arange(acc.size)
        nxt = np.zeros_like(acc)
        for m, v in zip(masks.tolist(), vals.tolist()):
            if v:
                nxt = nxt + v * acc[idx ^ m]
        acc = nxt
    scale = 1 << (n0 * len(p.P1))

    def corr(beta: int) -> Fraction:
        if support(beta) - ix.F:
            return Fraction(0)
        c = 0
        for k, c_idx in f_index.items():
            c |= (beta >> k & 1) << c_idx
        return Fraction(int(acc[c]), scale)
    return corr, False


def _pairs(items):
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            yield items[a], items[b]


def convolution_bias(p: GrainParams, T, gamma: int) -> Fraction:
    """sum over beta in the eta window of corr_hcopies(gamma', beta) * corr_gcopies(beta xor delta)."""
    spec = ApproxSpec(T, gamma, p)
    T = spec.T
    ix = index_sets(p, T, gamma)
    _window_size_check(ix.r, ix.s)
    if not ix.B <= ix.D:
        return Fraction(0)
    acc, l_index, n_index, scale_bits = h_copies_spectrum(p, ix, T)
    g_corr, _ = g_copies_correlation(p, ix)
    a_compact = 0
    for k in ix.B:
        a_compact |= 1 << l_index[k]
    e_pos = sorted(ix.E)
    total = Fraction(0)
    for bits in product((0, 1), repeat=len(e_pos)):
        beta = 0
        c = a_compact
        for k, bit in zip(e_pos, bits):
            if bit:
                beta |= 1 << k
                c |= 1 << n_index[k]
        h_val = int(acc[c])
        if h_val == 0:
            continue
        g_val = g_corr(beta ^ ix.delta_mask)
        if g_val:
            total += Fraction(h_val, 1 << scale_bits) * g_val
    return total


# --------------------------------------------------------- empirical route

def empirical_bias(p: GrainParams, T, gamma: int, samples: int, seed: int) -> float:
    """Mean of (-1)^b over uniformly drawn cipher states, clocked in keystream mode."""
    spec = ApproxSpec(T, gamma, p)
    T = spec.T
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    r, s = window_bounds(p, T)
    rng = np.random.default_rng(seed)
    k1, k2 = p.kappa1, p.kappa2
    n_len = max(s, k1)
    l_len = max(r, k2, n_len - k1 + 1)
    lam = [rng.integers(0, 2, samples, dtype=np.uint8) for _ in range(k2)]
    eta = [rng.integers(0, 2, samples, dtype=np.uint8) for _ in range(k1)]
    while len(lam) < l_len:
        t = len(lam) - k2
        nb = np.zeros(samples, dtype=np.uint8)
        for a in p.A:
            nb ^= lam[t + a]
        lam.append(nb)
    g_tab = p.g.table().bits
    h_tab = p.h.table().bits

    def lookup(tab, cols):
        x = np.zeros(samples, dtype=np.int64)
        for slot, col in enumerate(cols):
            x |= col.astype(np.int64) << slot
        return tab[x]

    while len(eta) < n_len:
        t = len(eta) - k1
        nb = lam[t] ^ lookup(g_tab, [eta[t + q] for q in p.S0])
        for q in p.S1:
            nb = nb ^ eta[t + q]
        eta.append(nb)
    b = np.zeros(samples, dtype=np.uint8)
    for k in range(r):
        if gamma >> k & 1:
            b ^= lam[k]
    for i in T:
        cols = [lam[k] if reg == "L" else eta[k] for reg, k in _h_input_positions(p, i)]
        b ^= lookup(h_tab, cols)
        for q in p.Q1:
            b ^= lam[i + q]
        for q in p.P1:
            b ^= eta[i + q]
    ones = int(b.sum(dtype=np.int64))
    return (samples - 2 * ones) / samples


# ----------------------------------------------------------- correlation lemmas

def corr_table(tt: TruthTable) -> list[Fraction]:
    w = walsh_values(tt)
    return [Fraction(int(v), 1 << tt.n) for v in w]


def generalized_convolution(tables: list[TruthTable], u: int) -> Fraction:
    """corr of the XOR of the tables at u, by summing over chains u_1..u_{k-1}."""
    n = tables[0].n
    corrs = [corr_table(t) for t in tables]
    k = len(tables)
    if k == 1:
        return corrs[0][u]
    total = Fraction(0)
    for chain in product(range(1 << n), repeat=k - 1):
        us = (0,) + chain + (u,)
        term = Fraction(1)
        for i in range(k):
            c = corrs[i][us[i + 1] ^ us[i]]
            if not c:
                term = 0
                break
            term *= c
        total += term
    return total


def permute_mask(mask: int, psi) -> int:
    """Coordinate j of the result is coordinate psi[j] of mask."""
    return sum(((mask >> src) & 1) << j for j, src in enumerate(psi))


def compose_with_permutation(tt: TruthTable, psi) -> TruthTable:
    """f(x) = h(psi(x)), with psi(x)_j = x_{psi[j]}."""
    n = tt.n
    idx = np.arange(1 << n)
    y = np.zeros_like(idx)
    for j, src in enumerate(psi):
        y |= ((idx >> src) & 1) << j
    return TruthTable(n, tt.bits[y])


def pad_degenerate(tt: TruthTable, extra: int) -> TruthTable:
    """f(X, Y) = g(Y): X takes the low `extra` index bits, Y the high ones."""
    return TruthTable(tt.n + extra, np.repeat(tt.bits, 1 << extra))


@dataclass
class BiasResult:
    spec: ApproxSpec
    sets: IndexSets
    mode: str
    bias: Fraction | float
    necessary: bool
    samples: int | None = None

    def lines(self) -> list[str]:
        ix = self.sets
        fmt = lambda xs: "{" + ",".join(map(str, sorted(xs))) + "}"
        out = [
            f"instance: {self.spec.instance.name}",
            f"T: {fmt(self.spec.T)}",
            f"r: {ix.r}",
            f"s: {ix.s}",
            f"B: {fmt(ix.B)}",
            f"C: {fmt(ix.C)}",
            f"D: {fmt(ix.D)}",
            f"E: {fmt(ix.E)}",
            f"F: {fmt(ix.F)}",
            f"S1': {fmt(ix.S1_prime)}",
            f"necessary condition: {'holds' if self.necessary else 'fails'}",
            f"mode: {self.mode}",
        ]
        if self.samples is not None:
            out.append(f"samples: {self.samples}")
        if self.bias == 0 and not self.necessary:
            out.append("bias: 0 (necessary condition failed)")
        elif isinstance(self.bias, Fraction):
            sign = "-" if self.bias < 0 else ""
            out.append("bias: 0" if self.bias == 0 else f"bias: {sign}{log2_text(abs(self.bias))} ({self.bias})")
        else:
            out.append(f"bias: {self.bias:.6f}")
        return out


def analyze(p: GrainParams, T, gamma: int, mode: str = "exact", samples: int = 100000,
            seed: int = 0) -> BiasResult:
    spec = ApproxSpec(T, gamma, p)
    ix = index_sets(p, spec.T, gamma)
    nec = ix.B <= ix.D and ix.C <= (ix.E | ix.F)
    if mode in ("exact", "conv") and not nec:
        # zero by the necessary condition; no window enumeration needed
        return BiasResult(spec, ix, mode, Fraction(0), nec)
    if mode == "exact":
        bias = exact_model_bias(p, spec.T, gamma)
    elif mode == "conv":
        bias = convolution_bias(p, spec.T, gamma)
    elif mode == "empirical":
        bias = empirical_bias(p, spec.T, gamma, samples, seed)
        return BiasResult(spec, ix, mode, bias, nec, samples)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return BiasResult(spec, ix, mode, bias, nec)
