"""Slow, literal keystream oracle.

Everything here is written out independently of the grainforge package: parameter
tables, the Boolean functions (as plain Python expressions), the load/init/output
loops. Registers are Python lists indexed exactly like the cipher description, and a
step is a literal "drop index 0, append the new bit".
"""

from __future__ import annotations

from functools import reduce


def xor_all(bits):
    return reduce(lambda a, b: a ^ b, bits, 0)


# ------------------------------------------------------------- functions

def h5(x1, x2, z1, z2, z3):
    return z1 ^ z2 ^ (x1 & (z1 ^ z3)) ^ (x2 & (z2 ^ z3)) ^ (x1 & x2 & (z1 ^ z2 ^ z3))


def h7(x1, x2, x3, z1, z2, z3, z4):
    terms = [
        z1 & x1 & x2 & x3, z1 & x1 & x2, z1 & x2 & x3, z1 & x3, z1,
        z2 & x1 & x2 & x3, z2 & x1, z2 & x2 & x3, z2 & x2, z2,
        z3 & x1, z3 & x2 & x3, z4 & x1 & x2, z4 & x2, z4 & x3,
    ]
    return xor_all(terms)


def h_even(*y):
    k = len(y) // 2
    u, v = y[:k], y[k:]
    prod = 1
    for ui in u:
        prod &= ui
    return xor_all(ui & vi for ui, vi in zip(u, v)) ^ prod


def h_odd(*y):
    return h5(*y[:5]) ^ h_even(*y[5:])


def g10(u1, u2, u3, u4, u5, v1, v2, v3, v4, v5):
    return ((u1 & v1) ^ (u2 & v2) ^ (u3 & v3) ^ (u4 & v4) ^ (u5 & v5)
            ^ (u1 & u2 & u3 & u4 & v1 & v2 & v3) ^ (u1 & u2 & v4 & v5) ^ (u3 & u4 & v5))


def _prod(bits):
    out = 1
    for b in bits:
        out &= b
    return out


def g_mm(*y):
    """U.V plus the triangular tail U1 + U2U3 + U4U5U6 + ..., last block absorbing the rest."""
    k = len(y) // 2
    u, v = y[:k], y[k:]
    blocks = {12: [1, 2, 3, 6], 15: [1, 2, 3, 4, 5], 18: [1, 2, 3, 4, 8]}[k]
    tail, pos = 0, 0
    for size in blocks:
        tail ^= _prod(u[pos:pos + size])
        pos += size
    assert pos == k
    return xor_all(ui & vi for ui, vi in zip(u, v)) ^ tail


def grainv1_g(x1, x2, x3, x4, x5, x6, x7, x8, x9, x10):
    return (x1 ^ x3 ^ x4 ^ x5 ^ x6 ^ x7 ^ x8 ^ x9
            ^ (x9 & x10) ^ (x5 & x6) ^ (x1 & x2) ^ (x7 & x8 & x9) ^ (x3 & x4 & x5)
            ^ (x1 & x4 & x7 & x10) ^ (x5 & x6 & x8 & x9) ^ (x2 & x3 & x9 & x10)
            ^ (x6 & x7 & x8 & x9 & x10) ^ (x1 & x2 & x3 & x4 & x5) ^ (x3 & x4 & x5 & x6 & x7 & x8))


def grainv1_h(y1, y2, y3, y4, y5):
    return (y2 ^ y5 ^ (y1 & y4) ^ (y3 & y4) ^ (y4 & y5) ^ (y1 & y2 & y3) ^ (y1 & y3 & y4)
            ^ (y1 & y3 & y5) ^ (y2 & y3 & y5) ^ (y3 & y4 & y5))


def grain128a_g(*w):
    y, z = w[:14], w[14:]
    quad = xor_all(y[2 * i] & y[2 * i + 1] for i in range(7))
    return quad ^ _prod(z[0:4]) ^ _prod(z[4:7]) ^ _prod(z[7:10])


def grain128a_h(y1, y2, y3, y4, y5, y6, y7, y8, y9):
    return (y1 & y2) ^ (y3 & y4) ^ (y5 & y6) ^ (y7 & y8) ^ (y1 & y5 & y9)


# ------------------------------------------------------------ parameters

def _seq(start, step, count):
    return [start + step * i for i in range(count)]


def _interleave(a, b):
    """(b1,a1,b2,a2,b3, a3..a_p, b4..b_q) from the N-tap values a and L-tap values b."""
    return [b[0], a[0], b[1], a[1], b[2]] + a[2:] + b[3:]


def _s0_mm(p1, n0):
    first = [1 + i * p1 for i in range(1, n0 // 2 + 1)]
    second = [1 + i * p1 for i in range(n0, n0 // 2, -1)]
    return first + second


def _alt(c):
    return [1, 0] * c


INSTANCES = {
    "grainv1": dict(
        kappa=80, v=64, k1=80, k2=80,
        tau=[80, 67, 57, 42, 29, 18, 0],
        S0=[9, 15, 21, 28, 33, 37, 45, 52, 60, 63], S1=[0, 14, 62],
        P0=[63], P1=[1, 2, 4, 10, 31, 43, 56], Q0=[3, 25, 46, 64], Q1=[],
        g=grainv1_g, h=grainv1_h,
        core=lambda nbits, lbits: lbits + nbits,
        pad=[1] * 16, init="NSI",
    ),
    "grain128a": dict(
        kappa=128, v=96, k1=128, k2=128,
        tau=[128, 121, 90, 58, 47, 32, 0],
        S0=[3, 67, 11, 13, 17, 18, 27, 59, 40, 48, 61, 65, 68, 84, 88, 92, 93, 95, 22, 24, 25, 70, 78, 82],
        S1=[0, 26, 56, 91, 96],
        P0=[12, 95], P1=[2, 15, 36, 45, 64, 73, 89], Q0=[8, 13, 20, 42, 60, 79, 94], Q1=[93],
        g=grain128a_g, h=grain128a_h,
        # b = (Q0 bits, P0 bits); psi(b1..b9) = (b8,b1,b2,b3,b9,b4,b5,b6,b7)
        core=lambda nbits, lbits: [(lbits + nbits)[i - 1] for i in (8, 1, 2, 3, 9, 4, 5, 6, 7)],
        pad=[1] * 31 + [0], init="NSI",
    ),
    "r80": dict(
        kappa=80, v=64, k1=80, k2=80,
        tau=[80, 77, 65, 29, 19, 16, 0],
        S0=[7, 13, 19, 25, 31, 61, 55, 49, 43, 37], S1=[0, 54, 57],
        P0=[15, 16, 39], P1=[1, 2, 3, 4, 5, 6], Q0=[5, 12, 16, 19], Q1=[11],
        g=g10, h=h7, core=_interleave, pad=_alt(8), init="NSIG",
    ),
    "r128": dict(
        kappa=128, v=96, k1=128, k2=128,
        tau=[128, 108, 97, 54, 46, 32, 0],
        S0=_seq(5, 4, 12) + _seq(97, -4, 12), S1=[0, 36, 55, 71, 91],
        P0=[6, 31, 39, 50, 67], P1=[1, 2, 3, 4], Q0=[1, 12, 38, 87, 97], Q1=[5, 10, 30, 85],
        g=g_mm, h=h_even, core=lambda nbits, lbits: nbits + lbits, pad=_alt(16), init="NSIG",
    ),
    "w128": dict(
        kappa=128, v=96, k1=128, k2=112,
        tau=[112, 93, 84, 74, 43, 32, 0],
        S0=_seq(5, 4, 12) + _seq(97, -4, 12), S1=[0, 28, 54, 67, 68],
        P0=[11, 26, 30, 44, 76], P1=[1, 2, 3, 4], Q0=[11, 36, 56, 73, 76], Q1=[13, 31, 39, 77],
        g=g_mm, h=h_even, core=lambda nbits, lbits: nbits + lbits, pad=_alt(8), init="NSIG",
    ),
    "r192": dict(
        kappa=192, v=128, k1=192, k2=192,
        tau=[192, 131, 123, 118, 79, 32, 0],
        S0=_seq(6, 5, 15) + _seq(151, -5, 15), S1=[0, 22, 68, 75, 82, 89, 129],
        P0=[35, 69, 83, 88, 98, 104, 150], P1=[1, 2, 3, 4, 5],
        Q0=[1, 26, 57, 77, 83, 103, 116, 127], Q1=[60, 75, 101, 122, 123],
        g=g_mm, h=h_odd, core=_interleave, pad=_alt(32), init="NSIG",
    ),
    "w192": dict(
        kappa=192, v=128, k1=192, k2=160,
        tau=[160, 142, 76, 57, 44, 32, 0],
        S0=_seq(6, 5, 15) + _seq(151, -5, 15), S1=[0, 43, 53, 72, 75, 123, 140],
        P0=[30, 54, 58, 80, 112, 156, 160], P1=[1, 2, 3, 4, 5],
        Q0=[10, 43, 51, 91, 96, 110, 111, 127], Q1=[8, 26, 108, 113, 115],
        g=g_mm, h=h_odd, core=_interleave, pad=_alt(16), init="NSIG",
    ),
    "r256": dict(
        kappa=256, v=192, k1=256, k2=256,
        tau=[256, 203, 138, 76, 46, 32, 0],
        S0=_seq(7, 6, 18) + _seq(217, -6, 18), S1=[0, 16, 26, 83, 84, 92, 134, 160, 192],
        P0=[8, 74, 99, 131, 135, 136, 144, 189, 218], P1=[1, 2, 3, 4, 5, 6],
        Q0=[1, 11, 61, 110, 131, 133, 170, 198, 208, 218], Q1=[66, 74, 90, 97, 124, 193],
        g=g_mm, h=h_odd, core=_interleave, pad=_alt(32), init="NSIG",
    ),
    "w256": dict(
        kappa=256, v=192, k1=256, k2=208,
        tau=[208, 169, 164, 114, 35, 32, 0],
        S0=_seq(7, 6, 18) + _seq(217, -6, 18), S1=[0, 17, 38, 41, 89, 132, 146, 186, 190],
        P0=[8, 72, 75, 99, 128, 176, 188, 212, 215], P1=[1, 2, 3, 4, 5, 6],
        Q0=[22, 53, 54, 73, 82, 86, 99, 143, 148, 167], Q1=[8, 70, 118, 151, 157, 171],
        g=g_mm, h=h_odd, core=_interleave, pad=_alt(8), init="NSIG",
    ),
}


# ---------------------------------------------------------------- machine

def lfsr_taps(cfg):
    k2 = cfg["k2"]
    return [0] + [k2 - e for e in cfg["tau"] if 0 < e < k2]


def nlb(cfg, L):
    return xor_all(L[a] for a in lfsr_taps(cfg))


def nnb(cfg, N):
    return xor_all(N[i] for i in cfg["S1"]) ^ cfg["g"](*[N[i] for i in cfg["S0"]])


def ob(cfg, N, L):
    lin = xor_all(N[i] for i in cfg["P1"]) ^ xor_all(L[i] for i in cfg["Q1"])
    core = cfg["core"]([N[i] for i in cfg["P0"]], [L[i] for i in cfg["Q0"]])
    return lin ^ cfg["h"](*core)


def load(cfg, K, IV):
    bits = list(K) + list(IV) + list(cfg["pad"])
    assert len(bits) == cfg["k1"] + cfg["k2"]
    return bits[:cfg["k1"]], bits[cfg["k1"]:]


def next_state(cfg, N, L, mode):
    o = ob(cfg, N, L)
    n_bit = nnb(cfg, N) ^ L[0]
    l_bit = nlb(cfg, L)
    if mode == "NSI":
        n_bit ^= o
        l_bit ^= o
    elif mode == "NSIG":
        n_bit ^= o
        l_bit ^= n_bit
    return N[1:] + [n_bit], L[1:] + [l_bit]


def keystream(name, K, IV, nbits):
    cfg = INSTANCES[name]
    N, L = load(cfg, K, IV)
    for _ in range(2 * max(cfg["k1"], cfg["k2"])):
        N, L = next_state(cfg, N, L, cfg["init"])
    out = []
    for _ in range(nbits):
        out.append(ob(cfg, N, L))
        N, L = next_state(cfg, N, L, "NS")
    return out
