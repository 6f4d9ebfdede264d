"""Named Boolean functions: ANF, hand-built gate circuit and the published property record.

Paired families use variable order U1..Uk, V1..Vk.  The h_{5+2k} family
uses X1, X2, Z1, Z2, Z3 followed by U1..Uk, V1..Vk.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .boolfn import AnfPoly, TruthTable, anf_to_tt

NOT, XOR, AND = "NOT", "XOR", "AND"
CONST0, CONST1 = -1, -2


@dataclass(frozen=True)
class Circuit:
    """Gates are (op, a, b) with wires 0..n-1 the inputs and n+j the output of gate j."""

    n: int
    gates: tuple[tuple[str, int, int], ...]
    output: int

    def __post_init__(self):
        for j, (op, a, b) in enumerate(self.gates):
            limit = self.n + j
            for w in (a,) if op == NOT else (a, b):
                if not (w in (CONST0, CONST1) or 0 <= w < limit):
                    raise ValueError(f"gate {j} reads undefined wire {w}")
        if not (self.output in (CONST0, CONST1) or 0 <= self.output < self.n + len(self.gates)):
            raise ValueError("output wire undefined")


def gate_count(c: Circuit) -> tuple[int, int, int]:
    ops = [g[0] for g in c.gates]
    return ops.count(NOT), ops.count(XOR), ops.count(AND)


def eval_circuit(c: Circuit, x):
    """Evaluate on a bit sequence; entries may be ints or numpy arrays (bitsliced)."""
    if len(x) != c.n:
        raise ValueError(f"circuit takes {c.n} inputs, got {len(x)}")
    wires = list(x)
    def read(w):
        if w == CONST0:
            return 0
        if w == CONST1:
            return 1
        return wires[w]
    for op, a, b in c.gates:
        if op == NOT:
            wires.append(1 ^ read(a))
        elif op == XOR:
            wires.append(read(a) ^ read(b))
        else:
            wires.append(read(a) & read(b))
    return read(c.output)


def circuit_table(c: Circuit) -> TruthTable:
    idx = np.arange(1 << c.n, dtype=np.int64)
    cols = [((idx >> i) & 1).astype(np.uint8) for i in range(c.n)]
    out = eval_circuit(c, cols)
    if isinstance(out, int):
        out = np.full(1 << c.n, out, dtype=np.uint8)
    return TruthTable(c.n, out)


class CircuitBuilder:
    def __init__(self, n: int):
        self.n = n
        self.gates: list[tuple[str, int, int]] = []

    @property
    def x(self) -> list[int]:
        return list(range(self.n))

    def _add(self, op, a, b=-1):
        self.gates.append((op, a, b))
        return self.n + len(self.gates) - 1

    def not_(self, a):
        return self._add(NOT, a)

    def xor(self, *ws):
        acc = ws[0]
        for w in ws[1:]:
            acc = self._add(XOR, acc, w)
        return acc

    def and_(self, *ws):
        acc = ws[0]
        for w in ws[1:]:
            acc = self._add(AND, acc, w)
        return acc

    def build(self, output: int) -> Circuit:
        return Circuit(self.n, tuple(self.gates), output)


@dataclass(frozen=True)
class Claimed:
    """Published values; bounds are strings such as '>=4' or '<=4'."""

    degree: int | None = None
    resiliency: int | None = None
    nl: int | None = None
    lb_log2: str | None = None
    ai: str | None = None
    gates: tuple[int, int, int] | None = None
    source: str = ""


@dataclass(frozen=True)
class FunctionBundle:
    name: str
    n: int
    anf: AnfPoly
    circuit: Circuit
    claimed: Claimed = field(default_factory=Claimed)
    family: str = "custom"
    # for Maiorana-McFarland members: ANF of the U-only part, on k variables
    mm_part: AnfPoly | None = None

    def table(self) -> TruthTable:
        return anf_to_tt(self.anf)

    def compile(self):
        """Fast evaluator on an index-packed input (bit i-1 holds X_i)."""
        monos = tuple(sorted(self.anf.monomials))
        def evaluate(x: int) -> int:
            v = 0
            for m in monos:
                if x & m == m:
                    v ^= 1
            return v
        return evaluate


# ---------------------------------------------------------------- named ANFs

def _poly(n, terms):
    return AnfPoly.from_terms(n, terms)


def h5_anf() -> AnfPoly:
    # X1,X2,Z1,Z2,Z3 -> 1..5
    X1, X2, Z1, Z2, Z3 = 1, 2, 3, 4, 5
    terms = [(Z1,), (Z2,), (X1, Z1), (X1, Z3), (X2, Z2), (X2, Z3),
             (X1, X2, Z1), (X1, X2, Z2), (X1, X2, Z3)]
    return _poly(5, terms)


def _h5_circuit(b: CircuitBuilder, X1, X2, Z1, Z2, Z3):
    a = b.xor(Z1, Z3)
    c = b.xor(Z2, Z3)
    e = b.xor(a, Z2)
    return b.xor(Z1, Z2, b.and_(X1, a), b.and_(X2, c), b.and_(b.and_(X1, X2), e))


def h7_anf() -> AnfPoly:
    X1, X2, X3, Z1, Z2, Z3, Z4 = range(1, 8)
    terms = [(Z1, X1, X2, X3), (Z1, X1, X2), (Z1, X2, X3), (Z1, X3), (Z1,),
             (Z2, X1, X2, X3), (Z2, X1), (Z2, X2, X3), (Z2, X2), (Z2,),
             (Z3, X1), (Z3, X2, X3), (Z4, X1, X2), (Z4, X2), (Z4, X3)]
    return _poly(7, terms)


def _h7_circuit():
    b = CircuitBuilder(7)
    X1, X2, X3, Z1, Z2, Z3, Z4 = b.x
    t1 = b.not_(X1)
    t2 = b.and_(X1, X2)
    t3 = b.and_(X2, X3)
    t4 = b.and_(X2, t1)
    t5 = b.and_(t3, t1)
    out = b.xor(
        b.and_(Z4, b.xor(X3, t4)),
        b.and_(Z3, b.xor(X1, t3)),
        b.and_(Z2, b.xor(t1, X2, t5)),
        b.and_(Z1, b.not_(b.xor(X3, t5, t2))),
    )
    return b.build(out)


def h2k_anf(k: int) -> AnfPoly:
    terms = [(i, k + i) for i in range(1, k + 1)]
    terms.append(tuple(range(1, k + 1)))
    return _poly(2 * k, terms)


def _h2k_circuit(b: CircuitBuilder, U, V):
    """sum U_i V_i + U_1..U_k as U_k(V_k + U_1..U_{k-1}) plus the other pairs."""
    k = len(U)
    if k == 1:
        return b.and_(U[0], b.not_(V[0]))
    prefix = b.and_(*U[:-1])
    last = b.and_(U[-1], b.xor(V[-1], prefix))
    pairs = [b.and_(U[i], V[i]) for i in range(k - 1)]
    return b.xor(*pairs, last)


def g10_anf() -> AnfPoly:
    U = [1, 2, 3, 4, 5]
    V = [6, 7, 8, 9, 10]
    u = lambda i: U[i - 1]
    v = lambda i: V[i - 1]
    terms = [(u(i), v(i)) for i in range(1, 6)]
    terms += [(u(1), u(2), u(3), u(4), v(1), v(2), v(3)), (u(1), u(2), v(4), v(5)), (u(3), u(4), v(5))]
    return _poly(10, terms)


def _g10_circuit():
    b = CircuitBuilder(10)
    U1, U2, U3, U4, U5, V1, V2, V3, V4, V5 = b.x
    uv1 = b.and_(U1, V1)
    uv2 = b.and_(U2, V2)
    uv3 = b.and_(U3, V3)
    big = b.and_(uv2, uv3, U4)
    first = b.and_(uv1, b.not_(big))
    fourth = b.and_(V4, b.xor(U4, b.and_(U1, U2, V5)))
    fifth = b.and_(V5, b.xor(U5, b.and_(U3, U4)))
    return b.build(b.xor(first, uv2, uv3, fourth, fifth))


def f10_anf() -> AnfPoly:
    u = lambda i: i
    v = lambda i: 5 + i
    terms = [(u(i), v(i)) for i in range(1, 6)]
    terms += [(u(1), u(2), u(3), u(4), v(1), v(2), v(3), v(4)), (u(1), u(2), v(4), v(5))]
    return _poly(10, terms)


def _f10_circuit():
    b = CircuitBuilder(10)
    U1, U2, U3, U4, U5, V1, V2, V3, V4, V5 = b.x
    uv1 = b.and_(U1, V1)
    uv2 = b.and_(U2, V2)
    uv3 = b.and_(U3, V3)
    uv4 = b.and_(U4, V4)
    u12 = b.and_(U1, U2)
    big = b.and_(uv1, uv2, uv3, uv4)
    return b.build(b.xor(uv1, uv2, uv3, b.and_(V4, b.xor(U4, b.and_(u12, V5))), b.and_(U5, V5), big))


def triangular_shape(k: int) -> tuple[int, int, list[tuple[int, ...]]]:
    """(k1, k2, monomials) of E_k: degrees 1..k1-1 on consecutive variables, the rest in one monomial."""
    if k < 2:
        raise ValueError("triangular functions need k >= 2")
    k1 = 1
    while (k1 + 1) * (k1 + 2) // 2 <= k:
        k1 += 1
    k2 = k1 * (k1 + 1) // 2
    monos = []
    start = 1
    for d in range(1, k1):
        monos.append(tuple(range(start, start + d)))
        start += d
    monos.append(tuple(range(start, k + 1)))
    return k1, k2, monos


def triangular_anf(k: int) -> AnfPoly:
    return _poly(k, triangular_shape(k)[2])


def _triangular_circuit(k: int) -> Circuit:
    b = CircuitBuilder(k)
    _, _, monos = triangular_shape(k)
    parts = [b.and_(*[m - 1 for m in mono]) for mono in monos]
    return b.build(b.xor(*parts))


def g2k_anf(k: int) -> AnfPoly:
    pairs = [(i, k + i) for i in range(1, k + 1)]
    return _poly(2 * k, pairs + triangular_shape(k)[2])


def _g2k_circuit(k: int) -> Circuit:
    """Each E_k monomial U_s..U_e merges with U_s V_s as U_s(V_s + U_{s+1}..U_e)."""
    b = CircuitBuilder(2 * k)
    U, V = b.x[:k], b.x[k:]
    _, _, monos = triangular_shape(k)
    parts = []
    heads = set()
    for mono in monos:
        s = mono[0] - 1
        heads.add(s)
        if len(mono) == 1:
            parts.append(b.and_(U[s], b.not_(V[s])))
        else:
            rest = b.and_(*[U[i - 1] for i in mono[1:]])
            parts.append(b.and_(U[s], b.xor(V[s], rest)))
    for i in range(k):
        if i not in heads:
            parts.append(b.and_(U[i], V[i]))
    return b.build(b.xor(*parts))


def h5p2k_anf(k: int) -> AnfPoly:
    n = 5 + 2 * k
    return AnfPoly(n, h5_anf().monomials) ^ h2k_anf(k).shifted(5, n)


def _h5p2k_circuit(k: int) -> Circuit:
    b = CircuitBuilder(5 + 2 * k)
    w = b.x
    left = _h5_circuit(b, *w[:5])
    right = _h2k_circuit(b, w[5:5 + k], w[5 + k:])
    return b.build(b.xor(left, right))


def grainv1_g_anf() -> AnfPoly:
    terms = [(1,), (3,), (4,), (5,), (6,), (7,), (8,), (9,), (9, 10), (5, 6), (1, 2), (7, 8, 9),
             (3, 4, 5), (1, 4, 7, 10), (5, 6, 8, 9), (2, 3, 9, 10), (6, 7, 8, 9, 10),
             (1, 2, 3, 4, 5), (3, 4, 5, 6, 7, 8)]
    return _poly(10, terms)


def _grainv1_g_circuit():
    b = CircuitBuilder(10)
    X = [None] + b.x
    inner3 = b.not_(b.xor(b.and_(X[1], X[2]), b.and_(X[6], X[7], X[8])))
    part3 = b.and_(X[3], b.not_(b.xor(b.and_(X[4], X[5], inner3), b.and_(X[2], X[9], X[10]))))
    x8x9 = b.and_(X[8], X[9])
    part6 = b.and_(X[6], b.not_(b.xor(X[5], b.and_(x8x9, b.xor(X[5], b.and_(X[7], X[10]))))))
    part7 = b.and_(X[7], b.not_(b.xor(x8x9, b.and_(X[1], X[4], X[10]))))
    part1 = b.and_(X[1], b.not_(X[2]))
    part9 = b.and_(X[9], b.not_(X[10]))
    return b.build(b.xor(part3, part6, part7, part1, part9, X[4], X[5], X[8]))


def grainv1_h_anf() -> AnfPoly:
    terms = [(2,), (5,), (1, 4), (3, 4), (4, 5), (1, 2, 3), (1, 3, 4), (1, 3, 5), (2, 3, 5), (3, 4, 5)]
    return _poly(5, terms)


def _grainv1_h_circuit():
    b = CircuitBuilder(5)
    Y = [None] + b.x
    y15 = b.xor(Y[1], Y[5])
    inner = b.xor(b.and_(Y[3], b.not_(y15)), y15)
    return b.build(b.xor(
        Y[2], Y[5],
        b.and_(Y[4], inner),
        b.and_(b.and_(Y[5], Y[3]), b.xor(Y[1], Y[2])),
        b.and_(Y[1], Y[2], Y[3]),
    ))


def grain128a_g_anf() -> AnfPoly:
    terms = [(2 * i - 1, 2 * i) for i in range(1, 8)]
    z = lambda i: 14 + i
    terms += [(z(1), z(2), z(3), z(4)), (z(5), z(6), z(7)), (z(8), z(9), z(10))]
    return _poly(24, terms)


def _grain128a_g_circuit():
    b = CircuitBuilder(24)
    Y, Z = b.x[:14], b.x[14:]
    parts = [b.and_(Y[2 * i], Y[2 * i + 1]) for i in range(7)]
    parts += [b.and_(*Z[0:4]), b.and_(*Z[4:7]), b.and_(*Z[7:10])]
    return b.build(b.xor(*parts))


def grain128a_h_anf() -> AnfPoly:
    return _poly(9, [(1, 2), (3, 4), (5, 6), (7, 8), (1, 5, 9)])


def _grain128a_h_circuit():
    b = CircuitBuilder(9)
    Y = b.x
    return b.build(b.xor(b.and_(Y[0], Y[1]), b.and_(Y[2], Y[3]), b.and_(Y[4], Y[5]),
                         b.and_(Y[6], Y[7]), b.and_(Y[0], Y[4], Y[8])))


# ------------------------------------------------------------- published values

CLAIMS = {
    "h5": Claimed(3, 1, 12, "-2", "2", (0, 7, 4), "h5 construction"),
    "h7": Claimed(4, 1, 56, "-3", "3", (2, 9, 8), "R-80 h"),
    "h10": Claimed(5, -1, 496, "-5", "3", (0, 5, 8), "R-128 h"),
    "h15": Claimed(5, 1, 2 ** 14 - 2 ** 7, "-7", "4", (0, 12, 12), "R-192 h; direct-sum gate formula 7+k XOR, 2k+2 AND"),
    "h19": Claimed(7, 1, 2 ** 18 - 2 ** 9, "-9", "4", (0, 14, 16), "R-256 h; direct-sum gate formula 7+k XOR, 2k+2 AND"),
    "g10": Claimed(7, -1, 492, "-4.678", "4", (1, 6, 10), "R-80 g"),
    "f10": Claimed(8, None, 494, None, "3", None, "alternative 10-variable g"),
    "g24": Claimed(6, -1, 2 ** 23 - 2 ** 11, "-12", ">=4", (1, 14, 17), "R-128 g"),
    "g30": Claimed(5, -1, 2 ** 29 - 2 ** 14, "-15", ">=5", (1, 19, 21), "R-192 g"),
    "g36": Claimed(8, -1, 2 ** 35 - 2 ** 17, "-18", ">=6", (1, 22, 27), "R-256 g"),
    "grainv1_g": Claimed(6, -1, 430, "-2.642", "4", (6, 12, 17), "Grain v1 g"),
    "grainv1_h": Claimed(3, 1, 12, "-2", "2", (1, 7, 6), "Grain v1 h"),
    "grain128a_g": Claimed(4, -1, 8356352, "-8.023", "<=4", (0, 9, 14), "Grain-128a g"),
    "grain128a_h": Claimed(3, -1, 240, "-4", "3", (0, 4, 6), "Grain-128a h"),
}

# published tallies for the direct sums; they differ from both the formula and the construction
PUBLISHED_DIRECT_SUM_GATES = {"h15": (0, 12, 13), "h19": (0, 14, 17)}

REGISTRY = ("h5", "h7", "h10", "h15", "h19", "g10", "f10", "g24", "g30", "g36", "e12", "e15", "e18",
            "grainv1_g", "grainv1_h", "grain128a_g", "grain128a_h")

FAMILY_MIN_K = {"h2k": 1, "h5p2k": 1, "g2k": 6, "triangular": 2}


def build_family(family: str, k: int) -> FunctionBundle:
    if family not in FAMILY_MIN_K:
        raise ValueError(f"unknown family {family!r}")
    if k < FAMILY_MIN_K[family]:
        raise ValueError(f"{family} needs k >= {FAMILY_MIN_K[family]}")
    if family == "h2k":
        b = CircuitBuilder(2 * k)
        c = b.build(_h2k_circuit(b, b.x[:k], b.x[k:]))
        nl = 2 ** (2 * k - 1) - 2 ** (k - 1)
        claim = Claimed(k if k > 1 else 2, -1, nl, f"-{k}", None, (0, k, 2 * k - 2) if k > 1 else None,
                        "h2k family")
        mm = AnfPoly(k, frozenset({(1 << k) - 1}))
        return FunctionBundle(f"h{2 * k}", 2 * k, h2k_anf(k), c, claim, "h2k", mm)
    if family == "h5p2k":
        claim = Claimed(None, 1, 2 ** (2 * k + 4) - 2 ** (k + 2), f"-{k + 2}", None, (0, 7 + k, 2 * k + 2),
                        "h5+2k family")
        return FunctionBundle(f"h{5 + 2 * k}", 5 + 2 * k, h5p2k_anf(k), _h5p2k_circuit(k), claim, "h5p2k")
    if family == "g2k":
        k1, k2, _ = triangular_shape(k)
        claim = Claimed(k + k1 - k2, -1, 2 ** (2 * k - 1) - 2 ** (k - 1), f"-{k}", f">={k1}", None,
                        "g2k family")
        return FunctionBundle(f"g{2 * k}", 2 * k, g2k_anf(k), _g2k_circuit(k), claim, "g2k", triangular_anf(k))
    k1, k2, _ = triangular_shape(k)
    claim = Claimed(k + k1 - k2, None, None, None, f">={k1}", (0, k1 - 1, k - k2 + k1 * (k1 - 1) // 2),
                    "triangular family")
    return FunctionBundle(f"e{k}", k, triangular_anf(k), _triangular_circuit(k), claim, "triangular")


def build_function(name: str | None = None, family: str | None = None, k: int | None = None) -> FunctionBundle:
    if name is None:
        return build_family(family, k)
    legacy = {
        "h5": (5, h5_anf, lambda: _standalone_h5()),
        "h7": (7, h7_anf, _h7_circuit),
        "g10": (10, g10_anf, _g10_circuit),
        "f10": (10, f10_anf, _f10_circuit),
        "grainv1_g": (10, grainv1_g_anf, _grainv1_g_circuit),
        "grainv1_h": (5, grainv1_h_anf, _grainv1_h_circuit),
        "grain128a_g": (24, grain128a_g_anf, _grain128a_g_circuit),
        "grain128a_h": (9, grain128a_h_anf, _grain128a_h_circuit),
    }
    if name in legacy:
        n, anf, circ = legacy[name]
        fam = "named-legacy" if name.startswith("grain") else "custom"
        return FunctionBundle(name, n, anf(), circ(), CLAIMS[name], fam)
    derived = {"h10": ("h2k", 5), "h15": ("h5p2k", 5), "h19": ("h5p2k", 7),
               "g24": ("g2k", 12), "g30": ("g2k", 15), "g36": ("g2k", 18),
               "e12": ("triangular", 12), "e15": ("triangular", 15), "e18": ("triangular", 18)}
    if name in derived:
        bundle = build_family(*derived[name])
        if name in CLAIMS:
            bundle = FunctionBundle(bundle.name, bundle.n, bundle.anf, bundle.circuit, CLAIMS[name],
                                    bundle.family, bundle.mm_part)
        return bundle
    raise KeyError(f"unknown function {name!r}; known: {', '.join(REGISTRY)}")


def _standalone_h5() -> Circuit:
    b = CircuitBuilder(5)
    return b.build(_h5_circuit(b, *b.x))


def custom_function(name: str, anf: AnfPoly) -> FunctionBundle:
    """Bundle for a user-supplied ANF; the circuit is a plain sum of AND-products."""
    b = CircuitBuilder(anf.n)
    parts = []
    for term in anf.terms():
        parts.append(b.and_(*[i - 1 for i in term]) if term else CONST1)
    if not parts:
        return FunctionBundle(name, anf.n, anf, b.build(CONST0))
    out = parts[0]
    for p in parts[1:]:
        out = b._add(XOR, out, p) if p != CONST1 else b.not_(out)
    if out == CONST1:
        out = CONST1
    return FunctionBundle(name, anf.n, anf, b.build(out))


def mm_walsh(h_part: TruthTable, u: int, v: int) -> int:
    """Walsh value of <X,Y> + h(X) at (u on X, v on Y): 2^k (-1)^(h(v) + <u,v>)."""
    k = h_part.n
    sign = (h_part(v) ^ (u & v).bit_count()) & 1
    return (1 << k) * (-1 if sign else 1)


def mm_lb(k: int) -> Fraction:
    return Fraction(1, 1 << k)


def ai_lower_bound_triangular(k: int) -> int:
    return triangular_shape(k)[0]


def comb_count(n: int, d: int) -> int:
    return sum(comb(n, i) for i in range(d + 1))
