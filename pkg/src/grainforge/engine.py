"""The abstract Grain machine: registers, update maps, initialization and keystream.

Registers are Python ints with bit i holding eta_i (N) or lambda_i (L), so
a shift is `reg >> 1` plus one new top bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .funlib import FunctionBundle

MODES = ("NS", "NSI", "NSIG")
INIT_VARIANTS = ("init1", "init2", "initG")
ASSEMBLY_ORDERS = ("L-first", "N-first")


class ParameterError(ValueError):
    pass


def taps_from_tau(tau, kappa2: int) -> tuple[int, ...]:
    """A = (0) followed by kappa2 - e for every middle exponent e of tau."""
    exps = sorted(set(tau), reverse=True)
    if exps[0] != kappa2 or exps[-1] != 0:
        raise ParameterError(f"tau must run from x^{kappa2} down to 1, got {list(tau)}")
    return (0,) + tuple(kappa2 - e for e in exps[1:-1])


def interleave_psi(p0: int, q0: int) -> tuple[int, ...]:
    """(a1..ap0, b1..bq0) -> (b1, a1, b2, a2, b3, a3..ap0, b4..bq0) as source positions."""
    if q0 != p0 + 1 or p0 < 2:
        raise ParameterError("interleaving permutation needs q0 = p0 + 1 >= 3")
    b = lambda j: p0 + j - 1
    a = lambda j: j - 1
    head = [b(1), a(1), b(2), a(2), b(3)]
    return tuple(head + [a(j) for j in range(3, p0 + 1)] + [b(j) for j in range(4, q0 + 1)])


@dataclass(frozen=True)
class GrainParams:
    name: str
    kappa: int
    v: int
    kappa1: int
    kappa2: int
    tau: tuple[int, ...]
    S0: tuple[int, ...]
    S1: tuple[int, ...]
    P0: tuple[int, ...]
    P1: tuple[int, ...]
    Q0: tuple[int, ...]
    Q1: tuple[int, ...]
    g: FunctionBundle
    h: FunctionBundle
    psi: tuple[int, ...]
    assembly_order: str
    delta: int
    pad: tuple[int, ...]
    init_variant: str
    max_keystream_log2: int | None = None
    legacy: bool = False
    errata: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.kappa1 < self.kappa:
            raise ParameterError("kappa1 must be at least kappa")
        if self.assembly_order not in ASSEMBLY_ORDERS:
            raise ParameterError(f"assembly order must be one of {ASSEMBLY_ORDERS}")
        if self.init_variant not in INIT_VARIANTS:
            raise ParameterError(f"init variant must be one of {INIT_VARIANTS}")
        if self.g.n != len(self.S0):
            raise ParameterError(f"g takes {self.g.n} inputs but S0 has {len(self.S0)} taps")
        width = len(self.P0) + len(self.Q0)
        if self.h.n != width:
            raise ParameterError(f"h takes {self.h.n} inputs but P0+Q0 supply {width}")
        if sorted(self.psi) != list(range(width)):
            raise ParameterError("psi must be a permutation of the h input positions")
        if len(self.pad) != self.kappa1 + self.kappa2 - self.kappa - self.v:
            raise ParameterError(
                f"pad has {len(self.pad)} bits, registers need {self.kappa1 + self.kappa2 - self.kappa - self.v}")
        if self.delta < 1:
            raise ParameterError("delta must be positive")

    @cached_property
    def A(self) -> tuple[int, ...]:
        return taps_from_tau(self.tau, self.kappa2)

    @property
    def sizes(self) -> dict[str, int]:
        return {"a": len(self.A), "n0": len(self.S0), "n1": len(self.S1), "p0": len(self.P0),
                "p1": len(self.P1), "q0": len(self.Q0), "q1": len(self.Q1)}

    @cached_property
    def _wiring(self):
        mask = lambda idx: sum(1 << i for i in idx)
        core = [("N", i) for i in self.P0] + [("L", j) for j in self.Q0]
        if self.assembly_order == "L-first":
            core = [("L", j) for j in self.Q0] + [("N", i) for i in self.P0]
        h_inputs = [core[src] for src in self.psi]
        return {
            "A": mask(self.A), "S1": mask(self.S1), "P1": mask(self.P1), "Q1": mask(self.Q1),
            "S0": tuple(self.S0),
            "hN": tuple((pos, i) for pos, (reg, i) in enumerate(h_inputs) if reg == "N"),
            "hL": tuple((pos, j) for pos, (reg, j) in enumerate(h_inputs) if reg == "L"),
            "g": self.g.compile(), "h": self.h.compile(),
        }


@dataclass(frozen=True)
class CipherState:
    N: int
    L: int
    t: int = 0

    def dump(self, p: GrainParams) -> str:
        n = "".join(str(self.N >> i & 1) for i in range(p.kappa1))
        l = "".join(str(self.L >> i & 1) for i in range(p.kappa2))
        return f"N={n} L={l} t={self.t}"


@dataclass(frozen=True)
class ComponentBits:
    nlb: int
    nnb: int
    ob: int


# ------------------------------------------------------------------ validation

@dataclass
class Condition:
    number: int
    text: str
    passed: bool
    detail: str = ""
    warning: bool = False


@dataclass
class ValidationReport:
    name: str
    strict: bool
    conditions: list[Condition]
    structural_errors: list[str]

    @property
    def warnings(self) -> list[str]:
        return [f"condition {c.number}: {c.detail}" for c in self.conditions if c.warning]

    @property
    def ok(self) -> bool:
        return not self.structural_errors and all(c.passed for c in self.conditions)

    @property
    def passed_count(self) -> int:
        return sum(c.passed for c in self.conditions)


def _overlaps(named: dict[str, tuple[int, ...]]) -> list[str]:
    out = []
    keys = list(named)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            common = sorted(set(named[a]) & set(named[b]))
            if common:
                out.append(f"{a} and {b} share {','.join(map(str, common))}")
    return out


def validate_params(p: GrainParams, strict: bool = True) -> ValidationReport:
    """Check the six tap conditions.

    In legacy mode (strict=False) overlapping tap lists and a failed
    distinct-sums condition are reported as warnings: the published Grain
    ciphers predate both rules.
    """
    errors = []
    for label, idx, size in (("S0", p.S0, p.kappa1), ("S1", p.S1, p.kappa1), ("P0", p.P0, p.kappa1),
                             ("P1", p.P1, p.kappa1), ("Q0", p.Q0, p.kappa2), ("Q1", p.Q1, p.kappa2),
                             ("A", p.A, p.kappa2)):
        bad = [i for i in idx if not 0 <= i < size]
        if bad:
            errors.append(f"{label} index {bad[0]} outside register of {size} bits")
        if len(set(idx)) != len(idx):
            errors.append(f"{label} repeats an index")
    conds = []

    overlaps = _overlaps({"S0": p.S0, "S1": p.S1, "P0": p.P0, "P1": p.P1})
    overlaps += _overlaps({"A": p.A, "Q0": p.Q0, "Q1": p.Q1})
    c1 = Condition(1, "N tap lists pairwise disjoint; L tap lists pairwise disjoint", not overlaps,
                   "; ".join(overlaps))
    if overlaps and not strict:
        c1.passed, c1.warning = True, True
    conds.append(c1)

    conds.append(Condition(2, "n0 even", len(p.S0) % 2 == 0, f"n0={len(p.S0)}"))

    c3_ok = 0 in p.S1 and 0 not in p.S0
    conds.append(Condition(3, "0 in S1 and 0 not in S0", c3_ok,
                           "" if c3_ok else "position 0 must feed the NFSR linearly"))

    bad0 = [name for name, idx in (("P0", p.P0), ("P1", p.P1), ("Q0", p.Q0), ("Q1", p.Q1)) if 0 in idx]
    conds.append(Condition(4, "0 not in P0, P1, Q0, Q1", not bad0, ",".join(bad0)))

    n_max = max(p.S0 + p.S1 + p.P0 + p.P1)
    l_max = max(p.A + p.Q0 + p.Q1)
    c5_ok = n_max <= p.kappa1 - p.delta and l_max <= p.kappa2 - p.delta
    conds.append(Condition(5, "taps leave delta positions free", c5_ok,
                           f"max N tap {n_max} (limit {p.kappa1 - p.delta}), "
                           f"max L tap {l_max} (limit {p.kappa2 - p.delta})"))

    sums = {a + b for a in p.P1 for b in p.S0}
    c6_ok = len(sums) == len(p.P1) * len(p.S0)
    c6 = Condition(6, "#(P1+S0) = #P1 * #S0", c6_ok, f"{len(sums)} distinct sums of {len(p.P1) * len(p.S0)}")
    if not c6_ok and not strict:
        c6.passed, c6.warning = True, True
    conds.append(c6)
    return ValidationReport(p.name, strict, conds, errors)


def _require_invertible(p: GrainParams):
    if 0 not in p.S1 or 0 in p.S0:
        raise ParameterError("inversion needs 0 in S1 and 0 not in S0")
    if any(0 in idx for idx in (p.P0, p.P1, p.Q0, p.Q1)):
        raise ParameterError("inversion needs 0 outside P0, P1, Q0, Q1")


# ---------------------------------------------------------------- load and maps

def load_state(p: GrainParams, K, IV) -> CipherState:
    K, IV = list(K), list(IV)
    if len(K) != p.kappa or len(IV) != p.v:
        raise ParameterError(f"{p.name} needs a {p.kappa}-bit key and {p.v}-bit IV, got {len(K)} and {len(IV)}")
    stream = K + IV + list(p.pad)
    N = sum(b << i for i, b in enumerate(stream[:p.kappa1]))
    L = sum(b << i for i, b in enumerate(stream[p.kappa1:]))
    return CipherState(N, L, 0)


def _parity(x: int) -> int:
    return x.bit_count() & 1


def _nlb(p: GrainParams, L: int) -> int:
    return _parity(L & p._wiring["A"])


def _nnb(p: GrainParams, N: int) -> int:
    w = p._wiring
    x = 0
    for i, s in enumerate(w["S0"]):
        x |= (N >> s & 1) << i
    return _parity(N & w["S1"]) ^ w["g"](x)


def _ob(p: GrainParams, N: int, L: int) -> int:
    w = p._wiring
    x = 0
    for pos, i in w["hN"]:
        x |= (N >> i & 1) << pos
    for pos, j in w["hL"]:
        x |= (L >> j & 1) << pos
    return _parity(N & w["P1"]) ^ _parity(L & w["Q1"]) ^ w["h"](x)


def component_bits(p: GrainParams, s: CipherState) -> ComponentBits:
    return ComponentBits(_nlb(p, s.L), _nnb(p, s.N), _ob(p, s.N, s.L))


def _feedback(p: GrainParams, N: int, L: int, mode: str) -> tuple[int, int]:
    nlb, nnb = _nlb(p, L), _nnb(p, N)
    lam0 = L & 1
    if mode == "NS":
        return nnb ^ lam0, nlb
    ob = _ob(p, N, L)
    if mode == "NSI":
        return nnb ^ lam0 ^ ob, nlb ^ ob
    if mode == "NSIG":
        b = lam0 ^ nnb ^ ob
        return b, nlb ^ b
    raise ValueError(f"unknown mode {mode!r}")


def step(p: GrainParams, s: CipherState, mode: str = "NS") -> CipherState:
    b, b2 = _feedback(p, s.N, s.L, mode)
    return CipherState((s.N >> 1) | (b << (p.kappa1 - 1)), (s.L >> 1) | (b2 << (p.kappa2 - 1)), s.t + 1)


def step_inverse(p: GrainParams, s: CipherState, mode: str = "NS") -> CipherState:
    """Recover the predecessor: eta_0 and lambda_0 are solved from the two new top bits."""
    _require_invertible(p)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    b = s.N >> (p.kappa1 - 1) & 1
    b2 = s.L >> (p.kappa2 - 1) & 1
    n_rest = (s.N << 1) & ((1 << p.kappa1) - 1)
    l_rest = (s.L << 1) & ((1 << p.kappa2) - 1)
    lam_rest = _nlb(p, l_rest)
    eta_rest = _nnb(p, n_rest)
    ob = _ob(p, n_rest, l_rest) if mode != "NS" else 0
    if mode == "NS":
        lam0 = b2 ^ lam_rest
        eta0 = b ^ lam0 ^ eta_rest
    elif mode == "NSI":
        lam0 = b2 ^ ob ^ lam_rest
        eta0 = b ^ ob ^ lam0 ^ eta_rest
    else:
        eta0 = b2 ^ lam_rest ^ eta_rest ^ ob
        lam0 = b ^ eta0 ^ eta_rest ^ ob
    return CipherState(n_rest | eta0, l_rest | lam0, s.t - 1)


# ------------------------------------------------------------ init / keystream

def run_init(p: GrainParams, K, IV, trace: list | None = None) -> CipherState:
    """Load and initialize; the returned state's t counts the initialization steps."""
    K = list(K)
    s = load_state(p, K, IV)
    big = max(p.kappa1, p.kappa2)

    def go(mode, label=None):
        nonlocal s
        s = step(p, s, mode)
        if trace is not None:
            trace.append(label or mode)

    if p.init_variant in ("init1", "initG"):
        mode = "NSI" if p.init_variant == "init1" else "NSIG"
        for _ in range(2 * big):
            go(mode)
        return s
    if (5 * big) % 2 or p.kappa % 2:
        raise ParameterError("init2 needs even register and key sizes")
    for _ in range(5 * big // 2):
        go("NSI")
    half = p.kappa // 2
    for t in range(half):
        go("NSI", "NSI+K")
        s = CipherState(s.N ^ (K[t] << (p.kappa1 - 1)), s.L ^ (K[t + half] << (p.kappa2 - 1)), s.t)
    for _ in range(big):
        go("NS")
    return s


class KeystreamLimitError(ValueError):
    pass


def keystream(p: GrainParams, K, IV, nbits: int, allow_over_limit: bool = False) -> list[int]:
    if nbits < 0:
        raise ValueError("nbits must be non-negative")
    if p.max_keystream_log2 is not None and nbits > 1 << p.max_keystream_log2 and not allow_over_limit:
        raise KeystreamLimitError(f"{p.name} allows at most 2^{p.max_keystream_log2} keystream bits per (K, IV)")
    s = run_init(p, K, IV)
    s = CipherState(s.N, s.L, 0)
    out = []
    for _ in range(nbits):
        out.append(_ob(p, s.N, s.L))
        s = step(p, s, "NS")
    return out


def step_wide(p: GrainParams, s: CipherState, i: int) -> tuple[CipherState, list[int]]:
    """Emit i output bits and advance i NS steps, all read from the current registers.

    Valid because every tap sits at most kappa - delta, so the first i <= delta
    shifted copies never touch a bit produced within the same call.
    """
    if not 1 <= i <= p.delta:
        raise ValueError(f"width must be in 1..{p.delta}, got {i}")
    out, nb, lb = [], 0, 0
    for j in range(i):
        Nj, Lj = s.N >> j, s.L >> j
        out.append(_ob(p, Nj, Lj))
        nb |= (_nnb(p, Nj) ^ (Lj & 1)) << j
        lb |= _nlb(p, Lj) << j
    N = (s.N >> i) | (nb << (p.kappa1 - i))
    L = (s.L >> i) | (lb << (p.kappa2 - i))
    return CipherState(N, L, s.t + i), out


# ----------------------------------------------------------------- bit formats

def bits_from_hex(text: str, nbits: int | None = None) -> list[int]:
    text = text.strip().lower().removeprefix("0x")
    data = bytes.fromhex(text)
    bits = [(byte >> k) & 1 for byte in data for k in range(8)]
    if nbits is not None:
        if len(bits) < nbits or any(bits[nbits:]):
            raise ValueError(f"hex value does not fit in {nbits} bits")
        bits = bits[:nbits]
    return bits


def bits_to_hex(bits) -> str:
    bits = list(bits)
    out = bytearray()
    for j in range(0, len(bits), 8):
        chunk = bits[j:j + 8]
        out.append(sum(b << k for k, b in enumerate(chunk)))
    return out.hex()


def bits_to_text(bits) -> str:
    return "".join(str(b) for b in bits)
