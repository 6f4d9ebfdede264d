"""Tap-position selection: fixed P1/S0 lists plus seeded shuffles for the rest."""

from __future__ import annotations

from dataclasses import dataclass

MASK64 = (1 << 64) - 1
XORSHIFT_MULTIPLIER = 2685821657736338717
# stand-in state for seed 0, which would otherwise lock xorshift at zero
ZERO_SEED_STATE = 0x9E3779B97F4A7C15


class TapError(ValueError):
    pass


class XorShift64Star:
    def __init__(self, seed: int):
        seed &= MASK64
        self.state = seed or ZERO_SEED_STATE

    def next64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * XORSHIFT_MULTIPLIER) & MASK64

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) from the top bits, by rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound == 1:
            return 0
        bits = (bound - 1).bit_length()
        while True:
            r = self.next64() >> (64 - bits)
            if r < bound:
                return r


def fisher_yates(items: list, rng: XorShift64Star) -> None:
    for j in range(len(items) - 1, 0, -1):
        k = rng.below(j + 1)
        items[j], items[k] = items[k], items[j]


def p1_s0_lists(p1: int, n0: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if p1 < 1 or n0 < 2 or n0 % 2:
        raise TapError("need p1 >= 1 and even n0 >= 2")
    half = n0 // 2
    P1 = tuple(range(1, p1 + 1))
    S0 = tuple(1 + i * p1 for i in range(1, half + 1)) + tuple(1 + i * p1 for i in range(n0, half, -1))
    return P1, S0


def check_cartesian(P1, S0) -> bool:
    return len({a + b for a in P1 for b in S0}) == len(P1) * len(S0)


def shuffled_disjoint_pick(l: int, r1: int, r2: int, avoid, seed: int | XorShift64Star):
    """Pick disjoint sets of sizes r1 and r2 from range(l) minus `avoid`.

    An array of r1 ones, r2 twos and zeros is shuffled four times, then a
    marker 3 is inserted at every avoided position so that array positions
    line up with register indices.
    """
    avoid = sorted(set(avoid))
    if any(not 0 <= a < l for a in avoid):
        raise TapError("avoided positions must lie in range")
    free = l - len(avoid)
    if r1 < 0 or r2 < 0 or r1 + r2 > free:
        raise TapError(f"cannot pick {r1}+{r2} positions from {free} free slots")
    rng = seed if isinstance(seed, XorShift64Star) else XorShift64Star(seed)
    arr = [1] * r1 + [2] * r2 + [0] * (free - r1 - r2)
    for _ in range(4):
        fisher_yates(arr, rng)
    for pos in avoid:
        arr.insert(pos, 3)
    set1 = tuple(i for i, m in enumerate(arr) if m == 1)
    set2 = tuple(i for i, m in enumerate(arr) if m == 2)
    return set1, set2


@dataclass(frozen=True)
class TapRequest:
    kappa1: int
    kappa2: int
    delta: int
    n0: int
    n1: int
    p0: int
    p1: int
    q0: int
    q1: int
    A: tuple[int, ...]
    seed: int

    def check(self):
        if self.n0 % 2:
            raise TapError("n0 must be even")
        if 1 + self.n0 * self.p1 > self.kappa1 - self.delta:
            raise TapError("need 1 + n0*p1 <= kappa1 - delta")
        if self.n1 < 1:
            raise TapError("S1 must contain position 0, so n1 >= 1")
        if 0 not in self.A or max(self.A) > self.kappa2 - self.delta:
            raise TapError("A must contain 0 and respect the delta bound")


@dataclass(frozen=True)
class TapLists:
    S0: tuple[int, ...]
    S1: tuple[int, ...]
    P0: tuple[int, ...]
    P1: tuple[int, ...]
    Q0: tuple[int, ...]
    Q1: tuple[int, ...]

    def as_config(self) -> str:
        fmt = lambda xs: "[" + ",".join(map(str, xs)) + "]"
        return "\n".join(f"{k}: {fmt(getattr(self, k))}" for k in ("S0", "S1", "P0", "P1", "Q0", "Q1"))


def generate_taps(req: TapRequest) -> TapLists:
    """L-side lists come from {0..kappa2-delta} minus A, N-side from {0..kappa1-delta}."""
    req.check()
    rng = XorShift64Star(req.seed)
    Q0, Q1 = shuffled_disjoint_pick(req.kappa2 - req.delta + 1, req.q0, req.q1, req.A, rng)
    P1, S0 = p1_s0_lists(req.p1, req.n0)
    taken = set(P1) | set(S0) | {0}
    s1_rest, P0 = shuffled_disjoint_pick(req.kappa1 - req.delta + 1, req.n1 - 1, req.p0, taken, rng)
    return TapLists(S0, (0,) + s1_rest, P0, P1, Q0, Q1)
