"""Deterministic (instance, T, gamma) cases for the bias routes, with cached results."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from grainforge import analysis
from grainforge.instances import ToySpec, make_toy

TOY_SEEDS = (1, 2, 3, 4, 5)
MAX_BITS = 23
MAX_BITS_NONZERO = 24
EMPIRICAL_SAMPLES = 10 ** 6


@lru_cache(maxsize=None)
def toy(seed: int):
    return make_toy(ToySpec(8, 6, 8, 8, "h2", "h5", seed, p1=2))


def cancelling_gamma(p, T) -> int:
    """gamma whose support removes the part of (T+Q1) xor P1 that lies outside D."""
    ix = analysis.index_sets(p, T, 0)
    return analysis.mask_of(ix.B - ix.D)


def gammas_inside_d(p, T) -> list[int]:
    """The cancelling gamma, then that gamma toggled at each single position of D."""
    ix = analysis.index_sets(p, T, 0)
    base = ix.B - ix.D
    return [analysis.mask_of(base)] + [analysis.mask_of(base ^ {d}) for d in sorted(ix.D)]


@lru_cache(maxsize=None)
def cases() -> tuple:
    rnd = random.Random(20240601)
    out = []
    for seed in TOY_SEEDS:
        p = toy(seed)
        for size in range(1, 5):
            for rest in itertools.combinations(range(1, 8), size - 1):
                T = (0,) + rest
                r, s = analysis.window_bounds(p, T)
                ix = analysis.index_sets(p, T, 0)
                c_ok = ix.C <= (ix.E | ix.F)
                if r + s > (MAX_BITS_NONZERO if c_ok else MAX_BITS):
                    continue
                if c_ok:
                    out += [(seed, T, g) for g in gammas_inside_d(p, T)]
                    out.append((seed, T, 0))
                else:
                    out.append((seed, T, rnd.randrange(1 << r)))
    return tuple(dict.fromkeys(out))


@dataclass(frozen=True)
class CaseResult:
    seed: int
    T: tuple
    gamma: int
    r: int
    s: int
    necessary: bool
    exact: Fraction
    conv: Fraction


@lru_cache(maxsize=None)
def results() -> tuple:
    out = []
    for seed, T, gamma in cases():
        p = toy(seed)
        r, s = analysis.window_bounds(p, T)
        out.append(CaseResult(seed, T, gamma, r, s, analysis.necessary_condition(p, T, gamma),
                              analysis.exact_model_bias(p, T, gamma), analysis.convolution_bias(p, T, gamma)))
    return tuple(out)


@lru_cache(maxsize=None)
def empirical() -> tuple:
    """(case, estimate, within 3 sigma of the exact model value)."""
    out = []
    for k, c in enumerate(results()):
        est = analysis.empirical_bias(toy(c.seed), c.T, c.gamma, EMPIRICAL_SAMPLES, seed=1000 + k)
        e = float(c.exact)
        sigma = math.sqrt(max(1 - e * e, 0.0) / EMPIRICAL_SAMPLES)
        out.append((c, est, abs(est - e) <= 3 * sigma))
    return tuple(out)
