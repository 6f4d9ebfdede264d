"""One test per acceptance criterion; each records a PASS/FAIL line with the evidence."""

import dataclasses
import random

import numpy as np

import bias_cases
import oracle
from acceptance_log import record
from grainforge import analysis, gf2, vectors
from grainforge.boolfn import (algebraic_immunity, anf_to_tt, degree, find_annihilator, is_annihilator, log2_text,
                               spectral_profile, walsh_spectrum)
from grainforge.engine import (CipherState, _ob, bits_to_hex, keystream, run_init, step, step_inverse, step_wide,
                               validate_params)
from grainforge.funlib import build_function, gate_count, mm_walsh
from grainforge.instances import INSTANCE_NAMES, ToySpec, get_instance, make_toy
from grainforge.tapgen import TapRequest, check_cartesian, generate_taps, p1_s0_lists

TABLE_FUNCTIONS = ("h5", "h7", "h10", "h15", "h19", "g10", "f10", "g24", "grainv1_g", "grainv1_h",
                   "grain128a_g", "grain128a_h")
GATE_FUNCTIONS = ("g10", "h7", "g24", "g30", "g36", "h10", "grainv1_g", "grainv1_h", "grain128a_g", "grain128a_h")
NEW = ("r80", "r128", "w128", "r192", "w192", "r256", "w256")


def test_acceptance_1_function_table():
    problems = []
    for name in TABLE_FUNCTIONS:
        f = build_function(name)
        c = f.claimed
        prof = spectral_profile(f.table())
        if prof.nl != c.nl or degree(f.anf) != c.degree:
            problems.append(f"{name} nl/deg {prof.nl}/{degree(f.anf)}")
        if c.resiliency is not None and prof.resiliency != c.resiliency:
            problems.append(f"{name} resiliency {prof.resiliency}")
        if f.n <= 15 and c.ai.isdigit():
            r = algebraic_immunity(f.table())
            if not (r.exact and r.ai == int(c.ai)):
                problems.append(f"{name} ai {r.ai}")
    # h19: nothing of degree 3 annihilates h19 or its complement; a degree-4 witness exists
    tt = build_function("h19").table()
    ones, zeros = np.flatnonzero(tt.bits), np.flatnonzero(tt.bits ^ 1)
    if find_annihilator(ones, 19, 3) is not None or find_annihilator(zeros, 19, 3) is not None:
        problems.append("h19 has a degree-3 annihilator")
    w = algebraic_immunity(tt)
    if not (w.ai == 4 and degree(w.witness) == 4 and is_annihilator(w.witness, tt, w.annihilates_complement)):
        problems.append("h19 degree-4 witness missing")
    ok = not problems
    record(1, ok, f"{len(TABLE_FUNCTIONS)} functions, nl/deg/resiliency/AI as tabulated, h19 AI = 4"
           if ok else "; ".join(problems))
    assert ok, problems


def test_acceptance_2_bent_spectra():
    problems = []
    for family, ks in (("h2k", range(1, 13)), ("g2k", range(6, 13))):
        for k in ks:
            f = build_function(family=family, k=k)
            w = walsh_spectrum(f.table()).values
            if not np.all(np.abs(w) == 1 << k):
                problems.append(f"{family} k={k} not bent")
            if 2 * k <= 20:
                # closed form 2^k (-1)^(h(v) + <u, v>), u in the low index bits
                hp = anf_to_tt(f.mm_part)
                idx = np.arange(1 << (2 * k), dtype=np.int64)
                u, v = idx & ((1 << k) - 1), idx >> k
                par = np.zeros_like(idx)
                for i in range(k):
                    par ^= ((u & v) >> i) & 1
                closed = (1 << k) * (1 - 2 * (par ^ hp.bits.astype(np.int64)[v]))
                if not np.array_equal(closed, w.astype(np.int64)):
                    problems.append(f"{family} k={k} closed form differs")
                pts = random.Random(k).sample(range(1 << (2 * k)), min(20, 1 << (2 * k)))
                if any(mm_walsh(hp, x & ((1 << k) - 1), x >> k) != w[x] for x in pts):
                    problems.append(f"{family} k={k} mm_walsh differs")
    ok = not problems
    record(2, ok, "h2k (2k<=24) and g2k (12<=2k<=24) bent; closed form = FWHT for 2k<=20" if ok
           else "; ".join(problems))
    assert ok, problems


def test_acceptance_3_gate_counts():
    problems = []
    for name in GATE_FUNCTIONS:
        f = build_function(name)
        got = gate_count(f.circuit)
        if got != f.claimed.gates:
            problems.append(f"{name} built {got} vs published {f.claimed.gates}")
    for name, k in (("h15", 5), ("h19", 7)):
        f = build_function(name)
        got = gate_count(f.circuit)
        formula = (0, 7 + k, 2 * k + 2)
        if got != formula:
            problems.append(f"{name} built {got} vs formula {formula}")
    ok = not problems
    record(3, ok, "all tallies match" if ok else "; ".join(problems))
    assert ok, problems


def test_acceptance_4_invertibility():
    toy = make_toy(ToySpec(8, 6, 8, 8, "h2", "h5", 5, p1=2))
    params = [get_instance(n) for n in INSTANCE_NAMES] + [toy]
    rnd = random.Random(4)
    trips = failures = 0
    for p in params:
        for mode in ("NS", "NSI", "NSIG"):
            for _ in range(1000):
                s = CipherState(rnd.getrandbits(p.kappa1), rnd.getrandbits(p.kappa2))
                trips += 1
                failures += step_inverse(p, step(p, s, mode), mode) != s
    ok = failures == 0 and trips >= 27000
    record(4, ok, f"{trips} round trips, {failures} failures")
    assert ok


def test_acceptance_5_epsilon():
    got = {
        "grainv1 eps_h t=10": log2_text(analysis.epsilon_bounds(get_instance("grainv1"), 10).eps_h),
        "grain128a eps_h t=6": log2_text(analysis.epsilon_bounds(get_instance("grain128a"), 6).eps_h),
    }
    for name in ("r80", "r128", "r192", "r256"):
        got[f"{name} eps_g"] = log2_text(analysis.epsilon_bounds(get_instance(name), 1).eps_g)
    want = {"grainv1 eps_h t=10": "2^-20", "grain128a eps_h t=6": "2^-24", "r80 eps_g": "2^-28.068",
            "r128 eps_g": "2^-48", "r192 eps_g": "2^-75", "r256 eps_g": "2^-108"}
    ok = got == want
    record(5, ok, ", ".join(f"{k}={v}" for k, v in got.items()))
    assert ok


def test_acceptance_6_bias_oracles():
    rows = bias_cases.results()
    n = len(rows)
    unequal = [c for c in rows if c.exact != c.conv]
    nonzero_unnecessary = [c for c in rows if not c.necessary and (c.exact != 0 or c.conv != 0)]
    emp = bias_cases.empirical()
    within = sum(ok for _, _, ok in emp)
    rate = within / len(emp)
    ok = (n >= 50 and all(c.r + c.s <= 26 for c in rows) and not unequal and not nonzero_unnecessary
          and rate >= 0.95)
    record(6, ok, f"{n} cases ({sum(c.exact != 0 for c in rows)} nonzero), exact=conv on {n - len(unequal)}, "
           f"necessary-failed zero on all {sum(not c.necessary for c in rows)}, "
           f"empirical within 3 sigma on {within}/{len(emp)} = {100 * rate:.1f}%")
    assert ok


def test_acceptance_7_keystream():
    mismatches = []
    for name in INSTANCE_NAMES:
        p = get_instance(name)
        shipped = vectors.read_vectors(vectors.shipped_vector_path(name).read_text())
        for (label, K, IV), case in zip(vectors.vector_inputs(p), shipped):
            want = oracle.keystream(name, K, IV, 256)
            if keystream(p, K, IV, 256) != want:
                mismatches.append(f"{name}/{label} engine")
            if bits_to_hex(want) != case["keystream"]:
                mismatches.append(f"{name}/{label} shipped file")
    rnd = random.Random(7)
    wide_bad = 0
    for name in INSTANCE_NAMES:
        p = get_instance(name)
        for i in range(1, p.delta + 1):
            for _ in range(3):
                s = CipherState(rnd.getrandbits(p.kappa1), rnd.getrandbits(p.kappa2))
                t, out = s, []
                for _ in range(i):
                    out.append(_ob(p, t.N, t.L))
                    t = step(p, t)
                wide_bad += step_wide(p, s, i) != (t, out)
    trace = []
    run_init(get_instance("r80"), [0] * 80, [0] * 64, trace)
    init_ok = trace == ["NSIG"] * 160
    ok = not mismatches and wide_bad == 0 and init_ok
    record(7, ok, f"18 vectors x 256 bits match the oracle; wide stepping mismatches {wide_bad}; "
           f"R-80 initG steps {len(trace)}" if ok else "; ".join(mismatches) + f" wide={wide_bad} init={len(trace)}")
    assert ok


def test_acceptance_8_taps():
    problems = []
    for name in NEW:
        p = get_instance(name)
        if (p.P1, p.S0) != p1_s0_lists(len(p.P1), len(p.S0)):
            problems.append(f"{name} P1/S0")
        if not check_cartesian(p.P1, p.S0):
            problems.append(f"{name} cartesian")
    generated = 0
    for name in ("r80", "r128", "r192", "r256"):
        base = get_instance(name)
        for seed in range(100):
            req = TapRequest(base.kappa1, base.kappa2, base.delta, len(base.S0), len(base.S1), len(base.P0),
                             len(base.P1), len(base.Q0), len(base.Q1), base.A, seed)
            t = generate_taps(req)
            p = dataclasses.replace(base, S0=t.S0, S1=t.S1, P0=t.P0, P1=t.P1, Q0=t.Q0, Q1=t.Q1)
            if not validate_params(p, strict=True).ok:
                problems.append(f"{name} seed {seed}")
            generated += 1
    ok = not problems
    record(8, ok, f"P1/S0 formula and cartesian check on 7 instances; {generated} generated tap sets valid"
           if ok else "; ".join(problems))
    assert ok


def test_acceptance_9_polynomials():
    problems = [n for n in INSTANCE_NAMES if not gf2.is_irreducible(gf2.poly_from_exponents(get_instance(n).tau))]
    toy = make_toy(ToySpec(16, 8, 16, 16, "h4", "h5", 1, p1=2))
    f = gf2.poly_from_exponents(toy.tau)
    order = gf2.brute_force_order_of_x(f)
    if order != (1 << 16) - 1:
        problems.append(f"toy order {order}")
    seen, L = set(), 1
    steps = min((1 << toy.kappa2) - 1, 1 << 16)
    s = CipherState(0, L)
    for _ in range(steps):
        if s.L in seen:
            problems.append("toy LFSR repeated")
            break
        seen.add(s.L)
        s = step(toy, s)
    ok = not problems
    record(9, ok, f"9 tau irreducible; toy tau order {order}; {len(seen)} distinct LFSR states" if ok
           else "; ".join(problems))
    assert ok
