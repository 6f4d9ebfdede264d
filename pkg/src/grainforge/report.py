"""Line-oriented text reports and matplotlib figures."""

from __future__ import annotations

import sys
from collections import Counter
from fractions import Fraction

from .boolfn import (MAX_TABLE_VARS, algebraic_immunity, degree, log2_text, spectral_profile,
                     walsh_spectrum)
from .engine import ValidationReport
from .funlib import FunctionBundle, ai_lower_bound_triangular, gate_count, mm_lb


def gates_text(gates) -> str:
    n, x, a = gates
    return f"{n}N+{x}X+{a}A"


def _progress(msg: str):
    print(msg, file=sys.stderr, flush=True)


def function_report(f: FunctionBundle, with_ai: bool = True, ai_max_deg: int | None = None) -> list[str]:
    lines = [f"function: {f.name}", f"variables: {f.n}", f"family: {f.family}", f"degree: {degree(f.anf)}"]
    if f.n <= MAX_TABLE_VARS:
        if f.n >= 20:
            _progress(f"{f.name}: Walsh transform over 2^{f.n} points")
        tt = f.table()
        prof = spectral_profile(tt, walsh_spectrum(tt))
        lines += [f"weight: {tt.weight}", f"nl: {prof.nl}", f"lb: {log2_text(prof.lb)}",
                  f"resiliency: {prof.resiliency}"]
        if with_ai:
            if f.n >= 15:
                _progress(f"{f.name}: algebraic immunity by annihilator search")
            lines.append(f"ai: {algebraic_immunity(tt, ai_max_deg)}")
    elif f.family == "g2k":
        k = f.n // 2
        lines += [f"nl: {2 ** (f.n - 1) - 2 ** (k - 1)} (bent closed form)", f"lb: {log2_text(mm_lb(k))}",
                  "resiliency: -1"]
        if with_ai:
            lines.append(f"ai: >={ai_lower_bound_triangular(k)} (triangular part bound)")
    lines.append(f"gates: {gates_text(gate_count(f.circuit))}")
    c = f.claimed
    published = []
    if c.nl is not None:
        published.append(f"published nl: {c.nl}")
    if c.degree is not None:
        published.append(f"published degree: {c.degree}")
    if c.resiliency is not None:
        published.append(f"published resiliency: {c.resiliency}")
    if c.lb_log2 is not None:
        published.append(f"published lb: 2^{c.lb_log2}")
    if c.ai is not None:
        published.append(f"published ai: {c.ai}")
    if c.gates is not None:
        published.append(f"published gates: {gates_text(c.gates)}")
    return lines + published


def validation_report(r: ValidationReport) -> list[str]:
    lines = [f"instance: {r.name}", f"mode: {'strict' if r.strict else 'legacy'}"]
    for e in r.structural_errors:
        lines.append(f"error: {e}")
    for c in r.conditions:
        state = "warn" if c.warning else ("pass" if c.passed else "fail")
        detail = f" ({c.detail})" if c.detail and (c.warning or not c.passed) else ""
        lines.append(f"condition {c.number}: {state} {c.text}{detail}")
    lines.append(f"conditions: {r.passed_count}/{len(r.conditions)} pass")
    return lines


def fraction_text(x: Fraction) -> str:
    return log2_text(x) if x else "0"


# ------------------------------------------------------------------- figures

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def walsh_figure(f: FunctionBundle, path: str):
    """Histogram of Walsh values of f."""
    if f.n > MAX_TABLE_VARS:
        raise ValueError(f"{f.name} is too large for a full spectrum figure")
    plt = _pyplot()
    counts = Counter(walsh_spectrum(f.table()).values.tolist())
    xs = sorted(counts)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar([str(x) for x in xs], [counts[x] for x in xs], color="tab:blue")
    ax.set_yscale("log")
    ax.set_xlabel("Walsh value")
    ax.set_ylabel("count")
    ax.set_title(f"Walsh spectrum of {f.name} ({f.n} variables)")
    if len(xs) > 16:
        ax.tick_params(axis="x", labelrotation=90, labelsize=6)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def window_figure(sets, T, path: str):
    """Which window positions fall in B, D (LFSR side) and C, E, F (NFSR side)."""
    plt = _pyplot()
    fig, axes = plt.subplots(2, 1, figsize=(max(6, 0.25 * max(sets.r, sets.s)), 3.6), sharex=True)
    rows = [("LFSR window", sets.r, [("B", sets.B, "tab:red"), ("D", sets.D, "tab:blue")]),
            ("NFSR window", sets.s, [("C", sets.C, "tab:red"), ("E", sets.E, "tab:blue"),
                                     ("F", sets.F, "tab:green")])]
    for ax, (title, width, layers) in zip(axes, rows):
        for y, (label, positions, color) in enumerate(layers):
            ax.scatter(sorted(positions), [y] * len(positions), marker="s", color=color, label=label)
        ax.set_yticks(range(len(layers)))
        ax.set_yticklabels([lab for lab, _, _ in layers])
        ax.set_xlim(-1, max(sets.r, sets.s))
        ax.axvline(width - 0.5, color="grey", linestyle=":")
        ax.set_title(f"{title} ({width} bits)", fontsize=9)
    axes[-1].set_xlabel("offset from t")
    fig.suptitle("T = {" + ",".join(map(str, T)) + "}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
