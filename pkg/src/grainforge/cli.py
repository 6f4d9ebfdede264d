"""grainforge command line: keystream, props, validate, tapgen, analyze, instances, vectors."""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from . import analysis, report, vectors
from .engine import (GrainParams, KeystreamLimitError, ParameterError, bits_from_hex, bits_to_hex,
                     bits_to_text, keystream, run_init, validate_params)
from .funlib import REGISTRY, build_function
from .instances import INSTANCE_NAMES, config_text, get_instance, load_instance_file, resolve_function
from .tapgen import TapError, TapRequest, generate_taps

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(name: str | None, path: str | None) -> GrainParams:
    if path:
        return load_instance_file(path)
    if name is None:
        raise UsageError("give an instance name or --instance-file")
    if name in INSTANCE_NAMES:
        return get_instance(name)
    if os.path.isfile(name):
        return load_instance_file(name)
    raise UsageError(f"unknown instance {name!r}; known: {', '.join(INSTANCE_NAMES)}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _hex_bits(text: str, nbits: int, what: str) -> list[int]:
    try:
        bits = bits_from_hex(text)
    except ValueError:
        raise UsageError(f"{what} is not a hex string")
    if len(bits) > -(-nbits // 8) * 8:
        raise UsageError(f"{what} is longer than {nbits} bits")
    bits += [0] * max(0, nbits - len(bits))
    if any(bits[nbits:]):
        raise UsageError(f"{what} does not fit in {nbits} bits")
    return bits[:nbits]


# ------------------------------------------------------------------- verbs

def cmd_keystream(a) -> int:
    p = _load(a.cipher, a.instance_file)
    if a.nbits < 0:
        raise UsageError("--nbits must be non-negative")
    K = _hex_bits(a.key, p.kappa, "key")
    IV = _hex_bits(a.iv, p.v, "iv")
    if a.show_state:
        print(f"state: {run_init(p, K, IV).dump(p)}")
    bits = keystream(p, K, IV, a.nbits)
    print(bits_to_text(bits) if a.format == "bin" else bits_to_hex(bits))
    return EXIT_OK


def cmd_props(a) -> int:
    if a.anf:
        f = resolve_function(a.anf, a.n)
    elif a.function:
        f = resolve_function(a.function)
    else:
        raise UsageError("give --function NAME or --anf TEXT")
    for line in report.function_report(f, with_ai=not a.no_ai, ai_max_deg=a.ai_max_deg):
        print(line)
    if a.figure:
        report.walsh_figure(f, a.figure)
        print(f"figure: {a.figure}")
    return EXIT_OK


def cmd_validate(a) -> int:
    p = _load(a.instance, a.instance_file)
    strict = not p.legacy if a.strictness is None else a.strictness == "strict"
    r = validate_params(p, strict=strict)
    for line in report.validation_report(r):
        print(line)
    return EXIT_OK if r.ok else EXIT_INVALID


def cmd_tapgen(a) -> int:
    base = _load(a.profile, None) if a.profile else None
    pick = lambda val, default: val if val is not None else default
    if base is None:
        needed = ("kappa1", "kappa2", "n0", "p0", "p1", "q0", "q1", "A")
        missing = [k for k in needed if getattr(a, k) is None]
        if missing:
            raise UsageError("without --profile, give " + ", ".join("--" + k for k in missing))
    req = TapRequest(
        kappa1=pick(a.kappa1, base and base.kappa1), kappa2=pick(a.kappa2, base and base.kappa2),
        delta=pick(a.delta, base.delta if base else 1), n0=pick(a.n0, base and len(base.S0)),
        n1=pick(a.n1, len(base.S1) if base else 1), p0=pick(a.p0, base and len(base.P0)),
        p1=pick(a.p1, base and len(base.P1)), q0=pick(a.q0, base and len(base.Q0)),
        q1=pick(a.q1, base and len(base.Q1)),
        A=tuple(_int_list(a.A)) if a.A else base.A, seed=a.seed)
    taps = generate_taps(req)
    print(taps.as_config())
    if base is not None:
        p = dataclasses.replace(base, name=f"{base.name}-seed{a.seed}", S0=taps.S0, S1=taps.S1, P0=taps.P0,
                                P1=taps.P1, Q0=taps.Q0, Q1=taps.Q1, legacy=False)
        r = validate_params(p, strict=True)
        print(f"conditions: {r.passed_count}/{len(r.conditions)} pass")
        return EXIT_OK if r.ok else EXIT_INVALID
    return EXIT_OK


def cmd_analyze(a) -> int:
    p = _load(a.instance, a.instance_file)
    if a.epsilon is not None:
        for line in [f"instance: {p.name}"] + analysis.epsilon_bounds(p, a.epsilon).lines():
            print(line)
        return EXIT_OK
    if not a.T:
        raise UsageError("give --T (or --epsilon T_CARD)")
    T = _int_list(a.T)
    if not T:
        raise UsageError("T must be non-empty")
    r, _ = analysis.window_bounds(p, T)
    gamma_bits = _hex_bits(a.gamma, r, "gamma")
    gamma = sum(b << i for i, b in enumerate(gamma_bits))
    if a.mode == "sets":
        spec = analysis.ApproxSpec(T, gamma, p)
        ix = analysis.index_sets(p, T, gamma)
        nec = analysis.necessary_condition(p, T, gamma)
        res = analysis.BiasResult(spec, ix, "sets", 0, nec)
        lines = res.lines()
        if nec:
            lines[-1] = "bias: not computed"
    else:
        res = analysis.analyze(p, T, gamma, a.mode, a.samples, a.seed)
        lines = res.lines()
    for line in lines:
        print(line)
    if a.figure:
        report.window_figure(res.sets, res.spec.T, a.figure)
        print(f"figure: {a.figure}")
    return EXIT_OK


def cmd_instances(a) -> int:
    if a.show:
        sys.stdout.write(config_text(_load(a.show, None)))
        return EXIT_OK
    for name in INSTANCE_NAMES:
        p = get_instance(name)
        print(f"{name}: kappa={p.kappa} v={p.v} kappa1={p.kappa1} kappa2={p.kappa2} "
              f"g={p.g.name} h={p.h.name} init={p.init_variant}{' legacy' if p.legacy else ''}")
    return EXIT_OK


def cmd_vectors(a) -> int:
    if a.all:
        out = a.out or str(vectors.shipped_vector_path("x").parent)
        for path in vectors.write_all(out):
            print(f"wrote: {path}")
        return EXIT_OK
    p = _load(a.instance, a.instance_file)
    sys.stdout.write(vectors.vector_text(p, a.nbits))
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="grainforge", description=__doc__)
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    k = sub.add_parser("keystream", help="generate keystream bits")
    k.add_argument("--cipher")
    k.add_argument("--instance-file")
    k.add_argument("--key", required=True)
    k.add_argument("--iv", required=True)
    k.add_argument("--nbits", type=int, default=128)
    k.add_argument("--format", choices=("hex", "bin"), default="hex")
    k.add_argument("--show-state", action="store_true", help="print the state after initialisation")
    k.set_defaults(fn=cmd_keystream)

    pr = sub.add_parser("props", help="report Boolean function properties")
    pr.add_argument("--function", help="registry name: " + ", ".join(REGISTRY))
    pr.add_argument("--anf", help="inline ANF, e.g. 'x1*x2 + x3'")
    pr.add_argument("--n", type=int, help="variable count for --anf")
    pr.add_argument("--no-ai", action="store_true")
    pr.add_argument("--ai-max-deg", type=int)
    pr.add_argument("--figure", help="write a Walsh spectrum histogram (PNG/PDF/SVG)")
    pr.set_defaults(fn=cmd_props)

    v = sub.add_parser("validate", help="check the tap conditions of an instance")
    v.add_argument("--instance")
    v.add_argument("--instance-file")
    v.add_argument("--strict", dest="strictness", action="store_const", const="strict")
    v.add_argument("--legacy", dest="strictness", action="store_const", const="legacy")
    v.set_defaults(fn=cmd_validate)

    t = sub.add_parser("tapgen", help="generate tap lists from a seed")
    t.add_argument("--profile", help="take sizes and A from this instance")
    for name in ("kappa1", "kappa2", "delta", "n0", "n1", "p0", "p1", "q0", "q1"):
        t.add_argument(f"--{name}", type=int)
    t.add_argument("--A", help="LFSR tap set, comma-separated")
    t.add_argument("--seed", type=int, default=0)
    t.set_defaults(fn=cmd_tapgen)

    an = sub.add_parser("analyze", help="bias of a linear approximation")
    an.add_argument("--instance")
    an.add_argument("--instance-file")
    an.add_argument("--T")
    an.add_argument("--gamma", default="00")
    an.add_argument("--mode", choices=("exact", "conv", "empirical", "sets"), default="exact")
    an.add_argument("--samples", type=int, default=100000)
    an.add_argument("--seed", type=int, default=0)
    an.add_argument("--epsilon", type=int, metavar="T_CARD", help="print the epsilon bounds instead")
    an.add_argument("--figure", help="write the window layout figure")
    an.set_defaults(fn=cmd_analyze)

    i = sub.add_parser("instances", help="list the shipped instances")
    i.add_argument("--show", metavar="NAME", help="print one instance in config syntax")
    i.set_defaults(fn=cmd_instances)

    ve = sub.add_parser("vectors", help="golden keystream vectors")
    ve.add_argument("--all", action="store_true", help="write files for all shipped instances")
    ve.add_argument("--out", help="output directory for --all")
    ve.add_argument("--instance")
    ve.add_argument("--instance-file")
    ve.add_argument("--nbits", type=int, default=vectors.VECTOR_BITS)
    ve.set_defaults(fn=cmd_vectors)
    return ap


def run_command(argv: list[str]) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, TapError, KeystreamLimitError, analysis.WindowTooLarge, ValueError, KeyError,
            OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
