"""The nine shipped parameter sets, the config-file format, and toy instance generation."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import gf2
from .boolfn import parse_anf
from .engine import GrainParams, ParameterError, interleave_psi, validate_params
from .funlib import REGISTRY, FunctionBundle, build_family, build_function, custom_function
from .tapgen import TapRequest, XorShift64Star, generate_taps

INSTANCE_NAMES = ("grainv1", "grain128a", "r80", "r128", "w128", "r192", "w192", "r256", "w256")
LIST_FIELDS = ("tau", "S0", "S1", "P0", "P1", "Q0", "Q1")
INT_FIELDS = ("kappa", "v", "kappa1", "kappa2", "delta", "max_keystream_log2")


def resolve_function(ref: str, n: int | None = None) -> FunctionBundle:
    """A registry name, a family shorthand (h4, h11, g26, e7) or inline ANF text."""
    ref = ref.strip()
    if ref in REGISTRY:
        return build_function(ref)
    m = re.fullmatch(r"([hge])(\d+)", ref)
    if m:
        kind, size = m.group(1), int(m.group(2))
        if kind == "h" and size % 2 == 0:
            return build_family("h2k", size // 2)
        if kind == "h" and size >= 7 and size % 2:
            return build_family("h5p2k", (size - 5) // 2)
        if kind == "h" and size == 5:
            return build_function("h5")
        if kind == "g" and size % 2 == 0:
            return build_family("g2k", size // 2)
        if kind == "e":
            return build_family("triangular", size)
    anf = parse_anf(ref, n)
    return custom_function(ref, anf)


def _parse_pad(text: str) -> tuple[int, ...]:
    bits: list[int] = []
    for token in text.split():
        m = re.fullmatch(r"\(([01]+)\)\^(\d+)|([01])\^(\d+)|([01]+)", token)
        if not m:
            raise ParameterError(f"bad pad token {token!r}")
        if m.group(1):
            bits += [int(c) for c in m.group(1)] * int(m.group(2))
        elif m.group(3):
            bits += [int(m.group(3))] * int(m.group(4))
        else:
            bits += [int(c) for c in m.group(5)]
    return tuple(bits)


def _parse_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParameterError(f"lists are written as [a,b,c], got {text!r}")
    body = text[1:-1].strip()
    return tuple(int(x) for x in body.split(",")) if body else ()


def parse_config(text: str) -> GrainParams:
    fields: dict[str, str] = {}
    errata: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParameterError(f"line {lineno}: expected 'field: value'")
        key, value = (part.strip() for part in line.split(":", 1))
        if key == "errata":
            errata.append(value)
        elif key in fields:
            raise ParameterError(f"line {lineno}: duplicate field {key!r}")
        else:
            fields[key] = value
    required = ("name", "kappa", "v", "kappa1", "kappa2", "tau", "S0", "S1", "P0", "P1", "Q0", "Q1",
                "g", "h", "psi", "assembly", "delta", "pad", "init")
    missing = [k for k in required if k not in fields]
    if missing:
        raise ParameterError(f"missing fields: {', '.join(missing)}")
    unknown = set(fields) - set(required) - {"max_keystream_log2", "legacy"}
    if unknown:
        raise ParameterError(f"unknown fields: {', '.join(sorted(unknown))}")
    lists = {k: _parse_list(fields[k]) for k in LIST_FIELDS}
    ints = {k: int(fields[k]) for k in INT_FIELDS if k in fields}
    g = resolve_function(fields["g"], len(lists["S0"]))
    h = resolve_function(fields["h"], len(lists["P0"]) + len(lists["Q0"]))
    p0, q0 = len(lists["P0"]), len(lists["Q0"])
    psi_text = fields["psi"].strip()
    if psi_text == "identity":
        psi = tuple(range(p0 + q0))
    elif psi_text == "interleave":
        psi = interleave_psi(p0, q0)
    else:
        psi = tuple(i - 1 for i in _parse_list(psi_text))
    return GrainParams(
        name=fields["name"], kappa=ints["kappa"], v=ints["v"], kappa1=ints["kappa1"], kappa2=ints["kappa2"],
        tau=lists["tau"], S0=lists["S0"], S1=lists["S1"], P0=lists["P0"], P1=lists["P1"],
        Q0=lists["Q0"], Q1=lists["Q1"], g=g, h=h, psi=psi, assembly_order=fields["assembly"],
        delta=ints["delta"], pad=_parse_pad(fields["pad"]), init_variant=fields["init"],
        max_keystream_log2=ints.get("max_keystream_log2"),
        legacy=fields.get("legacy", "false").lower() == "true", errata=tuple(errata),
    )


def load_instance_file(path: str | Path) -> GrainParams:
    return parse_config(Path(path).read_text(encoding="utf-8"))


_CACHE: dict[str, GrainParams] = {}


def get_instance(name: str) -> GrainParams:
    if name not in INSTANCE_NAMES:
        raise KeyError(f"unknown instance {name!r}; known: {', '.join(INSTANCE_NAMES)}")
    if name not in _CACHE:
        text = resources.files("grainforge.data.instances").joinpath(f"{name}.cfg").read_text(encoding="utf-8")
        _CACHE[name] = parse_config(text)
    return _CACHE[name]


def config_text(p: GrainParams) -> str:
    """Render params back into the config format."""
    fmt = lambda xs: "[" + ",".join(map(str, xs)) + "]"
    lines = [f"name: {p.name}"]
    lines += [f"{k}: {getattr(p, k)}" for k in ("kappa", "v", "kappa1", "kappa2")]
    lines.append(f"tau: {fmt(p.tau)}")
    lines += [f"{k}: {fmt(getattr(p, k))}" for k in ("S0", "S1", "P0", "P1", "Q0", "Q1")]
    lines += [f"g: {p.g.name}", f"h: {p.h.name}", f"psi: {fmt(i + 1 for i in p.psi)}",
              f"assembly: {p.assembly_order}", f"delta: {p.delta}",
              f"pad: {''.join(map(str, p.pad))}" if p.pad else "pad: ", f"init: {p.init_variant}"]
    if p.max_keystream_log2 is not None:
        lines.append(f"max_keystream_log2: {p.max_keystream_log2}")
    if p.legacy:
        lines.append("legacy: true")
    lines += [f"errata: {e}" for e in p.errata]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------------ toys

@dataclass(frozen=True)
class ToySpec:
    kappa: int
    v: int
    kappa1: int
    kappa2: int
    g_choice: str = "h4"
    h_choice: str = "h5"
    seed: int = 1
    delta: int = 1
    n1: int = 2
    p1: int = 2
    q1: int = 1
    a: int = 4
    init_variant: str = "initG"


def find_primitive_tau(kappa2: int, a: int, delta: int, rng: XorShift64Star, budget: int = 20000):
    """Random primitive trinomial-like polynomial with a-1 middle terms at exponents >= delta."""
    middle = list(range(max(delta, 1), kappa2))
    if a - 1 > len(middle):
        raise ParameterError("not enough exponents for the requested tap count")
    for _ in range(budget):
        pool = middle[:]
        chosen = []
        for _ in range(a - 1):
            chosen.append(pool.pop(rng.below(len(pool))))
        exps = sorted([kappa2, 0] + chosen, reverse=True)
        if gf2.is_primitive(gf2.poly_from_exponents(exps)):
            return tuple(exps)
    raise ParameterError(f"no primitive polynomial of degree {kappa2} found within {budget} tries")


def make_toy(spec: ToySpec) -> GrainParams:
    if max(spec.kappa, spec.v, spec.kappa1, spec.kappa2) > 24:
        raise ParameterError("toy sizes are limited to 24 bits")
    pad_len = spec.kappa1 + spec.kappa2 - spec.kappa - spec.v
    if pad_len < 0 or pad_len % 2:
        raise ParameterError("kappa1 + kappa2 - kappa - v must be even and non-negative")
    g = resolve_function(spec.g_choice)
    h = resolve_function(spec.h_choice)
    if h.n % 2:
        p0 = (h.n - 1) // 2
        q0 = p0 + 1
        psi = interleave_psi(p0, q0) if p0 >= 2 else tuple(range(h.n))
    else:
        p0 = q0 = h.n // 2
        psi = tuple(range(h.n))
    rng = XorShift64Star(spec.seed)
    tau = find_primitive_tau(spec.kappa2, spec.a, spec.delta, rng)
    A = tuple(sorted({0} | {spec.kappa2 - e for e in tau[1:-1]}))
    req = TapRequest(spec.kappa1, spec.kappa2, spec.delta, g.n, spec.n1, p0, spec.p1, q0, spec.q1, A,
                     rng.next64())
    taps = generate_taps(req)
    p = GrainParams(
        name=f"toy{spec.kappa1}x{spec.kappa2}s{spec.seed}", kappa=spec.kappa, v=spec.v,
        kappa1=spec.kappa1, kappa2=spec.kappa2, tau=tau, S0=taps.S0, S1=taps.S1, P0=taps.P0,
        P1=taps.P1, Q0=taps.Q0, Q1=taps.Q1, g=g, h=h, psi=psi, assembly_order="N-first",
        delta=spec.delta, pad=(1, 0) * (pad_len // 2), init_variant=spec.init_variant,
    )
    report = validate_params(p, strict=True)
    if not report.ok:
        raise ParameterError(f"generated toy fails validation: {report.conditions}")
    return p
