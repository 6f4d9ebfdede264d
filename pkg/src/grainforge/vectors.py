"""Golden keystream vectors: two fixed (K, IV) pairs per shipped instance."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .engine import GrainParams, bits_to_hex, keystream
from .instances import INSTANCE_NAMES, get_instance

VECTOR_BITS = 256
KEY_PATTERN = bytes.fromhex("0123456789abcdef")
IV_PATTERN = bytes.fromhex("fedcba9876543210")


def _pattern_bits(pattern: bytes, nbits: int) -> list[int]:
    out = []
    j = 0
    while len(out) < nbits:
        byte = pattern[j % len(pattern)]
        out += [(byte >> k) & 1 for k in range(8)]
        j += 1
    return out[:nbits]


def vector_inputs(p: GrainParams) -> list[tuple[str, list[int], list[int]]]:
    return [
        ("zero", [0] * p.kappa, [0] * p.v),
        ("pattern", _pattern_bits(KEY_PATTERN, p.kappa), _pattern_bits(IV_PATTERN, p.v)),
    ]


def vector_text(p: GrainParams, nbits: int = VECTOR_BITS) -> str:
    lines = [f"instance: {p.name}"]
    for label, K, IV in vector_inputs(p):
        lines += [f"case: {label}", f"key: {bits_to_hex(K)}", f"iv: {bits_to_hex(IV)}",
                  f"keystream: {bits_to_hex(keystream(p, K, IV, nbits))}"]
    return "\n".join(lines) + "\n"


def shipped_vector_path(name: str):
    return resources.files("grainforge.data.vectors").joinpath(f"{name}.txt")


def read_vectors(text: str) -> list[dict]:
    """Parse a vector file into dicts with case, key, iv and keystream fields."""
    cases: list[dict] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        key, value = (x.strip() for x in line.split(":", 1))
        if key == "case":
            cases.append({"case": value})
        elif key in ("key", "iv", "keystream"):
            cases[-1][key] = value
    return cases


def write_all(out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in INSTANCE_NAMES:
        path = out_dir / f"{name}.txt"
        path.write_text(vector_text(get_instance(name)), encoding="utf-8")
        written.append(path)
    return written
