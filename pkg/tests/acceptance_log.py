"""Collects the one-line acceptance verdicts so the terminal summary can print them in order."""

LINES: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> bool:
    line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} {detail}"
    LINES[number] = line
    print(line)
    return ok
