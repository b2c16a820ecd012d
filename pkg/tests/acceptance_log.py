"""Collects one verdict line per acceptance criterion for the terminal summary."""
LINES = []


def record(number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
    LINES.append(line)
    print(line)
