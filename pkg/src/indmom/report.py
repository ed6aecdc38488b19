"""Deterministic report formatting: 17 significant digits, annotated lines."""

from __future__ import annotations

from typing import IO, List, Optional


def fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def fmt_complex(z: complex) -> str:
    z = complex(z)
    re, im = fmt_float(z.real), fmt_float(abs(z.imag))
    sign = "+" if z.imag >= 0 else "-"
    return f"{re}{sign}{im}i"


class Report:
    """Accumulates annotated key/value lines; renders text or CSV."""

    def __init__(self, title: str, config_line: str, config_hash: str, seed: int):
        self.title = title
        self.header = [
            f"# indmom report: {title}",
            f"# config: {config_line}",
            f"# config_hash: {config_hash}",
            f"# seed: {seed}",
        ]
        self.rows: List[tuple] = []

    def add(self, key: str, value, N: Optional[int] = None,
            tol: Optional[float] = None) -> None:
        if isinstance(value, complex):
            rendered = fmt_complex(value)
        elif isinstance(value, float):
            rendered = fmt_float(value)
        elif isinstance(value, bool):
            rendered = "true" if value else "false"
        else:
            rendered = str(value)
        note = ""
        if N is not None or tol is not None:
            bits = []
            if N is not None:
                bits.append(f"N={N}")
            if tol is not None:
                bits.append(f"tol={fmt_float(tol)}")
            note = " [" + " ".join(bits) + "]"
        self.rows.append((key, rendered, note))

    def render_text(self) -> str:
        lines = list(self.header)
        for key, rendered, note in self.rows:
            lines.append(f"{key} = {rendered}{note}")
        return "\n".join(lines) + "\n"

    def render_csv(self) -> str:
        lines = ["key,value,annotation"]
        for key, rendered, note in self.rows:
            lines.append(f"{key},{rendered},{note.strip(' []')}")
        return "\n".join(lines) + "\n"

    def write(self, stream: IO[str], fmt: str = "text") -> None:
        stream.write(self.render_csv() if fmt == "csv" else self.render_text())
