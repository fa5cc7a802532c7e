"""Expansion files (``HEXP v1``), key/value reports and plot-data CSVs."""
import csv
import io
import re

import numpy as np

from .hermite import HermiteExpansion
from .multiindex import graded_enumerate

MAGIC = "HEXP"
VERSION = "v1"
_HEADER = re.compile(r"^HEXP\s+v1\s+dim=(\d+)\s+degree=(\d+)\s*$")


def _num(x):
    return format(float(x), ".17g")


def dumps_expansion(F, include_zeros=False):
    lines = [f"{MAGIC} {VERSION} dim={F.dim} degree={F.degree}"]
    for alpha in graded_enumerate(F.dim, F.degree):
        c = F.coeffs[alpha]
        if c == 0 and not include_zeros:
            continue
        lines.append(f"{','.join(map(str, alpha))} {_num(c.real)} {_num(c.imag)}")
    return "\n".join(lines) + "\n"


def loads_expansion(text):
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ValueError("empty expansion file")
    m = _HEADER.match(rows[0].strip())
    if not m:
        raise ValueError(f"bad header {rows[0]!r}")
    dim, degree = int(m.group(1)), int(m.group(2))
    box = np.zeros((degree + 1,) * dim, dtype=np.complex128)
    seen = set()
    for ln in rows[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"bad record {ln!r}")
        alpha = tuple(int(t) for t in parts[0].split(","))
        if len(alpha) != dim or min(alpha) < 0:
            raise ValueError(f"index {alpha} does not fit dim={dim}")
        if sum(alpha) > degree:
            raise ValueError(f"index {alpha} exceeds degree={degree}")
        if alpha in seen:
            raise ValueError(f"duplicate record for {alpha}")
        seen.add(alpha)
        box[alpha] = complex(float(parts[1]), float(parts[2]))
    return HermiteExpansion(dim, degree, box)


def write_expansion(F, path, include_zeros=False):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_expansion(F, include_zeros))


def read_expansion(path):
    with open(path, encoding="utf-8") as fh:
        return loads_expansion(fh.read())


class Report:
    """Sectioned key/value report: ``[inputs]``, ``[results]``, ``[fit]``, ``[verdict]``."""

    SECTIONS = ("inputs", "results", "fit", "verdict")

    def __init__(self, command):
        self.command = command
        self.sections = {name: {} for name in self.SECTIONS}

    def add(self, section, key, value):
        self.sections[section][key] = value

    def update(self, section, **items):
        self.sections[section].update(items)

    @staticmethod
    def _fmt(value):
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, (float, np.floating)):
            return _num(value)
        if isinstance(value, (complex, np.complexfloating)):
            return f"{_num(value.real)}{'+' if value.imag >= 0 else '-'}{_num(abs(value.imag))}j"
        if isinstance(value, (list, tuple, np.ndarray)):
            return "[" + ", ".join(Report._fmt(v) for v in value) + "]"
        return str(value)

    def dumps(self):
        out = [f"# hermitex report: {self.command}"]
        for name in self.SECTIONS:
            out.append(f"[{name}]")
            for key, value in self.sections[name].items():
                out.append(f"{key} = {self._fmt(value)}")
            out.append("")
        return "\n".join(out)

    def write(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())


def loads_report(text):
    sections, cur = {}, None
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if ln.startswith("[") and ln.endswith("]"):
            cur = sections.setdefault(ln[1:-1], {})
            continue
        key, _, value = ln.partition(" = ")
        cur[key] = value
    return sections


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
