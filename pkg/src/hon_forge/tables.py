"""Strength tables for order-2 digital nets built from classical nets.

``sigma_dir`` interlaces a classical (t', m, d*s)-net with factor d.
``sigma_xv`` feeds two such nets over F_{q^2} through the concatenation rule
with the Reed-Solomon chain (0, 2, 4) over F_q and keeps the best split.
Strength is ``sigma = floor(beta n) - t``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from hon_forge.bz import CodeChain, rs_chain

__all__ = [
    "ParamTable",
    "SigmaRow",
    "XVSplit",
    "load_param_table",
    "bundled_param_table",
    "sigma_dir",
    "sigma_xv",
    "render_table",
    "format_sigma_tsv",
]

RULES = ("dir", "xv")


@dataclass
class ParamTable:
    """Best known t' of classical (t', m, s)-nets, keyed by (q, m, s).

    Lookups missing from the table fall back to t' = 0 when s <= q (a
    generalised Faure net exists) and return None otherwise.
    """

    entries: dict[tuple[int, int, int], tuple[int, str]] = field(default_factory=dict)

    def __post_init__(self):
        previous = {}
        for (q, m, s), (t, _) in sorted(self.entries.items()):
            if not 0 <= t <= m:
                raise ValueError(f"t'={t} outside [0, m={m}] at {(q, m, s)}")
            if previous.get((q, m), 0) > t:
                raise ValueError(f"t' decreases as s grows at q={q}, m={m}, s={s}")
            previous[q, m] = t

    def lookup(self, q: int, m: int, s: int) -> int | None:
        if (q, m, s) in self.entries:
            return self.entries[q, m, s][0]
        if s <= q:
            return 0
        return None

    def source(self, q: int, m: int, s: int) -> str:
        if (q, m, s) in self.entries:
            return self.entries[q, m, s][1]
        return "generalised Faure net, s <= q" if s <= q else "unknown"


def _parse_table(text: str) -> ParamTable:
    rows = [r for r in csv.reader(io.StringIO(text), delimiter="\t") if r and any(c.strip() for c in r)]
    if not rows:
        return ParamTable()
    header = [h.strip() for h in rows[0]]
    if header[:4] != ["q", "m", "s", "t"]:
        raise ValueError(f"parameter table header must start with q m s t, got {header}")
    entries = {}
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            q, m, s, t = (int(x) for x in row[:4])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if (q, m, s) in entries:
            raise ValueError(f"line {lineno}: duplicate entry for {(q, m, s)}")
        entries[q, m, s] = (t, row[4].strip() if len(row) > 4 else "")
    return ParamTable(entries)


def load_param_table(path: str | Path) -> ParamTable:
    return _parse_table(Path(path).read_text())


def bundled_param_table() -> ParamTable:
    text = resources.files("hon_forge").joinpath("data/classical_t.tsv").read_text()
    return _parse_table(text)


def sigma_dir(q: int, m: int, s: int, table: ParamTable, alpha: int = 2) -> int | None:
    """Strength of the interlaced (factor alpha) classical net, or None if t' is unknown."""
    t_classical = table.lookup(q, m, alpha * s)
    if t_classical is None:
        return None
    t = alpha * min(m, t_classical + (s * (alpha - 1)) // 2)
    return alpha * m - t


@dataclass(frozen=True)
class XVSplit:
    sigma: int
    widths: tuple[int, ...]
    ms: tuple[int, ...]
    level_sigmas: tuple[int, ...]


def _compositions(total: int, weights: Sequence[int], lo: int = 1) -> Iterable[tuple[int, ...]]:
    """Tuples x >= lo with sum(w * x) == total."""
    if not weights:
        if total == 0:
            yield ()
        return
    w, rest = weights[0], weights[1:]
    for x in range(lo, total // w + 1):
        for tail in _compositions(total - w * x, rest, lo):
            yield (x,) + tail


def sigma_xv(
    q: int, m: int, s: int, table: ParamTable, chain: CodeChain | None = None, alpha: int = 2
) -> XVSplit:
    """Best strength over splits of (s, m) for the concatenation rule.

    Dimensions s_1 <= ... <= s_r have the smallest total ``sum e_u s_u >= s``
    (project down afterwards); ``sum e_u m_u = m``.  Level u contributes
    ``(sigma_u + 1) * delta'_u`` with sigma_u the direct strength over
    F_{q^{e_u}}.  Ties go to the lexicographically smallest (widths, ms).
    """
    chain = rs_chain(q, q, (0, 2, 4)) if chain is None else chain
    e, deltas = chain.e, chain.deltas
    g = math.gcd(*e)
    if m % g:
        raise ValueError(f"m={m} is not reachable with level sizes {e}")
    total = max(s, sum(e))
    while not any(True for _ in _compositions(total, e)):
        total += 1
    best = None
    for widths in _compositions(total, e):
        if any(a > b for a, b in zip(widths, widths[1:])):
            continue
        for ms in _compositions(m, e):
            sig = [sigma_dir(q**eu, mu, su, table, alpha) for eu, mu, su in zip(e, ms, widths)]
            if any(x is None for x in sig):
                continue
            n = alpha * m
            value = min(n, min((x + 1) * d for x, d in zip(sig, deltas)) - 1)
            if best is None or value > best.sigma:
                best = XVSplit(value, widths, ms, tuple(sig))
    if best is None:
        raise ValueError(f"no feasible split for q={q}, m={m}, s={s}")
    return best


@dataclass
class SigmaRow:
    m: int
    values: dict[str, int | None]


def render_table(
    q: int,
    s: int,
    m_range: Iterable[int],
    rules: Sequence[str],
    table: ParamTable,
    alpha: int = 2,
    beta: int = 1,
    chain: CodeChain | None = None,
) -> list[SigmaRow]:
    if beta != 1:
        raise ValueError("only beta = 1 is supported")
    unknown = set(rules) - set(RULES)
    if unknown:
        raise ValueError(f"unknown rules {sorted(unknown)}")
    if "xv" in rules and chain is None:
        chain = rs_chain(q, q, (0, 2, 4))
    rows = []
    for m in m_range:
        values = {}
        if "dir" in rules:
            values["dir"] = sigma_dir(q, m, s, table, alpha)
        if "xv" in rules:
            try:
                values["xv"] = sigma_xv(q, m, s, table, chain, alpha).sigma
            except ValueError:
                values["xv"] = None
        rows.append(SigmaRow(m, values))
    return rows


def format_sigma_tsv(rows: Sequence[SigmaRow], rules: Sequence[str]) -> str:
    cols = [r for r in RULES if r in rules]
    lines = ["\t".join(["m"] + [f"sigma_{r}" for r in cols])]
    for row in rows:
        cells = ["" if row.values.get(r) is None else str(row.values[r]) for r in cols]
        lines.append("\t".join([str(row.m)] + cells))
    return "\n".join(lines) + "\n"
