"""Transceiver CAPEX of the generic and targeted rack fabrics.

All arithmetic is done on :class:`fractions.Fraction` so ratios come out exact.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Rational
from typing import Iterable, NamedTuple

SWEEP_HEADER = ("n", "y", "capex_generic", "capex_targeted", "ratio")


def _exact(value) -> Fraction:
    if isinstance(value, float):
        # Decimal literal semantics: 0.1 means 1/10, not the nearest binary float.
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class CostParams:
    n_nodes: int
    generic_cap_gbps: Rational | float = 800
    targeted_t: int = 4
    targeted_rate_gbps: Rational | float = 100
    price_generic_per_gbps: Rational | float = 1
    price_targeted_per_gbps: Rational | float = 1

    def __post_init__(self):
        if not isinstance(self.n_nodes, int) or self.n_nodes < 2:
            raise ValueError("n_nodes must be an integer >= 2")
        if not isinstance(self.targeted_t, int) or self.targeted_t < 1:
            raise ValueError("targeted_t must be a positive integer")
        for name in ("generic_cap_gbps", "targeted_rate_gbps",
                     "price_generic_per_gbps", "price_targeted_per_gbps"):
            if not _exact(getattr(self, name)) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def targeted_node_gbps(self) -> Fraction:
        return 2 * self.targeted_t * _exact(self.targeted_rate_gbps)


def capex_generic(p: CostParams) -> Fraction:
    """One transceiver per end of every full-mesh link: N(N-1) transceivers."""
    n = p.n_nodes
    return n * (n - 1) * _exact(p.generic_cap_gbps) * _exact(p.price_generic_per_gbps)


def capex_targeted(p: CostParams) -> Fraction:
    return p.n_nodes * p.targeted_node_gbps * _exact(p.price_targeted_per_gbps)


def cost_ratio(p: CostParams) -> Fraction:
    """Generic CAPEX at 1 $/Gbps over targeted CAPEX at the targeted price."""
    return capex_generic(replace(p, price_generic_per_gbps=1)) / capex_targeted(p)


class SweepRow(NamedTuple):
    n: int
    y: Fraction
    capex_generic: Fraction
    capex_targeted: Fraction
    ratio: Fraction


def sweep(n_values: Iterable[int], y_values: Iterable, p: CostParams | None = None) -> list[SweepRow]:
    """Cartesian sweep over node counts and targeted prices, ascending (N, Y)."""
    base = p or CostParams(n_nodes=2)
    ys = sorted({_exact(y) for y in y_values})
    rows = []
    for n in sorted(set(n_values)):
        for y in ys:
            q = replace(base, n_nodes=n, price_targeted_per_gbps=y)
            rows.append(SweepRow(n, y, capex_generic(q), capex_targeted(q), cost_ratio(q)))
    return rows


def format_number(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return repr(float(x))


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for row in rows:
        w.writerow([format_number(v) for v in row])
    return buf.getvalue()


def parse_sweep_csv(text: str) -> list[SweepRow]:
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != SWEEP_HEADER:
        raise ValueError(f"expected header {','.join(SWEEP_HEADER)}")
    return [SweepRow(int(r[0]), *(Fraction(v) for v in r[1:])) for r in reader if r]
