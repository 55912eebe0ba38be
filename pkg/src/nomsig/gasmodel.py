"""Precompile gas-cost model for the escrow contract's verification path.

Prices only what the priced precompiles charge for: one batched pairing
check (base + per-pair) plus curve additions, and the ecrecover call on
the trigger side. Scalar multiplications performed during token
verification carry no price in the table; they are reported as an
unpriced count so the report stays honest about what it omits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .scheme import OpCounts

# ETH per gas unit snapshot: 0.00629058 ETH for a 355,400 gas verification
DEFAULT_GAS_PRICE_ETH = Fraction(629058, 10**8) / 355400


class GasModelError(Exception):
    pass


@dataclass(frozen=True)
class CostTable:
    pairing_base: int = 45000
    pairing_per_pair: int = 34000
    ec_add: int = 150
    ecrecover: int = 3000

    def __post_init__(self):
        for name in ("pairing_base", "pairing_per_pair", "ec_add", "ecrecover"):
            if getattr(self, name) < 0:
                raise GasModelError(f"negative cost for {name}")

    @classmethod
    def from_file(cls, path: str) -> "CostTable":
        with open(path) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise GasModelError("cost table file must hold a JSON object")
        known = {"pairing_base", "pairing_per_pair", "ec_add", "ecrecover"}
        unknown = set(raw) - known
        if unknown:
            raise GasModelError(f"unknown cost table fields: {sorted(unknown)}")
        return cls(**{k: int(v) for k, v in raw.items()})


@dataclass(frozen=True)
class GasReport:
    tkverify_gas: int
    ecrecover_gas: int
    pairing_pairs: int = 0
    ec_additions: int = 0
    unpriced_scalar_mults: int = 0
    eth_cost: Optional[Fraction] = None

    @property
    def total_gas(self) -> int:
        return self.tkverify_gas + self.ecrecover_gas


def price_pairing_call(n: int, table: CostTable = CostTable()) -> int:
    """Gas for one batched pairing check over n pairs."""
    if n < 0:
        raise GasModelError("pair count must be non-negative")
    return table.pairing_base + table.pairing_per_pair * n


def meter_tkverify(counts: OpCounts, table: CostTable = CostTable()) -> int:
    """Gas for an instrumented token verification: all pairings in one batched call."""
    return price_pairing_call(counts.pairing_pairs, table) + table.ec_add * counts.ec_additions


def build_report(
    counts: OpCounts,
    table: CostTable = CostTable(),
    gas_price: Optional[Fraction] = None,
) -> GasReport:
    tkv = meter_tkverify(counts, table)
    eth = None
    if gas_price is not None:
        eth = Fraction(gas_price) * (tkv + table.ecrecover)
    return GasReport(
        tkverify_gas=tkv,
        ecrecover_gas=table.ecrecover,
        pairing_pairs=counts.pairing_pairs,
        ec_additions=counts.ec_additions,
        unpriced_scalar_mults=counts.scalar_mults,
        eth_cost=eth,
    )


def ratio_vs_ecrecover(report: GasReport) -> Fraction:
    if report.ecrecover_gas <= 0:
        raise GasModelError("ecrecover gas must be positive")
    return Fraction(report.tkverify_gas, report.ecrecover_gas)
