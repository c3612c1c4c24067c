"""Monomial orders as integer weight matrices.

Each order is encoded by a weight matrix ``W`` with entries in {-1, 0, 1};
``u > v`` iff the vector ``W u`` is lexicographically larger than ``W v``.
The rows are folded into a single Python integer (radix ``2**64``), so the
sort key of a monomial is *linear* in its exponent vector: the key of a
product is the sum of the keys.  The Groebner engine relies on this.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

RADIX_BITS = 64


@dataclass(frozen=True)
class MonomialOrder:
    kind: str  # "lex" | "degrevlex" | "block"
    split: int | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and (self.split is None or self.split < 1):
            raise ValueError("block order needs a positive split index")

    @classmethod
    def parse(cls, text) -> "MonomialOrder":
        if isinstance(text, MonomialOrder):
            return text
        text = text.strip()
        m = re.fullmatch(r"block\(\s*(\d+)\s*\)", text)
        if m:
            return cls("block", int(m.group(1)))
        return cls(text)

    def __str__(self):
        if self.kind == "block":
            return f"block({self.split})"
        return self.kind

    def rows(self, n: int) -> list[list[int]]:
        if self.kind == "lex":
            return [[1 if j == i else 0 for j in range(n)] for i in range(n)]
        if self.kind == "degrevlex":
            return _drl_rows(0, n, n)
        k = self.split
        if k >= n:
            return _drl_rows(0, n, n)
        return _drl_rows(0, k, n) + _drl_rows(k, n, n)

    def key_function(self, n: int):
        """Return ``exps -> int`` realising this order on ``n`` variables."""
        rows = self.rows(n)
        m = len(rows)
        weights = [0] * n
        for r, row in enumerate(rows):
            scale = 1 << (RADIX_BITS * (m - 1 - r))
            for j, w in enumerate(row):
                if w:
                    weights[j] += w * scale
        return weights


def _drl_rows(lo: int, hi: int, n: int) -> list[list[int]]:
    rows = [[1 if lo <= j < hi else 0 for j in range(n)]]
    for i in range(hi - 1, lo, -1):
        rows.append([-1 if j == i else 0 for j in range(n)])
    return rows


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")


def block(k: int) -> MonomialOrder:
    return MonomialOrder("block", k)
