"""Finite groups given by an explicit multiplication table."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

from .numtheory import factorize


@dataclass
class ClassGroupTable:
    labels: list[Any]
    table: list[list[int]]
    identity: int = 0
    elements: list[Any] = field(default_factory=list, repr=False)

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def power(self, i: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = self.table[out][i]
        return out

    def inverse(self, i: int) -> int:
        return next(j for j in range(self.order) if self.table[i][j] == self.identity)

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = self.table[x][i]
            k += 1
        return k

    def axiom_failures(self) -> list[str]:
        """Exhaustive check of closure, identity, inverses, associativity and commutativity."""
        n = self.order
        out = []
        rng = range(n)
        tab = self.table
        if any(len(row) != n or any(not 0 <= x < n for x in row) for row in tab):
            return ["table is not closed"]
        for i in rng:
            if tab[self.identity][i] != i or tab[i][self.identity] != i:
                out.append(f"identity fails at {i}")
            if self.identity not in tab[i]:
                out.append(f"{i} has no inverse")
            for j in rng:
                if tab[i][j] != tab[j][i]:
                    out.append(f"{i},{j} do not commute")
                for k in rng:
                    if tab[tab[i][j]][k] != tab[i][tab[j][k]]:
                        out.append(f"associativity fails at {i},{j},{k}")
                        return out
        return out

    def is_subgroup(self, subset: Sequence[int]) -> bool:
        s = set(subset)
        if self.identity not in s:
            return False
        return all(self.table[i][j] in s for i in s for j in s)

    def coset(self, x: int, subset: Sequence[int]) -> frozenset[int]:
        return frozenset(self.table[x][h] for h in subset)

    @cached_property
    def invariant_factors(self) -> list[int]:
        """Invariant factors d_1 | d_2 | ... (> 1) of the abelian group."""
        n = self.order
        partitions: dict[int, list[int]] = {}
        for p, e in factorize(n).items():
            # c_k = #{x : x^(p^k) = 1}; log_p(c_k / c_(k-1)) counts cyclic factors of order >= p^k
            counts = [1]
            k = 0
            while counts[-1] < p**e:
                k += 1
                counts.append(sum(1 for i in range(n) if self.power(i, p**k) == self.identity))
            ge = []
            for j in range(1, len(counts)):
                ratio = counts[j] // counts[j - 1]
                m = 0
                while ratio > 1:
                    ratio //= p
                    m += 1
                ge.append(m)
            exps = []
            for j, m in enumerate(ge, start=1):
                nxt = ge[j] if j < len(ge) else 0
                exps += [j] * (m - nxt)
            partitions[p] = sorted(exps, reverse=True)
        width = max((len(v) for v in partitions.values()), default=0)
        factors = []
        for idx in range(width):
            d = 1
            for p, exps in partitions.items():
                if idx < len(exps):
                    d *= p ** exps[idx]
            factors.append(d)
        return sorted(factors)

    def to_json(self) -> dict:
        n = self.order
        return {
            "order": n,
            "identity": self.identity,
            "table": [[i, j, self.table[i][j]] for i in range(n) for j in range(n)],
            "invariant_factors": self.invariant_factors,
        }
