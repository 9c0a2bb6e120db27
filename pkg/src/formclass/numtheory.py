"""Integer and residue arithmetic: quadratic symbols, square roots mod m, rank-2 HNF."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import DegenerateLatticeError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of |n|."""
    n = abs(n)
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> list[int]:
    return sorted(factorize(n))


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a prime p."""
    if p < 2 or not is_prime(p):
        raise ValueError(f"kronecker symbol needs a prime modulus, got {p}")
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = pow(D % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def sqrt_mod(a: int, m: int) -> Optional[int]:
    """Smallest x in [0, m) with x^2 = a (mod m), or None."""
    if m < 1:
        raise ValueError("modulus must be positive")
    a %= m
    for x in range(m):
        if x * x % m == a:
            return x
    return None


def crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    """Combine congruences x = r_i (mod m_i); moduli need not be coprime."""
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        g = math.gcd(m, n)
        if (r - x) % g:
            raise ValueError("incompatible congruences")
        l = m // g * n
        k = ((r - x) // g) * pow(m // g, -1, n // g) if n // g > 1 else 0
        x = (x + m * k) % l
        m = l
    return x, m


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@lru_cache(maxsize=None)
def unit_group(N: int) -> tuple[int, ...]:
    """Sorted residues of (Z/NZ)^x; (0,) for N = 1."""
    return tuple(t for t in range(N) if math.gcd(t, N) == 1)


def multiplicative_closure(gens: Iterable[int], N: int) -> frozenset[int]:
    out = {1 % N}
    frontier = list(out)
    gens = [g % N for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % N
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError("modulus mismatch")
            return other.value
        return int(other)

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.modulus)

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.modulus)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def is_unit(self) -> bool:
        return math.gcd(self.value, self.modulus) == 1

    def inverse(self) -> Residue:
        return Residue(pow(self.value, -1, self.modulus), self.modulus)


@dataclass(frozen=True)
class Lattice2:
    """Full-rank lattice in Z^2 with row basis ((a, b), (0, d)), a, d > 0, 0 <= b < d."""

    a: int
    b: int
    d: int

    @property
    def basis(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, self.b), (0, self.d)

    @property
    def index(self) -> int:
        return self.a * self.d

    def __contains__(self, v: tuple[int, int]) -> bool:
        x, y = v
        if x % self.a:
            return False
        return (y - (x // self.a) * self.b) % self.d == 0


def hnf2(generators: Iterable[Sequence[int]]) -> Lattice2:
    rows = [[int(x), int(y)] for x, y in generators]
    # eliminate the first coordinate down to a single pivot row
    pivot = None
    while True:
        live = [r for r in rows if r[0] != 0]
        if len(live) <= 1:
            pivot = live[0] if live else None
            break
        live.sort(key=lambda r: abs(r[0]))
        p = live[0]
        for r in live[1:]:
            q = r[0] // p[0]
            r[0] -= q * p[0]
            r[1] -= q * p[1]
    if pivot is None:
        raise DegenerateLatticeError("generators do not span a rank-2 lattice")
    d = 0
    for r in rows:
        if r is not pivot:
            d = math.gcd(d, r[1])
    if d == 0:
        raise DegenerateLatticeError("generators do not span a rank-2 lattice")
    a, b = pivot
    if a < 0:
        a, b = -a, -b
    return Lattice2(a, b % d, d)


@lru_cache(maxsize=None)
def unit_subgroups(N: int) -> tuple[frozenset[int], ...]:
    """All subgroups of (Z/NZ)^x, sorted by (size, elements)."""
    found = {multiplicative_closure((), N)}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for g in unit_group(N):
                K = multiplicative_closure(set(H) | {g}, N)
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return tuple(sorted(found, key=lambda H: (len(H), sorted(H))))
