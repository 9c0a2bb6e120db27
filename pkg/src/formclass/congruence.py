"""Congruence subgroups between Gamma_1(N) and SL2(Z), handled through their images mod N.

Every such group contains the principal congruence subgroup Gamma(N), so it is the full
preimage of its image in SL2(Z/NZ); all group-theoretic questions become finite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

from . import matrices as mx
from .errors import GroupSpecError, NoWitnessError
from .matrices import Mat
from .numtheory import ext_gcd, factorize, is_squarefree, multiplicative_closure, prime_factors, unit_group, unit_subgroups


@lru_cache(maxsize=None)
def sl2_elements(N: int) -> tuple[Mat, ...]:
    """SL2(Z/NZ) as sorted residue tuples."""
    out = []
    rng = range(N)
    for q in rng:
        for r in rng:
            for s in rng:
                for t in rng:
                    if (q * t - r * s) % N == 1 % N:
                        out.append((q, r, s, t))
    return tuple(out)


def gl2_order(N: int) -> int:
    n = N**4
    for p in factorize(N):
        n = n * (p - 1) * (p * p - 1) // (p**3)
    return n


def sl2_order(N: int) -> int:
    n = N**3
    for p in factorize(N):
        n = n * (p * p - 1) // (p * p)
    return n


def identity_mod(N: int) -> Mat:
    return mx.reduce(mx.IDENTITY, N)


@dataclass(frozen=True)
class ResidueMatrix:
    q: int
    r: int
    s: int
    t: int
    N: int

    def __post_init__(self):
        vals = tuple(x % self.N for x in (self.q, self.r, self.s, self.t))
        for name, v in zip("qrst", vals):
            object.__setattr__(self, name, v)
        if math.gcd(mx.det(vals), self.N) != 1:
            raise ValueError("determinant is not a unit")

    @property
    def entries(self) -> Mat:
        return (self.q, self.r, self.s, self.t)


class FiniteMatrixGroup:
    """Subgroup of GL2(Z/NZ) generated by residue matrices; elements materialized on demand."""

    def __init__(self, N: int, generators: Iterable[Mat], elements: Optional[Iterable[Mat]] = None):
        self.N = N
        self.generators = tuple(dict.fromkeys(mx.reduce(g, N) for g in generators))
        for g in self.generators:
            if math.gcd(mx.det(g), N) != 1:
                raise ValueError(f"{g} is not invertible mod {N}")
        if elements is not None:
            self.__dict__["elements"] = frozenset(mx.reduce(e, N) for e in elements)

    @classmethod
    def from_elements(cls, N: int, elements: Iterable[Mat]) -> FiniteMatrixGroup:
        elements = frozenset(mx.reduce(e, N) for e in elements)
        return cls(N, _generating_subset(N, elements), elements)

    @cached_property
    def elements(self) -> frozenset[Mat]:
        return _closure(self.N, self.generators)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g: Mat) -> bool:
        return mx.reduce(g, self.N) in self.elements

    def __eq__(self, other):
        return isinstance(other, FiniteMatrixGroup) and self.N == other.N and self.elements == other.elements

    def __hash__(self):
        return hash((self.N, self.elements))

    def __le__(self, other: FiniteMatrixGroup) -> bool:
        return self.N == other.N and self.elements <= other.elements

    def determinants(self) -> frozenset[int]:
        return frozenset(mx.det(g) % self.N for g in self.elements)

    def sorted_elements(self) -> list[Mat]:
        return sorted(self.elements)


def _closure(N: int, generators: Sequence[Mat]) -> frozenset[Mat]:
    seen = {identity_mod(N)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = mx.mul_mod(x, g, N)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _generating_subset(N: int, elements: frozenset[Mat]) -> list[Mat]:
    gens: list[Mat] = []
    span = {identity_mod(N)}
    for g in sorted(elements):
        if g not in span:
            gens.append(g)
            span = set(_closure(N, gens))
            if len(span) == len(elements):
                break
    return gens


@dataclass(frozen=True, eq=False)
class CongruenceGroup:
    """Gamma_1(N) <= Gamma <= SL2(Z), determined by its image mod N.

    ``generators`` are integer determinant-one matrices whose reductions generate the image.
    """

    level: int
    generators: tuple[Mat, ...]
    label: str = ""
    image: FiniteMatrixGroup = field(default=None, repr=False)

    def __post_init__(self):
        for g in self.generators:
            if mx.det(g) != 1:
                raise ValueError(f"generator {g} does not have determinant 1")
        if self.image is None:
            gens = (mx.T, *self.generators)
            object.__setattr__(self, "image", FiniteMatrixGroup(self.level, gens))
        if mx.reduce(mx.T, self.level) not in self.image:
            raise ValueError("image does not contain the unipotent subgroup")

    def __eq__(self, other):
        return isinstance(other, CongruenceGroup) and self.image == other.image

    def __hash__(self):
        return hash(self.image)

    def __str__(self):
        return self.label or f"group@{self.level}"

    def __len__(self):
        return len(self.image)

    def index(self) -> int:
        return sl2_order(self.level) // len(self.image)


def from_image(N: int, elements: Iterable[Mat], label: str = "") -> CongruenceGroup:
    img = FiniteMatrixGroup.from_elements(N, elements)
    gens = tuple(lift(g, N) for g in img.generators)
    return CongruenceGroup(N, gens, label, img)


def full_sl2(N: int) -> CongruenceGroup:
    img = FiniteMatrixGroup(N, (mx.T, mx.S), sl2_elements(N))
    return CongruenceGroup(N, (mx.T, mx.S), f"sl2:{N}", img)


def gamma1(N: int) -> CongruenceGroup:
    return CongruenceGroup(N, (mx.T,), f"gamma1:{N}")


def gamma0_image(M: int, N: int) -> CongruenceGroup:
    if M < 1 or N % M:
        raise GroupSpecError(f"gamma0 level {M} does not divide {N}")
    if M == 1:
        full = full_sl2(N)
        return CongruenceGroup(N, full.generators, f"gamma0:1@{N}", full.image)
    elems = [g for g in sl2_elements(N) if g[2] % M == 0]
    return from_image(N, elems, f"gamma0:{M}@{N}")


def gammaG(G: Iterable[int], N: int) -> CongruenceGroup:
    G = frozenset(t % N for t in G)
    if not G or any(math.gcd(t, N) != 1 for t in G):
        raise GroupSpecError("G must consist of units")
    if multiplicative_closure(G, N) != G:
        raise GroupSpecError(f"{sorted(G)} is not a subgroup of the units mod {N}")
    elems = [g for g in sl2_elements(N) if g[2] == 0 and g[0] in G]
    return from_image(N, elems, f"gammaG:{N}:" + ",".join(map(str, sorted(G))))


def generated(N: int, gens: Sequence[Mat]) -> CongruenceGroup:
    body = json.dumps([list(g) for g in gens], separators=(",", ":"))
    return CongruenceGroup(N, tuple(tuple(g) for g in gens), f"gens:{N}:{body}")


def with_minus_identity(G: CongruenceGroup) -> CongruenceGroup:
    N = G.level
    minus = mx.reduce(mx.MINUS_IDENTITY, N)
    elems = set(G.image.elements) | {mx.mul_mod(minus, g, N) for g in G.image.elements}
    return from_image(N, elems, f"<{G.label},-I>")


def contains_minus_identity(G: CongruenceGroup) -> bool:
    return mx.MINUS_IDENTITY in G.image


def parse_group(spec: str) -> CongruenceGroup:
    """Parse ``sl2:N``, ``gamma1:N``, ``gamma0:M@N``, ``gammaG:N:t1,t2``, ``gens:N:[[q,r,s,t],...]``."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "sl2":
            return full_sl2(_level(rest))
        if kind == "gamma1":
            return gamma1(_level(rest))
        if kind == "gamma0":
            M, _, N = rest.partition("@")
            return gamma0_image(int(M), _level(N))
        if kind == "gammaG":
            N, _, ts = rest.partition(":")
            return gammaG([int(t) for t in ts.split(",") if t.strip()], _level(N))
        if kind == "gens":
            N, _, body = rest.partition(":")
            mats = json.loads(body)
            gens = []
            for m in mats:
                if len(m) != 4:
                    raise GroupSpecError(f"matrix {m} must have 4 entries")
                if mx.det(tuple(m)) != 1:
                    raise GroupSpecError(f"matrix {m} does not have determinant 1")
                gens.append(tuple(int(x) for x in m))
            return generated(_level(N), gens)
    except GroupSpecError:
        raise
    except (ValueError, json.JSONDecodeError) as exc:
        raise GroupSpecError(f"cannot parse group spec {spec!r}: {exc}") from exc
    raise GroupSpecError(f"unknown group spec {spec!r}")


def _level(text: str) -> int:
    N = int(text)
    if N < 1:
        raise GroupSpecError("level must be positive")
    return N


def member(G: CongruenceGroup, g: Mat) -> bool:
    if mx.det(g) != 1:
        raise ValueError(f"{g} does not have determinant 1")
    return mx.reduce(g, G.level) in G.image.elements


def _centered(x: int, N: int) -> int:
    x %= N
    return x - N if 2 * x > N else x


def lift(m: Mat | ResidueMatrix, N: Optional[int] = None) -> Mat:
    """Integer determinant-one matrix reducing to m mod N."""
    if isinstance(m, ResidueMatrix):
        N = m.N
        m = m.entries
    if N is None:
        raise ValueError("modulus required")
    q, r, s, t = (x % N for x in m)
    if (q * t - r * s - 1) % N:
        raise ValueError("determinant is not 1 mod N")
    c = tuple(_centered(x, N) for x in (q, r, s, t))
    if mx.det(c) == 1:
        return c
    # bottom row: a coprime integer pair congruent to (s, t)
    s0, t0 = c[2], c[3]
    if t0 == 0:
        t0 = N
    k = 0
    while math.gcd(s0 + k * N, t0) != 1:
        k = -k if k > 0 else -k + 1
    s1 = s0 + k * N
    # top row: particular solution, then shift by a multiple of the bottom row
    _, x, y = ext_gcd(t0, s1)  # x*t0 + y*s1 = 1
    q0, r0 = x, -y
    _, u, v = ext_gcd(s1, t0)
    lam = (u * (q - q0) + v * (r - r0)) % N
    if 2 * lam > N:
        lam -= N
    out = (q0 + lam * s1, r0 + lam * t0, s1, t0)
    assert mx.det(out) == 1 and mx.reduce(out, N) == (q, r, s, t)
    return out


def coset_reps(G: CongruenceGroup, side: str = "right") -> list[Mat]:
    """Lifted representatives of the cosets G*g (side="right") or g*G (side="left") in SL2(Z)."""
    N = G.level
    img = G.image.elements
    ident = identity_mod(N)
    order = [ident] + [g for g in sl2_elements(N) if g != ident]
    covered: set[Mat] = set()
    reps = []
    for g in order:
        if g in covered:
            continue
        reps.append(lift(g, N))
        if side == "right":
            covered.update(mx.mul_mod(h, g, N) for h in img)
        else:
            covered.update(mx.mul_mod(g, h, N) for h in img)
    return reps


def contained_in_gamma0(G: CongruenceGroup, M: int) -> bool:
    N = G.level
    if N % M:
        return False  # Gamma_1(N) already has an element with lower-left entry N
    return all(g[2] % M == 0 for g in G.image.elements)


def not_gamma0_witness(G: CongruenceGroup, M: int) -> tuple[int, Mat]:
    """A prime p | M and [[q, r], [s, t]] in G with p | q and p not dividing s.

    Requires G not inside Gamma_0(M) and M >= 2 square-free. Starts from any element whose
    lower-left entry is nonzero mod M and left-multiplies by a power of T.
    """
    if M < 2 or not is_squarefree(M):
        raise ValueError("M must be a square-free integer >= 2")
    if contained_in_gamma0(G, M):
        raise NoWitnessError(f"{G} is contained in Gamma_0({M})")
    N = G.level
    below = (1, 0, N, 1)
    candidates = list(G.generators)
    candidates += [lift(g, N) for g in G.image.sorted_elements()]
    candidates += [mx.mul(g, below) for g in candidates]
    for g0 in candidates:
        q0, r0, s0, t0 = g0
        if s0 % M == 0:
            continue
        p = next(p for p in prime_factors(M) if s0 % p)
        k = (-q0 * pow(s0, -1, p)) % p
        g = mx.mul(mx.power(mx.T, k), g0)
        assert g[0] % p == 0 and g[2] % p and member(G, g)
        return p, g
    raise NoWitnessError(f"no element of {G} has lower-left entry prime to {M}")


def units_subgroup_closure(A: Iterable[int], N: int) -> tuple[frozenset[int], int, bool]:
    """Multiplicative closure of A in (Z/NZ)^x, its index, and whether A was already closed."""
    A = frozenset(a % N for a in A)
    if any(math.gcd(a, N) != 1 for a in A):
        raise ValueError("all elements must be units")
    H = multiplicative_closure(A, N)
    return H, len(unit_group(N)) // len(H), H == A


EXOTIC_SPECS = ("gens:5:[[-1,0,0,-1]]", "gens:6:[[1,0,3,1]]")


def curated_family(N: int, exotics: Sequence[str] = EXOTIC_SPECS) -> list[CongruenceGroup]:
    """Gamma_1(N), Gamma_0(d) for d | N, Gamma_G for every subgroup G, SL2, and any exotic specs of level N."""
    out = [gamma1(N)]
    out += [gamma0_image(d, N) for d in range(1, N + 1) if N % d == 0]
    out += [gammaG(H, N) for H in unit_subgroups(N)] if N > 1 else []
    out.append(full_sl2(N))
    out += [parse_group(s) for s in exotics if _level(s.split(":")[1]) == N]
    return out
