"""Positive definite binary quadratic forms ax^2 + bxy + cy^2 and the right SL2(Z) action."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import matrices as mx
from .congruence import sl2_elements
from .errors import InvalidDiscriminantError
from .matrices import Mat


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.b * self.b - 4 * self.a * self.c >= 0:
            raise ValueError(f"{self.astuple()} is not positive definite")
        if math.gcd(math.gcd(self.a, self.b), self.c) != 1:
            raise ValueError(f"{self.astuple()} is not primitive")

    def astuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class QuadPoint:
    """The point r + s*sqrt(D) of the upper half-plane."""

    r: Fraction
    s: Fraction
    D: int


def check_discriminant(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise InvalidDiscriminantError(f"{D} is not a negative discriminant")


def discriminant(Q: QuadForm) -> int:
    return Q.disc


def in_level(Q: QuadForm, N: int) -> bool:
    """Membership in the forms of level N: leading coefficient prime to N."""
    return math.gcd(Q.a, N) == 1


def principal_form(D: int) -> QuadForm:
    check_discriminant(D)
    if D % 4 == 1:
        return QuadForm(1, 1, (1 - D) // 4)
    return QuadForm(1, 0, -D // 4)


def omega(Q: QuadForm) -> QuadPoint:
    return QuadPoint(Fraction(-Q.b, 2 * Q.a), Fraction(1, 2 * Q.a), Q.disc)


def act_coeffs(abc: tuple[int, int, int], g: Mat) -> tuple[int, int, int]:
    a, b, c = abc
    q, r, s, t = g
    return (
        a * q * q + b * q * s + c * s * s,
        2 * a * q * r + b * (q * t + r * s) + 2 * c * s * t,
        a * r * r + b * r * t + c * t * t,
    )


def act(Q: QuadForm, g: Mat) -> QuadForm:
    """The form (x, y) -> Q(g (x, y)^T); a right action."""
    if mx.det(g) != 1:
        raise ValueError(f"matrix {g} is not unimodular")
    return QuadForm(*act_coeffs(Q.astuple(), g))


def act_mod(abc: tuple[int, int, int], g: Mat, N: int) -> tuple[int, int, int]:
    a, b, c = act_coeffs(abc, g)
    return (a % N, b % N, c % N)


def coeff_x2(Q: QuadForm, g: Mat) -> int:
    """Leading coefficient of act(Q, g): the value Q(q, s) on the first column."""
    return Q(g[0], g[2])


def is_reduced(Q: QuadForm) -> bool:
    a, b, c = Q.a, Q.b, Q.c
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def reduce(Q: QuadForm) -> tuple[QuadForm, Mat]:
    """Reduced form R and g with act(Q, g) == R."""
    a, b, c = Q.a, Q.b, Q.c
    g = mx.IDENTITY

    def translate(a, b, c, g):
        k = (a - b) // (2 * a)
        if k == 0:
            return a, b, c, g
        step = (1, k, 0, 1)
        return (*act_coeffs((a, b, c), step), mx.mul(g, step))

    a, b, c, g = translate(a, b, c, g)
    while a > c:
        a, b, c = c, -b, a
        g = mx.mul(g, mx.S)
        a, b, c, g = translate(a, b, c, g)
    if a == c and b < 0:
        a, b, c = c, -b, a
        g = mx.mul(g, mx.S)
    return QuadForm(a, b, c), g


def equivalent(Q: QuadForm, Q2: QuadForm) -> bool:
    return reduce(Q)[0] == reduce(Q2)[0]


def represent(Q: QuadForm, m: int) -> list[tuple[int, int]]:
    """All integer (x, y) with Q(x, y) = m, sorted."""
    if m < 1:
        return []
    a, b = Q.a, Q.b
    D = Q.disc
    ymax = math.isqrt(4 * a * m // -D)
    out = set()
    for y in range(-ymax, ymax + 1):
        disc = D * y * y + 4 * a * m
        if disc < 0:
            continue
        r = math.isqrt(disc)
        if r * r != disc:
            continue
        for num in (-b * y + r, -b * y - r):
            if num % (2 * a) == 0:
                out.add((num // (2 * a), y))
    return sorted(out)


def automorphs(R: QuadForm) -> list[Mat]:
    """Stabilizer of R in SL2(Z); identity first."""
    cols1 = represent(R, R.a)
    cols2 = represent(R, R.c)
    out = []
    for q, s in cols1:
        for r, t in cols2:
            g = (q, r, s, t)
            if mx.det(g) == 1 and act_coeffs(R.astuple(), g) == R.astuple():
                out.append(g)
    out.sort(key=lambda g: (g != mx.IDENTITY, g != mx.MINUS_IDENTITY, g))
    return out


@lru_cache(maxsize=None)
def reduced_forms(D: int) -> tuple[QuadForm, ...]:
    """All reduced primitive forms of discriminant D, sorted."""
    check_discriminant(D)
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or math.gcd(math.gcd(a, b), c) != 1:
                continue
            if a == c and b < 0:
                continue
            out.append(QuadForm(a, b, c))
        a += 1
    return tuple(sorted(out))


def class_number(D: int) -> int:
    return len(reduced_forms(D))


@lru_cache(maxsize=None)
def residue_form_sources(D: int, N: int) -> dict[tuple[int, int, int], tuple[QuadForm, Mat]]:
    """Map each residue triple of a level-N form to a (reduced form, SL2(Z/N) element) producing it."""
    out: dict[tuple[int, int, int], tuple[QuadForm, Mat]] = {}
    for R in reduced_forms(D):
        for g in sl2_elements(N):
            abc = act_mod(R.astuple(), g, N)
            if math.gcd(abc[0], N) == 1 and abc not in out:
                out[abc] = (R, g)
    return dict(sorted(out.items()))


def residue_forms(D: int, N: int) -> frozenset[tuple[int, int, int]]:
    """The exact set of residues mod N of forms of discriminant D with a prime to N."""
    return frozenset(residue_form_sources(D, N))


def to_json(Q: QuadForm) -> list[int]:
    return [Q.a, Q.b, Q.c]
