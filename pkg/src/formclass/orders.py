"""Imaginary quadratic orders, their fractional ideals, and ray class computations.

Elements of an order O of discriminant D are written u + v*tau over the basis [1, tau] with
tau = (-b0 + sqrt(D))/2, where x^2 + b0*xy + c0*y^2 is the principal form. A fractional
ideal is stored as scale * (aZ + ((-b + sqrt(D))/2)Z) with -a < b <= a.

Ray class test. Let I be a fractional ideal prime to M = ell*N and I = lam*O. Writing
lam = alpha/m with alpha in O and m the least positive integer with m*lam in O, the
primality of I to M forces gcd(m, M) = 1. The group generated by nu*O with nu = z (mod M*O),
z an integer = 1 (mod N), consists of the lam*O with lam = nu1/nu2 of that shape:
  - given such lam, put m = nu2*conj(nu2) and alpha = nu1*conj(nu2); then alpha = m*z (mod M*O)
    for an integer z = 1 (mod N);
  - conversely, if alpha = m*z (mod M*O) then with m' = m^-1 (mod M), lam = (alpha*m')/(m*m')
    and both factors are of the required shape.
Independence from the choice of m follows since m is invertible mod M. The generator lam is
only fixed up to units, so I lies in the subgroup iff some eps*alpha = u + v*tau has
v = 0 (mod M) and u = m (mod N). For ell = 1 this is the congruence nu = 1 (mod N*O).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import count
from typing import Iterable, Optional

from .errors import InvalidDiscriminantError, OracleBoundError
from .forms import QuadForm, act, check_discriminant, principal_form, reduce, represent
from .grouptable import ClassGroupTable
from .numtheory import ext_gcd, factorize, hnf2


def is_fundamental(d: int) -> bool:
    if d % 4 == 1:
        return all(e == 1 for e in factorize(d).values())
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and all(e == 1 for e in factorize(m).values())
    return False


@dataclass(frozen=True)
class ImagQuadOrder:
    D: int
    dK: int
    ell: int

    @cached_property
    def b0(self) -> int:
        return principal_form(self.D).b

    @cached_property
    def c0(self) -> int:
        return principal_form(self.D).c

    def elem(self, u, v=0) -> QuadElem:
        return QuadElem(self, Fraction(u), Fraction(v))

    @property
    def tau(self) -> QuadElem:
        return self.elem(0, 1)

    @property
    def is_maximal(self) -> bool:
        return self.ell == 1

    def __str__(self):
        return f"O({self.D})"


@lru_cache(maxsize=None)
def order_from_disc(D: int) -> ImagQuadOrder:
    check_discriminant(D)
    f = math.isqrt(-D)
    while f >= 1:
        if D % (f * f) == 0 and is_fundamental(D // (f * f)):
            return ImagQuadOrder(D, D // (f * f), f)
        f -= 1
    raise InvalidDiscriminantError(f"{D} has no fundamental part")


def maximal_order(O: ImagQuadOrder) -> ImagQuadOrder:
    return order_from_disc(O.dK)


@dataclass(frozen=True)
class QuadElem:
    order: ImagQuadOrder
    u: Fraction
    v: Fraction

    def __mul__(self, other):
        if not isinstance(other, QuadElem):
            other = self.order.elem(other)
        b0, c0 = self.order.b0, self.order.c0
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        return QuadElem(self.order, u1 * u2 - c0 * v1 * v2, u1 * v2 + u2 * v1 - b0 * v1 * v2)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, QuadElem):
            other = self.order.elem(other)
        return QuadElem(self.order, self.u + other.u, self.v + other.v)

    def __sub__(self, other):
        if not isinstance(other, QuadElem):
            other = self.order.elem(other)
        return QuadElem(self.order, self.u - other.u, self.v - other.v)

    def __neg__(self):
        return QuadElem(self.order, -self.u, -self.v)

    def conj(self) -> QuadElem:
        return QuadElem(self.order, self.u - self.order.b0 * self.v, -self.v)

    def norm(self) -> Fraction:
        O = self.order
        return self.u * self.u - O.b0 * self.u * self.v + O.c0 * self.v * self.v

    def is_integral(self) -> bool:
        return self.u.denominator == 1 and self.v.denominator == 1

    def denominator(self) -> int:
        return math.lcm(self.u.denominator, self.v.denominator)

    def coords(self) -> tuple[Fraction, Fraction]:
        return (self.u, self.v)

    def __str__(self):
        return f"{self.u}+{self.v}*tau"


@dataclass(frozen=True)
class OIdealLat:
    order: ImagQuadOrder
    scale: Fraction
    a: int
    b: int

    def __post_init__(self):
        a, b = self.a, self.b
        if a <= 0 or self.scale <= 0:
            raise ValueError("ideal needs a > 0 and positive scale")
        b = (b + a - 1) % (2 * a) - a + 1
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "scale", Fraction(self.scale))
        if (b * b - self.order.D) % (4 * a):
            raise ValueError(f"({a}, {b}) does not describe an ideal of {self.order}")

    @property
    def c(self) -> int:
        return (self.b * self.b - self.order.D) // (4 * self.a)

    @property
    def shift(self) -> int:
        """Integer B with (-b + sqrt(D))/2 = B + tau."""
        return (self.order.b0 - self.b) // 2

    def basis(self) -> tuple[QuadElem, QuadElem]:
        O = self.order
        return (O.elem(self.a * self.scale), O.elem(self.shift * self.scale, self.scale))

    def primitive(self) -> OIdealLat:
        return OIdealLat(self.order, Fraction(1), self.a, self.b)

    def form(self) -> QuadForm:
        return QuadForm(self.a, self.b, self.c)

    def is_integral(self) -> bool:
        return all(e.is_integral() for e in self.basis())

    def to_json(self) -> dict:
        return {
            "scale": [self.scale.numerator, self.scale.denominator],
            "a": self.a,
            "b": self.b,
            "disc": self.order.D,
        }

    def __str__(self):
        return f"{self.scale}*[{self.a}, ({-self.b}+sqrt({self.order.D}))/2]"


def ideal_from_json(data: dict) -> OIdealLat:
    num, den = data["scale"]
    return OIdealLat(order_from_disc(data["disc"]), Fraction(num, den), data["a"], data["b"])


def ideal_from_generators(O: ImagQuadOrder, gens: Iterable[QuadElem]) -> OIdealLat:
    """The O-module spanned over Z by gens, which must be an O-ideal lattice."""
    gens = list(gens)
    den = math.lcm(*(g.denominator() for g in gens))
    L = hnf2([(int(g.v * den), int(g.u * den)) for g in gens])
    C, B, A = L.a, L.b, L.d
    if A % C or B % C:
        raise ValueError("lattice is not an O-module")
    b = O.b0 - 2 * (B // C)
    return OIdealLat(O, Fraction(C, den), A // C, b)


def unit_ideal(O: ImagQuadOrder) -> OIdealLat:
    return OIdealLat(O, Fraction(1), 1, O.b0)


def principal_ideal(alpha: QuadElem) -> OIdealLat:
    if alpha.u == 0 and alpha.v == 0:
        raise ValueError("zero element")
    return ideal_from_generators(alpha.order, [alpha, alpha * alpha.order.tau])


def ideal_from_form(Q: QuadForm, O: Optional[ImagQuadOrder] = None) -> OIdealLat:
    """The lattice Z*omega_Q + Z = (1/a) * (aZ + ((-b + sqrt(D))/2)Z)."""
    O = O or order_from_disc(Q.disc)
    if O.D != Q.disc:
        raise ValueError("discriminant mismatch")
    return OIdealLat(O, Fraction(1, Q.a), Q.a, Q.b)


def mul(I: OIdealLat, J: OIdealLat) -> OIdealLat:
    if I.order != J.order:
        raise ValueError("ideals of different orders")
    O = I.order
    b0, c0 = O.b0, O.c0

    def prod(u1, v1, u2, v2):
        # coordinates (v, u) of (u1 + v1*tau)(u2 + v2*tau)
        return (u1 * v2 + u2 * v1 - b0 * v1 * v2, u1 * u2 - c0 * v1 * v2)

    x1, y1 = (I.a, 0), (I.shift, 1)
    x2, y2 = (J.a, 0), (J.shift, 1)
    L = hnf2([prod(*x1, *x2), prod(*x1, *y2), prod(*y1, *x2), prod(*y1, *y2)])
    C, B, A = L.a, L.b, L.d
    return OIdealLat(O, I.scale * J.scale * C, A // C, b0 - 2 * (B // C))


def scaled(I: OIdealLat, q) -> OIdealLat:
    return OIdealLat(I.order, I.scale * Fraction(q), I.a, I.b)


def conj(I: OIdealLat) -> OIdealLat:
    return OIdealLat(I.order, I.scale, I.a, -I.b)


def norm(I: OIdealLat) -> Fraction:
    return I.scale * I.scale * I.a


def inverse(I: OIdealLat) -> OIdealLat:
    return scaled(conj(I), 1 / norm(I))


def is_proper(I: OIdealLat) -> bool:
    """Multiplier ring equals the order iff the associated form is primitive."""
    return math.gcd(math.gcd(I.a, I.b), I.c) == 1


def prime_to(I: OIdealLat, N: int) -> bool:
    return math.gcd(I.a * I.scale.numerator * I.scale.denominator, N) == 1


def principal_generators(I: OIdealLat) -> list[QuadElem]:
    """All lam with lam*O = I (empty iff I is not principal), sorted by coordinates."""
    O = I.order
    if not is_proper(I):
        raise ValueError("generators are only computed for proper ideals")
    # lam = x*a + y*(B + tau) generates iff a*x^2 - b*x*y + c*y^2 = 1
    F = QuadForm(I.a, -I.b, I.c)
    R, g = reduce(F)
    if R != principal_form(O.D):
        return []
    out = []
    for x0, y0 in represent(R, 1):
        x, y = g[0] * x0 + g[1] * y0, g[2] * x0 + g[3] * y0
        lam = O.elem(x * I.a + y * I.shift, y)
        out.append(lam * I.scale)
    return sorted(out, key=lambda e: (e.u, e.v))


def is_principal(I: OIdealLat) -> bool:
    return bool(principal_generators(I))


def units(O: ImagQuadOrder) -> list[QuadElem]:
    return principal_generators(unit_ideal(O))


def in_P1N(I: OIdealLat, N: int, ell: int = 1) -> bool:
    """Membership of I in the subgroup generated by nu*O, nu = z (mod ell*N*O), z = 1 (mod N).

    With ell = 1 this is P_{1,N}(O, N). See the module docstring for the derivation.
    """
    M = ell * N
    if not prime_to(I, M):
        raise ValueError(f"ideal {I} is not prime to {M}")
    gens = principal_generators(I)
    if not gens:
        return False
    m = gens[0].denominator()
    if math.gcd(m, M) != 1:
        raise ValueError(f"ideal {I} is not in the group of ideals prime to {M}")
    for lam in gens:
        u, v = lam.u * m, lam.v * m
        if v % M == 0 and (u - m) % N == 0:
            return True
    return False


def class_equal(I: OIdealLat, J: OIdealLat, N: int, ell: int = 1) -> bool:
    """[I] == [J] in the ray class group I(O, N)/P_{1,N}(O, N) (or its ell-variant)."""
    return in_P1N(mul(I, inverse(J)), N, ell)


def residue_unit_count(O: ImagQuadOrder, N: int) -> int:
    """|(O/NO)^x| by scanning all N^2 residues."""
    b0, c0 = O.b0, O.c0
    return sum(
        1 for u in range(N) for v in range(N) if math.gcd(u * u - b0 * u * v + c0 * v * v, N) == 1
    )


def unit_image_size(O: ImagQuadOrder, N: int) -> int:
    return len({(int(e.u) % N, int(e.v) % N) for e in units(O)})


def ray_class_number_formula(O: ImagQuadOrder, N: int) -> int:
    from .forms import class_number

    return class_number(O.D) * residue_unit_count(O, N) // unit_image_size(O, N)


def primitive_ideals(O: ImagQuadOrder, a: int) -> list[OIdealLat]:
    """Proper primitive integral ideals of norm a."""
    out = []
    for b in range(-a + 1, a + 1):
        if (b * b - O.D) % (4 * a) == 0:
            I = OIdealLat(O, Fraction(1), a, b)
            if is_proper(I):
                out.append(I)
    return out


class RayClassKeyer:
    """Canonical labels for classes of I(O, M)/P with M = ell*N (P as in ``in_P1N``).

    The label is (reduced form of the level-one class, residue of a generator of I*B^-1
    modulo M*O, minimized over units and the admissible integers), B a fixed base ideal
    of the level-one class chosen prime to M.
    """

    def __init__(self, O: ImagQuadOrder, N: int, ell: int = 1):
        self.order = O
        self.N = N
        self.ell = ell
        self.M = M = ell * N
        ints = [z for z in range(M) if z % N == 1 % N and math.gcd(z, M) == 1]
        unit_res = {(int(e.u) % M, int(e.v) % M) for e in units(O)}
        self.multipliers = sorted({(z * u % M, z * v % M) for z in ints for u, v in unit_res})
        self._bases: dict[QuadForm, OIdealLat] = {}

    def _mulres(self, x, y):
        O, M = self.order, self.M
        u1, v1 = x
        u2, v2 = y
        return ((u1 * u2 - O.c0 * v1 * v2) % M, (u1 * v2 + u2 * v1 - O.b0 * v1 * v2) % M)

    def base(self, R: QuadForm) -> OIdealLat:
        if R not in self._bases:
            self._bases[R] = self._find_base(R)
        return self._bases[R]

    def _find_base(self, R: QuadForm) -> OIdealLat:
        for h in count(1):
            for x in range(-h, h + 1):
                for y in (range(-h, h + 1) if abs(x) == h else (-h, h)):
                    if math.gcd(x, y) != 1 or math.gcd(R(x, y), self.M) != 1:
                        continue
                    _, t, r = ext_gcd(x, y)  # x*t + y*r = 1
                    Q = act(R, (x, -r, y, t))
                    return OIdealLat(self.order, Fraction(1), Q.a, Q.b)
        raise AssertionError("unreachable")

    def key(self, I: OIdealLat) -> tuple:
        if not prime_to(I, self.M):
            raise ValueError(f"ideal {I} is not prime to {self.M}")
        R = reduce(I.form())[0]
        B = self.base(R)
        J = mul(I.primitive(), conj(B))
        gens = principal_generators(J)
        if not gens:
            raise AssertionError("level-one classes disagree")
        lam = gens[0] * (I.scale / B.a)
        m = lam.denominator()
        minv = pow(m, -1, self.M) if self.M > 1 else 0
        res = (int(lam.u * m) * minv % self.M, int(lam.v * m) * minv % self.M)
        return (R.astuple(), min(self._mulres(res, mu) for mu in self.multipliers))


def default_bound(O: ImagQuadOrder, N: int) -> int:
    return max(math.isqrt(-O.D // 3) + 1, N * N)


def ray_class_oracle(O: ImagQuadOrder, N: int, B: Optional[int] = None, ell: int = 1) -> ClassGroupTable:
    """Ray class group built by closing small ideals prime to ell*N under multiplication.

    Labels are ``RayClassKeyer`` keys; ``elements`` holds one ideal per class. Raises
    ``OracleBoundError`` if ideals of norm in (B, 2B] fall outside the generated group.
    Without an explicit B the bound starts at ``default_bound`` and doubles (at most
    ``MAX_DOUBLINGS`` times) until that check passes.
    """
    if B is not None:
        return _ray_class_closure(O, N, B, ell)
    B = default_bound(O, ell * N)
    for _ in range(MAX_DOUBLINGS):
        try:
            return _ray_class_closure(O, N, B, ell)
        except OracleBoundError:
            B *= 2
    return _ray_class_closure(O, N, B, ell)


MAX_DOUBLINGS = 6


def _ray_class_closure(O: ImagQuadOrder, N: int, B: int, ell: int) -> ClassGroupTable:
    M = ell * N
    if B * B * 3 < -O.D:
        raise ValueError("bound below sqrt(|D|/3)")
    keyer = RayClassKeyer(O, N, ell)
    gens = [I for a in range(2, B + 1) if math.gcd(a, M) == 1 for I in primitive_ideals(O, a)]
    gens += [OIdealLat(O, Fraction(m), 1, O.b0) for m in range(2, M + 1) if math.gcd(m, M) == 1]
    one = unit_ideal(O)
    reps = {keyer.key(one): one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                k = keyer.key(y)
                if k not in reps:
                    reps[k] = y
                    nxt.append(y)
        frontier = nxt
    for a in range(B + 1, 2 * B + 1):
        if math.gcd(a, M) != 1:
            continue
        for I in primitive_ideals(O, a):
            if keyer.key(I) not in reps:
                raise OracleBoundError(f"bound {B} too small for {O} modulo {M}")
    labels = list(reps)
    index = {k: i for i, k in enumerate(labels)}
    elems = [reps[k] for k in labels]
    table = [[index[keyer.key(mul(x, y))] for y in elems] for x in elems]
    return ClassGroupTable(labels, table, 0, elems)


def contract(A: OIdealLat, O: ImagQuadOrder, N: int = 1) -> OIdealLat:
    """The intersection of an integral O_K-ideal A with the order O (same field)."""
    K = A.order
    if K.D != O.dK or not K.is_maximal:
        raise ValueError("A must be an ideal of the maximal order containing O")
    if not A.is_integral():
        raise ValueError("A must be integral")
    ell = O.ell
    if not prime_to(A, ell * N):
        raise ValueError(f"ideal is not prime to {ell * N}")
    # O = {u + v*tau_K : ell | v}; tau_O = ell*tau_K + e
    e = (ell * K.b0 - O.b0) // 2
    L = hnf2([(int(x.v), int(x.u)) for x in A.basis()])
    C, Bv, Au = L.a, L.b, L.d
    k = ell // math.gcd(ell, C)
    vecs = [(k * C, k * Bv), (0, Au)]
    gens = [O.elem(u - e * (v // ell), v // ell) for v, u in vecs]
    return ideal_from_generators(O, gens)


def sample_ideals(O: ImagQuadOrder, M: int, count_: int) -> list[OIdealLat]:
    """The first count_ proper primitive ideals prime to M, by norm then b."""
    out = []
    for a in count(1):
        if math.gcd(a, M) != 1:
            continue
        out += primitive_ideals(O, a)
        if len(out) >= count_:
            return out[:count_]
    raise AssertionError("unreachable")


def contraction_check(D: int, N: int, samples: int = 20) -> dict:
    """Intersecting with O maps ideals of the maximal order prime to ell*N to ideals of O.

    Checks on sampled ideals that the map is multiplicative and respects classes, and that
    it sends the classes of I_K(ell*N) modulo (nu = z mod ell*N, z = 1 mod N) bijectively onto
    the ray classes of O modulo N.
    """
    O = order_from_disc(D)
    K = maximal_order(O)
    ell = O.ell
    M = ell * N
    sample = sample_ideals(K, M, samples)
    keyK = RayClassKeyer(K, N, ell)
    keyO = RayClassKeyer(O, N)
    mult_fail = [
        (str(I), str(J))
        for I in sample
        for J in sample
        if contract(mul(I, J), O, N) != mul(contract(I, O, N), contract(J, O, N))
    ]
    tabK = ray_class_oracle(K, N, ell=ell)
    tabO = ray_class_oracle(O, N)
    image = {}
    for lab, I in zip(tabK.labels, tabK.elements):
        image[lab] = keyO.key(contract(I, O, N))
    consistent = all(image[keyK.key(I)] == keyO.key(contract(I, O, N)) for I in sample)
    bijective = len(set(image.values())) == len(image) and set(image.values()) == set(tabO.labels)
    return {
        "disc": D,
        "level": N,
        "conductor": ell,
        "samples": len(sample),
        "multiplicative": not mult_fail,
        "class_consistent": consistent,
        "bijective": bijective,
        "order_maximal_side": tabK.order,
        "order_suborder_side": tabO.order,
    }
