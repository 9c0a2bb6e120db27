"""Class sets of level-N forms under a congruence group, and the ray class group structure.

A form Q of discriminant D with gcd(a, N) = 1 is sent to the ideal [omega_Q, 1] of the order
of discriminant D; for Gamma_1(N) this identifies the class set with the ray class group
modulo N, and the group law on forms is defined by transport along that map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

from . import matrices as mx
from .congruence import CongruenceGroup, coset_reps, gamma1, member, units_subgroup_closure
from .errors import TheoremViolation
from .forms import QuadForm, act, automorphs, principal_form, reduce, reduced_forms
from .forms import residue_forms
from .grouptable import ClassGroupTable
from .matrices import Mat
from .numtheory import factorize, kronecker, sqrt_mod
from .orders import RayClassKeyer, ideal_from_form, inverse, is_principal, mul, order_from_disc


@dataclass(frozen=True)
class LevelClassList:
    D: int
    N: int
    group: CongruenceGroup
    reps: tuple[QuadForm, ...]

    def __len__(self):
        return len(self.reps)

    def index_of(self, Q: QuadForm) -> int:
        """Position of the rep equivalent to Q."""
        for i, R in enumerate(self.reps):
            if gamma_equivalent(Q, R, self.group) is not None:
                return i
        raise KeyError(f"{Q} is not equivalent to any rep")


def gamma_equivalent(Q: QuadForm, Q2: QuadForm, G: CongruenceGroup) -> Optional[Mat]:
    """Some gamma in G with act(Q, gamma) == Q2, or None."""
    if Q.disc != Q2.disc:
        raise ValueError("forms of different discriminants")
    R, g = reduce(Q)
    R2, g2 = reduce(Q2)
    if R != R2:
        return None
    back = mx.inv_sl2(g2)
    for u in automorphs(R):
        gamma = mx.mul(mx.mul(g, u), back)
        if member(G, gamma):
            return gamma
    return None


@lru_cache(maxsize=None)
def _gamma1_cosets(N: int) -> tuple[Mat, ...]:
    return tuple(coset_reps(gamma1(N), side="left"))


def enumerate_classes(D: int, N: int, G: Optional[CongruenceGroup] = None) -> LevelClassList:
    """One lexicographically least rep per G-class of forms of discriminant D and level N."""
    G = gamma1(N) if G is None else G
    if G.level != N:
        raise ValueError(f"group {G} has level {G.level}, not {N}")
    # groups compare by image, so a cached list may carry another label
    return replace(_enumerate(D, N, G), group=G)


@lru_cache(maxsize=None)
def _enumerate(D: int, N: int, G: CongruenceGroup) -> LevelClassList:
    cands = set()
    for R in reduced_forms(D):
        for g in _gamma1_cosets(N):
            Q = act(R, g)
            if math.gcd(Q.a, N) == 1:
                cands.add(Q)
    reps: list[QuadForm] = []
    for Q in sorted(cands):
        if all(gamma_equivalent(Q, P, G) is None for P in reps):
            reps.append(Q)
    return LevelClassList(D, N, G, tuple(reps))


def rho(Q: QuadForm):
    """The ideal [omega_Q, 1]."""
    return ideal_from_form(Q)


@lru_cache(maxsize=None)
def ray_keyer(D: int, N: int) -> RayClassKeyer:
    return RayClassKeyer(order_from_disc(D), N)


@lru_cache(maxsize=None)
def group_table(D: int, N: int) -> ClassGroupTable:
    """Group table of the Gamma_1(N) classes, multiplying through the ideal classes."""
    L = enumerate_classes(D, N, gamma1(N))
    keyer = ray_keyer(D, N)
    ideals = [rho(Q) for Q in L.reps]
    keys = [keyer.key(I) for I in ideals]
    if len(set(keys)) != len(keys):
        raise TheoremViolation(f"two inequivalent forms give the same ray class at ({D}, {N})")
    index = {k: i for i, k in enumerate(keys)}
    table = []
    for I in ideals:
        row = []
        for J in ideals:
            k = keyer.key(mul(I, J))
            if k not in index:
                raise TheoremViolation(f"product of {I} and {J} matches no rep at ({D}, {N})")
            row.append(index[k])
        table.append(row)
    ident = L.index_of(principal_form(D))
    return ClassGroupTable(list(L.reps), table, ident, ideals)


def surject_level1(L: LevelClassList) -> dict[QuadForm, QuadForm]:
    """Each rep mapped to its reduced form, i.e. its SL2(Z)-class."""
    return {Q: reduce(Q)[0] for Q in L.reps}


def ideal_level1_class(Q: QuadForm) -> QuadForm:
    """The reduced form R with rho(Q) * rho(R)^-1 principal, found on the ideal side."""
    I = rho(Q)
    for R in reduced_forms(Q.disc):
        if is_principal(mul(I, inverse(rho(R)))):
            return R
    raise TheoremViolation(f"ideal of {Q} is in no level-one class")


@dataclass(frozen=True)
class LeadingCoefficients:
    D: int
    N: int
    values: frozenset[int]
    subgroup: frozenset[int]
    index: int
    closed: bool
    dK_divides_N: bool
    character_kernel: frozenset[int]

    def to_json(self) -> dict:
        return {
            "disc": self.D,
            "level": self.N,
            "subgroup": sorted(self.subgroup),
            "index": self.index,
            "closed": self.closed,
            "dK_divides_N": self.dK_divides_N,
            "matches_character_kernel": self.subgroup == self.character_kernel,
        }


def field_character(dK: int, a: int) -> int:
    """Kronecker symbol (dK / a) for a positive a, multiplicatively over the primes of a."""
    out = 1
    for p, e in factorize(a).items():
        out *= kronecker(dK, p) ** e
    return out


@lru_cache(maxsize=None)
def leading_coefficient_subgroup(D: int, N: int) -> LeadingCoefficients:
    """Leading coefficients mod N of the level-N forms of discriminant D.

    They form a subgroup of index 1 or 2 in (Z/NZ)^x; index 2 happens when the field
    discriminant divides N, and the subgroup is then the kernel of the field character.
    """
    values = frozenset(t[0] for t in residue_forms(D, N)) if N > 1 else frozenset({0})
    H, index, closed = units_subgroup_closure(values, N) if N > 1 else (values, 1, True)
    dK = order_from_disc(D).dK
    divides = N % dK == 0
    if divides and N > 1:
        kernel = frozenset(a for a in _units(N) if field_character(dK, a) == 1)
    else:
        kernel = _units(N)
    return LeadingCoefficients(D, N, values, H, index, closed, divides, kernel)


def _units(N: int) -> frozenset[int]:
    if N == 1:
        return frozenset({0})
    return frozenset(a for a in range(1, N) if math.gcd(a, N) == 1)


def minus_one_check(D: int, N: int) -> bool:
    """If -1 is a square mod N, the leading coefficients exhaust (Z/NZ)^x."""
    if sqrt_mod(-1, N) is None:
        return True
    return leading_coefficient_subgroup(D, N).index == 1


def to_json(L: LevelClassList, table: Optional[ClassGroupTable] = None) -> dict:
    out = {
        "disc": L.D,
        "level": L.N,
        "group": L.group.label,
        "classes": [list(Q.astuple()) for Q in L.reps],
    }
    if table is not None:
        tj = table.to_json()
        out["table"] = tj["table"]
        out["identity"] = tj["identity"]
        out["invariant_factors"] = tj["invariant_factors"]
    return out
