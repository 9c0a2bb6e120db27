"""Whether a congruence group preserves the level-N forms, and whether it induces a class group.

Acting: for [[q, r], [s, t]] in Gamma the new leading coefficient is Q(q, s), so the question
depends only on residues mod N and on a generating set of the image. It holds exactly when
the image lies in Gamma_0(M), M the product of the primes p | N with (D/p) != -1.

Inducing: with H the fiber over the principal class of the map from Gamma_1(N)-classes to
Gamma-classes, Gamma induces a class group iff H is a subgroup of the ray class group, the
fibers are its cosets, and H lies over the principal level-one class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from . import matrices as mx
from .classlevel import enumerate_classes, gamma_equivalent, group_table
from .congruence import CongruenceGroup, contained_in_gamma0, gamma1, lift, member, not_gamma0_witness
from .errors import NoWitnessError
from .forms import QuadForm, act, act_mod, coeff_x2, principal_form, reduce, residue_form_sources
from .matrices import Mat
from .numtheory import kronecker, prime_factors, sqrt_mod


def action_modulus(D: int, N: int) -> int:
    """Product of the primes p | N with (D/p) != -1."""
    M = 1
    for p in prime_factors(N):
        if kronecker(D, p) != -1:
            M *= p
    return M


@dataclass(frozen=True)
class ActsVerdict:
    acts: bool
    form: Optional[QuadForm] = None
    matrix: Optional[Mat] = None

    def to_json(self) -> dict:
        out = {"acts": self.acts}
        if not self.acts:
            out["witness"] = {
                "form": list(self.form.astuple()),
                "matrix": mx.as_nested(self.matrix),
                "new_leading_coefficient": coeff_x2(self.form, self.matrix),
            }
        return out


def acts(G: CongruenceGroup, D: int, N: int) -> ActsVerdict:
    """Decide whether G maps level-N forms of discriminant D to level-N forms.

    Checks every generator of the image against every residue triple. A failure is
    returned as (Q, gamma) with Q of level N and act(Q, gamma) not of level N.
    """
    if G.level != N:
        raise ValueError(f"group {G} has level {G.level}, not {N}")
    sources = residue_form_sources(D, N)
    for gamma in (mx.T, *G.generators):
        for abc, (R, h) in sources.items():
            a2 = act_mod(abc, gamma, N)[0]
            if math.gcd(a2, N) != 1:
                Q = act(R, lift(h, N))
                return ActsVerdict(False, Q, gamma)
    return ActsVerdict(True)


def acts_criterion(G: CongruenceGroup, D: int, N: int) -> bool:
    return contained_in_gamma0(G, action_modulus(D, N))


def witness_form(D: int, p: int) -> QuadForm:
    """A form (1, b, c) of discriminant D with p | c, for a prime p with (D/p) != -1."""
    if D % p == 0:
        if p == 2:
            return QuadForm(1, 0, -D // 4) if D % 8 == 0 else QuadForm(1, 2, (4 - D) // 4)
        if D % 4 == 1:
            return QuadForm(1, p, (p * p - D) // 4)
        return QuadForm(1, 2 * p, (4 * p * p - D) // 4)
    if kronecker(D, p) != 1:
        raise NoWitnessError(f"{p} is inert for {D}")
    if p == 2:
        return QuadForm(1, 1, (1 - D) // 4)
    b = sqrt_mod(D, 4 * p)
    return QuadForm(1, b, (b * b - D) // 4)


def counterexample(G: CongruenceGroup, D: int, N: int) -> tuple[QuadForm, Mat]:
    """(Q, gamma) with gamma in G and p | Q(q, s) for a prime p | N, when G is not in Gamma_0(M)."""
    M = action_modulus(D, N)
    p, gamma = not_gamma0_witness(G, M)
    Q = witness_form(D, p)
    assert member(G, gamma) and math.gcd(Q.a, N) == 1
    assert coeff_x2(Q, gamma) % p == 0
    return Q, gamma


@dataclass
class InduceVerdict:
    induces: bool
    H: list[int]
    fibers: list[list[int]]
    labels: list[QuadForm]
    obstruction: Optional[dict] = None
    flagged: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def H_forms(self) -> list[QuadForm]:
        return [self.labels[i] for i in self.H]

    def to_json(self) -> dict:
        return {
            "induces": self.induces,
            "H": [list(self.labels[i].astuple()) for i in self.H],
            "fibers": [[list(self.labels[i].astuple()) for i in f] for f in self.fibers],
            "obstruction": self.obstruction,
            "flagged": self.flagged,
        }


def gamma_fibers(D: int, N: int, G: CongruenceGroup) -> list[list[int]]:
    """Gamma_1(N)-class indices grouped by G-equivalence, in order of their G-reps."""
    L1 = enumerate_classes(D, N, gamma1(N))
    LG = enumerate_classes(D, N, G)
    fibers: list[list[int]] = [[] for _ in LG.reps]
    for i, Q in enumerate(L1.reps):
        hits = [j for j, P in enumerate(LG.reps) if gamma_equivalent(Q, P, G) is not None]
        assert len(hits) == 1
        fibers[hits[0]].append(i)
    return fibers


def induces(G: CongruenceGroup, D: int, N: int) -> InduceVerdict:
    """Decide whether G induces a form class group of discriminant D and level N."""
    if G.level != N:
        raise ValueError(f"group {G} has level {G.level}, not {N}")
    table = group_table(D, N)
    labels = table.labels
    fibers = gamma_fibers(D, N, G)
    H = next(f for f in fibers if table.identity in f)
    verdict = InduceVerdict(True, H, fibers, labels, flagged=D in (-3, -4))
    if not table.is_subgroup(H):
        verdict.induces = False
        verdict.obstruction = {"kind": "not-a-subgroup", "H": [list(labels[i].astuple()) for i in H]}
        return verdict
    for f in fibers:
        if table.coset(f[0], H) != frozenset(f):
            verdict.induces = False
            verdict.obstruction = {
                "kind": "fiber-not-coset",
                "fiber": [list(labels[i].astuple()) for i in f],
            }
            return verdict
    P = principal_form(D)
    for i in H:
        if reduce(labels[i])[0] != P:
            verdict.induces = False
            verdict.obstruction = {"kind": "non-principal", "form": list(labels[i].astuple())}
            return verdict
    return verdict


def level1_kernel(D: int, N: int) -> list[int]:
    """Gamma_1(N)-classes lying over the principal level-one class."""
    table = group_table(D, N)
    P = principal_form(D)
    return [i for i, Q in enumerate(table.labels) if reduce(Q)[0] == P]
