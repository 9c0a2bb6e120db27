"""The mod-N shadow of the open subgroup W of GL2 of the finite adeles attached to (D, N, Gamma).

W is generated by the matrices congruent to diag(1, a) * gamma mod N, with a a leading
coefficient of a level-N form and gamma in Gamma. Taking a = 1 and gamma = I shows that W
contains every matrix congruent to I mod N, so W is the full preimage of its reduction
Wbar in GL2(Z/NZ), and every question about W below is decided on Wbar. Rational scalars
that are units at every prime are +-1, so scalar slack in comparisons is exactly {I, -I}.

The subfield of Q(zeta_N) fixed by det(W) is encoded by the subgroup det(Wbar) of
(Z/NZ)^x. Inclusion of fields reverses inclusion of subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import matrices as mx
from .classlevel import leading_coefficient_subgroup
from .congruence import CongruenceGroup, FiniteMatrixGroup, from_image, identity_mod, sl2_elements
from .induction import acts, induces
from .matrices import Mat


@dataclass(frozen=True)
class AdelicShadow:
    N: int
    W: FiniteMatrixGroup
    A: frozenset[int]
    gamma: CongruenceGroup

    @cached_property
    def determinants(self) -> frozenset[int]:
        return self.W.determinants()

    def to_json(self) -> dict:
        return {
            "level": self.N,
            "order": len(self.W),
            "determinants": sorted(self.determinants),
            "leading_coefficients": sorted(self.A),
            "gamma_order": len(self.gamma.image),
        }


def _diag(a: int, N: int) -> Mat:
    return mx.reduce(mx.diag(1, a), N)


def build_shadow(D: int, N: int, G: CongruenceGroup) -> AdelicShadow:
    A = leading_coefficient_subgroup(D, N).subgroup
    gens = [identity_mod(N), *G.image.generators]
    W = FiniteMatrixGroup(N, [mx.mul_mod(_diag(a, N), g, N) for a in sorted(A) for g in gens])
    return AdelicShadow(N, W, A, G)


def literal_shadow_set(D: int, N: int, G: CongruenceGroup) -> frozenset[Mat]:
    """{diag(1, a) * gamma : a a leading coefficient, gamma in the image of G}, with no closure."""
    A = leading_coefficient_subgroup(D, N).subgroup
    return frozenset(mx.mul_mod(_diag(a, N), g, N) for a in A for g in G.image.elements)


def shadow_equals_literal_set(D: int, N: int, G: CongruenceGroup) -> bool:
    return build_shadow(D, N, G).W.elements == literal_shadow_set(D, N, G)


def bottom_row_closure_check(D: int, N: int, G: CongruenceGroup) -> tuple[bool, list[Mat]]:
    """Every alpha in SL2(Z/NZ) whose bottom row is (a*s, t), for a leading coefficient a and
    some [[q, r], [s, t]] in G, must lie in G. Returns the verdict and the violators."""
    A = leading_coefficient_subgroup(D, N).subgroup
    rows = {(a * g[2] % N, g[3] % N) for a in A for g in G.image.elements}
    bad = [al for al in sl2_elements(N) if (al[2], al[3]) in rows and al not in G.image.elements]
    return not bad, bad


def sl2_part(shadow: AdelicShadow) -> tuple[frozenset[Mat], bool]:
    """{u in SL2(Z/NZ) : u or -u in Wbar}, and whether it equals <Gamma, -I>."""
    N = shadow.N
    W = shadow.W.elements
    part = frozenset(u for u in sl2_elements(N) if u in W or mx.reduce(mx.neg(u), N) in W)
    img = shadow.gamma.image.elements
    with_minus = img | {mx.reduce(mx.neg(g), N) for g in img}
    return part, part == with_minus


def determinant_condition(shadow: AdelicShadow, D: int, N: int) -> bool:
    """The fixed field of det(Wbar) lies in the one cut out by the leading coefficients."""
    return shadow.determinants >= leading_coefficient_subgroup(D, N).subgroup


def diagonal_condition(shadow: AdelicShadow) -> bool:
    """diag(1, u) or -diag(1, u) is in Wbar for every u in det(Wbar)."""
    N = shadow.N
    W = shadow.W.elements
    for u in shadow.determinants:
        d = _diag(u, N)
        if d not in W and mx.reduce(mx.neg(d), N) not in W:
            return False
    return True


def derived_group(shadow: AdelicShadow) -> CongruenceGroup:
    """The congruence group whose image is the SL2-part of the shadow."""
    part, _ = sl2_part(shadow)
    return from_image(shadow.N, part, f"sl2part<{shadow.gamma.label}>")


def canonical_model_equivalence(D: int, N: int, G: CongruenceGroup) -> dict:
    """Compare 'G induces' with the three shadow conditions, when G acts and D is not -3, -4.

    Both sides are always recorded. status is "pass", "fail" or "not-applicable".
    """
    shadow = build_shadow(D, N, G)
    hyp_acts = acts(G, D, N).acts
    hyp_disc = D not in (-3, -4)
    left = induces(G, D, N).induces
    cond_i = sl2_part(shadow)[1]
    cond_ii = determinant_condition(shadow, D, N)
    cond_iii = diagonal_condition(shadow)
    right = cond_i and cond_ii and cond_iii
    if not (hyp_acts and hyp_disc):
        status = "not-applicable"
    else:
        status = "pass" if left == right else "fail"
    return {
        "hypothesis_acts": hyp_acts,
        "hypothesis_disc": hyp_disc,
        "induces": left,
        "sl2_part": cond_i,
        "determinant": cond_ii,
        "diagonal": cond_iii,
        "status": status,
    }
