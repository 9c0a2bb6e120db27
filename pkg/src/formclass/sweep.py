"""Replay every check over a grid of (discriminant, level, group) and collect a report.

Config files are plain text, one ``key = value`` per line, ``#`` starts a comment:

    discriminants = -15, -20, -23
    levels = 1-6
    groups = gamma1, gamma0, gammaG, sl2, exotic
    exotics = gens:5:[[-1,0,0,-1]]; gens:6:[[1,0,3,1]]
    oracle_bound = auto
    output = reports
    jobs = 1

``groups`` names families: gamma1, gamma0 (every d | N), gammaG (every subgroup of the
units), sl2, exotic (the ``exotics`` specs whose level matches). ``exotics`` is separated
by semicolons. ``oracle_bound`` is ``auto`` or a positive integer.
"""

from __future__ import annotations

import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__
from . import adelic, classlevel, induction, orders
from .cache import dumps
from .congruence import (
    EXOTIC_SPECS,
    CongruenceGroup,
    contained_in_gamma0,
    contains_minus_identity,
    full_sl2,
    gamma0_image,
    gamma1,
    gammaG,
    lift,
    member,
    not_gamma0_witness,
    parse_group,
)
from .forms import act, act_coeffs, check_discriminant, coeff_x2, residue_form_sources
from .matrices import as_nested
from .numtheory import is_squarefree, sqrt_mod, unit_subgroups

FAMILIES = ("gamma1", "gamma0", "gammaG", "sl2", "exotic")


@dataclass(frozen=True)
class SweepConfig:
    discriminants: tuple[int, ...] = (-15, -20, -23, -24, -40, -52, -56, -60, -63)
    levels: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    groups: tuple[str, ...] = FAMILIES
    exotics: tuple[str, ...] = EXOTIC_SPECS
    oracle_bound: Optional[int] = None
    output: str = "reports"
    jobs: int = 1

    def __post_init__(self):
        for D in self.discriminants:
            check_discriminant(D)
        if any(N < 1 for N in self.levels):
            raise ValueError("levels must be positive")
        unknown = set(self.groups) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown group families {sorted(unknown)}")
        for spec in self.exotics:
            parse_group(spec)

    def digest(self) -> str:
        """Hash of the content-defining fields (output directory and jobs excluded)."""
        data = asdict(self)
        data.pop("output")
        data.pop("jobs")
        return hashlib.sha256(dumps(data).encode()).hexdigest()[:16]


def _int_list(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-") if not part.startswith("-") else ("", "", "")
        if sep and lo:
            out += range(int(lo), int(hi) + 1)
        else:
            out.append(int(part))
    return tuple(out)


def parse_config(text: str) -> SweepConfig:
    kw: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = key.strip(), value.strip()
        if key in ("discriminants", "levels"):
            kw[key] = _int_list(value)
        elif key == "groups":
            kw[key] = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key == "exotics":
            kw[key] = tuple(v.strip() for v in value.split(";") if v.strip())
        elif key == "oracle_bound":
            kw[key] = None if value == "auto" else int(value)
        elif key == "output":
            kw[key] = value
        elif key == "jobs":
            kw[key] = int(value)
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    return SweepConfig(**kw)


def load_config(name: str) -> SweepConfig:
    if name == "default":
        return SweepConfig()
    with open(name) as fh:
        return parse_config(fh.read())


def family(N: int, cfg: SweepConfig) -> list[CongruenceGroup]:
    out = []
    if "gamma1" in cfg.groups:
        out.append(gamma1(N))
    if "gamma0" in cfg.groups:
        out += [gamma0_image(d, N) for d in range(1, N + 1) if N % d == 0]
    if "gammaG" in cfg.groups and N > 1:
        out += [gammaG(H, N) for H in unit_subgroups(N)]
    if "sl2" in cfg.groups:
        out.append(full_sl2(N))
    if "exotic" in cfg.groups:
        out += [G for G in map(parse_group, cfg.exotics) if G.level == N]
    return out


@dataclass
class CaseRecord:
    disc: int
    level: int
    group: str
    check: str
    status: str
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def repro(self) -> str:
        cmd = {
            "ray-class-bijection": "classgroup",
            "level-one-commutativity": "classgroup",
            "leading-coefficient-subgroup": "classgroup",
            "contraction": "classgroup",
            "action-criterion": "acts",
            "gamma0-witness": "acts",
            "leading-coefficient-identity": "acts",
            "induction": "induces",
        }.get(self.check, "adelic")
        spec = self.group or f"gamma1:{self.level}"
        return f"formclass {cmd} --disc {self.disc} --level {self.level} --group '{spec}'"

    def to_json(self) -> dict:
        out = {
            "disc": self.disc,
            "level": self.level,
            "group": self.group,
            "check": self.check,
            "status": self.status,
            "detail": self.detail,
        }
        if self.status == "fail":
            out["repro"] = self.repro()
        return out


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def level_checks(D: int, N: int, cfg: SweepConfig) -> list[CaseRecord]:
    """Checks that depend on (D, N) only."""
    recs = []
    O = orders.order_from_disc(D)

    t = time.perf_counter()
    L = classlevel.enumerate_classes(D, N, gamma1(N))
    tab = orders.ray_class_oracle(O, N, B=cfg.oracle_bound)
    formula = orders.ray_class_number_formula(O, N)
    ideals = [classlevel.rho(Q) for Q in L.reps]
    injective = all(
        not orders.class_equal(I, J, N) for i, I in enumerate(ideals) for J in ideals[i + 1 :]
    )
    surjective = all(any(orders.class_equal(E, I, N) for I in ideals) for E in tab.elements)
    table = classlevel.group_table(D, N)
    ok = len(L) == tab.order == formula and injective and surjective and not table.axiom_failures()
    detail = {
        "classes": len(L),
        "oracle": tab.order,
        "formula": formula,
        "injective": injective,
        "surjective": surjective,
        "invariant_factors": table.invariant_factors,
    }
    recs.append(CaseRecord(D, N, "", "ray-class-bijection", _status(ok), detail, time.perf_counter() - t))

    t = time.perf_counter()
    forms_side = classlevel.surject_level1(L)
    level1 = classlevel.group_table(D, 1)
    mismatch = [list(Q.astuple()) for Q in L.reps if forms_side[Q] != classlevel.ideal_level1_class(Q)]
    # the map on classes is a homomorphism into the level-one table
    pos = {R: i for i, R in enumerate(level1.labels)}
    img = [pos[forms_side[Q]] for Q in L.reps]
    hom = all(img[table.mul(i, j)] == level1.mul(img[i], img[j]) for i in range(len(img)) for j in range(len(img)))
    onto = set(img) == set(range(level1.order))
    detail = {"mismatches": mismatch, "homomorphism": hom, "surjective": onto}
    recs.append(
        CaseRecord(D, N, "", "level-one-commutativity", _status(not mismatch and hom and onto), detail, time.perf_counter() - t)
    )

    t = time.perf_counter()
    lc = classlevel.leading_coefficient_subgroup(D, N)
    minus = classlevel.minus_one_check(D, N)
    ok = lc.closed and lc.index in (1, 2) and (lc.index == 2) == (lc.dK_divides_N and N > 1) and minus
    ok = ok and lc.subgroup == lc.character_kernel
    detail = dict(lc.to_json(), minus_one_square=sqrt_mod(-1, N) is not None, minus_one_check=minus)
    recs.append(CaseRecord(D, N, "", "leading-coefficient-subgroup", _status(ok), detail, time.perf_counter() - t))

    if not O.is_maximal:
        t = time.perf_counter()
        r = orders.contraction_check(D, N)
        ok = r["multiplicative"] and r["class_consistent"] and r["bijective"]
        recs.append(CaseRecord(D, N, "", "contraction", _status(ok), r, time.perf_counter() - t))
    return recs


def group_checks(D: int, N: int, G: CongruenceGroup) -> list[CaseRecord]:
    recs = []
    spec = G.label

    t = time.perf_counter()
    bad = []
    for g in G.generators:
        for _, (R, h) in residue_form_sources(D, N).items():
            Q = act(R, lift(h, N))
            if coeff_x2(Q, g) != act_coeffs(Q.astuple(), g)[0]:
                bad.append([list(Q.astuple()), as_nested(g)])
    recs.append(
        CaseRecord(D, N, spec, "leading-coefficient-identity", _status(not bad), {"failures": bad}, time.perf_counter() - t)
    )

    t = time.perf_counter()
    av = induction.acts(G, D, N)
    crit = induction.acts_criterion(G, D, N)
    detail = {"acts": av.acts, "criterion": crit, "modulus": induction.action_modulus(D, N)}
    ok = av.acts == crit
    if not av.acts:
        ok = ok and member(G, av.matrix) and math.gcd(coeff_x2(av.form, av.matrix), N) > 1
        detail["witness"] = av.to_json()["witness"]
    if not crit:
        Q, gamma = induction.counterexample(G, D, N)
        verified = member(G, gamma) and math.gcd(Q.a, N) == 1 and math.gcd(coeff_x2(Q, gamma), N) > 1
        ok = ok and verified
        detail["case_witness"] = {"form": list(Q.astuple()), "matrix": as_nested(gamma), "verified": verified}
    recs.append(CaseRecord(D, N, spec, "action-criterion", _status(ok), detail, time.perf_counter() - t))

    t = time.perf_counter()
    checked = []
    ok = True
    for M in range(2, N + 1):
        if N % M or not is_squarefree(M) or contained_in_gamma0(G, M):
            continue
        p, g = not_gamma0_witness(G, M)
        good = M % p == 0 and g[0] % p == 0 and g[2] % p != 0 and member(G, g)
        ok = ok and good
        checked.append({"M": M, "p": p, "matrix": as_nested(g), "verified": good})
    status = _status(ok) if checked else "not-applicable"
    recs.append(CaseRecord(D, N, spec, "gamma0-witness", status, {"witnesses": checked}, time.perf_counter() - t))

    t = time.perf_counter()
    iv = induction.induces(G, D, N)
    detail = iv.to_json()
    ok = True
    if G == gamma1(N):
        ok = iv.induces and len(iv.H) == 1
    elif G == full_sl2(N):
        ok = iv.induces and sorted(iv.H) == induction.level1_kernel(D, N)
    # for other groups either outcome is recorded; the verdict itself is the finding
    recs.append(CaseRecord(D, N, spec, "induction", _status(ok), detail, time.perf_counter() - t))

    t = time.perf_counter()
    shadow = adelic.build_shadow(D, N, G)
    lc = classlevel.leading_coefficient_subgroup(D, N).subgroup
    part_ok = adelic.sl2_part(shadow)[1]
    derived = adelic.derived_group(shadow)
    derived_induces = induction.induces(derived, D, N).induces
    ok = (
        shadow.determinants == lc
        and adelic.diagonal_condition(shadow)
        and (part_ok or not iv.induces)
        and derived_induces
        and G.image <= shadow.W
    )
    detail = dict(shadow.to_json(), sl2_part_matches=part_ok, derived_induces=derived_induces)
    recs.append(CaseRecord(D, N, spec, "shadow-construction", _status(ok), detail, time.perf_counter() - t))

    t = time.perf_counter()
    applicable = av.acts and iv.induces and D not in (-3, -4) and contains_minus_identity(G)
    if applicable:
        closed, violators = adelic.bottom_row_closure_check(D, N, G)
        equal = adelic.shadow_equals_literal_set(D, N, G)
        detail = {"closure": closed, "violators": [as_nested(v) for v in violators[:5]], "sets_equal": equal}
        status = _status(closed and equal)
    else:
        detail = {"acts": av.acts, "induces": iv.induces, "minus_identity": contains_minus_identity(G)}
        status = "not-applicable"
    recs.append(CaseRecord(D, N, spec, "bottom-row-closure", status, detail, time.perf_counter() - t))

    t = time.perf_counter()
    rep = adelic.canonical_model_equivalence(D, N, G)
    recs.append(CaseRecord(D, N, spec, "canonical-model-equivalence", rep["status"], rep, time.perf_counter() - t))
    return recs


def run_unit(args: tuple[int, int, SweepConfig]) -> list[dict]:
    """All records for one (D, N); picklable entry point for worker processes."""
    D, N, cfg = args
    recs = level_checks(D, N, cfg)
    for G in family(N, cfg):
        recs += group_checks(D, N, G)
    return [dict(r.to_json(), seconds=r.seconds) for r in recs]


def verify_all(cfg: SweepConfig, jobs: int = 1) -> tuple[dict, list[dict]]:
    """(report, timings). The report is independent of jobs; timings are not."""
    units = [(D, N, cfg) for D in cfg.discriminants for N in cfg.levels]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(run_unit, units))
    else:
        chunks = [run_unit(u) for u in units]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r["disc"], r["level"], r["group"], r["check"]))
    timings = [{k: r[k] for k in ("disc", "level", "group", "check", "seconds")} for r in rows]
    cases = [{k: v for k, v in r.items() if k != "seconds"} for r in rows]
    summary = {s: sum(1 for c in cases if c["status"] == s) for s in ("pass", "fail", "not-applicable")}
    by_check: dict[str, dict[str, int]] = {}
    for c in cases:
        by_check.setdefault(c["check"], {"pass": 0, "fail": 0, "not-applicable": 0})[c["status"]] += 1
    report = {
        "version": __version__,
        "config_hash": cfg.digest(),
        "summary": summary,
        "by_check": by_check,
        "cases": cases,
    }
    return report, timings


def markdown(report: dict, timings: list[dict]) -> str:
    lines = [
        "# Verification report",
        "",
        f"version {report['version']}, config {report['config_hash']}",
        "",
        "| check | pass | fail | not-applicable |",
        "|---|---|---|---|",
    ]
    for check, counts in sorted(report["by_check"].items()):
        lines.append(f"| {check} | {counts['pass']} | {counts['fail']} | {counts['not-applicable']} |")
    total = sum(t["seconds"] for t in timings)
    lines += ["", f"total compute time: {total:.1f} s", ""]
    fails = [c for c in report["cases"] if c["status"] == "fail"]
    if fails:
        lines += ["## Failures", ""]
        lines += [f"- {c['check']} at D={c['disc']} N={c['level']} {c['group']}: `{c['repro']}`" for c in fails]
    slow = sorted(timings, key=lambda t: -t["seconds"])[:10]
    lines += ["## Slowest cases", ""]
    lines += [f"- {t['check']} D={t['disc']} N={t['level']} {t['group']}: {t['seconds']:.2f} s" for t in slow]
    return "\n".join(lines) + "\n"
