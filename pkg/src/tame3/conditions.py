"""Declarative checkers for the reduction conditions and their consequences.

Each checker evaluates its named conditions literally against a pair of
triples and reports one flag per condition plus a diagnostic payload.  The
JSON field names (SU1..SU6, SU1'..SU3', P1..P12, typeI..typeIV) are the
standard labels for these conditions and are kept stable for machine-read
certificates.

Universally quantified properties (P4, P9, P10) cannot be decided over all
of k[S_i]; they are checked over the finite witness families the theory
actually exercises, and the payload records the quantifier as "sampled".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import (
    DegreeValue,
    Poly,
    WeightSystem,
    half,
    proportionality,
    solve_linear,
    total_weight,
    z_independent,
)
from .forms import deg_form, differential, differentials_wedge, wedge
from .search import (
    DEFAULT_LIMITS,
    BiPoly,
    SearchLimits,
    exact_membership,
    homogeneous_membership,
    leading_membership_search,
    membership_in_single,
    permute_triple,
    PERMUTATIONS_3,
)

Triple = tuple[Poly, Poly, Poly]


@dataclass
class ConditionReport:
    conditions: dict = field(default_factory=dict)
    overall: bool = True

    def set(self, name: str, holds: bool, **payload) -> None:
        self.conditions[name] = {"holds": bool(holds), **payload}
        self.overall = self.overall and bool(holds)

    def __getitem__(self, name: str) -> dict:
        return self.conditions[name]

    def to_json(self) -> dict:
        return {**self.conditions, "overall": self.overall}


def _wedge_degree(ws: WeightSystem, p: Poly, q: Poly) -> DegreeValue:
    return deg_form(ws, wedge(differential(p), differential(q)))


def _decompose(ws: WeightSystem, target: Poly, atoms: Sequence[Poly]):
    """Exact coefficients c with target == sum c_k atom_k, or None."""
    monos = set(target.terms)
    for a in atoms:
        monos.update(a.terms)
    mono_list = sorted(monos, reverse=True)
    rows = [[a.terms.get(m, Fraction(0)) for a in atoms] for m in mono_list]
    rhs = [target.terms.get(m, Fraction(0)) for m in mono_list]
    return solve_linear(rows, rhs)


def _power_proportionality_exponent(
    ws: WeightSystem, p: Poly, base: Poly
) -> Optional[int]:
    """m >= 0 with p ~ base^m (exact scalar proportionality), else None."""
    dp, db = ws.deg(p), ws.deg(base)
    if not db.is_positive():
        raise ValueError("base must be nonconstant")
    if dp == DegreeValue.of(*([0] * ws.r)):
        return 0 if p.is_constant else None
    if z_independent(dp, db):
        return None
    from .algebra import _parallel_multiplier, _primitive_direction

    e = _primitive_direction(db.vec)
    mb = _parallel_multiplier(db.vec, e)
    mp = _parallel_multiplier(dp.vec, e)
    if mp is None or mb is None or mp % mb:
        return None
    m = mp // mb
    if m < 0:
        return None
    return m if proportionality(p, base**m) is not None else None


def _in_algebra_of_single_form(ws: WeightSystem, p: Poly, base: Poly) -> bool:
    """Membership of a form in k[base-form]: some power matches exactly."""
    return _power_proportionality_exponent(ws, p, base) is not None


def _odd_power_relation(
    ws: WeightSystem, g1: Poly, g2: Poly
) -> Optional[int]:
    """Odd s >= 3 with (g1^w)^2 proportional to (g2^w)^s."""
    d1, d2 = ws.deg(g1), ws.deg(g2)
    if d1.is_bottom or d2.is_bottom:
        return None
    lhs = 2 * d1
    from .algebra import _parallel_multiplier, _primitive_direction

    if not any(d2.vec):
        return None
    e = _primitive_direction(d2.vec)
    m2 = _parallel_multiplier(d2.vec, e)
    ml = _parallel_multiplier(lhs.vec, e)
    if m2 is None or ml is None or m2 <= 0 or ml % m2:
        return None
    s = ml // m2
    if s < 3 or s % 2 == 0:
        return None
    g1w, g2w = ws.leading_form(g1), ws.leading_form(g2)
    if proportionality(g1w**2, g2w**s) is None:
        return None
    return s


def _membership_flag(outcome) -> tuple[bool, dict]:
    if outcome.found is not None:
        return True, {"witness_pairs": sorted(outcome.found.coeffs)}
    ab = outcome.absence
    return False, {"absence": ab.to_json() if ab else None}


# ---------------------------------------------------------------------------
# Condition checkers
# ---------------------------------------------------------------------------


def check_su_conditions(
    ws: WeightSystem,
    F: Triple,
    G: Triple,
    limits: SearchLimits = DEFAULT_LIMITS,
    su1_membership_known: bool = False,
) -> ConditionReport:
    """The six-block condition on an ordered pair of independent triples."""
    for name, triple in (("F", F), ("G", G)):
        if differentials_wedge(list(triple)).is_zero:
            raise ValueError(f"{name} has algebraically dependent components")
    f1, f2, f3 = F
    g1, g2, g3 = G
    rep = ConditionReport()

    # SU1: g1 = f1 + a f3^2 + c f3; g2 = f2 + b f3; g3 - f3 in k[g1, g2].
    shift1 = g1 - f1
    sol1 = (
        [Fraction(0), Fraction(0)]
        if shift1.is_zero
        else _decompose(ws, shift1, [f3 * f3, f3])
    )
    shift2 = g2 - f2
    sol2 = [Fraction(0)] if shift2.is_zero else _decompose(ws, shift2, [f3])
    if su1_membership_known:
        member3, payload3 = True, {"by_construction": True}
    else:
        member3, payload3 = _membership_flag(
            exact_membership(ws, g3 - f3, (g1, g2), limits)
        )
    rep.set(
        "SU1",
        sol1 is not None and sol2 is not None and member3,
        a=str(sol1[0]) if sol1 else None,
        c=str(sol1[1]) if sol1 else None,
        b=str(sol2[0]) if sol2 else None,
        third_component=payload3,
    )

    rep.set("SU2", ws.deg(f1) <= ws.deg(g1) and ws.deg(f2) == ws.deg(g2),
            deg_f=[ws.deg(f1).to_json(), ws.deg(f2).to_json()],
            deg_g=[ws.deg(g1).to_json(), ws.deg(g2).to_json()])

    s = _odd_power_relation(ws, g1, g2)
    rep.set("SU3", s is not None, s=s)

    su4_deg = ws.deg(f3) <= ws.deg(g1)
    su4_mem = homogeneous_membership(
        ws, ws.leading_form(f3), ws.leading_form(g1), ws.leading_form(g2)
    )
    rep.set("SU4", su4_deg and su4_mem is None,
            degree_ok=su4_deg, leading_in_pair=su4_mem is not None)

    rep.set("SU5", ws.deg(g3) < ws.deg(f3),
            deg_g3=ws.deg(g3).to_json(), deg_f3=ws.deg(f3).to_json())

    bound = ws.deg(g1) - ws.deg(g2) + _wedge_degree(ws, g1, g2)
    rep.set("SU6", ws.deg(g3) < bound, bound=bound.to_json())
    return rep


def check_quasi_su(
    ws: WeightSystem,
    F: Triple,
    G: Triple,
    limits: SearchLimits = DEFAULT_LIMITS,
    su1_membership_known: bool = False,
) -> ConditionReport:
    """Weakened first three conditions plus the shared last three."""
    for name, triple in (("F", F), ("G", G)):
        if differentials_wedge(list(triple)).is_zero:
            raise ValueError(f"{name} has algebraically dependent components")
    f1, f2, f3 = F
    g1, g2, g3 = G
    rep = ConditionReport()

    m1, p1 = (True, {"zero_shift": True}) if (g1 - f1).is_zero else _membership_flag(
        exact_membership(ws, g1 - f1, (f2, f3), limits)
    )
    shift2 = g2 - f2
    m2 = shift2.is_zero or membership_in_single(ws, shift2, f3) is not None
    if su1_membership_known:
        m3, p3 = True, {"by_construction": True}
    else:
        m3, p3 = (True, {"zero_shift": True}) if (g3 - f3).is_zero else _membership_flag(
            exact_membership(ws, g3 - f3, (g1, g2), limits)
        )
    rep.set("SU1'", m1 and m2 and m3, first=p1, second_in_third_gen=m2, third=p3)

    rep.set("SU2'", ws.deg(f1) <= ws.deg(g1) and ws.deg(f2) <= ws.deg(g2))

    su3p = ws.deg(g2) < ws.deg(g1) and not _in_algebra_of_single_form(
        ws, ws.leading_form(g1), ws.leading_form(g2)
    )
    rep.set("SU3'", su3p)

    su4_deg = ws.deg(f3) <= ws.deg(g1)
    su4_mem = homogeneous_membership(
        ws, ws.leading_form(f3), ws.leading_form(g1), ws.leading_form(g2)
    )
    rep.set("SU4", su4_deg and su4_mem is None,
            degree_ok=su4_deg, leading_in_pair=su4_mem is not None)

    rep.set("SU5", ws.deg(g3) < ws.deg(f3))

    bound = ws.deg(g1) - ws.deg(g2) + _wedge_degree(ws, g1, g2)
    rep.set("SU6", ws.deg(g3) < bound, bound=bound.to_json())
    return rep


# ---------------------------------------------------------------------------
# Derived properties P1-P12
# ---------------------------------------------------------------------------


def _p11_decomposition(ws, F: Triple, G: Triple, s: int, delta: DegreeValue):
    """(a, b, c, d, psi-coeffs) for the canonical shift shapes, or None."""
    f1, f2, f3 = F
    g1, g2, g3 = G
    psi_max = (s - 1) // 2
    atoms = [f3 * f3, f3] + [f2**m for m in range(psi_max + 1)]
    shift1 = g1 - f1
    sol1 = (
        [Fraction(0)] * len(atoms) if shift1.is_zero else _decompose(ws, shift1, atoms)
    )
    if sol1 is None:
        return None
    psi_coeffs = {m: sol1[2 + m] for m in range(psi_max + 1) if sol1[2 + m]}
    shift2 = g2 - f2
    sol2 = (
        [Fraction(0), Fraction(0)]
        if shift2.is_zero
        else _decompose(ws, shift2, [f3, Poly.constant(1, f3.n)])
    )
    if sol2 is None:
        return None
    return sol1[0], sol2[0], sol1[1], sol2[1], psi_coeffs


def _psi_poly(f2: Poly, psi_coeffs: dict) -> Poly:
    acc = Poly.zero(f2.n)
    for m in sorted(psi_coeffs):
        acc = acc + (f2**m).scale(psi_coeffs[m])
    return acc


def verify_properties(
    ws: WeightSystem,
    F: Triple,
    G: Triple,
    limits: SearchLimits = DEFAULT_LIMITS,
) -> ConditionReport:
    """P1-P12 for a pair already passing the weakened condition block."""
    quasi = check_quasi_su(ws, F, G, limits)
    if not quasi.overall:
        raise ValueError("pair does not satisfy the weakened condition block")
    f1, f2, f3 = F
    g1, g2, g3 = G
    rep = ConditionReport()
    d1, d2, d3 = (ws.deg(f) for f in F)

    s = _odd_power_relation(ws, g1, g2)
    delta = half(ws.deg(g2)) if s is not None else None
    rep.set("P1", s is not None and delta is not None, s=s,
            delta=delta.to_json() if delta else None)
    if s is None or delta is None:
        for name in [f"P{k}" for k in range(2, 13)]:
            rep.set(name, False, skipped="no odd power relation")
        return rep

    w12 = _wedge_degree(ws, g1, g2)
    rep.set("P2", d3 >= (s - 2) * delta + w12)

    rep.set("P3", d2 == ws.deg(g2))

    decomp = _p11_decomposition(ws, F, G, s, delta)

    # P4 (sampled): products of the last two components within the degree cap
    # must decompose into the quadratic-linear-tail shape.
    family4: list[Poly] = []
    cap = s * delta
    for i in range(limits.max_candidates):
        for j in range(limits.max_candidates):
            if i == j == 0:
                continue
            dd = i * d2 + j * d3
            if dd <= cap:
                family4.append(f2**i * f3**j)
            elif j == 0 and i * d2 > cap:
                break
        if i * d2 > cap:
            break
    if not (g1 - f1).is_zero:
        family4.append(g1 - f1)
    psi_max = (s - 1) // 2
    atoms4 = [f3 * f3, f3] + [f2**m for m in range(psi_max + 1)]
    p4_ok = all(_decompose(ws, phi, atoms4) is not None for phi in family4)
    rep.set("P4", p4_ok, quantifier="sampled", family_size=len(family4))

    if d1 < ws.deg(g1):
        p5 = (
            s == 3
            and proportionality(ws.leading_form(g1), ws.leading_form(f3) ** 2)
            is not None
            and 2 * d3 == 3 * delta
            and 2 * d1 >= 5 * delta + 2 * w12
        )
        rep.set("P5", p5, active=True)
    else:
        rep.set("P5", True, active=False)

    rep.set("P6", ws.deg_endo(G) < ws.deg_endo(F))

    rep.set(
        "P7",
        d2 < d1 and d3 <= d1 and all(delta < d <= s * delta for d in (d1, d2, d3)),
    )

    # P8: pairwise leading-form algebra exclusions, with the one allowed case.
    p8_pairs_ok = True
    for (i, j) in ((1, 2), (2, 1), (2, 3), (3, 2), (3, 1)):
        if _in_algebra_of_single_form(
            ws, ws.leading_form(F[i - 1]), ws.leading_form(F[j - 1])
        ):
            p8_pairs_ok = False
    p8_latter = True
    if _in_algebra_of_single_form(ws, ws.leading_form(f1), ws.leading_form(f3)):
        p8_latter = (
            s == 3
            and proportionality(ws.leading_form(f1), ws.leading_form(f3) ** 2)
            is not None
            and 2 * d3 == 3 * delta
        )
    rep.set("P8", p8_pairs_ok and p8_latter)

    # P9 (sampled): small elements of k[f1, f3] under the degree cap are
    # affine in f3.
    family9 = [phi for phi in (f3, f1) if ws.deg(phi) <= d2]
    if not (g2 - f2).is_zero:
        family9.append(g2 - f2)
    atoms9 = [f3, Poly.constant(1, f3.n)]
    p9_ok = all(_decompose(ws, phi, atoms9) is not None for phi in family9)
    rep.set("P9", p9_ok, quantifier="sampled", family_size=len(family9))

    # P10 (sampled): hypothesis witnessed by (a, b, c) != 0 from the
    # canonical decomposition.
    if decomp is None:
        rep.set("P10", False, note="no canonical decomposition")
    else:
        a, b, c, dconst, psi_coeffs = decomp
        if (a, b, c) == (0, 0, 0):
            rep.set("P10", True, active=False,
                    note="generating pairs coincide; hypothesis void")
        else:
            family10: list[Poly] = [f1]
            m = 0
            while 2 * m * delta <= d1 and m <= limits.max_candidates:
                family10.append(f2**m)
                m += 1
            ok = True
            for phi in family10:
                if ws.deg(phi) > d1:
                    continue
                atoms10 = [f1] + [
                    f2**m
                    for m in range(psi_max + 1)
                    if 2 * m * delta <= min((s - 1) * delta, ws.deg(phi))
                ]
                sol = _decompose(ws, phi, atoms10)
                if sol is None or (ws.deg(phi) < d1 and sol[0] != 0):
                    ok = False
            rep.set("P10", ok, quantifier="sampled", family_size=len(family10))

    if decomp is None:
        rep.set("P11", False, note="no decomposition in the canonical shape")
        rep.set("P12", False, note="scalars unavailable")
        return rep
    a, b, c, dconst, psi_coeffs = decomp
    psi = _psi_poly(f2, psi_coeffs)
    p11 = True
    if not psi.is_zero and not ws.deg(psi) <= (s - 1) * delta:
        p11 = False
    if (a != 0 or b != 0) and not d3 <= d2:
        p11 = False
    if d3 <= d2 and s != 3:
        p11 = False
    rep.set("P11", p11, a=str(a), b=str(b), c=str(c), d=str(dconst),
            psi={str(k): str(v) for k, v in psi_coeffs.items()},
            uniqueness="checked only against supplied pairs")

    w13 = _wedge_degree(ws, f1, f3)
    w23 = _wedge_degree(ws, f2, f3)
    wf12 = _wedge_degree(ws, f1, f2)
    if a != 0:
        first_ok = wf12 == d3 + w23
    elif b != 0:
        first_ok = wf12 == w13
    elif c != 0:
        first_ok = wf12 == w23
    else:
        first_ok = wf12 == w12
    rep.set(
        "P12",
        first_ok and w13 == (s - 2) * delta + w23 and w23 >= s * delta + w12,
        first=first_ok,
    )
    return rep


# ---------------------------------------------------------------------------
# Constructive normalization
# ---------------------------------------------------------------------------


@dataclass
class Normalization:
    e1: Triple
    e2: Triple
    normalized: Triple
    params: dict


def normalize_to_su(
    ws: WeightSystem,
    F: Triple,
    G: Triple,
    limits: SearchLimits = DEFAULT_LIMITS,
) -> Normalization:
    """Strip the tail and the constant from the first two shifts.

    Produces G' differing from G by two elementary moves, with the first
    move degree-preserving, such that (F, G') satisfies the strict condition
    block; raises if the input pair does not satisfy the weakened one.
    """
    quasi = check_quasi_su(ws, F, G, limits)
    if not quasi.overall:
        raise ValueError("pair does not satisfy the weakened condition block")
    s = _odd_power_relation(ws, G[0], G[1])
    delta = half(ws.deg(G[1]))
    if s is None or delta is None:
        raise ValueError("no odd power relation on the reduced pair")
    decomp = _p11_decomposition(ws, F, G, s, delta)
    if decomp is None:
        raise ValueError("shifts do not decompose in the canonical shape")
    a, b, c, dconst, psi_coeffs = decomp
    n = F[0].n
    y1, y2, y3 = (Poly.variable(i, n) for i in range(n))

    def psi_at(p: Poly) -> Poly:
        acc = Poly.zero(n)
        for m in sorted(psi_coeffs):
            acc = acc + (p**m).scale(psi_coeffs[m])
        return acc

    e1 = (y1 - psi_at(y2 - Poly.constant(dconst, n)), y2, y3)
    e2 = (y1, y2 - Poly.constant(dconst, n), y3)
    g1p = G[0] - psi_at(G[1] - Poly.constant(dconst, n))
    g2p = G[1] - Poly.constant(dconst, n)
    normalized = (g1p, g2p, G[2])
    if ws.deg(g1p) != ws.deg(G[0]):
        raise AssertionError("first normalization move changed the degree")
    strict = check_su_conditions(ws, F, normalized, limits)
    if not strict.overall:
        raise AssertionError("normalized pair fails the strict condition block")
    return Normalization(e1, e2, normalized, {
        "a": a, "b": b, "c": c, "d": dconst,
        "psi": dict(psi_coeffs), "s": s, "delta": delta,
    })


# ---------------------------------------------------------------------------
# Type detectors (total degree only)
# ---------------------------------------------------------------------------


@dataclass
class TypeWitness:
    type: str
    l: int
    sigma: tuple
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    gamma: Optional[Fraction] = None
    mu: Optional[Fraction] = None
    sigma_scalar: Optional[Fraction] = None
    g: Optional[BiPoly] = None
    derived: Optional[Triple] = None

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "l": self.l,
            "sigma": list(self.sigma),
            "alpha": None if self.alpha is None else str(self.alpha),
            "beta": None if self.beta is None else str(self.beta),
            "gamma": None if self.gamma is None else str(self.gamma),
            "mu": None if self.mu is None else str(self.mu),
            "sigma_scalar": None if self.sigma_scalar is None else str(self.sigma_scalar),
            "g": None if self.g is None else self.g.to_json(),
        }


def _scalar_deg(ws: WeightSystem, p: Poly) -> Optional[int]:
    d = ws.deg(p)
    return None if d.is_bottom else d.vec[0]


def _leading_dependence_scalars(ws, fixed_form: Poly, base_form: Poly,
                                shift_form: Optional[Poly]) -> list[Fraction]:
    """Scalars t making fixed_form and (base_form - t*shift_form)
    algebraically dependent; the wedge condition is linear in t."""
    w0 = wedge(differential(fixed_form), differential(base_form))
    if shift_form is None:
        return [Fraction(0)] if w0.is_zero else []
    w1 = wedge(differential(fixed_form), differential(shift_form))
    if w1.is_zero:
        return [Fraction(0), Fraction(1)] if w0.is_zero else []
    if w0.is_zero:
        return [Fraction(0)]
    # componentwise ratio w0 = t * w1
    monos: dict = {}
    for idx, poly in w1.coeffs.items():
        for m, cc in poly.terms.items():
            monos[(idx, m)] = cc
    t: Optional[Fraction] = None
    for (idx, m), cc in monos.items():
        other = w0.coeffs.get(idx)
        num = other.terms.get(m, Fraction(0)) if other else Fraction(0)
        ratio = num / cc
        if t is None:
            t = ratio
        elif t != ratio:
            return []
    for idx, poly in w0.coeffs.items():
        base = w1.coeffs.get(idx)
        for m, cc in poly.terms.items():
            if (base.terms.get(m, Fraction(0)) if base else Fraction(0)) * t != cc:
                return []
    return [t] if t else []


def _peel_for_type(ws, h3: Poly, gens: tuple[Poly, Poly], limits,
                   accept) -> Optional[tuple[BiPoly, Poly]]:
    """Peel h3 over gens until `accept(g3)` holds; (phi, g3) with
    g3 = h3 + phi.value()."""
    from .search import _ProductCache

    cache = _ProductCache(*gens, ws)
    residual = h3
    acc: dict = {}
    for _ in range(48):
        if accept(residual) and acc:
            return BiPoly(gens, {k: -v for k, v in acc.items()}), residual
        if residual.is_zero or residual.is_constant:
            return None
        out = leading_membership_search(ws, residual, gens, limits, cache)
        if out.found is None:
            return None
        for key, cc in out.found.coeffs.items():
            val = acc.get(key, Fraction(0)) + cc
            if val:
                acc[key] = val
            else:
                acc.pop(key, None)
        residual = residual - out.found.value()
    return None


def detect_type(
    F: Triple,
    which: str,
    limits: SearchLimits = DEFAULT_LIMITS,
    ws: Optional[WeightSystem] = None,
) -> Optional[TypeWitness]:
    """Detect one of the four multi-step reduction patterns at total degree.

    Only the rank-one all-ones weight is meaningful here; other weights are
    rejected loudly.
    """
    if which not in ("I", "II", "III", "IV"):
        raise ValueError(f"unknown type {which!r}")
    if ws is None:
        ws = total_weight(3)
    elif ws.weights != ((1,), (1,), (1,)):
        raise ValueError("type detection is defined for the all-ones weight only")
    for sigma in PERMUTATIONS_3:
        H = permute_triple(F, sigma)
        witness = _detect_on_permuted(ws, H, sigma, which, limits)
        if witness is not None:
            return witness
    return None


def _detect_on_permuted(ws, H: Triple, sigma: tuple, which: str, limits):
    h1, h2, h3 = H
    v1, v2, v3 = (_scalar_deg(ws, h) for h in H)
    if v1 is None or v2 is None or v3 is None:
        return None
    if which in ("I", "II"):
        if v1 % 2 or v1 < 2:
            return None
        l = v1 // 2
        if v2 % l:
            return None
        s = v2 // l
        if s < 3 or s % 2 == 0:
            return None
        if which == "I":
            return _detect_type_i(ws, H, sigma, l, s, limits)
        if s != 3:
            return None
        return _detect_type_ii(ws, H, sigma, l, limits)
    # Types III and IV share their prelude.
    if v1 % 2 or v1 < 2:
        return None
    l = v1 // 2
    branch_a = v2 == 3 * l and 2 * l < 2 * v3 <= 3 * l
    branch_b = 2 * v3 == 3 * l and 5 * l < 2 * v2 <= 6 * l
    if not (branch_a or branch_b):
        return None
    return _detect_type_iii_iv(ws, H, sigma, l, which, limits)


def _detect_type_i(ws, H, sigma, l: int, s: int, limits):
    h1, h2, h3 = H
    v3 = _scalar_deg(ws, h3)
    if not 2 * l < v3 <= s * l:
        return None
    if homogeneous_membership(
        ws, ws.leading_form(h3), ws.leading_form(h1), ws.leading_form(h2)
    ) is not None:
        return None
    h1w, h2w, h3w = (ws.leading_form(h) for h in H)
    if v3 == s * l:
        alphas = [t for t in _leading_dependence_scalars(ws, h1w, h2w, h3w) if t != 0]
    else:
        alphas = [Fraction(1)] if _leading_dependence_scalars(ws, h1w, h2w, None) else []
    for alpha in alphas:
        g1 = h1
        g2 = h2 - h3.scale(alpha)
        if _scalar_deg(ws, g2) != s * l:
            continue
        if not wedge(differential(ws.leading_form(g1)),
                     differential(ws.leading_form(g2))).is_zero:
            continue
        w12 = _wedge_degree(ws, g1, g2)
        bound = DegreeValue.of(s * l) + w12

        def accept(res: Poly) -> bool:
            if res.is_zero:
                return False
            if not ws.deg(res) < ws.deg(h3):
                return False
            return _wedge_degree(ws, g1, res) < bound

        peeled = _peel_for_type(ws, h3, (g1, g2), limits, accept)
        if peeled is None:
            continue
        phi, g3 = peeled
        return TypeWitness(type="I", l=l, sigma=sigma, alpha=alpha, g=phi,
                           derived=(g1, g2, g3))
    return None


def _detect_type_ii(ws, H, sigma, l: int, limits):
    h1, h2, h3 = H
    v3 = _scalar_deg(ws, h3)
    if not 3 * l < 2 * v3 <= 4 * l:
        return None
    h1w, h2w, h3w = (ws.leading_form(h) for h in H)
    if proportionality(h1w, h3w) is not None:
        return None
    if v3 == 2 * l:
        alphas = _leading_dependence_scalars(ws, h2w, h1w, h3w)
    else:
        alphas = [Fraction(0)] if _leading_dependence_scalars(ws, h2w, h1w, None) else []
    candidates = []
    for alpha in alphas:
        betas = [Fraction(0), Fraction(1)] if alpha != 0 else [Fraction(1)]
        candidates.extend((alpha, beta) for beta in betas)
    for alpha, beta in candidates:
        g1 = h1 - h3.scale(alpha)
        g2 = h2 - h3.scale(beta)
        if _scalar_deg(ws, g1) != 2 * l or _scalar_deg(ws, g2) != 3 * l:
            continue
        if not wedge(differential(ws.leading_form(g1)),
                     differential(ws.leading_form(g2))).is_zero:
            continue
        w12 = _wedge_degree(ws, g1, g2)
        bound = DegreeValue.of(3 * l) + w12

        def accept(res: Poly) -> bool:
            if res.is_zero:
                return False
            if not ws.deg(res) < ws.deg(h3):
                return False
            return _wedge_degree(ws, g1, res) < bound

        peeled = _peel_for_type(ws, h3, (g1, g2), limits, accept)
        if peeled is None:
            continue
        phi, g3 = peeled
        return TypeWitness(type="II", l=l, sigma=sigma, alpha=alpha, beta=beta,
                           g=phi, derived=(g1, g2, g3))
    return None


def _detect_type_iii_iv(ws, H, sigma, l: int, which: str, limits):
    h1, h2, h3 = H
    v2, v3 = _scalar_deg(ws, h2), _scalar_deg(ws, h3)
    h1w, h2w, h3w = (ws.leading_form(h) for h in H)
    h3sq = h3 * h3
    if 2 * v3 == 3 * l:
        if v2 == 3 * l:
            alphas = _leading_dependence_scalars(ws, h1w, h2w, ws.leading_form(h3sq))
        else:
            # degree of h2 is below 3l, so the quadratic term supplies the top
            alphas = (
                [Fraction(-1)]
                if wedge(differential(h1w), differential(ws.leading_form(h3sq))).is_zero
                else []
            )
    else:
        alphas = [Fraction(0)] if _leading_dependence_scalars(ws, h1w, h2w, None) else []
    beta = Fraction(0)
    gamma = Fraction(0)
    for alpha in alphas:
        g1 = h1 - h3.scale(beta)
        g2 = h2 - h3.scale(gamma) - h3sq.scale(alpha)
        if _scalar_deg(ws, g1) != 2 * l or _scalar_deg(ws, g2) != 3 * l:
            continue
        if not wedge(differential(ws.leading_form(g1)),
                     differential(ws.leading_form(g2))).is_zero:
            continue
        w12 = _wedge_degree(ws, g1, g2)
        wedge_bound = DegreeValue.of(3 * l) + w12
        if which == "III":
            if (alpha, beta, gamma) == (0, 0, 0):
                continue
            deg_bound = DegreeValue.of(l) + w12

            def accept(res: Poly) -> bool:
                if res.is_zero:
                    return False
                d = ws.deg(res)
                return (2 * d.vec[0] <= 3 * l and d < deg_bound
                        and _wedge_degree(ws, g1, res) < wedge_bound)

        else:

            def accept(res: Poly) -> bool:
                if res.is_zero or res.is_constant:
                    return False
                d = ws.deg(res)
                if not (2 * d.vec[0] <= 3 * l
                        and _wedge_degree(ws, g1, res) < wedge_bound):
                    return False
                if 2 * d.vec[0] != 3 * l:
                    return False
                t = proportionality(ws.leading_form(g2), ws.leading_form(res * res))
                if t is None:
                    return False
                return _scalar_deg(ws, g2 - (res * res).scale(t)) <= 2 * l

        peeled = _peel_for_type(ws, h3, (g1, g2), limits, accept)
        if peeled is None:
            continue
        phi, g3 = peeled
        mu = None
        if which == "IV":
            mu = proportionality(ws.leading_form(g2), ws.leading_form(g3 * g3))
        return TypeWitness(type=which, l=l, sigma=sigma, alpha=alpha, beta=beta,
                           gamma=gamma, mu=mu, sigma_scalar=Fraction(1), g=phi,
                           derived=(g1, g2, g3))
    return None


# ---------------------------------------------------------------------------
# Consequences used as test predicates
# ---------------------------------------------------------------------------


def su_pair_uniqueness(
    ws: WeightSystem,
    F: Triple,
    G1: Triple,
    G2: Triple,
    limits: SearchLimits = DEFAULT_LIMITS,
) -> dict:
    """Two strict reductions of one triple agree in the first two
    components, and their third components differ by an element of the
    algebra of the second."""
    for G in (G1, G2):
        if not check_su_conditions(ws, F, G, limits).overall:
            raise ValueError("both pairs must satisfy the strict condition block")
    first_equal = G1[0] == G2[0]
    second_equal = G1[1] == G2[1]
    diff = G1[2] - G2[2]
    if diff.is_zero:
        member = True
    else:
        member = membership_in_single(ws, diff, G1[1]) is not None
    return {
        "first_equal": first_equal,
        "second_equal": second_equal,
        "third_difference_in_second": member,
        "holds": first_equal and second_equal and member,
    }


def check_not_er(
    ws: WeightSystem,
    F: Triple,
    G: Triple,
    limits: SearchLimits = DEFAULT_LIMITS,
) -> dict:
    """Non-membership of each leading form in the graded algebra of the
    other two components, under the stated hypotheses."""
    if not check_su_conditions(ws, F, G, limits).overall:
        raise ValueError("pair must satisfy the strict condition block")
    f1, f2, f3 = F
    g1, g2, g3 = G
    out: dict = {"holds": True}
    hyp1 = proportionality(ws.leading_form(f1), ws.leading_form(f3) ** 2) is None
    hyp3 = (f1, f2) != (g1, g2)
    for i, hyp in ((1, hyp1), (2, True), (3, hyp3)):
        if not hyp:
            out[f"i{i}"] = {"skipped": "hypothesis void"}
            continue
        j, k = [x for x in (1, 2, 3) if x != i]
        fi, fj, fk = F[i - 1], F[j - 1], F[k - 1]
        dj, dk = ws.deg(fj), ws.deg(fk)
        from .algebra import semigroup_member

        if z_independent(dj, dk) and semigroup_member(ws.deg(fi), dj, dk) is None:
            out[f"i{i}"] = {"non_membership": True, "rigorous": True,
                            "reason": "semigroup-obstruction"}
            continue
        res = leading_membership_search(ws, fi, (fj, fk), limits)
        if res.found is not None:
            out[f"i{i}"] = {"non_membership": False}
            out["holds"] = False
        else:
            out[f"i{i}"] = {"non_membership": True,
                            "rigorous": res.absence.rigorous,
                            "reason": res.absence.reason}
    return out
