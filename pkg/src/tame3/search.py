"""Bounded constructive searches for leading-form membership and reductions.

Membership of a leading form in the graded algebra generated by two
polynomials is SAGBI-hard in general, so the search here is an explicitly
bounded semi-decision procedure.  Every absence carries a reason tag:

* ``semigroup-obstruction`` -- rigorous: the target degree is not in the
  semigroup generated by the generator degrees (generator degrees
  Z-independent, so no cancellation can evade the count);
* ``degree-shape`` -- rigorous: a degree/parity constraint excludes every
  candidate (e.g. the homogeneous slice does not match, or no component
  degree is halvable);
* ``limits-exhausted`` -- inconclusive: the bounded ansatz ran out.

Only rigorous reasons may feed non-tameness certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import (
    DegreeValue,
    Poly,
    ScaledPair,
    WeightSystem,
    all_semigroup_pairs,
    exists_multiple_exceeding,
    half,
    proportionality,
    semigroup_member,
    solve_sparse_int,
    sqrt_up_to_scalar,
    z_independent,
)
from .forms import differentials_wedge
from .univariate import BiPoly

PERMUTATIONS_3 = (
    (1, 2, 3),
    (1, 3, 2),
    (2, 1, 3),
    (2, 3, 1),
    (3, 1, 2),
    (3, 2, 1),
)


def permute_triple(triple: Sequence, sigma: tuple) -> tuple:
    """(f_{sigma(1)}, f_{sigma(2)}, f_{sigma(3)})."""
    return tuple(triple[s - 1] for s in sigma)


def unpermute_triple(permuted: Sequence, sigma: tuple) -> tuple:
    """Inverse of permute_triple: G with permute_triple(G, sigma) == permuted."""
    out = [None] * len(permuted)
    for k, s in enumerate(sigma):
        out[s - 1] = permuted[k]
    return tuple(out)


@dataclass(frozen=True)
class SearchLimits:
    """Bounds for the cancellation ansatz; all positive.

    ``max_bidegree`` caps each generator exponent explored beyond the
    exact-degree pairs; ``max_cancellation_rounds`` caps how many times the
    ansatz is widened; ``max_candidates`` caps scalar/exponent branching in
    the structured searches.
    """

    max_bidegree: int = 14
    max_cancellation_rounds: int = 8
    max_candidates: int = 24
    max_product_terms: int = 20_000

    def __post_init__(self):
        if min(self.max_bidegree, self.max_cancellation_rounds,
               self.max_candidates, self.max_product_terms) <= 0:
            raise ValueError("limits must be positive")


DEFAULT_LIMITS = SearchLimits()


@dataclass
class Absence:
    reason: str  # semigroup-obstruction | degree-shape | limits-exhausted
    rigorous: bool
    detail: object = None

    def to_json(self) -> dict:
        return {"absent": {"reason": self.reason, "rigorous": self.rigorous,
                           "detail": self.detail}}


@dataclass
class MembershipOutcome:
    found: Optional[BiPoly]
    absence: Optional[Absence] = None
    rounds_used: int = 0


class _ProductCache:
    """Cached powers/products of a fixed generator pair, with each product's
    terms pre-sorted by weighted degree for fast threshold slicing."""

    def __init__(self, f: Poly, g: Poly, ws: Optional[WeightSystem] = None):
        self.f = f
        self.g = g
        self.ws = ws
        self._fp: dict[int, Poly] = {0: Poly.constant(1, f.n)}
        self._gp: dict[int, Poly] = {0: Poly.constant(1, f.n)}
        self._prod: dict[tuple[int, int], Poly] = {}
        self._sorted: dict[tuple[int, int], tuple[int, list]] = {}

    def _power(self, cache: dict, base: Poly, k: int) -> Poly:
        if k not in cache:
            cache[k] = self._power(cache, base, k - 1) * base
        return cache[k]

    def product(self, i: int, j: int) -> Poly:
        key = (i, j)
        if key not in self._prod:
            self._prod[key] = self._power(self._fp, self.f, i) * self._power(
                self._gp, self.g, j
            )
        return self._prod[key]

    def product_within(self, i: int, j: int, term_cap: int) -> bool:
        """Whether f^i g^j is worth building: bounds both the result size
        and the construction work before committing to the power chain."""
        key = (i, j)
        hit = self._prod.get(key)
        if hit is not None:
            return len(hit.terms) <= term_cap
        n = self.f.n
        tf, tg = len(self.f.terms), len(self.g.terms)
        df = max((sum(m) for m in self.f.terms), default=0)
        dg = max((sum(m) for m in self.g.terms), default=0)
        deg = i * df + j * dg
        dense = 1
        for k in range(1, n + 1):
            dense = dense * (deg + k) // k
        size_bound = min(tf**i * tg**j, dense)
        if size_bound > term_cap:
            return False
        # Last multiplication in the chain dominates the build cost.
        if size_bound * max(tf, tg) > 50 * term_cap:
            return False
        return len(self.product(i, j).terms) <= term_cap

    def sorted_int_terms(self, i: int, j: int) -> tuple[int, list]:
        """(denominator, [(degree, mono, int_coeff)] sorted by degree desc)."""
        key = (i, j)
        hit = self._sorted.get(key)
        if hit is not None:
            return hit
        p = self.product(i, j)
        den = 1
        for c in p.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        entries = sorted(
            ((self.ws.monomial_degree(m), m, int(c * den)) for m, c in p.terms.items()),
            key=lambda e: e[0].vec,
            reverse=True,
        )
        self._sorted[key] = (den, entries)
        return den, entries

    def tail(self, i: int, j: int, threshold) -> tuple[int, list]:
        """(denominator, [(mono, int_coeff)] of terms with degree >= threshold)."""
        den, entries = self.sorted_int_terms(i, j)
        out = []
        for d, m, c in entries:
            if d < threshold:
                break
            out.append((m, c))
        return den, out


def _solve_with_pairs(
    ws: WeightSystem,
    target: Poly,
    gens: tuple[Poly, Poly],
    pairs: list[tuple[int, int]],
    threshold: DegreeValue,
    cache: _ProductCache,
) -> Optional[BiPoly]:
    """Coefficients c over `pairs` with deg(target - sum c*f^i*g^j) < threshold."""
    if not pairs:
        return None
    # Scatter the threshold tails of every product into per-monomial rows;
    # unknowns are rescaled by each product's cleared denominator.
    rows: dict = {}
    dens = []
    for k, (i, j) in enumerate(pairs):
        den, tail_entries = cache.tail(i, j, threshold)
        dens.append(den)
        for m, c in tail_entries:
            row = rows.get(m)
            if row is None:
                rows[m] = {k: c}
            else:
                row[k] = c
    target_tail = [
        (m, c) for m, c in target.terms.items() if ws.monomial_degree(m) >= threshold
    ]
    for m, _ in target_tail:
        if m not in rows:
            return None  # a constrained target monomial no product can touch
    rhs_map = dict(target_tail)

    def int_rows():
        for m in sorted(rows, reverse=True):
            rhs = rhs_map.get(m)
            if rhs is None:
                yield rows[m], 0
            elif rhs.denominator == 1:
                yield rows[m], rhs.numerator
            else:
                den = rhs.denominator
                yield {k: v * den for k, v in rows[m].items()}, rhs.numerator

    sol = solve_sparse_int(int_rows(), len(pairs))
    if sol is None:
        return None
    return BiPoly(
        gens, {pairs[k]: c * dens[k] for k, c in enumerate(sol) if c}
    )


def homogeneous_membership(
    ws: WeightSystem, h: Poly, g1h: Poly, g2h: Poly
) -> Optional[BiPoly]:
    """Exact representation of homogeneous h over homogeneous generators.

    Complete: only exponent pairs on the degree slice can contribute, and a
    combination of higher homogeneous products is homogeneous of the wrong
    degree, so one exact linear system decides membership.
    """
    for name, p in (("h", h), ("g1", g1h), ("g2", g2h)):
        if p.is_zero:
            raise ValueError(f"{name} must be nonzero")
        if not ws.is_homogeneous(p):
            raise ValueError(f"{name} is not homogeneous")
    d = ws.deg(h)
    d1, d2 = ws.deg(g1h), ws.deg(g2h)
    if not (d1.is_positive() and d2.is_positive()):
        raise ValueError("generators must be nonconstant")
    pairs = all_semigroup_pairs(d, d1, d2)
    if not pairs:
        return None
    cache = _ProductCache(g1h, g2h, ws)
    found = _solve_with_pairs(ws, h, (g1h, g2h), pairs, d, cache)
    if found is not None:
        assert found.value() == h
    return found


def leading_membership_search(
    ws: WeightSystem,
    target: Poly,
    gens: tuple[Poly, Poly],
    limits: SearchLimits = DEFAULT_LIMITS,
    cache: Optional[_ProductCache] = None,
) -> MembershipOutcome:
    """Find phi over gens with deg(target - phi.value()) < deg(target).

    Iterative widening: first the exact-degree exponent pairs, then (only
    when the generator degrees are Z-dependent, i.e. cancellation is
    possible at all) progressively larger products whose tops cancel among
    themselves.  Absence is NOT a proof of non-membership unless tagged
    rigorous.
    """
    if target.is_zero:
        raise ValueError("zero target")
    f, g = gens
    d1, d2 = ws.deg(f), ws.deg(g)
    if not (d1.is_positive() and d2.is_positive()):
        raise ValueError("generators must be nonconstant")
    d = ws.deg(target)
    cache = cache or _ProductCache(f, g, ws)
    independent = z_independent(d1, d2)
    try:
        exact_pairs = all_semigroup_pairs(d, d1, d2)
    except ValueError:
        return MembershipOutcome(None, Absence("limits-exhausted", False,
                                               "degree-slice enumeration guard"))
    if exact_pairs:
        found = _solve_with_pairs(ws, target, gens, exact_pairs, d, cache)
        if found is not None:
            assert ws.deg(target - found.value()) < d
            return MembershipOutcome(found, rounds_used=0)
    if independent:
        # No cancellation between distinct products is possible, so the
        # exact slice decides membership outright.
        if not exact_pairs:
            return MembershipOutcome(
                None, Absence("semigroup-obstruction", True,
                              {"target_degree": d.to_json()})
            )
        return MembershipOutcome(
            None, Absence("degree-shape", True, "homogeneous-slice-mismatch")
        )
    # Cancellation among leading products forces a power proportionality of
    # the generator leading forms; without one, the exact slice already
    # decided membership rigorously.
    scaled = find_scaled_pair(ws, ws.leading_form(f), ws.leading_form(g))
    if scaled is None:
        if not exact_pairs:
            return MembershipOutcome(
                None, Absence("semigroup-obstruction", True,
                              {"target_degree": d.to_json(),
                               "note": "independent leading forms"})
            )
        return MembershipOutcome(
            None, Absence("degree-shape", True,
                          "homogeneous-slice-mismatch (independent leading forms)")
        )
    # Any element whose representation degree exceeds its value degree obeys
    # the cancellation floor q*deg(f) + deg(df^dg) - deg(f) - deg(g); targets
    # below it cannot be reached by the widened ansatz at all.
    wedge_deg = _wedge_deg(ws, f, g)
    floor = scaled.q * d1 + wedge_deg - d1 - d2
    if d < floor:
        if not exact_pairs:
            return MembershipOutcome(
                None, Absence("semigroup-obstruction", True,
                              {"target_degree": d.to_json(),
                               "note": "below the cancellation floor"})
            )
        return MembershipOutcome(
            None, Absence("degree-shape", True,
                          {"cancellation_floor": floor.to_json()})
        )
    # Dependent leading structure: widen the ansatz so products above the
    # target degree may cancel among themselves.
    first_cap = d.first + 4 * max(d1.first, d2.first)
    higher: list[tuple[int, int]] = []
    for i in range(limits.max_bidegree + 1):
        for j in range(limits.max_bidegree + 1):
            dd = i * d1 + j * d2
            if dd > d and dd.first <= first_cap:
                higher.append((i, j))
    higher.sort(key=lambda p: (p[0] + p[1], p))
    higher = [
        p for p in higher
        if cache.product_within(*p, limits.max_product_terms)
    ]
    levels = sorted({i + j for (i, j) in higher})
    for round_no, level in enumerate(levels[: limits.max_cancellation_rounds], 1):
        pairs = exact_pairs + [p for p in higher if p[0] + p[1] <= level]
        found = _solve_with_pairs(ws, target, gens, pairs, d, cache)
        if found is not None:
            assert ws.deg(target - found.value()) < d
            return MembershipOutcome(found, rounds_used=round_no)
    return MembershipOutcome(
        None,
        Absence("limits-exhausted", False,
                {"max_bidegree": limits.max_bidegree,
                 "rounds": min(len(levels), limits.max_cancellation_rounds)}),
    )


def exact_membership(
    ws: WeightSystem,
    target: Poly,
    gens: tuple[Poly, Poly],
    limits: SearchLimits = DEFAULT_LIMITS,
    max_peels: int = 200,
) -> MembershipOutcome:
    """Full membership target in k[gens] by repeated leading peeling."""
    if target.is_zero:
        return MembershipOutcome(BiPoly(gens, {}))
    cache = _ProductCache(*gens, ws)
    residual = target
    acc: dict[tuple[int, int], Fraction] = {}
    for _ in range(max_peels):
        if residual.is_zero:
            return MembershipOutcome(BiPoly(gens, acc))
        if residual.is_constant:
            acc[(0, 0)] = acc.get((0, 0), Fraction(0)) + residual.constant_term()
            return MembershipOutcome(BiPoly(gens, acc))
        out = leading_membership_search(ws, residual, gens, limits, cache)
        if out.found is None:
            return MembershipOutcome(None, out.absence)
        for key, c in out.found.coeffs.items():
            s = acc.get(key, Fraction(0)) + c
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        new_residual = residual - out.found.value()
        assert ws.deg(new_residual) < ws.deg(residual)
        residual = new_residual
    return MembershipOutcome(None, Absence("limits-exhausted", False, "peel budget"))


def membership_in_single(
    ws: WeightSystem, target: Poly, gen: Poly
) -> Optional[dict[int, Fraction]]:
    """Exact membership of target in k[gen]; complete greedy decision.

    Powers of a fixed nonconstant polynomial have pairwise distinct degrees,
    so the top coefficient is forced at every step.
    """
    dg = ws.deg(gen)
    if not dg.is_positive():
        raise ValueError("generator must be nonconstant")
    coeffs: dict[int, Fraction] = {}
    residual = target
    guard = 0
    while not residual.is_zero:
        guard += 1
        if guard > 10_000:
            raise RuntimeError("runaway single-generator membership")
        if residual.is_constant:
            coeffs[0] = residual.constant_term()
            return coeffs
        d = ws.deg(residual)
        m = semigroup_member(d, dg, dg)
        if m is None:
            return None
        k = m[0] + m[1]
        t = proportionality(ws.leading_form(residual), ws.leading_form(gen**k))
        if t is None:
            return None
        coeffs[k] = t
        residual = residual - (gen**k).scale(t)
        if not residual.is_zero and not ws.deg(residual) < d:
            return None
    return coeffs


def cancellation_coefficient(ws: WeightSystem, h1: Poly, h2: Poly) -> Optional[Fraction]:
    """Scalar c with deg(h1 + c*h2) < deg(h1), when the tops are proportional."""
    if h1.is_zero or h2.is_zero:
        raise ValueError("requires nonzero polynomials")
    if ws.deg(h1) != ws.deg(h2):
        return None
    t = proportionality(ws.leading_form(h1), ws.leading_form(h2))
    if t is None:
        return None
    return -t


def find_scaled_pair(ws: WeightSystem, fw: Poly, gw: Poly) -> Optional[ScaledPair]:
    """Coprime (p, q) with gw^p a scalar multiple of fw^q, from the degree
    relation q*deg(fw) = p*deg(gw), verified by exact comparison."""
    if fw.is_zero or gw.is_zero:
        raise ValueError("requires nonzero polynomials")
    df, dg = ws.deg(fw), ws.deg(gw)
    if not (df.is_positive() and dg.is_positive()):
        return None
    if z_independent(df, dg):
        return None
    # df = a*e, dg = b*e along the primitive common direction.
    from .algebra import _parallel_multiplier, _primitive_direction
    import math as _math

    e = _primitive_direction(df.vec)
    a = _parallel_multiplier(df.vec, e)
    b = _parallel_multiplier(dg.vec, e)
    if a is None or b is None or a <= 0 or b <= 0:
        return None
    g0 = _math.gcd(a, b)
    p, q = a // g0, b // g0
    if proportionality(gw**p, fw**q) is None:
        return None
    return ScaledPair(p, q)


# ---------------------------------------------------------------------------
# Elementary reduction search
# ---------------------------------------------------------------------------


@dataclass
class ElementaryStep:
    """Adding phi.value() to component `index` strictly drops its degree."""

    index: int  # 1-based component index
    phi: BiPoly
    new_degree: DegreeValue

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "phi": self.phi.to_json(),
            "degree_after_component": self.new_degree.to_json(),
        }


@dataclass
class ElementaryOutcome:
    step: Optional[ElementaryStep]
    reasons: dict = field(default_factory=dict)  # 1-based index -> Absence


def find_elementary_reduction(
    ws: WeightSystem,
    triple: Sequence[Poly],
    limits: SearchLimits = DEFAULT_LIMITS,
    check_independent: bool = True,
) -> ElementaryOutcome:
    """First component whose leading form lies in the graded algebra of the
    other two, scanning indices in order; semigroup fast path first."""
    if check_independent and differentials_wedge(list(triple)).is_zero:
        raise ValueError("components are algebraically dependent")
    reasons: dict[int, Absence] = {}
    min_weight = min((DegreeValue(w) for w in ws.weights), key=lambda d: d.vec)
    for i in range(3):
        j, l = [k for k in range(3) if k != i]
        fi, fj, fl = triple[i], triple[j], triple[l]
        di, dj, dl = ws.deg(fi), ws.deg(fj), ws.deg(fl)
        if di <= min_weight:
            # A strict drop would force a constant component, impossible
            # for an independent triple.
            reasons[i + 1] = Absence("degree-shape", True,
                                     {"component-at-minimal-degree": i + 1})
            continue
        if z_independent(dj, dl) and semigroup_member(di, dj, dl) is None:
            # Distinct products have distinct degrees, so any element of
            # k[f_j, f_l] has its degree in the semigroup; rigorous skip.
            reasons[i + 1] = Absence("semigroup-obstruction", True,
                                     {"component": i + 1})
            continue
        out = leading_membership_search(ws, fi, (fj, fl), limits)
        if out.found is not None:
            phi = out.found.negate()
            new_deg = ws.deg(fi + phi.value())
            return ElementaryOutcome(
                ElementaryStep(index=i + 1, phi=phi, new_degree=new_deg), reasons
            )
        reasons[i + 1] = out.absence
    return ElementaryOutcome(None, reasons)


# ---------------------------------------------------------------------------
# Structured (two-stage) reduction search
# ---------------------------------------------------------------------------


@dataclass
class SUWitness:
    """Data reproducing the reduced triple from the original one.

    With (f1, f2, f3) the sigma-permuted components: g1 = f1 + a*f3^2 + c*f3
    + psi(f2), g2 = f2 + b*f3 + d, g3 = f3 + phi3(g1, g2).
    """

    sigma: tuple
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    psi: dict  # exponent -> Fraction, coefficients of Psi with psi = Psi(f2)
    phi3: BiPoly
    s: int
    delta: DegreeValue

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "a": str(self.a),
            "b": str(self.b),
            "c": str(self.c),
            "d": str(self.d),
            "psi": {str(k): str(v) for k, v in sorted(self.psi.items())},
            "phi3": self.phi3.to_json(),
            "s": self.s,
            "delta": self.delta.to_json(),
        }


@dataclass
class SUOutcome:
    witness: Optional[SUWitness]
    reduced: Optional[tuple]
    reasons: list = field(default_factory=list)


def _solve_affine(rows, rhs):
    """RREF solve returning (particular, kernel_basis) or None."""
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    aug = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [v - factor * w for v, w in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if aug[i][ncols] != 0:
            return None
    particular = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        particular[col] = aug[r][ncols]
    kernel = []
    free_cols = [c for c in range(ncols) if c not in pivots]
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -aug[r][fc]
        kernel.append(vec)
    return particular, kernel


def _odd_s_values(
    ws: WeightSystem,
    delta: DegreeValue,
    lower: DegreeValue,
    upper: DegreeValue,
    cap: int,
) -> list[int]:
    """Odd s >= 3 with lower <= s*delta <= upper, capped for lex-degenerate
    directions where multiples never pass the bound."""
    out = []
    s = 3
    count = 0
    while count < cap:
        sd = s * delta
        if sd > upper:
            break
        if sd >= lower:
            out.append(s)
        s += 2
        count += 1
    return out


def find_su_reduction(
    ws: WeightSystem,
    triple: Sequence[Poly],
    limits: SearchLimits = DEFAULT_LIMITS,
    check_independent: bool = True,
) -> SUOutcome:
    """Search for a structured two-generator reduction of the triple.

    Scans permutations; for each, derives the finitely many scalar and
    shape parameters from exact leading-form cancellation systems, then
    searches the third-component correction over the new generator pair.
    Absence is rigorous only for the degree-shape obstructions.
    """
    if check_independent and differentials_wedge(list(triple)).is_zero:
        raise ValueError("components are algebraically dependent")
    degs = [ws.deg(f) for f in triple]
    reasons: list[dict] = []
    if all(half(d) is None for d in degs):
        return SUOutcome(None, None, [Absence(
            "degree-shape", True, "no component degree is halvable").to_json()])
    for i in range(3):
        for j in range(3):
            if i != j and not exists_multiple_exceeding(degs[j], degs[i]):
                return SUOutcome(None, None, [Absence(
                    "degree-shape", True,
                    {"archimedean-obstruction": [i + 1, j + 1]}).to_json()])
    for sigma in PERMUTATIONS_3:
        fs = permute_triple(triple, sigma)
        f1, f2, f3 = fs
        d1, d2, d3 = (ws.deg(f) for f in fs)
        delta = half(d2)
        if delta is None:
            reasons.append({"sigma": list(sigma), "skip": "second degree not halvable"})
            continue
        b_cands: list[Fraction] = [Fraction(0)]
        if d3 == d2:
            cb = cancellation_coefficient(ws, f2, f3)
            if cb is not None:
                b_cands.append(cb)
        for b in b_cands:
            g2 = f2 + f3.scale(b)
            if g2.is_zero or ws.deg(g2) != d2:
                continue
            sq = sqrt_up_to_scalar(ws.leading_form(g2))
            if sq is None:
                reasons.append({"sigma": list(sigma), "b": str(b),
                                "skip": "leading form of new second component is not a square"})
                continue
            _, u = sq
            upper = max(d1, 2 * d3)
            lower = max(d1, d3)
            for s in _odd_s_values(ws, delta, lower, upper, limits.max_candidates):
                result = _assemble_first_component(
                    ws, f1, f2, f3, u, s, delta, limits
                )
                if result is None:
                    continue
                a, c, psi_coeffs, g1 = result
                g1w, g2w = ws.leading_form(g1), ws.leading_form(g2)
                if proportionality(g1w**2, g2w**s) is None:
                    continue
                f3w = ws.leading_form(f3)
                if homogeneous_membership(ws, f3w, g1w, g2w) is not None:
                    reasons.append({"sigma": list(sigma), "s": s,
                                    "skip": "third leading form lies in the new graded pair"})
                    continue
                peeled = _peel_third(ws, f1, f2, f3, g1, g2, limits)
                if peeled is None:
                    reasons.append({"sigma": list(sigma), "s": s,
                                    "skip": "no admissible third-component correction"})
                    continue
                phi3, g3 = peeled
                if differentials_wedge([g1, g2, g3]).is_zero:
                    continue
                witness = SUWitness(
                    sigma=sigma, a=a, b=b, c=c, d=Fraction(0),
                    psi=psi_coeffs, phi3=phi3, s=s, delta=delta,
                )
                reduced = unpermute_triple((g1, g2, g3), sigma)
                return SUOutcome(witness, reduced, reasons)
    if not reasons:
        reasons.append({"skip": "no permutation produced a candidate"})
    return SUOutcome(None, None, [Absence("limits-exhausted", False, reasons).to_json()])


def _assemble_first_component(ws, f1, f2, f3, u, s, delta, limits):
    """Solve the leading cancellation system for g1 = f1 + a f3^2 + c f3 + psi.

    Unknowns (a, c, e_0..e_M, gamma): every monomial of weighted degree
    >= s*delta in f1 + a f3^2 + c f3 + sum e_m f2^m - gamma u^s must vanish,
    with gamma != 0 so the new top is exactly gamma*u^s.
    """
    target_deg = s * delta
    f3sq = f3 * f3
    us = u**s
    psi_max = (s - 1) // 2
    columns = [f3sq, f3] + [f2**m for m in range(psi_max + 1)] + [-us]
    monos = set()
    for p in columns + [f1]:
        monos.update(m for m in p.terms if ws.monomial_degree(m) >= target_deg)
    mono_list = sorted(monos, reverse=True)
    if not mono_list:
        return None
    rows = [[p.terms.get(m, Fraction(0)) for p in columns] for m in mono_list]
    rhs = [-f1.terms.get(m, Fraction(0)) for m in mono_list]
    solved = _solve_affine(rows, rhs)
    if solved is None:
        return None
    particular, kernel = solved
    gamma_idx = len(columns) - 1
    sol = None
    if particular[gamma_idx] != 0:
        sol = particular
    else:
        for vec in kernel:
            if vec[gamma_idx] != 0:
                sol = [p + v for p, v in zip(particular, vec)]
                break
    if sol is None:
        return None
    a, c = sol[0], sol[1]
    psi_coeffs = {m: sol[2 + m] for m in range(psi_max + 1) if sol[2 + m]}
    psi = Poly.zero(f1.n)
    for m, e in psi_coeffs.items():
        psi = psi + (f2**m).scale(e)
    g1 = f1 + f3sq.scale(a) + f3.scale(c) + psi
    if g1.is_zero or ws.deg(g1) != target_deg:
        return None
    return a, c, psi_coeffs, g1


def _peel_third(ws, f1, f2, f3, g1, g2, limits):
    """Reduce f3 against (g1, g2) until the reduced-pair degree conditions
    hold; returns (phi3, g3) with g3 = f3 + phi3.value()."""
    d3 = ws.deg(f3)
    bound = ws.deg(g1) - ws.deg(g2) + _wedge_deg(ws, g1, g2)
    cache = _ProductCache(g1, g2, ws)
    residual = f3
    acc: dict[tuple[int, int], Fraction] = {}
    for _ in range(64):
        d_res = ws.deg(residual)
        if d_res < d3 and d_res < bound:
            phi3 = BiPoly((g1, g2), {k: -v for k, v in acc.items()})
            return phi3, residual
        if residual.is_zero or residual.is_constant:
            return None
        out = leading_membership_search(ws, residual, (g1, g2), limits, cache)
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


def _wedge_deg(ws, p, q):
    from .forms import deg_form, differential, wedge

    return deg_form(ws, wedge(differential(p), differential(q)))
