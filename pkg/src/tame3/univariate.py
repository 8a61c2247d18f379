"""Polynomials in one variable over the ring, analyzed at a substitution point.

The degree functional here measures a polynomial Phi = sum phi_i y^i through
the degrees of phi_i * g^i rather than through the value Phi(g); the gap
between the two is what the inequality oracle quantifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import DegreeValue, Poly, WeightSystem
from .forms import deg_form, differential, differentials_wedge, wedge


class AuxPoly:
    """Nonzero map i -> coefficient polynomial (of y^i); zero coeffs dropped."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict):
        self.n = n
        self.coeffs = {int(i): p for i, p in coeffs.items() if not p.is_zero}
        if any(i < 0 for i in self.coeffs):
            raise ValueError("negative y-exponent")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def y_degree(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def derivative(self) -> "AuxPoly":
        return AuxPoly(
            self.n, {i - 1: p.scale(i) for i, p in self.coeffs.items() if i >= 1}
        )

    def evaluate(self, g: Poly) -> Poly:
        """Phi(g), exact."""
        acc = Poly.zero(self.n)
        for i in sorted(self.coeffs):
            acc = acc + self.coeffs[i] * g**i
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AuxPoly):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs


def aux_degree(ws: WeightSystem, phi: AuxPoly, g: Poly) -> DegreeValue:
    """Max over i of deg(phi_i * g^i)."""
    if phi.is_zero or g.is_zero:
        raise ValueError("aux_degree requires nonzero inputs")
    dg = ws.deg(g)
    return max(ws.deg(p) + i * dg for i, p in phi.coeffs.items())


def aux_leading(ws: WeightSystem, phi: AuxPoly, g: Poly) -> AuxPoly:
    """Coefficients achieving the max, replaced by their leading forms."""
    if phi.is_zero or g.is_zero:
        raise ValueError("aux_leading requires nonzero inputs")
    dg = ws.deg(g)
    top = aux_degree(ws, phi, g)
    return AuxPoly(
        phi.n,
        {
            i: ws.leading_form(p)
            for i, p in phi.coeffs.items()
            if ws.deg(p) + i * dg == top
        },
    )


def aux_multiplicity(ws: WeightSystem, phi: AuxPoly, g: Poly) -> int:
    """Minimal i with aux_degree(Phi^(i)) == deg(Phi^(i)(g)).

    Terminates at i <= y-degree of Phi: the top derivative is y-free.
    """
    if phi.is_zero or g.is_zero:
        raise ValueError("aux_multiplicity requires nonzero inputs")
    current = phi
    i = 0
    while True:
        if aux_degree(ws, current, g) == ws.deg(current.evaluate(g)):
            return i
        current = current.derivative()
        i += 1
        if current.is_zero:
            raise AssertionError("multiplicity loop passed the y-degree")


def multiplicity_by_roots(ws: WeightSystem, phi: AuxPoly, g: Poly) -> int:
    """Independent oracle: order of g^w as a root of the leading part.

    Counts how many y-derivatives of Phi^{w,g} vanish at g^w before the
    first nonzero value.
    """
    if phi.is_zero or g.is_zero:
        raise ValueError("requires nonzero inputs")
    lead = aux_leading(ws, phi, g)
    gw = ws.leading_form(g)
    i = 0
    current = lead
    while not current.is_zero:
        if not current.evaluate(gw).is_zero:
            return i
        current = current.derivative()
        i += 1
    raise AssertionError("leading part vanished identically at every order")


class BiPoly:
    """Finite Q-combination of products f^i g^j over an ordered generator pair."""

    __slots__ = ("gens", "coeffs")

    def __init__(self, gens: tuple[Poly, Poly], coeffs: dict):
        self.gens = gens
        self.coeffs = {
            (int(i), int(j)): Fraction(c)
            for (i, j), c in coeffs.items()
            if c != 0
        }
        if any(i < 0 or j < 0 for i, j in self.coeffs):
            raise ValueError("negative exponent in representation")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def value(self) -> Poly:
        f, g = self.gens
        acc = Poly.zero(f.n)
        for (i, j) in sorted(self.coeffs):
            acc = acc + (f**i * g**j).scale(self.coeffs[(i, j)])
        return acc

    def negate(self) -> "BiPoly":
        return BiPoly(self.gens, {k: -c for k, c in self.coeffs.items()})

    def rebase(self, gens: tuple[Poly, Poly]) -> "BiPoly":
        if gens != self.gens:
            raise ValueError("rebase requires identical generators")
        return self

    def to_json(self) -> dict:
        return {
            "pairs": [
                {"i": i, "j": j, "c": str(c)} for (i, j), c in sorted(self.coeffs.items())
            ]
        }

    def __repr__(self) -> str:
        return f"BiPoly({sorted(self.coeffs.items())!r})"


def degS(ws: WeightSystem, phi: BiPoly) -> DegreeValue:
    """Representation-level degree: max of deg f^i g^j over stored pairs."""
    if phi.is_zero:
        raise ValueError("degS of the empty representation")
    f, g = phi.gens
    df, dg = ws.deg(f), ws.deg(g)
    return max(i * df + j * dg for (i, j) in phi.coeffs)


@dataclass
class InequalityReport:
    """Both sides of the degree inequality, with the vacuity escape.

    ``holds`` is True/False for a genuine comparison and the string
    ``"vacuous-false-precondition"`` when the right side contains Bottom
    (vanishing wedge), where the comparison is not meaningful.
    """

    lhs: DegreeValue
    aux_deg: DegreeValue
    multiplicity: int
    wedge_term: DegreeValue
    rhs: DegreeValue
    holds: object

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs.to_json(),
            "aux_degree": self.aux_deg.to_json(),
            "multiplicity": self.multiplicity,
            "wedge_term": self.wedge_term.to_json(),
            "rhs": self.rhs.to_json(),
            "holds": self.holds,
        }


def su_inequality_report(
    ws: WeightSystem, fs: Sequence[Poly], phi: AuxPoly, g: Poly
) -> InequalityReport:
    """Evaluate deg Phi(g) >= deg^g Phi + m * (deg w^dg - deg w - deg g).

    fs must be algebraically independent; coefficients of phi are asserted by
    the caller to lie in the algebra they generate.
    """
    if phi.is_zero or g.is_zero:
        raise ValueError("inequality oracle requires nonzero Phi and g")
    if not 1 <= len(fs) <= g.n:
        raise ValueError("need between 1 and n generators")
    omega = differentials_wedge(fs)
    if omega.is_zero:
        raise ValueError("generators are algebraically dependent")
    m = aux_multiplicity(ws, phi, g)
    dphi = aux_degree(ws, phi, g)
    w_dg = deg_form(ws, wedge(omega, differential(g)))
    w_deg = deg_form(ws, omega)
    lhs = ws.deg(phi.evaluate(g))
    if m == 0:
        rhs = dphi
        correction = DegreeValue.of(*([0] * ws.r))
    elif w_dg.is_bottom:
        return InequalityReport(lhs, dphi, m, w_dg, DegreeValue.bottom(),
                                "vacuous-false-precondition")
    else:
        correction = w_dg - w_deg - ws.deg(g)
        rhs = dphi + m * correction
    return InequalityReport(lhs, dphi, m, w_dg, rhs, bool(lhs >= rhs))


def coprime_claims(p: int, q: int) -> tuple[bool, bool, bool]:
    """The three arithmetic facts used downstream, checked literally.

    For coprime 2 <= p < q: (i) pq-p-q > 0; (ii) pq-p-q <= q only when p = 2
    and q >= 3 odd; (iii) pq-p-q <= p only when (p, q) = (2, 3).
    """
    v = p * q - p - q
    claim_i = v > 0
    claim_ii = (v > q) or (p == 2 and q >= 3 and q % 2 == 1)
    claim_iii = (v > p) or (p, q) == (2, 3)
    return claim_i, claim_ii, claim_iii
