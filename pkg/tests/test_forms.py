import random

import pytest

from tame3.algebra import DegreeValue, Poly, lex_weight, total_weight
from tame3.forms import (
    DiffForm,
    algebraically_independent,
    deg_form,
    differential,
    differentials_wedge,
    form_to_text,
    jacobian_det,
    wedge,
)

D = DegreeValue.of


def test_differential_product_rule(xyz):
    x1, x2, x3 = xyz
    t = x1 * x3 + x2**2
    dt = differential(t)
    assert dt.coeffs[(0,)] == x3
    assert dt.coeffs[(1,)] == x2.scale(2)
    assert dt.coeffs[(2,)] == x1


def test_differential_constant_vanishes():
    assert differential(Poly.constant(5, 3)).is_zero


def test_differential_third_component(nagata):
    d = differential(nagata.components[2])
    assert d.coeffs == {(2,): Poly.constant(1, 3)}


def test_wedge_antisymmetry(xyz):
    x1, x2, _ = xyz
    f = x1**2 + x2
    df = differential(f)
    assert wedge(df, df).is_zero
    assert wedge(differential(x1), differential(x2)).coeffs == {
        (0, 1): Poly.constant(1, 3)
    }


def test_wedge_above_dimension_collapses(xyz):
    x1, x2, x3 = xyz
    two = wedge(differential(x1), differential(x2))
    assert wedge(two, two).is_zero


def test_nagata_jacobian_is_one(nagata):
    assert jacobian_det(list(nagata.components)) == Poly.constant(1, 3)
    top = differentials_wedge(list(nagata.components))
    assert deg_form(lex_weight(3), top) == D(1, 1, 1)


def test_deg_form_examples(nagata, nagata_ws, wt):
    f = nagata.components[0]
    assert deg_form(nagata_ws, differential(f)) == nagata_ws.deg(f)
    assert deg_form(wt, DiffForm.zero(3, 2)).is_bottom


def test_independence_examples(xyz, nagata):
    x1, x2, x3 = xyz
    assert algebraically_independent([x1, x2, x3])
    f = x1 + x2**2
    assert not algebraically_independent([f, f * f])
    assert algebraically_independent(list(nagata.components))


def _random_poly(rng, max_deg=3, terms=3):
    out = {}
    for _ in range(terms):
        deg = rng.randint(0, max_deg)
        a = rng.randint(0, deg)
        b = rng.randint(0, deg - a)
        out[(a, b, deg - a - b)] = rng.randint(-3, 3)
    p = Poly(3, out)
    return p if not p.is_zero else Poly.variable(0, 3)


@pytest.mark.parametrize("ws_name", ["total", "lex"])
def test_deg_df_equals_deg_f(ws_name):
    ws = total_weight(3) if ws_name == "total" else lex_weight(3)
    rng = random.Random(3)
    for _ in range(40):
        f = _random_poly(rng)
        if f.is_constant:
            continue
        assert deg_form(ws, differential(f)) == ws.deg(f)


def test_leibniz_spot():
    rng = random.Random(11)
    for _ in range(25):
        f, g = _random_poly(rng), _random_poly(rng)
        lhs = differential(f * g)
        rhs = differential(g).scale_poly(f) + differential(f).scale_poly(g)
        assert lhs == rhs


def test_wedge_degree_subadditive():
    rng = random.Random(5)
    ws = lex_weight(3)
    for _ in range(30):
        w1 = differential(_random_poly(rng))
        w2 = differential(_random_poly(rng))
        prod = wedge(w1, w2)
        if prod.is_zero or w1.is_zero or w2.is_zero:
            continue
        assert deg_form(ws, prod) <= deg_form(ws, w1) + deg_form(ws, w2)


@pytest.mark.parametrize("ws_name", ["total", "lex"])
def test_wedge_equality_iff_leading_independent(ws_name):
    # the equality case of the degree bound characterizes independence of
    # the leading forms
    ws = total_weight(3) if ws_name == "total" else lex_weight(3)
    rng = random.Random(17)
    seen_equal = seen_strict = 0
    for _ in range(60):
        size = rng.choice([2, 3])
        fs = [_random_poly(rng) for _ in range(size)]
        if any(f.is_constant for f in fs):
            continue
        total = differentials_wedge(fs)
        if total.is_zero:
            continue
        bound = ws.deg(fs[0])
        for f in fs[1:]:
            bound = bound + ws.deg(f)
        leading_indep = not differentials_wedge(
            [ws.leading_form(f) for f in fs]
        ).is_zero
        equal = deg_form(ws, total) == bound
        assert equal == leading_indep
        seen_equal += equal
        seen_strict += not equal
    assert seen_equal and seen_strict


def test_floor_bound_for_independent_triples(small_corpus):
    # sum of degrees >= degree of the top wedge >= sum of the weights
    for ws in (total_weight(3), lex_weight(3)):
        for endo, _ in small_corpus[:10]:
            top = differentials_wedge(list(endo.components))
            assert not top.is_zero
            total = ws.deg_endo(endo.components)
            assert total >= deg_form(ws, top) >= ws.total


def test_max_attained_twice_property():
    # the pairwise complement-degree maximum is always attained at least
    # twice across the family
    rng = random.Random(23)
    ws = total_weight(3)
    for _ in range(50):
        l = rng.choice([3, 4])
        etas = [differential(_random_poly(rng)) for _ in range(l)]
        values = []
        for i in range(l):
            rest = [etas[j] for j in range(l) if j != i]
            tilde = rest[0]
            for w in rest[1:]:
                tilde = wedge(tilde, w)
            values.append(deg_form(ws, etas[i]) + deg_form(ws, tilde))
        top = max(values)
        assert sum(1 for v in values if v == top) >= 2


def test_form_printer():
    x1 = Poly.variable(0, 3)
    form = DiffForm(3, 2, {(0, 2): x1})
    assert form_to_text(form) == "(x1) * dx1^dx3"
    assert form_to_text(DiffForm.zero(3, 1)) == "0"
