import json
from fractions import Fraction

import pytest

from tame3.algebra import DegreeValue, Poly, lex_weight
from tame3.engine import (
    Endo3,
    TameFactor,
    apply_permutation,
    apply_scaling,
    certificate_json,
    certify_nagata,
    compose_endo,
    factor_tame,
    identity_endo,
    nagata_endo,
    random_tame,
    recompose,
    reduce_step,
    reduce_to_floor,
    su_number,
    triangularize_at_floor,
    verify_automorphism,
    invert_factors,
)

D = DegreeValue.of


# --- composition and verification -------------------------------------------


def test_compose_identity(nagata):
    ident = identity_endo()
    assert compose_endo(nagata.components, ident) == nagata.components
    assert compose_endo(ident, nagata.components) == nagata.components


def test_elementary_inverse_composes_to_identity(xyz):
    x1, x2, x3 = xyz
    e = TameFactor.elementary(1, x2**3 - x3)
    assert compose_endo(e.as_endo(), e.inverted().as_endo()) == identity_endo()


def test_nagata_inverse_verified(nagata):
    assert verify_automorphism(nagata.components, nagata.inverse)
    assert not verify_automorphism(nagata.components, identity_endo())


def test_apply_permutation_and_scaling(nagata):
    F = nagata.components
    assert apply_permutation(F, (1, 2, 3)) == F
    assert apply_permutation(apply_permutation(F, (2, 1, 3)), (2, 1, 3)) == F
    scaled = apply_scaling(F, [Fraction(2), Fraction(-1), Fraction(3)])
    back = apply_scaling(scaled, [Fraction(1, 2), Fraction(-1), Fraction(1, 3)])
    assert back == F
    with pytest.raises(ValueError):
        apply_scaling(F, [Fraction(0), Fraction(1), Fraction(1)])


def test_endo3_validation(nagata):
    with pytest.raises(ValueError):
        Endo3(nagata.components, identity_endo())
    endo = Endo3(nagata.components, nagata.inverse)
    assert endo.is_verified


# --- factors ------------------------------------------------------------------


def test_factor_validation(xyz):
    x1, x2, _ = xyz
    with pytest.raises(ValueError):
        TameFactor.elementary(1, x1)  # uses its own variable
    with pytest.raises(ValueError):
        TameFactor.affine([[1, 0, 0], [0, 1, 0], [1, 1, 0]], [0, 0, 0])


def test_invert_factors_roundtrip(small_corpus):
    for endo, factors in small_corpus[:6]:
        assert recompose(factors) == endo.components
        assert recompose(factors + invert_factors(factors)) == identity_endo()


# --- reduction steps -----------------------------------------------------------


def test_reduce_step_at_floor(wt, xyz):
    x1, x2, x3 = xyz
    F = (x1 + x2, x2, x3)
    assert reduce_step(wt, F).kind == "at-floor"


def test_reduce_step_elementary(wt, xyz):
    x1, x2, x3 = xyz
    F = (x1 + x2**2, x2, x3)
    step = reduce_step(wt, F)
    assert step.kind == "elementary"
    assert step.elementary.index == 1


def test_reduce_step_nagata_stuck(nagata, nagata_ws):
    step = reduce_step(nagata_ws, nagata.components)
    assert step.kind == "stuck"
    assert step.rigorous


def test_reduce_to_floor_identity(wt):
    trace = reduce_to_floor(wt, identity_endo())
    assert trace.result == "floor"
    assert trace.steps == []


def test_reduce_to_floor_nagata(nagata, nagata_ws):
    trace = reduce_to_floor(nagata_ws, nagata.components)
    assert trace.result == "stuck"
    assert len(trace.steps) == 0
    assert trace.stuck_reasons


def test_trace_recompose_origin(wt, wlex, small_corpus):
    for endo, _ in small_corpus[:8]:
        for ws in (wt, wlex):
            trace = reduce_to_floor(ws, endo.components)
            assert trace.result == "floor"
            assert trace.recompose_origin() == endo.components


def test_su_flavored_trace(su_pair_family):
    # forcing the structured search first produces a trace with a
    # non-elementary step whose undo still reproduces the origin
    ws, F, G = su_pair_family[1]
    trace = reduce_to_floor(ws, F, prefer="su", itercap=50)
    assert su_number(trace) >= 1
    assert trace.recompose_origin() == F
    for step in trace.steps:
        if step.kind == "su":
            assert step.su_normalized


def test_su_number_zero_for_elementary_traces(wt, small_corpus):
    endo, _ = small_corpus[0]
    trace = reduce_to_floor(wt, endo.components)
    assert su_number(trace) == sum(1 for s in trace.steps if s.kind == "su")


def test_budget_cap_distinct_from_stuck(wt, small_corpus):
    for endo, _ in small_corpus:
        full = reduce_to_floor(wt, endo.components)
        if len(full.steps) >= 2:
            capped = reduce_to_floor(wt, endo.components, itercap=1)
            assert capped.result == "budget"
            assert capped.stuck_reasons is None
            return
    pytest.skip("no multi-step member in the small corpus")


# --- floor factorization --------------------------------------------------------


def test_triangularize_affine(wt, xyz):
    x1, x2, x3 = xyz
    F = (x1 + x2.scale(2) + Poly.constant(5, 3), x2, x3 + Poly.constant(-1, 3))
    factors = triangularize_at_floor(wt, F)
    assert len(factors) == 1 and factors[0].kind == "affine"
    assert recompose(factors) == F


def test_triangularize_spec_example(wt, xyz):
    x1, x2, x3 = xyz
    F = (x1, x2 + x1**2, x3 + x1 * x2)
    factors = triangularize_at_floor(wt, F)
    assert recompose(factors) == F
    kinds = [(f.kind, f.index) for f in factors]
    assert kinds == [("affine", None), ("elementary", 2), ("elementary", 3)]


def test_triangularize_weighted(xyz):
    x1, x2, x3 = xyz
    ws = lex_weight(3)
    F = (x1 + x2 * x3**2, x2 + x3**4, x3)
    assert ws.deg_endo(F) == ws.total
    factors = triangularize_at_floor(ws, F)
    assert recompose(factors) == F


def test_triangularize_rejects_above_floor(wt, xyz):
    x1, x2, x3 = xyz
    with pytest.raises(ValueError):
        triangularize_at_floor(wt, (x1 + x2**2, x2, x3))


def test_factor_tame_roundtrip(wt, wlex, small_corpus):
    for endo, _ in small_corpus[:10]:
        for ws in (wt, wlex):
            factors, trace = factor_tame(ws, endo)
            assert trace.result == "floor"
            assert recompose(factors) == endo.components


def test_factor_tame_nagata_stuck(nagata, nagata_ws):
    factors, trace = factor_tame(nagata_ws, nagata)
    assert factors is None
    assert trace.result == "stuck"


def test_factor_tame_with_su_steps(su_pair_family):
    # the structured steps expand into elementary factors plus permutation
    # bookkeeping that recomposes exactly
    ws, F, G = su_pair_family[0]
    trace = reduce_to_floor(ws, F, prefer="su", itercap=50)
    if trace.result == "floor" and su_number(trace) >= 1:
        endo = Endo3(F)
        factors, trace2 = factor_tame(ws, endo, su_normalize=True)
        if factors is not None:
            assert recompose(factors) == F


# --- corpus generator ------------------------------------------------------------


def test_random_tame_deterministic():
    a1, f1 = random_tame(42, 4)
    a2, f2 = random_tame(42, 4)
    assert a1.components == a2.components
    assert [f.to_json() for f in f1] == [f.to_json() for f in f2]


def test_random_tame_zero_factors():
    endo, factors = random_tame(1, 0)
    assert endo.components == identity_endo()
    assert factors == []


def test_random_tame_explicit_inverse_check():
    # small members admit the full two-sided verification
    checked = 0
    for seed in range(1, 40):
        endo, _ = random_tame(seed, 2)
        if max(f.total_degree() for f in endo.components) <= 4:
            assert verify_automorphism(endo.components, endo.inverse)
            checked += 1
    assert checked >= 5


def test_random_tame_validation():
    with pytest.raises(ValueError):
        random_tame(1, -1)
    with pytest.raises(ValueError):
        random_tame(1, 1, coefficient_bound=0)


# --- certificate ------------------------------------------------------------------


def test_certificate_values(nagata_ws):
    cert = certify_nagata()
    assert [d.vec for d in cert.degrees] == [(2, 0, 3), (1, 0, 2), (0, 0, 1)]
    assert cert.total == D(3, 0, 6)
    assert cert.floor == D(1, 1, 1)
    assert cert.all_rigorous()
    for rec in cert.elementary_obstruction.values():
        assert rec["absent"]
    for rec in cert.su_obstruction_half.values():
        assert rec["no_half"]
    for rec in cert.su_obstruction_order.values():
        assert rec["dominates_all_multiples"]


def test_certificate_byte_stable():
    a = certificate_json(certify_nagata())
    b = certificate_json(certify_nagata())
    assert a == b
    parsed = json.loads(a)
    assert parsed["verdict"].startswith("not tame")


def test_factor_tame_single_elementary(wt, xyz):
    x1, x2, x3 = xyz
    e = TameFactor.elementary(1, x2**3)
    endo = Endo3(e.as_endo(), TameFactor.elementary(1, -(x2**3)).as_endo())
    factors, trace = factor_tame(wt, endo)
    assert trace.result == "floor"
    assert recompose(factors) == endo.components
    assert sum(1 for f in factors if f.kind == "elementary") >= 1
