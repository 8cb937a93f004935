import cmath
import math

import pytest

from qladder.checks import dual_route_points
from qladder.families import (
    FamilyError,
    eval_series,
    eval_ttrr,
    make_family,
    norm_sq,
    reference_params,
    weight_at,
)
from qladder.hypergeometric_core import (
    lambda_n,
    rel_residual,
    tau_k_coeffs,
    ttrr_coeffs_generic,
)
from qladder.orthogonality import jackson_integral
from qladder.qkernel import QBase

from conftest import FAMILY_NAMES, grid_for


# ------------------------- construction and validation ---------------------


def test_unknown_family(base):
    with pytest.raises(FamilyError, match="unknown family"):
        make_family("nonsense", {}, base)


def test_missing_and_extra_params(base):
    with pytest.raises(FamilyError, match="'b'"):
        make_family("big_q_jacobi", {"a": 0.5, "c": -0.5}, base)
    with pytest.raises(FamilyError, match="'z'"):
        make_family("asc1", {"a": -1.0, "z": 2.0}, base)


def test_qdh_constraints_named(base):
    with pytest.raises(FamilyError, match="a < b-1"):
        make_family("q_dual_hahn", {"a": 5.0, "b": 5.0, "c": 0.25}, base)
    with pytest.raises(FamilyError, match="'c'"):
        make_family("q_dual_hahn", {"a": 0.0, "b": 5.0, "c": 3.0}, base)
    with pytest.raises(FamilyError, match="'b'"):
        make_family("q_dual_hahn", {"a": 0.0, "b": 4.5, "c": 0.25}, base)


def test_aw_constraints(base):
    with pytest.raises(FamilyError, match="'b'"):
        make_family("askey_wilson", {"a": 0.3, "b": 1.2, "c": 0.3, "d": 0.3}, base)
    with pytest.raises(FamilyError, match="continuous_q_hermite"):
        make_family("askey_wilson", {"a": 0.0, "b": 0.0, "c": 0.0, "d": 0.0}, base)


def test_bqj_constraints(base):
    with pytest.raises(FamilyError, match="'c'"):
        make_family("big_q_jacobi", {"a": 0.5, "b": 0.5, "c": 0.5}, base)
    with pytest.raises(FamilyError, match="'a'"):
        make_family("big_q_jacobi", {"a": 3.0, "b": 0.5, "c": -0.5}, base)


def test_q_range_guard():
    with pytest.raises(FamilyError, match="0 < q < 1"):
        make_family("asc1", {"a": -1.0}, QBase(1.5))


def test_alias_names(base):
    fam = make_family("AW", {"a": 0.3, "b": 0.3, "c": 0.3, "d": 0.3}, base)
    assert fam.name == "askey_wilson"


# ------------------------- data-entry typo detectors -----------------------


def test_asc1_sigma_is_factored_product(families):
    fam = families["asc1"]
    a = fam.params["a"]
    from qladder.hypergeometric_core import sigma_eval

    for s in [0.15 * j - 0.4 for j in range(7)]:
        x = fam.lattice.x(s)
        assert sigma_eval(fam.eq, s) == pytest.approx((x - 1) * (x - a), rel=1e-11)


def test_cqh_equals_aw_at_zero_parameters(base, families):
    cqh = families["continuous_q_hermite"].eq
    from qladder.families import _aw_equation_data

    aw0 = _aw_equation_data(0.0, 0.0, 0.0, 0.0, base)
    for f in ("sigma_pp", "sigma_p0", "sigma_00", "tau_p", "tau_0"):
        assert getattr(cqh, f) == getattr(aw0, f)
    assert cqh.lattice.c1 == aw0.lattice.c1
    assert cqh.lattice.c2 == aw0.lattice.c2
    assert cqh.lattice.c3 == aw0.lattice.c3


def test_asc2_is_base_inverted_asc1(base):
    # V_n^{(a)}(x; q) = U_n^{(a)}(x; q^{-1}): recurrence-route values agree
    q = base.q
    asc2 = make_family("asc2", {"a": -1.0}, base)
    asc1_inv_beta = lambda n: (1 + (-1.0)) * (1 / q) ** n
    asc1_inv_gamma = lambda n: (-1.0) * (1 / q) ** (n - 1) * ((1 / q) ** n - 1)
    for x in (0.4, 0.9, 1.7, 2.6, 4.1):
        for n in range(0, 6):
            # monic recurrence with base-inverted ASC1 coefficients
            pm, pc = 0.0, 1.0
            for k in range(n):
                pm, pc = pc, (x - asc1_inv_beta(k)) * pc - asc1_inv_gamma(k) * pm
            got = eval_ttrr(asc2, n, x)
            assert got == pytest.approx(pc, rel=1e-12)
            # and the 2phi0 series route agrees
            assert eval_series(asc2, n, x) == pytest.approx(pc, rel=1e-11)


def test_lambda_closed_matches_general(families):
    for name in FAMILY_NAMES:
        fam = families[name]
        for n in range(0, 11):
            got = fam.lambda_closed(n)
            want = lambda_n(fam.eq, n)
            assert rel_residual(got - want, (got, want)) < 1e-10, (name, n)


def test_tau_closed_matches_general(families):
    for name in FAMILY_NAMES:
        fam = families[name]
        for n in range(0, 9):
            tk = tau_k_coeffs(fam.eq, float(n))
            assert rel_residual(
                complex(fam.closed.tau_slope(n)) - tk.slope,
                (tk.slope,),
            ) < 1e-9, (name, n, "slope")
            assert rel_residual(
                complex(fam.closed.tau_intercept(n)) - tk.intercept,
                (tk.intercept, complex(fam.closed.tau_intercept(n))),
            ) < 1e-9, (name, n, "intercept")


def test_ttrr_closed_matches_generic(families):
    # beta from the generic route; gamma through the independently sourced
    # norm ratio; the dual-Hahn tabulated beta is a known erratum and is
    # checked against the generic route it was replaced by
    for name in FAMILY_NAMES:
        fam = families[name]
        for n in range(0, 9):
            alpha_gen, beta_gen, _ = ttrr_coeffs_generic(fam.eq, n, 1.0)
            # canonical alpha = a_n/a_{n+1} equals the generic leading ratio
            assert rel_residual(
                fam.ttrr_alpha(n) - alpha_gen, (alpha_gen,)
            ) < 1e-9, (name, n, "alpha")
            assert rel_residual(
                fam.ttrr_beta(n) - beta_gen, (beta_gen, fam.ttrr_beta(n))
            ) < 1e-9, (name, n, "beta")


def test_qdh_displayed_beta_is_erratum(families):
    # the tabulated display (with [b-a-n+1]_q) deviates from the generic
    # route; the [b-a-n-1]_q variant matches it
    fam = families["q_dual_hahn"]
    from qladder.qkernel import q_number

    a, b, c = (fam.params[k] for k in "abc")
    q = fam.base.q
    qn = lambda k: q_number(k, fam.base)

    def beta_variant(n):
        return (
            q ** (0.5 * (2 * n - b + c + 1)) * qn(b - a - n - 1.0) * qn(a + c + n + 1.0)
            + q ** (0.5 * (2 * n + 2 * a + c - b + 1)) * qn(float(n)) * qn(b - c - n)
            + qn(a) * qn(a + 1.0)
        )

    mismatch = 0
    for n in range(0, 8):
        disp = complex(fam.closed.beta_n(n))
        gen = ttrr_coeffs_generic(fam.eq, n, 1.0)[1]
        assert beta_variant(n) == pytest.approx(gen, rel=1e-11)
        if abs(disp - gen) > 1e-9 * max(abs(disp), abs(gen)):
            mismatch += 1
    assert mismatch >= 7


def test_gamma_consistent_with_norm_ratio(families):
    # gamma_n/alpha_{n-1} = d_n^2/d_{n-1}^2 for the validated norms
    for name in FAMILY_NAMES:
        fam = families[name]
        top = min(8, fam.n_max) if fam.n_max is not None else 8
        for n in range(1, top + 1):
            ratio = fam.norm_sq(n) / fam.norm_sq(n - 1)
            want = fam.ttrr_gamma(n) / fam.ttrr_alpha(n - 1)
            assert rel_residual(ratio - want, (ratio, want)) < 1e-9, (name, n)


# ------------------------- evaluation routes --------------------------------


def test_series_n0_is_prefactor(families):
    for name in FAMILY_NAMES:
        fam = families[name]
        s = grid_for(name, 1)[0]
        got = fam.pn_series(0, s)
        if name == "continuous_q_hermite":
            assert got == pytest.approx(1.0, rel=1e-13)
        else:
            assert abs(got) > 0


def test_dual_route_agreement(families):
    for name in FAMILY_NAMES:
        fam = families[name]
        top = min(10, fam.n_max) if fam.n_max is not None else 10
        for n in range(0, top + 1):
            for s in dual_route_points(fam):
                a = fam.pn_series(n, s)
                b = fam.pn_ttrr(n, s)
                assert rel_residual(a - b, (a, b)) < 1e-10, (name, n, s)


def test_eval_wrappers_natural_coordinates(families):
    asc1 = families["asc1"]
    # natural coordinate for the exponential lattice is x itself
    assert eval_series(asc1, 1, 0.7) == pytest.approx(0.7 - (1 + asc1.params["a"]), rel=1e-12)
    aw = families["askey_wilson"]
    theta = 1.1
    x = math.cos(theta)
    s = aw.s_from_point(theta)
    assert aw.lattice.x(s) == pytest.approx(x, abs=1e-14)
    assert eval_ttrr(aw, 2, theta) == pytest.approx(aw.pn_ttrr(2, s), rel=1e-13)


def test_asc1_p1_monic(families):
    fam = families["asc1"]
    a = fam.params["a"]
    for x in (0.3, 0.9, 2.0):
        assert eval_ttrr(fam, 1, x) == pytest.approx(x - (1 + a), rel=1e-13)


def test_cqh_low_orders(families):
    # H_0 = 1, H_1 = 2x, H_2 = 4x^2 - (2 - ... ) via the recurrence
    fam = families["continuous_q_hermite"]
    q = fam.base.q
    for theta in (0.7, 1.9):
        x = math.cos(theta)
        assert eval_ttrr(fam, 0, theta) == pytest.approx(1.0)
        assert eval_ttrr(fam, 1, theta) == pytest.approx(2 * x, rel=1e-13)
        # 2x H_1 = H_2 + (1-q) H_0
        h2 = eval_ttrr(fam, 2, theta)
        assert 2 * x * 2 * x == pytest.approx(complex(h2) + (1 - q), rel=1e-12)
        # and the 2phi0 series route agrees on the circle
        assert eval_series(fam, 2, theta) == pytest.approx(h2, rel=1e-11)


def test_qdh_series_beyond_family_raises(families):
    fam = families["q_dual_hahn"]
    with pytest.raises(FamilyError, match="n_max"):
        fam.pn_series(5, 1.3)


def test_pn_monic_accessor(families):
    fam = families["askey_wilson"]
    s = grid_for("askey_wilson", 1)[0]
    for n in (1, 3):
        assert fam.pn_monic(n, s) * fam.a_n(n) == pytest.approx(fam.pn_ttrr(n, s), rel=1e-13)


# ------------------------- weights and norms --------------------------------


def test_weight_positive_on_supports(families):
    asc1 = families["asc1"]
    q = asc1.base.q
    # Jackson nodes of [a, 1]: q^k and a q^k
    for k in range(0, 12):
        assert weight_at(asc1, q**k).real > 0.0
        assert weight_at(asc1, asc1.params["a"] * q**k).real > 0.0
    qdh = families["q_dual_hahn"]
    for s in qdh.support.grid_points:
        assert weight_at(qdh, s).real > 0.0


def test_asc2_weight_unavailable(families):
    with pytest.raises(FamilyError, match="Pearson"):
        weight_at(families["asc2"], 0.5)


def test_aw_weight_at_zero_reduces_to_h_products(families):
    fam = families["askey_wilson"]
    q = fam.base.q
    h = fam.closed.displays["h_pair"]
    x = 0.0
    want = (
        h(x, 1.0) * h(x, -1.0) * h(x, math.sqrt(q)) * h(x, -math.sqrt(q))
        / (2 * math.pi * fam.base.k_q * (1 - x * x)
           * h(x, 0.3) * h(x, 0.3) * h(x, 0.3) * h(x, 0.3))
    )
    assert weight_at(fam, 0.0) == pytest.approx(want, rel=1e-13)
    # at a=b=c=d=0 only the numerator h-factors survive
    cqh = families["continuous_q_hermite"]
    want0 = (
        h(x, 1.0) * h(x, -1.0) * h(x, math.sqrt(q)) * h(x, -math.sqrt(q))
        / (2 * math.pi * fam.base.k_q)
    )
    assert weight_at(cqh, 0.0) == pytest.approx(want0, rel=1e-13)


def test_asc1_norms_match_jackson_integrals(families):
    fam = families["asc1"]
    a = fam.params["a"]
    for n in range(0, 4):
        direct = jackson_integral(
            lambda x, n=n: fam.pn_ttrr_x(n, x) ** 2 * fam.weight(x), a, 1.0, fam.base
        )
        assert rel_residual(direct - norm_sq(fam, n), (direct,)) < 1e-10


def test_bqj_tabulated_norm_is_erratum(families):
    # the tabulated squared norm disagrees with the direct integral even at
    # n = 0 and by a factor geometric in n afterwards
    fam = families["big_q_jacobi"]
    mismatch = 0
    for n in range(0, 4):
        tab = complex(fam.closed.d_n_sq(n))
        true = fam.norm_sq(n)
        if abs(tab - true) > 1e-6 * abs(true):
            mismatch += 1
    assert mismatch == 4


def test_qdh_norm_out_of_range(families):
    fam = families["q_dual_hahn"]
    with pytest.raises(FamilyError, match="finite family"):
        norm_sq(fam, 7)


def test_perturbation_roundtrip(families):
    fam = families["q_dual_hahn"]
    pert = fam.with_perturbation("beta", 1e-3)
    assert pert.ttrr_beta(2) == pytest.approx(fam.ttrr_beta(2) + 1e-3, rel=1e-12)
    assert fam.ttrr_beta(2) == pytest.approx(pert.ttrr_beta(2) - 1e-3, rel=1e-12)
    with pytest.raises(FamilyError, match="perturbation"):
        fam.with_perturbation("sigma", 1.0)
