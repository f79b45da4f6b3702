import math

import numpy as np
import pytest

from reekit import closedform as cf
from reekit import qcore
from reekit.closedform import (
    AngleTheta,
    FCurve,
    closest_separable_dicke,
    convex_envelope_1d,
    dephased_separable_sigma,
    e_log_mixture,
    entanglement_eigenvalue_superposition,
    f_value,
    f_value_qudit,
    lambda_max_dicke,
    lambda_max_qudit,
    mixture_ree,
    pure_dicke_ree,
    ree_qudit_two_component,
    ree_two_component,
    theta_star,
    u_bar,
)
from reekit.dicke import (
    DickeIndex,
    DickeMixture,
    QuditComposition,
    QuditDickeMixture,
    mixture_density,
)
from reekit.qcore import ValidationError

A_VEC = (2, 0, 0, 1)
B_VEC = (1, 1, 1, 0)
C_VEC = (1, 0, 0, 2)


# printed two-component formulas (bits), 0 log 0 handled by the s-limits
def f_201(s):
    out = 0.0
    if s > 0:
        out += s * math.log2(4 * s / (1 + s) ** 2)
    if s < 1:
        out += (1 - s) * math.log2(2 / (1 + s))
    return out


def f_321(s):
    out = 0.0
    if s > 0:
        out += s * math.log2(9 * s / ((1 + s) ** 2 * (2 - s)))
    if s < 1:
        out += (1 - s) * math.log2(9 * (1 - s) / ((2 - s) ** 2 * (1 + s)))
    return out


def f_301(s):
    out = 0.0
    if s > 0:
        out += s * math.log2(27 * s / (2 + s) ** 3)
    if s < 1:
        out += (1 - s) * math.log2(9 / (2 + s) ** 2)
    return out


def f_401(s):
    out = 0.0
    if s > 0:
        out += s * math.log2(256 * s / (3 + s) ** 4)
    if s < 1:
        out += (1 - s) * math.log2(64 / (3 + s) ** 3)
    return out


def f_412(s):
    out = 0.0
    if s > 0:
        out += s * math.log2(64 * s / ((2 - s) * (2 + s) ** 3))
    if s < 1:
        out += (1 - s) * math.log2(128 * (1 - s) / (3 * (2 - s) ** 2 * (2 + s) ** 2))
    return out


def f_413(s):
    out = 0.0
    if s > 0:
        out += s * math.log2(64 * s / ((3 - 2 * s) * (1 + 2 * s) ** 3))
    if s < 1:
        out += (1 - s) * math.log2(64 * (1 - s) / ((3 - 2 * s) ** 3 * (1 + 2 * s)))
    return out


def f_ab(s):
    out = 0.0
    if s > 0:
        out += s * math.log2(9 / (1 + s) ** 2)
    if s < 1:
        out += (1 - s) * math.log2(9 / (2 * (1 - s**2)))
    return out


class TestEntanglementEigenvalues:
    def test_product_vertex(self):
        assert lambda_max_dicke(DickeIndex(5, 0)) == pytest.approx(1.0)
        assert pure_dicke_ree(DickeIndex(5, 0)) == pytest.approx(0.0)

    def test_w_state(self):
        assert lambda_max_dicke(DickeIndex(3, 2)) == pytest.approx(2 / 3, abs=1e-15)

    def test_single_excitation(self):
        assert lambda_max_dicke(DickeIndex(4, 1)) == pytest.approx((3 / 4) ** 1.5, abs=1e-15)
        assert pure_dicke_ree(DickeIndex(4, 1)) == pytest.approx(3 * math.log2(4 / 3), abs=1e-12)

    def test_qudit_values(self):
        a = QuditComposition(3, 4, A_VEC)
        b = QuditComposition(3, 4, B_VEC)
        assert lambda_max_qudit(QuditComposition(2, 3, (2, 0, 0))) == pytest.approx(1.0)
        assert pure_dicke_ree(a) == pytest.approx(2 * math.log2(3) - 2, abs=1e-12)
        assert lambda_max_qudit(b) ** 2 == pytest.approx(2 / 9, abs=1e-12)
        assert pure_dicke_ree(b) == pytest.approx(2 * math.log2(3) - 1, abs=1e-12)


class TestStationaryAngle:
    def test_all_zeros_vertex(self):
        th = theta_star(DickeMixture.vertex(DickeIndex(3, 3)))
        assert th.theta == pytest.approx(0.0, abs=1e-12)

    def test_mems(self):
        for s in [0.0, 0.2, 0.7, 1.0]:
            th = theta_star(DickeMixture.two_component(2, 0, 1, s))
            assert th.cos2 == pytest.approx((1 - s) / 2, abs=1e-12)

    def test_uniform(self):
        m = DickeMixture(4, np.full(5, 0.2))
        assert theta_star(m).cos2 == pytest.approx(0.5, abs=1e-12)

    def test_degenerate_alpha_zero(self):
        th = theta_star(DickeMixture.vertex(DickeIndex(3, 0)))
        assert th.theta == pytest.approx(math.pi / 2, abs=1e-12)


class TestFValue:
    @pytest.mark.parametrize("n", range(2, 7))
    def test_vertex_equals_pure_ree(self, n):
        for k in range(n + 1):
            m = DickeMixture.vertex(DickeIndex(n, k))
            assert f_value(m) == pytest.approx(pure_dicke_ree(DickeIndex(n, k)), abs=1e-12)

    def test_sequence_values(self):
        assert f_value(DickeMixture.two_component(2, 0, 1, 0.5)) == pytest.approx(
            0.5 * math.log2(32 / 27), abs=1e-12
        )
        assert f_value(DickeMixture.two_component(3, 0, 1, 0.25)) == pytest.approx(
            math.log2(16 / (9 * 3**0.25)), abs=1e-12
        )

    @pytest.mark.parametrize(
        "family,formula",
        [((2, 0, 1), f_201), ((3, 0, 1), f_301), ((3, 2, 1), f_321),
         ((4, 0, 1), f_401), ((4, 1, 2), f_412), ((4, 1, 3), f_413)],
    )
    def test_printed_formulas(self, family, formula):
        n, k1, k2 = family
        for s in np.linspace(0, 1, 21):
            m = DickeMixture.two_component(n, k1, k2, float(s))
            assert f_value(m) == pytest.approx(formula(float(s)), abs=1e-12)

    def test_qudit_vertex(self):
        m = QuditDickeMixture.vertex(QuditComposition(3, 4, B_VEC))
        assert f_value_qudit(m) == pytest.approx(2 * math.log2(3) - 1, abs=1e-12)

    def test_qudit_printed_formula(self):
        for s in np.linspace(0, 1, 21):
            m = QuditDickeMixture.from_weights(3, 4, {A_VEC: float(s), B_VEC: 1 - float(s)})
            assert f_value_qudit(m) == pytest.approx(f_ab(float(s)), abs=1e-12)
        assert f_ab(0.0) == pytest.approx(math.log2(9 / 2), abs=1e-15)

    def test_stationarity_is_minimum_over_theta(self):
        # F equals the relative entropy at theta*, and lower-bounds it elsewhere
        m = DickeMixture.two_component(3, 0, 2, 0.35)
        rho = mixture_density(m)
        star = theta_star(m)
        at_star = qcore.relative_entropy(rho, mixture_density(dephased_separable_sigma(star, 3)))
        assert f_value(m) == pytest.approx(at_star, abs=1e-10)
        for theta in np.linspace(0.05, math.pi / 2 - 0.05, 15):
            sigma = mixture_density(dephased_separable_sigma(AngleTheta(float(theta)), 3))
            assert qcore.relative_entropy(rho, sigma) >= at_star - 1e-10


class TestDephasedSigma:
    def test_theta_zero_point_mass(self):
        sig = dephased_separable_sigma(AngleTheta(0.0), 3)
        assert np.allclose(sig.weights, [0, 0, 0, 1])

    def test_binomial_example(self):
        sig = dephased_separable_sigma(AngleTheta(math.acos(math.sqrt(0.75))), 2)
        assert np.allclose(sig.weights, [1 / 16, 6 / 16, 9 / 16])

    def test_vertex_diagonal_is_lambda_squared(self):
        for n, k in [(3, 2), (4, 1), (5, 3)]:
            th = theta_star(DickeMixture.vertex(DickeIndex(n, k)))
            sig = dephased_separable_sigma(th, n)
            assert sig.weights[k] == pytest.approx(lambda_max_dicke(DickeIndex(n, k)) ** 2, abs=1e-12)


class TestConvexEnvelope:
    def test_convex_curve_untouched(self):
        env = cf._two_component_envelope(2, 0, 1)
        assert env.equals_curve
        for s in np.linspace(0, 1, 101):
            assert ree_two_component(2, 0, 1, float(s)) == pytest.approx(f_201(float(s)), abs=1e-10)

    def test_bridge_below_curve(self):
        env = cf._two_component_envelope(4, 0, 3)
        assert len(env.bridges) == 1
        a, b, fa, fb = env.bridges[0]
        # frozen from the refinement run; right end is the separable vertex
        assert a == pytest.approx(0.00410, abs=2e-4)
        assert b == pytest.approx(1.0, abs=1e-9)
        mid = 0.5 * (a + b)
        assert env.value(mid) < env.curve.evaluator(mid) - 1e-3

    def test_envelope_is_convex(self):
        for fam in [(3, 0, 2), (4, 0, 2), (4, 0, 3)]:
            env = cf._two_component_envelope(*fam)
            s = np.linspace(0, 1, 201)
            v = np.array([env.value(float(x)) for x in s])
            assert np.all(v[:-1][1:] <= 0.5 * (v[:-2] + v[2:]) + 1e-10)

    def test_envelope_below_curve_and_endpoints(self):
        for fam in [(3, 0, 2), (4, 0, 2), (4, 0, 3), (3, 1, 2)]:
            env = cf._two_component_envelope(*fam)
            for s in np.linspace(0, 1, 101):
                assert env.value(float(s)) <= env.curve.evaluator(float(s)) + 1e-10
            assert env.value(0.0) == pytest.approx(env.curve.evaluator(0.0), abs=1e-10)
            assert env.value(1.0) == pytest.approx(env.curve.evaluator(1.0), abs=1e-10)

    def test_rejects_bad_samples(self):
        with pytest.raises(ValidationError):
            FCurve("bad", np.array([0.0, 0.5, 1.0]), np.array([0.0, math.nan, 1.0]), lambda s: s)


class TestReeTwoComponent:
    def test_pure_endpoint(self):
        assert ree_two_component(4, 1, 3, 1.0) == pytest.approx(
            pure_dicke_ree(DickeIndex(4, 1)), abs=1e-12
        )

    def test_convex_families_match_formula(self):
        for s in np.linspace(0, 1, 21):
            assert ree_two_component(3, 2, 1, float(s)) == pytest.approx(f_321(float(s)), abs=1e-10)
            assert ree_two_component(4, 1, 3, float(s)) == pytest.approx(f_413(float(s)), abs=1e-10)


class TestQuditSegment:
    def test_linear_envelope(self):
        lo = 2 * math.log2(3) - 2
        hi = 2 * math.log2(3) - 1
        for s in np.linspace(0, 1, 21):
            expected = s * lo + (1 - s) * hi
            assert ree_qudit_two_component(3, 4, A_VEC, B_VEC, float(s)) == pytest.approx(
                expected, abs=1e-9
            )

    def test_ac_equals_qubit_family(self):
        for s in np.linspace(0, 1, 21):
            assert ree_qudit_two_component(3, 4, A_VEC, C_VEC, float(s)) == pytest.approx(
                ree_two_component(3, 1, 2, float(s)), abs=1e-9
            )


class TestClosestSeparable:
    def test_vertex(self):
        sig, info = closest_separable_dicke(DickeMixture.vertex(DickeIndex(4, 1)))
        th = theta_star(DickeMixture.vertex(DickeIndex(4, 1)))
        assert th.cos2 == pytest.approx(1 / 4, abs=1e-12)
        assert np.allclose(sig.weights, dephased_separable_sigma(th, 4).weights)

    def test_mems_cross_check(self):
        for s in [0.2, 0.5, 0.8]:
            m = DickeMixture.two_component(2, 0, 1, s)
            sig, info = closest_separable_dicke(m)
            val = qcore.relative_entropy(mixture_density(m), mixture_density(sig))
            assert val == pytest.approx(f_201(s), abs=1e-10)
            assert info["method"] == "stationary-point"

    def test_bridge_cross_check(self):
        # inside the bridge the two-atom combination achieves exactly co F
        for s in [0.1, 0.45, 0.8]:
            m = DickeMixture.two_component(4, 0, 3, s)
            sig, info = closest_separable_dicke(m)
            assert info["method"] == "envelope-bridge"
            val = qcore.relative_entropy(mixture_density(m), mixture_density(sig))
            assert val == pytest.approx(ree_two_component(4, 0, 3, s), abs=1e-9)

    def test_qudit_bridge_cross_check(self):
        for s in [0.25, 0.5, 0.75]:
            m = QuditDickeMixture.from_weights(3, 4, {A_VEC: s, B_VEC: 1 - s})
            sig, info = closest_separable_dicke(m)
            assert info["method"] == "envelope-bridge"
            assert len(info["atoms"]) == 2
            val = qcore.relative_entropy(mixture_density(m), mixture_density(sig))
            assert val == pytest.approx(ree_qudit_two_component(3, 4, A_VEC, B_VEC, s), abs=1e-9)


class TestSuperposition:
    def test_single_term_qubit(self):
        for n, k in [(3, 2), (4, 1), (5, 2)]:
            q = np.zeros(n + 1)
            q[k] = 1.0
            lam, e = entanglement_eigenvalue_superposition(q, n=n)
            assert lam == pytest.approx(lambda_max_dicke(DickeIndex(n, k)), abs=1e-9)
            assert e == pytest.approx(pure_dicke_ree(DickeIndex(n, k)), abs=1e-8)

    def test_single_term_qudit(self):
        from reekit.dicke import composition_index, compositions

        c = QuditComposition(3, 4, B_VEC)
        q = np.zeros(len(compositions(3, 4)))
        q[composition_index(c)] = 1.0
        lam, _ = entanglement_eigenvalue_superposition(q, n=3, d=4, restarts=20, seed=2)
        assert lam == pytest.approx(lambda_max_qudit(c), abs=1e-9)

    def test_collapsed_w_pair(self):
        # |W x2> = sqrt(1/3)|a> + sqrt(2/3)|b>: Lambda multiplicative, (2/3)^2
        from reekit.dicke import DickeIndex as DI
        from reekit.dicke import collapse_copies

        col = collapse_copies(2, DI(3, 2))
        q = np.abs(col.amplitudes) ** 2
        lam, _ = entanglement_eigenvalue_superposition(q, n=3, d=4, restarts=20, seed=3)
        assert lam == pytest.approx(4 / 9, abs=1e-8)

    @pytest.mark.parametrize("n", range(2, 7))
    def test_e_below_f(self, n):
        rng = np.random.default_rng(50 + n)
        for _ in range(10):
            q = rng.dirichlet(np.ones(n + 1))
            _, e = entanglement_eigenvalue_superposition(q, n=n)
            assert e <= f_value(DickeMixture(n, q)) + 1e-9


class TestELog:
    def test_vertex(self):
        m = DickeMixture.vertex(DickeIndex(4, 2))
        assert e_log_mixture(m) == pytest.approx(pure_dicke_ree(DickeIndex(4, 2)), abs=1e-9)

    @pytest.mark.parametrize(
        "family",
        [(3, 0, 1), (3, 0, 2), (3, 1, 2), (4, 0, 1), (4, 0, 2), (4, 0, 3), (4, 1, 2), (4, 1, 3)],
    )
    def test_elog_below_ree_on_grid(self, family):
        n, k1, k2 = family
        for s in np.linspace(0, 1, 21):
            m = DickeMixture.two_component(n, k1, k2, float(s))
            assert e_log_mixture(m) <= ree_two_component(n, k1, k2, float(s)) + 1e-9

    def test_qudit_family_grid(self):
        for s in np.linspace(0, 1, 11):
            m = QuditDickeMixture.from_weights(3, 4, {A_VEC: float(s), B_VEC: 1 - float(s)})
            assert e_log_mixture(m) <= ree_qudit_two_component(3, 4, A_VEC, B_VEC, float(s)) + 1e-8


class TestMixtureRee:
    def test_wide_support_locally_convex(self):
        # binomial-like mixture from tracing S(4,2) twice: F convex at p
        from reekit.dicke import partial_trace_dicke

        m = partial_trace_dicke(DickeMixture.vertex(DickeIndex(4, 2)), 2)
        assert len(m.support()) == 3
        value, info = mixture_ree(m)
        assert info["method"] == "closed-form"
        assert value == pytest.approx(f_value(m), abs=1e-9)


class TestCsvExport:
    def test_columns_and_digits(self):
        curve = cf.two_component_curve(2, 0, 1, points=5)
        text = cf.curve_csv(curve)
        lines = text.strip().split("\n")
        assert lines[0] == "s,F,coF"
        assert len(lines) == 6
        first = lines[1].split(",")
        assert first[0] == "0"
        assert float(first[1]) == pytest.approx(f_201(0.0))
