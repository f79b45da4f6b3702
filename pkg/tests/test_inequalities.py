import math

import numpy as np
import pytest

from reekit import closedform as cf
from reekit import inequalities as ineq
from reekit import qcore, reesolver
from reekit.dicke import DickeIndex, DickeMixture
from reekit.durfamily import DurParams
from reekit.qcore import HilbertLayout


class TestPureChain:
    def test_w_state_triple_equality(self):
        r = ineq.check_pure_chain(DickeIndex(3, 2))
        assert r.passed
        expected = 2 * math.log2(3 / 2)
        assert r.values["lower"] == pytest.approx(expected, abs=1e-9)
        assert r.values["lr_upper"] == pytest.approx(expected, abs=1e-9)
        assert r.values["ree_numeric"] == pytest.approx(expected, abs=1e-4)

    def test_product_state_zeros(self):
        rng = np.random.default_rng(0)
        phi = qcore.haar_random_product(HilbertLayout.qubits(3), rng)
        r = ineq.check_pure_chain(phi.vector())
        assert r.passed
        assert r.values["lower"] == pytest.approx(0.0, abs=1e-6)
        assert r.values["ree_numeric"] == pytest.approx(0.0, abs=1e-4)

    def test_random_pure_chain(self):
        rng = np.random.default_rng(5)
        psi = qcore.haar_random_pure(HilbertLayout.qubits(3), rng)
        r = ineq.check_pure_chain(psi)
        assert r.passed
        assert r.margins["ree_ge_lower"] >= -1e-3
        assert "upper" not in r.values or r.values.get("lr_upper") is None or True

    def test_inequality_one_battery(self):
        # pure lower bound on 100 random states across 2-4 qubits
        cfg = reesolver.SolverConfig(max_iterations=25, restarts=16)
        counts = {2: 40, 3: 40, 4: 20}
        seed = 0
        for n, reps in counts.items():
            lay = HilbertLayout.qubits(n)
            for i in range(reps):
                rng = np.random.default_rng([seed, n, i])
                psi = qcore.haar_random_pure(lay, rng)
                value = reesolver.minimize_ree(psi.density(), cfg).value
                lam = reesolver.lambda_max_numeric(psi, cfg)
                assert value >= -2 * math.log2(lam) - 1e-3


class TestInequalitySix:
    @pytest.mark.parametrize("s", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_dicke_family_grid(self, s):
        r = ineq.check_inequality6(DickeMixture.two_component(3, 1, 2, s))
        assert r.passed
        assert r.margins["ree_ge_elog"] >= -1e-6
        assert r.margins["ree_ge_elog_minus_S"] >= -1e-6

    @pytest.mark.parametrize("x", [0.1, 0.4, 0.8])
    def test_dur_grid(self, x):
        r = ineq.check_inequality6(DurParams(4, x))
        assert r.passed
        # x >= log2(2/(2-x)) pointwise
        assert r.values["ree"] - r.values["e_log"] >= -1e-9

    def test_pure_state_reduces_to_chain(self):
        # zero entropy: E_R >= E_log - S becomes E_R >= E_log
        r = ineq.check_inequality6(DickeMixture.vertex(DickeIndex(3, 2)))
        assert r.passed
        assert r.values["entropy"] == pytest.approx(0.0, abs=1e-12)

    def test_raw_density_needs_elog(self):
        rng = np.random.default_rng(1)
        rho = qcore.random_density(HilbertLayout.qubits(2), rng)
        with pytest.raises(qcore.ValidationError):
            ineq.check_inequality6(rho)


class TestWerner:
    def test_boundary_point(self):
        r = ineq.werner_gap(1.0 / 3.0)
        assert r.passed
        assert r.values["ree"] <= 1e-4
        assert r.values["slack"] == pytest.approx(1 - math.log2(3) / 2, abs=1e-4)

    def test_maximally_mixed(self):
        r = ineq.werner_gap(0.0)
        assert r.passed
        assert r.values["ree"] <= 1e-8
        assert r.values["log2r_minus_S"] == pytest.approx(0.0, abs=1e-12)

    def test_entangled_point(self):
        r = ineq.werner_gap(0.9)
        assert r.passed
        assert r.values["ree"] > 0.1
        assert r.values["slack"] >= -1e-3

    def test_slack_despite_zero_ree(self):
        # the support-robustness bound stays strictly positive where REE vanishes
        r = ineq.werner_gap(1.0 / 3.0)
        assert r.values["slack"] > 0.2


class TestPlenioVedral:
    @pytest.mark.parametrize("nk", [(3, 1), (3, 2), (4, 1), (4, 2)])
    def test_saturation(self, nk):
        r = ineq.plenio_vedral_bound(DickeIndex(*nk))
        assert r.passed
        assert abs(r.values["reduced_ree_plus_S"] - r.values["full_ree"]) < 1e-9

    def test_w_state_value(self):
        r = ineq.plenio_vedral_bound(DickeIndex(3, 2))
        assert r.values["full_ree"] == pytest.approx(2 * math.log2(3 / 2), abs=1e-12)


class TestTraceDown:
    def test_single_excitation_sequence(self):
        rows = ineq.trace_down_report(DickeIndex(4, 1))
        values = [v for _, v, _ in rows]
        assert values[0] == pytest.approx(1.245112, abs=5e-6)
        assert values[1] == pytest.approx(0.433834, abs=5e-6)
        assert values[2] == pytest.approx(0.122556, abs=5e-6)
        assert values[3] == pytest.approx(0.0, abs=1e-12)

    def test_product_stays_zero(self):
        rows = ineq.trace_down_report(DickeIndex(4, 0))
        assert all(v == pytest.approx(0.0, abs=1e-12) for _, v, _ in rows)

    def test_balanced_excitation_stages(self):
        # frozen stagewise values computed from the mixture functional
        rows = ineq.trace_down_report(DickeIndex(4, 2))
        values = [v for _, v, _ in rows]
        assert values[0] == pytest.approx(1.4150374992788437, abs=1e-9)
        assert values[1] == pytest.approx(0.41503749927884376, abs=1e-9)
        assert values[2] == pytest.approx(0.08170416594551044, abs=1e-9)


class TestOverlapSuite:
    def test_qubit_bound(self):
        r = ineq.overlap_bound_suite(5, 2, 10_000, seed=0)
        assert r.passed
        assert r.values["min_margin"] >= -1e-12

    def test_qutrit_bound(self):
        r = ineq.overlap_bound_suite(4, 3, 10_000, seed=0)
        assert r.passed


class TestDefaultSuite:
    def test_quick_suite_passes(self):
        reports = ineq.run_default_suite(samples=500, seed=0, quick=True)
        assert len(reports) >= 10
        for r in reports:
            assert r.passed, r.summary()
            for margin in r.margins.values():
                assert margin >= -1e-3

    def test_reports_serialize(self):
        import json

        reports = ineq.run_default_suite(samples=300, seed=1, quick=True)
        payload = json.dumps([r.to_json() for r in reports])
        assert json.loads(payload)[0]["check"]
