"""Tests for covariance assembly, conditioning and mutual information.

The determinant-ratio mutual information is the from-first-principles oracle
for the two closed-form rate terms, so agreement is checked both on the
hand-expanded examples and over seeded random systems.
"""
import math

import numpy as np
import pytest

from relaycap import (
    DegenerateConditioningError,
    JointGaussianSystem,
    LabeledCovariance,
    LinkGains,
    ParameterDomainError,
    UsageError,
    XR,
    XS,
    YD,
    YR,
    assemble_covariance,
    conditional_covariance,
    cutset_terms,
    gaussian_mutual_information,
)


def _random_system(rng, *, rho_range=(-0.99, 0.99),
                   gain_range=(1e-3, 1.0), power_range=(1e-2, 1.0),
                   noise_range=(1e-6, 1e-2)) -> JointGaussianSystem:
    def log_u(lo, hi):
        return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))

    return JointGaussianSystem(
        gamma_sr=log_u(*gain_range),
        gamma_rd=log_u(*gain_range),
        gamma_sd=log_u(*gain_range),
        p_s=log_u(*power_range),
        p_r=log_u(*power_range),
        rho=float(rng.uniform(*rho_range)),
        noise=log_u(*noise_range),
    )


class TestAssembleCovariance:
    def test_no_coupling_is_identity(self):
        sys = JointGaussianSystem(gamma_sr=0, gamma_rd=0, gamma_sd=0,
                                  p_s=1.0, p_r=1.0, rho=0.0, noise=1.0)
        cov = assemble_covariance(sys)
        assert cov.labels == (XS, XR, YR, YD)
        assert np.array_equal(cov.matrix.astype(float), np.eye(4))

    def test_symmetric_unit_system_hand_expansion(self):
        # Yr = Xs + Zr, Yd = Xs + Xr + Zd with unit powers and noise:
        # Var(Yd) = 1 + 1 + 1 = 3 and Cov(Yr, Yd) = Var(Xs) = 1.
        sys = JointGaussianSystem(gamma_sr=1, gamma_rd=1, gamma_sd=1,
                                  p_s=1.0, p_r=1.0, rho=0.0, noise=1.0)
        cov = assemble_covariance(sys)
        assert cov.variance(YD) == pytest.approx(3.0, rel=1e-15)
        assert cov.covariance(YR, YD) == pytest.approx(1.0, rel=1e-15)
        assert cov.variance(YR) == pytest.approx(2.0, rel=1e-15)
        assert cov.covariance(XS, XR) == 0.0

    def test_var_yd_closed_form_random(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            sys = _random_system(rng)
            cov = assemble_covariance(sys)
            expected = (sys.gamma_sd * sys.p_s + sys.gamma_rd * sys.p_r
                        + 2.0 * sys.rho * math.sqrt(sys.gamma_sd * sys.p_s
                                                    * sys.gamma_rd * sys.p_r)
                        + sys.noise)
            assert cov.variance(YD) == pytest.approx(expected, rel=1e-12)

    def test_assembled_matrix_exactly_symmetric(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            cov = assemble_covariance(_random_system(rng))
            assert np.array_equal(cov.matrix, cov.matrix.T)

    def test_cross_term_with_correlation(self):
        sys = JointGaussianSystem(gamma_sr=0.5, gamma_rd=2.0, gamma_sd=1.0,
                                  p_s=4.0, p_r=9.0, rho=0.5, noise=1.0)
        cov = assemble_covariance(sys)
        cross = 0.5 * math.sqrt(4.0 * 9.0)   # rho sqrt(p_s p_r) = 3
        assert cov.covariance(XS, XR) == pytest.approx(cross, rel=1e-15)
        # Cov(Xs, Yd) = sqrt(g_sd) p_s + sqrt(g_rd) E[Xs Xr]
        assert cov.covariance(XS, YD) == pytest.approx(4.0 + math.sqrt(2.0) * 3.0, rel=1e-14)

    def test_invalid_systems_rejected(self):
        with pytest.raises(ParameterDomainError):
            JointGaussianSystem(gamma_sr=1, gamma_rd=1, gamma_sd=1,
                                p_s=1, p_r=1, rho=1.5, noise=1)
        with pytest.raises(ParameterDomainError):
            JointGaussianSystem(gamma_sr=1, gamma_rd=1, gamma_sd=1,
                                p_s=1, p_r=1, rho=0.0, noise=0.0)
        with pytest.raises(ParameterDomainError):
            JointGaussianSystem(gamma_sr=-1, gamma_rd=1, gamma_sd=1,
                                p_s=1, p_r=1, rho=0.0, noise=1.0)


class TestLabeledCovariance:
    def test_label_count_must_match(self):
        with pytest.raises(UsageError):
            LabeledCovariance(labels=(XS,), matrix=np.eye(2))

    def test_asymmetric_rejected(self):
        mat = np.array([[1.0, 0.5], [0.2, 1.0]])
        with pytest.raises(ParameterDomainError):
            LabeledCovariance(labels=(XS, XR), matrix=mat)

    def test_indefinite_rejected(self):
        mat = np.array([[1.0, 2.0], [2.0, 1.0]])
        with pytest.raises(ParameterDomainError):
            LabeledCovariance(labels=(XS, XR), matrix=mat)

    def test_matrix_is_frozen(self):
        cov = LabeledCovariance(labels=(XS, XR), matrix=np.eye(2))
        with pytest.raises(ValueError):
            cov.matrix[0, 0] = 2.0


class TestConditionalCovariance:
    def test_independent_variables(self):
        cov = LabeledCovariance(labels=(YR, YD), matrix=np.eye(2))
        out = conditional_covariance(cov, targets=[YR], given=[YD])
        assert out.labels == (YR,)
        assert out.matrix[0, 0] == pytest.approx(1.0, rel=1e-15)

    def test_outputs_given_both_inputs_leave_noise(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            sys = _random_system(rng)
            cov = assemble_covariance(sys)
            out = conditional_covariance(cov, targets=[YD, YR], given=[XS, XR])
            mat = out.matrix.astype(float)
            assert mat[0, 0] == pytest.approx(sys.noise, rel=1e-9)
            assert mat[1, 1] == pytest.approx(sys.noise, rel=1e-9)
            assert abs(mat[0, 1]) <= 1e-9 * sys.noise
            det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
            assert det == pytest.approx(sys.noise ** 2, rel=1e-12)

    def test_perfectly_correlated_inputs_still_condition(self):
        # rho = +/-1 makes the input block singular; the degenerate direction
        # carries no extra information, so conditioning must still work.
        for rho in (1.0, -1.0):
            sys = JointGaussianSystem(gamma_sr=0.3, gamma_rd=0.8, gamma_sd=0.5,
                                      p_s=0.7, p_r=0.4, rho=rho, noise=1e-4)
            cov = assemble_covariance(sys)
            out = conditional_covariance(cov, targets=[YD, YR], given=[XS, XR])
            mat = out.matrix.astype(float)
            assert mat[0, 0] == pytest.approx(1e-4, rel=1e-9)
            assert mat[1, 1] == pytest.approx(1e-4, rel=1e-9)

    def test_determinant_identity_given_relay_input(self):
        # det Cov[{Yd, Yr} | Xr] = noise * ((g_sd + g_sr) p_s (1 - rho^2) + noise)
        sys = JointGaussianSystem(gamma_sr=1, gamma_rd=1, gamma_sd=1,
                                  p_s=1.0, p_r=1.0, rho=0.0, noise=1.0)
        out = conditional_covariance(assemble_covariance(sys), [YD, YR], [XR])
        mat = out.matrix.astype(float)
        det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
        assert det == pytest.approx(3.0, rel=1e-12)

    def test_determinant_identity_random(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            sys = _random_system(rng)
            out = conditional_covariance(assemble_covariance(sys), [YD, YR], [XR])
            mat = out.matrix.astype(float)
            det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
            expected = sys.noise * ((sys.gamma_sd + sys.gamma_sr) * sys.p_s
                                    * (1.0 - sys.rho ** 2) + sys.noise)
            assert det == pytest.approx(expected, rel=1e-9)

    def test_empty_given_returns_target_block(self):
        sys = JointGaussianSystem(gamma_sr=0.2, gamma_rd=0.4, gamma_sd=0.6,
                                  p_s=1.0, p_r=2.0, rho=0.3, noise=0.5)
        cov = assemble_covariance(sys)
        out = conditional_covariance(cov, targets=[XS, XR], given=[])
        assert out.matrix[0, 0] == cov.matrix[0, 0]
        assert out.matrix[0, 1] == cov.matrix[0, 1]

    def test_overlapping_sets_rejected(self):
        cov = assemble_covariance(JointGaussianSystem(1, 1, 1, 1, 1, 0.0, 1))
        with pytest.raises(UsageError):
            conditional_covariance(cov, targets=[YD, XS], given=[XS])

    def test_unknown_label_rejected(self):
        cov = assemble_covariance(JointGaussianSystem(1, 1, 1, 1, 1, 0.0, 1))
        with pytest.raises(UsageError):
            conditional_covariance(cov, targets=["Zr"], given=[XS])

    def test_informative_degenerate_block_rejected(self):
        # (Xs, Xr) almost perfectly correlated and Yr = Xs - Xr: all the
        # information about Yr sits in the near-null direction, which the
        # 1e12 condition guard discards, so conditioning must refuse.
        eps = 1e-14
        mat = np.array([
            [1.0, 1.0 - eps, eps],
            [1.0 - eps, 1.0, -eps],
            [eps, -eps, 2.0 * eps],
        ])
        cov = LabeledCovariance(labels=(XS, XR, YR), matrix=mat)
        with pytest.raises(DegenerateConditioningError):
            conditional_covariance(cov, targets=[YR], given=[XS, XR])


class TestGaussianMutualInformation:
    def test_independent_variables_zero(self):
        cov = LabeledCovariance(labels=(XS, YD), matrix=np.diag([2.0, 3.0]))
        assert gaussian_mutual_information(cov, [XS], [YD]) == 0.0

    def test_zero_gains_zero_information(self):
        sys = JointGaussianSystem(gamma_sr=0, gamma_rd=0, gamma_sd=0,
                                  p_s=1.0, p_r=1.0, rho=0.0, noise=1.0)
        cov = assemble_covariance(sys)
        assert gaussian_mutual_information(cov, [XS], [YD, YR], [XR]) == 0.0
        assert gaussian_mutual_information(cov, [XS, XR], [YD]) == 0.0

    def test_broadcast_term_matches_closed_form(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            sys = _random_system(rng)
            cov = assemble_covariance(sys)
            mi = gaussian_mutual_information(cov, [XS], [YD, YR], [XR])
            bc, _ = cutset_terms(LinkGains(sys.gamma_sr, sys.gamma_rd, sys.gamma_sd),
                                 sys.p_s, sys.p_r, sys.rho, sys.noise)
            assert mi == pytest.approx(bc, abs=1e-9)

    def test_multiple_access_term_matches_closed_form(self):
        rng = np.random.default_rng(14)
        for _ in range(200):
            sys = _random_system(rng)
            cov = assemble_covariance(sys)
            mi = gaussian_mutual_information(cov, [XS, XR], [YD])
            _, mac = cutset_terms(LinkGains(sys.gamma_sr, sys.gamma_rd, sys.gamma_sd),
                                  sys.p_s, sys.p_r, sys.rho, sys.noise)
            assert mi == pytest.approx(mac, abs=1e-9)

    def test_symmetry_in_arguments(self):
        rng = np.random.default_rng(15)
        for _ in range(50):
            cov = assemble_covariance(_random_system(rng))
            forward = gaussian_mutual_information(cov, [XS], [YD, YR], [XR])
            backward = gaussian_mutual_information(cov, [YD, YR], [XS], [XR])
            assert forward == pytest.approx(backward, abs=1e-9)

    def test_nonnegative(self):
        rng = np.random.default_rng(16)
        for _ in range(50):
            cov = assemble_covariance(_random_system(rng))
            assert gaussian_mutual_information(cov, [XS], [YD]) >= 0.0

    def test_disjointness_enforced(self):
        cov = assemble_covariance(JointGaussianSystem(1, 1, 1, 1, 1, 0.0, 1))
        with pytest.raises(UsageError):
            gaussian_mutual_information(cov, [XS], [XS, YD])
        with pytest.raises(UsageError):
            gaussian_mutual_information(cov, [XS], [YD], [XS])
