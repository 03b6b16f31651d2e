import numpy as np
import pytest

from gframemod.exceptions import BaseNotIndependent, InequalityNotVerified, LengthMismatch
from gframemod.families import random_frame, random_unitary, random_vector, unitary_orbit_frame
from gframemod.frames import FrameBounds, GFusionFrame, frame_bounds
from gframemod.hilbert import ModuleOperator, ModuleVector, Submodule
from gframemod.perturb import (
    HAT_ORIGINAL,
    PerturbationParams,
    check_perturbation_inequality,
    derived_bounds,
    independence_transfer,
    inequality_margin,
    verify_perturbed_frame,
)


def test_params_validation():
    PerturbationParams(0.0, 0.0)
    PerturbationParams(0.99, 0.5)
    for bad in ((1.0, 0.0), (0.0, 1.0), (-0.1, 0.0), (0.0, -0.1)):
        with pytest.raises(ValueError):
            PerturbationParams(*bad)


def test_identical_families_satisfy_zero_params():
    frame = random_frame(2, 1, 3, seed=0)
    verdict = check_perturbation_inequality(frame, frame, PerturbationParams(0.0, 0.0),
                                            seq_samples=64, vec_samples=16, seed=0)
    assert verdict.inequality_holds
    assert verdict.witness.lhs == pytest.approx(0.0, abs=1e-14)


def test_zero_params_fail_for_distinct_families():
    frame = random_frame(2, 1, 3, seed=1)
    verdict = check_perturbation_inequality(frame, frame.scaled(1.05),
                                            PerturbationParams(0.0, 0.0),
                                            seq_samples=32, vec_samples=8, seed=0)
    assert not verdict.inequality_holds


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.2])
def test_scalar_scaling_closed_form(eps):
    frame = random_frame(2, 2, 3, seed=2)
    scaled = frame.scaled(1.0 + eps)
    good = check_perturbation_inequality(frame, scaled, PerturbationParams(eps, 0.0),
                                         seq_samples=64, vec_samples=16, seed=3)
    assert good.inequality_holds
    bad = check_perturbation_inequality(frame, scaled, PerturbationParams(eps * 0.9, 0.0),
                                        seq_samples=64, vec_samples=16, seed=3)
    assert not bad.inequality_holds
    # the witness obeys the closed form: lhs = eps * ||sum a Y f|| exactly
    witness = bad.witness
    base_lhs, _ = inequality_margin(frame, frame, PerturbationParams(0.0, 0.0),
                                    witness.coefficients, witness.vector)
    assert base_lhs == 0.0
    lhs, rhs = inequality_margin(frame, scaled, PerturbationParams(eps * 0.9, 0.0),
                                 witness.coefficients, witness.vector)
    assert lhs == pytest.approx(witness.lhs, rel=1e-12)
    assert lhs == pytest.approx(rhs / 0.9, rel=1e-10)  # ratio is exactly eps vs 0.9*eps


def test_large_displacement_violates_with_basis_witness():
    rng = np.random.default_rng(4)
    frame = random_frame(2, 1, 3, seed=5)
    scale = frame.max_operator_norm()
    shifted_elements = []
    for e in frame.elements:
        bump = (rng.standard_normal(e.operator.matrix.shape)
                + 1j * rng.standard_normal(e.operator.matrix.shape))
        bump = 3.0 * scale * bump @ e.submodule.projection.matrix
        shifted_elements.append((e.submodule, e.operator + ModuleOperator(bump, 2, 1)))
    perturbed = GFusionFrame(shifted_elements, frame.index_convention)
    verdict = check_perturbation_inequality(frame, perturbed, PerturbationParams(0.1, 0.1),
                                            seq_samples=0, vec_samples=8, seed=0)
    assert not verdict.inequality_holds  # basis sequences alone expose it


def test_derived_bounds_values():
    assert derived_bounds(FrameBounds(2.0, 3.0), PerturbationParams(0.0, 0.0)) == (2.0, 3.0)
    lo, hi = derived_bounds(FrameBounds(1.0, 1.0), PerturbationParams(1.0 / 3.0, 0.0))
    assert lo == pytest.approx(4.0 / 9.0, rel=1e-12)
    assert hi == pytest.approx(16.0 / 9.0, rel=1e-12)
    lo, hi = derived_bounds(FrameBounds(2.0, 3.0), PerturbationParams(0.0, 0.5))
    assert lo == pytest.approx(8.0 / 9.0, rel=1e-12)
    assert hi == pytest.approx(12.0, rel=1e-12)


def test_derived_bounds_monotone_in_params():
    grid = [k / 10 for k in range(10)]
    bounds = FrameBounds(1.5, 2.5)
    for eta in grid:
        for beta in grid:
            lo, hi = derived_bounds(bounds, PerturbationParams(eta, beta))
            lo2, hi2 = derived_bounds(bounds, PerturbationParams(min(eta + 0.1, 0.99), beta))
            assert lo2 <= lo + 1e-12 and hi2 >= hi - 1e-12
            lo3, hi3 = derived_bounds(bounds, PerturbationParams(eta, min(beta + 0.1, 0.99)))
            assert lo3 <= lo + 1e-12 and hi3 >= hi - 1e-12


def test_verify_identical_families():
    frame = random_frame(2, 1, 3, seed=6)
    lower, upper = frame_bounds(frame)
    verdict = verify_perturbed_frame(frame, frame, PerturbationParams(0.0, 0.0), seed=0)
    assert verdict.bounds_contained
    assert verdict.derived_lower == pytest.approx(lower, rel=1e-12)
    assert verdict.derived_upper == pytest.approx(upper, rel=1e-12)
    assert verdict.empirical_lower == pytest.approx(lower, rel=1e-12)
    assert verdict.empirical_upper == pytest.approx(upper, rel=1e-12)
    assert verdict.sample_failures == 0


def test_verify_scaled_family_attains_upper_bound():
    eps = 0.1
    frame = random_frame(2, 2, 3, seed=7)
    lower, upper = frame_bounds(frame)
    scaled = frame.scaled(1.0 + eps)
    verdict = verify_perturbed_frame(frame, scaled, PerturbationParams(eps, 0.0), seed=1)
    assert verdict.bounds_contained
    assert verdict.empirical_lower == pytest.approx(1.21 * lower, rel=1e-10)
    assert verdict.empirical_upper == pytest.approx(1.21 * upper, rel=1e-10)
    assert verdict.derived_upper == pytest.approx(verdict.empirical_upper, rel=1e-8)


def test_hat_hat_matches_perturbed_frame_bounds():
    frame = random_frame(3, 1, 4, seed=8)
    perturbed = frame.scaled(1.02)
    verdict = verify_perturbed_frame(frame, perturbed, PerturbationParams(0.05, 0.0), seed=0)
    plower, pupper = frame_bounds(perturbed)
    assert verdict.empirical_lower == pytest.approx(plower, rel=1e-10)
    assert verdict.empirical_upper == pytest.approx(pupper, rel=1e-10)


def test_hat_original_interpretation_on_identical_families():
    frame = random_frame(2, 1, 3, seed=9)
    lower, upper = frame_bounds(frame)
    verdict = verify_perturbed_frame(frame, frame, PerturbationParams(0.0, 0.0),
                                     interpretation=HAT_ORIGINAL, seed=0)
    assert verdict.empirical_lower == pytest.approx(lower, rel=1e-12)
    assert verdict.empirical_upper == pytest.approx(upper, rel=1e-12)
    assert any("hat_original" in c for c in verdict.caveats)


def test_verify_raises_when_inequality_fails():
    frame = random_frame(2, 1, 3, seed=10)
    scaled = frame.scaled(1.1)
    with pytest.raises(InequalityNotVerified):
        verify_perturbed_frame(frame, scaled, PerturbationParams(0.05, 0.0), seed=0)


def test_margin_invariant_under_unitary_conjugation():
    frame = random_frame(2, 2, 3, seed=11)
    perturbed = frame.scaled(1.03)
    params = PerturbationParams(0.05, 0.02)
    rng = np.random.default_rng(12)
    w = random_unitary(rng, 4)
    alpha = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    f = random_vector(rng, 2, 2)

    def conjugate(fr):
        elements = []
        for e in fr.elements:
            proj = w.conj().T @ e.submodule.projection.matrix @ w
            op = w.conj().T @ e.operator.matrix @ w
            elements.append((Submodule(ModuleOperator(proj, 2, 2)), ModuleOperator(op, 2, 2)))
        return GFusionFrame(elements, fr.index_convention)

    f_rot = ModuleVector(f.flat @ w, 2, 2)
    lhs, rhs = inequality_margin(frame, perturbed, params, alpha, f)
    lhs2, rhs2 = inequality_margin(conjugate(frame), conjugate(perturbed), params, alpha, f_rot)
    assert lhs2 == pytest.approx(lhs, rel=1e-10)
    assert rhs2 == pytest.approx(rhs, rel=1e-10)


def test_length_mismatch():
    a = random_frame(2, 1, 3, seed=13)
    b = random_frame(2, 1, 2, seed=13)
    with pytest.raises(LengthMismatch):
        check_perturbation_inequality(a, b, PerturbationParams(0.1, 0.1))


# ---------------------------------------------------------------------------
# independence transfer


def test_transfer_on_identical_independent_family():
    frame = random_frame(2, 1, 3, seed=14)
    params = PerturbationParams(0.0, 0.0)
    assert independence_transfer(frame, frame, params, seed=0)


def test_transfer_on_scaled_family():
    frame = random_frame(2, 1, 3, seed=15)
    params = PerturbationParams(0.1, 0.0)
    scaled = frame.scaled(1.1)
    assert independence_transfer(frame, scaled, params, seed=0)


def test_transfer_requires_independent_base():
    frame = unitary_orbit_frame(2, 1, 4, seed=16)  # period-two orbit is dependent
    params = PerturbationParams(0.0, 0.0)
    with pytest.raises(BaseNotIndependent):
        independence_transfer(frame, frame, params, seed=0)


def test_dependent_perturbation_fails_the_inequality_itself():
    # base independent, perturbed collapsed onto a single member: by the
    # contrapositive no (eta, beta) in [0,1) can satisfy the inequality, and
    # the targeted null-combination candidates expose it
    frame = random_frame(2, 1, 2, seed=17)
    e0 = frame.elements[0]
    collapsed = GFusionFrame(
        [e0, (frame.elements[1].submodule,
              ModuleOperator(np.zeros((2, 2), dtype=complex), 2, 1))],
        frame.index_convention,
    )
    verdict = check_perturbation_inequality(frame, collapsed, PerturbationParams(0.3, 0.3),
                                            seq_samples=16, vec_samples=8, seed=0)
    assert not verdict.inequality_holds
    with pytest.raises(InequalityNotVerified):
        independence_transfer(frame, collapsed, PerturbationParams(0.3, 0.3), seed=0)
