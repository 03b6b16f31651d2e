"""Perturbation stability of representable families.

The central object is the two-family inequality

    || sum a_xi (Y_xi - Yhat_xi) f || <= eta || sum a_xi Y_xi f ||
                                       + beta || sum a_xi Yhat_xi f ||

quantified over all vectors f and all finite complex coefficient sequences
a.  It is checked, never proved: the sampler runs every standard-basis
sequence, seeded random dense sequences, targeted null combinations of
either family, and a local ascent from the worst witness.  A pass therefore
means "not falsified at N samples".

The derived frame bounds of the perturbed family use the middle term in two
switchable readings, because the as-printed pairing <Yhat f, Y f> is not
sign-definite: `hat_hat` (the standard perturbation reading, equal to the
frame operator of the perturbed family) is the default; `hat_original`
evaluates the printed pairing, Hermitized before eigen-analysis.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import psd_leq
from .exceptions import (
    BaseNotIndependent,
    InequalityNotVerified,
    LengthMismatch,
    NotAFrame,
)
from .frames import FrameBounds, GFusionFrame, frame_bounds
from .hilbert import ModuleVector, inner_product
from .represent import independence_analysis

DEFAULT_SEQ_SAMPLES = 256
DEFAULT_VEC_SAMPLES = 64
VIOLATION_SLACK = 1e-10
HAT_HAT = "hat_hat"
HAT_ORIGINAL = "hat_original"

SAMPLING_CAVEAT = (
    "inequality not falsified at the sampled sequence/vector pairs; a "
    "sampled check is evidence, not a proof"
)
HAT_ORIGINAL_CAVEAT = (
    "hat_original pairs perturbed with original actions as printed; the "
    "pairing is Hermitized before eigen-analysis and is not sign-definite "
    "in general"
)


@dataclass(frozen=True)
class PerturbationParams:
    eta: float
    beta: float

    def __post_init__(self):
        if not (0.0 <= self.eta < 1.0 and 0.0 <= self.beta < 1.0):
            raise ValueError(f"eta and beta must lie in [0, 1), got ({self.eta}, {self.beta})")


@dataclass(frozen=True)
class InequalityWitness:
    coefficients: np.ndarray  # (m,) complex
    vector: ModuleVector
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


@dataclass(frozen=True)
class PerturbationVerdict:
    params: PerturbationParams
    inequality_holds: bool
    witness: Optional[InequalityWitness]
    n_sequences: int
    n_vectors: int
    derived_lower: Optional[float] = None
    derived_upper: Optional[float] = None
    empirical_lower: Optional[float] = None
    empirical_upper: Optional[float] = None
    interpretation: Optional[str] = None
    bounds_contained: Optional[bool] = None
    sample_failures: Optional[int] = None
    caveats: tuple = ()


def _check_shapes(frame: GFusionFrame, perturbed: GFusionFrame):
    if len(frame) != len(perturbed):
        raise LengthMismatch("families have different lengths")
    if (frame.n, frame.d) != (perturbed.n, perturbed.d):
        raise LengthMismatch("families have different (n, d)")


def _batch_margins(alphas: np.ndarray, terms: np.ndarray, terms_hat: np.ndarray,
                   params: PerturbationParams):
    """lhs and rhs of the inequality for a batch of coefficient rows against
    fixed per-member applied vectors of shape (m, d, n*d)."""
    diff = np.einsum("sm,mik->sik", alphas, terms - terms_hat)
    base = np.einsum("sm,mik->sik", alphas, terms)
    hat = np.einsum("sm,mik->sik", alphas, terms_hat)
    lhs = np.linalg.norm(diff, ord=2, axis=(1, 2))
    rhs = params.eta * np.linalg.norm(base, ord=2, axis=(1, 2)) \
        + params.beta * np.linalg.norm(hat, ord=2, axis=(1, 2))
    return lhs, rhs


def _applied_terms(frame: GFusionFrame, f: ModuleVector) -> np.ndarray:
    return np.einsum("ij,mjk->mik", f.flat, frame.operator_matrices())


def inequality_margin(frame: GFusionFrame, perturbed: GFusionFrame,
                      params: PerturbationParams, coefficients, f: ModuleVector):
    """(lhs, rhs) of the inequality for one coefficient sequence and vector."""
    _check_shapes(frame, perturbed)
    alphas = np.asarray(coefficients, dtype=np.complex128).reshape(1, -1)
    if alphas.shape[1] != len(frame):
        raise LengthMismatch("one coefficient per family member is required")
    lhs, rhs = _batch_margins(alphas, _applied_terms(frame, f),
                              _applied_terms(perturbed, f), params)
    return float(lhs[0]), float(rhs[0])


def _null_coefficients(mats: np.ndarray, rtol: float = 1e-10, cap: int = 8):
    """Unit null combinations of the family's vectorized operators, if any."""
    m = mats.shape[0]
    stacked = mats.reshape(m, -1).T
    _, s, vh = np.linalg.svd(stacked, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return [np.eye(m, dtype=np.complex128)[0]]
    rank = int(np.sum(s > rtol * s[0]))
    return [vh[k].conj() for k in range(rank, min(m, rank + cap))]


def _candidate_sequences(frame, perturbed, seq_samples: int, rng) -> np.ndarray:
    m = len(frame)
    rows = [np.eye(m, dtype=np.complex128)]  # every standard-basis sequence
    mats = frame.operator_matrices()
    hmats = perturbed.operator_matrices()
    targeted = (_null_coefficients(mats) + _null_coefficients(hmats)
                + _null_coefficients(mats - hmats))
    if targeted:
        rows.append(np.vstack(targeted))
    extra = max(0, seq_samples - m)
    if extra:
        dense = rng.standard_normal((extra, m)) + 1j * rng.standard_normal((extra, m))
        dense /= np.linalg.norm(dense, axis=1, keepdims=True)
        rows.append(dense)
    return np.vstack(rows)


def _ascend_coefficients(alpha: np.ndarray, terms, terms_hat,
                         params: PerturbationParams, steps: int = 24):
    """Local finite-difference ascent of the normalized margin over the
    coefficient sequence, starting from the worst sampled witness."""
    m = alpha.shape[0]

    def normalized_margin(batch):
        lhs, rhs = _batch_margins(batch, terms, terms_hat, params)
        return (lhs - rhs) / (1.0 + rhs)

    alpha = alpha / max(np.linalg.norm(alpha), 1e-300)
    best = float(normalized_margin(alpha.reshape(1, -1))[0])
    lr = 0.25
    h = 1e-6
    eye = np.eye(m)
    for _ in range(steps):
        probes = np.vstack([
            alpha + h * eye, alpha - h * eye,
            alpha + 1j * h * eye, alpha - 1j * h * eye,
        ])
        vals = normalized_margin(probes)
        grad = (vals[:m] - vals[m:2 * m]) / (2 * h) \
            + 1j * (vals[2 * m:3 * m] - vals[3 * m:]) / (2 * h)
        gnorm = np.linalg.norm(grad)
        if gnorm == 0.0:
            break
        trial = alpha + lr * grad / gnorm
        trial /= max(np.linalg.norm(trial), 1e-300)
        val = float(normalized_margin(trial.reshape(1, -1))[0])
        if val > best:
            best, alpha = val, trial
        else:
            lr *= 0.5
            if lr < 1e-4:
                break
    return alpha, best


def check_perturbation_inequality(frame: GFusionFrame, perturbed: GFusionFrame,
                                  params: PerturbationParams,
                                  seq_samples: int = DEFAULT_SEQ_SAMPLES,
                                  vec_samples: int = DEFAULT_VEC_SAMPLES,
                                  seed: int = 0,
                                  slack: float = VIOLATION_SLACK,
                                  refine: bool = True) -> PerturbationVerdict:
    """Sample the two-family inequality and report the worst-margin witness.

    `inequality_holds` is True when no (sequence, vector) pair violates the
    inequality beyond `slack` relative slack, including after the local
    ascent refinement of the worst witness.
    """
    _check_shapes(frame, perturbed)
    rng = np.random.default_rng(seed)
    alphas = _candidate_sequences(frame, perturbed, seq_samples, rng)
    nd = frame.n * frame.d
    worst = None  # (normalized margin, witness)
    for _ in range(max(1, vec_samples)):
        flat = rng.standard_normal((frame.d, nd)) + 1j * rng.standard_normal((frame.d, nd))
        f = ModuleVector(flat / max(np.linalg.norm(flat, 2), 1e-300), frame.n, frame.d)
        terms = _applied_terms(frame, f)
        terms_hat = _applied_terms(perturbed, f)
        lhs, rhs = _batch_margins(alphas, terms, terms_hat, params)
        normalized = (lhs - rhs) / (1.0 + rhs)
        k = int(np.argmax(normalized))
        if worst is None or normalized[k] > worst[0]:
            worst = (float(normalized[k]),
                     InequalityWitness(alphas[k].copy(), f, float(lhs[k]), float(rhs[k])))
    margin, witness = worst
    if refine and margin <= slack:
        terms = _applied_terms(frame, witness.vector)
        terms_hat = _applied_terms(perturbed, witness.vector)
        alpha, refined = _ascend_coefficients(witness.coefficients, terms, terms_hat, params)
        if refined > margin:
            lhs, rhs = _batch_margins(alpha.reshape(1, -1), terms, terms_hat, params)
            margin = refined
            witness = InequalityWitness(alpha, witness.vector, float(lhs[0]), float(rhs[0]))
    holds = margin <= slack
    derived_lower = derived_upper = None
    try:
        derived_lower, derived_upper = derived_bounds(frame_bounds(frame), params)
    except NotAFrame:
        pass
    return PerturbationVerdict(
        params=params, inequality_holds=holds, witness=witness,
        n_sequences=alphas.shape[0], n_vectors=max(1, vec_samples),
        derived_lower=derived_lower, derived_upper=derived_upper,
        caveats=(SAMPLING_CAVEAT,) if holds else (),
    )


def derived_bounds(bounds, params: PerturbationParams):
    """(((1-eta)/(1+beta))^2 A, ((1+eta)/(1-beta))^2 B)."""
    lower, upper = bounds
    lo = ((1.0 - params.eta) / (1.0 + params.beta)) ** 2 * lower
    hi = ((1.0 + params.eta) / (1.0 - params.beta)) ** 2 * upper
    return lo, hi


def _middle_matrix(frame: GFusionFrame, perturbed: GFusionFrame, interpretation: str):
    hmats = perturbed.operator_matrices()
    if interpretation == HAT_HAT:
        mid = np.einsum("kij,klj->il", hmats, hmats.conj())
    elif interpretation == HAT_ORIGINAL:
        mats = frame.operator_matrices()
        mid = np.einsum("kij,klj->il", hmats, mats.conj())
    else:
        raise ValueError(f"interpretation must be {HAT_HAT!r} or {HAT_ORIGINAL!r}")
    return mid


def verify_perturbed_frame(frame: GFusionFrame, perturbed: GFusionFrame,
                           params: PerturbationParams,
                           interpretation: str = HAT_HAT,
                           vec_samples: int = DEFAULT_VEC_SAMPLES,
                           seed: int = 0,
                           slack: float = 1e-8,
                           inequality: Optional[PerturbationVerdict] = None) -> PerturbationVerdict:
    """Empirical optimal bounds of the middle term against the derived ones.

    Under hat_hat the empirical bounds are exactly the frame bounds of the
    perturbed family; under hat_original they are the extreme eigenvalues of
    the Hermitized mixed matrix.  Raises InequalityNotVerified when the
    inequality check (run here when not supplied) failed.
    """
    _check_shapes(frame, perturbed)
    if inequality is None:
        inequality = check_perturbation_inequality(frame, perturbed, params, seed=seed)
    if not inequality.inequality_holds:
        raise InequalityNotVerified(
            f"inequality violated by margin {inequality.witness.margin:.3e}"
        )
    lower, upper = frame_bounds(frame)
    d_lo, d_hi = derived_bounds(FrameBounds(lower, upper), params)
    mid = _middle_matrix(frame, perturbed, interpretation)
    mid_h = (mid + mid.conj().T) / 2.0
    eigs = np.linalg.eigvalsh(mid_h)
    e_lo, e_hi = float(eigs[0]), float(eigs[-1])
    contained = (d_lo <= e_lo + slack * (1.0 + abs(e_lo))
                 and e_hi <= d_hi + slack * (1.0 + abs(e_hi)))

    rng = np.random.default_rng(seed)
    nd = frame.n * frame.d
    failures = 0
    for _ in range(vec_samples):
        flat = rng.standard_normal((frame.d, nd)) + 1j * rng.standard_normal((frame.d, nd))
        f = ModuleVector(flat, frame.n, frame.d)
        gram = inner_product(f, f)
        value = f.flat @ mid @ f.flat.conj().T
        value = (value + value.conj().T) / 2.0
        if not psd_leq(d_lo * gram, value, 1e-9) or not psd_leq(value, d_hi * gram, 1e-9):
            failures += 1

    caveats = list(inequality.caveats)
    if interpretation == HAT_ORIGINAL:
        caveats.append(HAT_ORIGINAL_CAVEAT)
    return PerturbationVerdict(
        params=params, inequality_holds=True, witness=inequality.witness,
        n_sequences=inequality.n_sequences, n_vectors=inequality.n_vectors,
        derived_lower=d_lo, derived_upper=d_hi,
        empirical_lower=e_lo, empirical_upper=e_hi,
        interpretation=interpretation, bounds_contained=contained,
        sample_failures=failures, caveats=tuple(caveats),
    )


def independence_transfer(frame: GFusionFrame, perturbed: GFusionFrame,
                          params: PerturbationParams, tol: float = 1e-10,
                          seed: int = 0,
                          inequality: Optional[PerturbationVerdict] = None) -> bool:
    """Independence verdict of the perturbed family, given an independent
    base family and a verified inequality.

    When the perturbed family comes out dependent, its null combination is
    fed back through the inequality's contrapositive: the same coefficients
    must annihilate the base family, which contradicts base independence, so
    a verified inequality and a dependent perturbed family cannot coexist;
    the inconsistency is raised as InequalityNotVerified.
    """
    _check_shapes(frame, perturbed)
    if inequality is None:
        inequality = check_perturbation_inequality(frame, perturbed, params, seed=seed)
    if not inequality.inequality_holds:
        raise InequalityNotVerified(
            f"inequality violated by margin {inequality.witness.margin:.3e}"
        )
    base = independence_analysis(frame, tol)
    if base.verdict != "independent":
        raise BaseNotIndependent("the unperturbed family is linearly dependent")
    report = independence_analysis(perturbed, tol)
    if report.verdict == "independent":
        return True
    mats = frame.operator_matrices()
    combo = float(np.linalg.norm(np.einsum("k,kij->ij", report.coefficients, mats), 2))
    scale = max(frame.max_operator_norm(), 1e-300)
    if combo > tol * scale * len(frame):
        raise InequalityNotVerified(
            "a null combination of the perturbed family fails to annihilate "
            "the base family; the sampled inequality pass was a miss"
        )
    return False
