"""g-fusion frames: the frame inequality, optimal bounds, synthesis and
analysis, the canonical dual, and reconstruction.

A frame is an ordered family of pairs (N_xi, Y_xi) where N_xi is an
orthogonally complemented submodule and Y_xi an operator whose range lies in
N_xi.  The optimal bounds are the extreme eigenvalues of the flattened frame
operator: the module inequality A<f,f> <= <Sf,f> <= B<f,f> for every f is
equivalent to PSD-ness of S - A*Id and B*Id - S as (n*d)^2 complex matrices,
because a rank-one row-block vector probes every complex direction.
"""

from typing import NamedTuple

import numpy as np

from .exceptions import (
    DimensionMismatch,
    LengthMismatch,
    MembershipViolation,
    NonpositiveWeight,
    NotAFrame,
)
from .hilbert import (
    ModuleOperator,
    ModuleSequence,
    ModuleVector,
    Submodule,
    _check_convention,
    apply,
)

RANK_TOL = 1e-10  # S is treated as singular below this relative eigenvalue
COND_LIMIT = 1e-12  # refuse to invert S past this relative conditioning
TIGHT_TOL = 1e-9  # default relative gap for tightness


class FrameElement(NamedTuple):
    submodule: Submodule
    operator: ModuleOperator


class FrameBounds(NamedTuple):
    lower: float
    upper: float


class GFusionFrame:
    """Ordered family {(N_xi, Y_xi)} with a linear or cyclic index convention."""

    __slots__ = ("elements", "index_convention", "n", "d")

    def __init__(self, elements, index_convention: str = "linear", containment_tol: float = 1e-8):
        elements = [FrameElement(sub, op) for sub, op in elements]
        if not elements:
            raise DimensionMismatch("a frame needs at least one element")
        for sub, _ in elements:
            if not isinstance(sub, Submodule):
                raise TypeError(f"frame elements pair a Submodule with an operator, got {type(sub).__name__}")
        n, d = elements[0].operator.n, elements[0].operator.d
        for xi, (sub, op) in enumerate(elements):
            if (sub.n, sub.d) != (n, d) or (op.n, op.d) != (n, d):
                raise DimensionMismatch("all frame elements must share (n, d)")
            defect = np.linalg.norm(op.matrix @ sub.projection.matrix - op.matrix, 2)
            if defect > containment_tol * (1.0 + np.linalg.norm(op.matrix, 2)):
                raise MembershipViolation(
                    f"element {xi}: operator range is not contained in its submodule"
                )
        self.elements = tuple(elements)
        self.index_convention = _check_convention(index_convention)
        self.n = n
        self.d = d

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def operators(self):
        return [e.operator for e in self.elements]

    def submodules(self):
        return [e.submodule for e in self.elements]

    def operator_matrices(self) -> np.ndarray:
        """All flattened operators stacked into shape (m, n*d, n*d)."""
        return np.stack([e.operator.matrix for e in self.elements])

    def max_operator_norm(self) -> float:
        return max(float(np.linalg.norm(e.operator.matrix, 2)) for e in self.elements)

    def scaled(self, scalar) -> "GFusionFrame":
        """Same submodules, every operator multiplied by `scalar`."""
        return GFusionFrame(
            [(e.submodule, e.operator * scalar) for e in self.elements],
            self.index_convention,
        )

    def __repr__(self):
        return (
            f"GFusionFrame(m={len(self)}, n={self.n}, d={self.d}, "
            f"convention={self.index_convention!r})"
        )


def frame_operator(frame: GFusionFrame) -> ModuleOperator:
    """S = sum_xi Y_xi^* Y_xi; self-adjoint and positive by construction."""
    mats = frame.operator_matrices()
    s = np.einsum("kij,klj->il", mats, mats.conj())
    return ModuleOperator((s + s.conj().T) / 2.0, frame.n, frame.d)


def frame_bounds(frame: GFusionFrame, rank_tol: float = RANK_TOL) -> FrameBounds:
    """Optimal bounds (A, B): extreme eigenvalues of the flattened S.

    Raises NotAFrame when S is numerically singular (no positive lower
    bound exists, so the family is not a frame).
    """
    eigs = np.linalg.eigvalsh(frame_operator(frame).matrix)
    lower, upper = float(eigs[0]), float(eigs[-1])
    if upper <= 0.0 or lower <= rank_tol * upper:
        raise NotAFrame(
            f"frame operator is singular (extreme eigenvalues {lower:.3e}, {upper:.3e})"
        )
    return FrameBounds(lower, upper)


def is_tight(frame: GFusionFrame, tol: float = TIGHT_TOL) -> bool:
    """True when the optimal bounds agree to relative gap `tol`."""
    lower, upper = frame_bounds(frame)
    return (upper - lower) / upper <= tol


def analysis(frame: GFusionFrame, f: ModuleVector) -> ModuleSequence:
    """f |-> {Y_xi f}; each term lies in N_xi by range containment."""
    if (f.n, f.d) != (frame.n, frame.d):
        raise DimensionMismatch("vector shape does not match the frame")
    terms = [apply(e.operator, f) for e in frame.elements]
    return ModuleSequence(terms, frame.index_convention, frame.submodules())


def synthesis(frame: GFusionFrame, seq: ModuleSequence, membership_tol=1e-8) -> ModuleVector:
    """{f_xi} |-> sum_xi Y_xi^* f_xi, the adjoint of analysis.

    Pass membership_tol=None to skip the term-membership check.
    """
    if len(seq) != len(frame):
        raise LengthMismatch(f"sequence has {len(seq)} terms, frame has {len(frame)}")
    if (seq.n, seq.d) != (frame.n, frame.d):
        raise DimensionMismatch("sequence shape does not match the frame")
    if membership_tol is not None:
        for xi, (term, element) in enumerate(zip(seq.terms, frame.elements)):
            if not element.submodule.contains(term, membership_tol):
                raise MembershipViolation(f"sequence term {xi} is not in its submodule")
    acc = np.zeros((frame.d, frame.n * frame.d), dtype=np.complex128)
    for term, element in zip(seq.terms, frame.elements):
        acc += term.flat @ element.operator.matrix.conj().T
    return ModuleVector(acc, frame.n, frame.d)


def _mixed_frame_matrix(frame: GFusionFrame, dual: GFusionFrame) -> np.ndarray:
    """Flattened matrix of sum_xi Y_xi^* G_xi (identity for a true dual)."""
    if len(frame) != len(dual):
        raise LengthMismatch("frame and dual have different lengths")
    if (frame.n, frame.d) != (dual.n, dual.d):
        raise DimensionMismatch("frame and dual shapes differ")
    mats = frame.operator_matrices()
    dmats = dual.operator_matrices()
    return np.einsum("kij,klj->il", dmats, mats.conj())


def canonical_dual(frame: GFusionFrame, cond_limit: float = COND_LIMIT) -> GFusionFrame:
    """The dual family {(N_xi, Y_xi S^{-1})}.

    S is inverted through its Hermitian eigendecomposition with a
    condition-number guard; reconstruction quality degrades past it.
    """
    s = frame_operator(frame).matrix
    w, v = np.linalg.eigh(s)
    if w[-1] <= 0.0 or w[0] <= cond_limit * w[-1]:
        raise NotAFrame(
            f"frame operator too ill-conditioned to invert (eigenvalues {w[0]:.3e}, {w[-1]:.3e})"
        )
    s_inv = (v / w) @ v.conj().T
    duals = [
        (e.submodule, ModuleOperator(s_inv @ e.operator.matrix, frame.n, frame.d))
        for e in frame.elements
    ]
    return GFusionFrame(duals, frame.index_convention)


def verify_dual(frame: GFusionFrame, dual: GFusionFrame, samples: int = 100,
                tol: float = 1e-8, seed: int = 0) -> bool:
    """Check f = sum_xi Y_xi^* G_xi f both on random samples and as an
    operator identity; the operator identity is the sample-free certificate,
    the sampled one exercises the synthesis/analysis plumbing."""
    mixed = _mixed_frame_matrix(frame, dual)
    eye = np.eye(frame.n * frame.d)
    if np.linalg.norm(mixed - eye, 2) > tol:
        return False
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        f = _random_vector(rng, frame.n, frame.d)
        seq = analysis(dual, f)
        rebuilt = synthesis(frame, seq, membership_tol=None)
        if float(np.linalg.norm(rebuilt.flat - f.flat, 2)) > tol * max(f.norm(), 1e-300):
            return False
    return True


def reconstruction_residual(frame: GFusionFrame, dual: GFusionFrame) -> float:
    """Operator norm of sum_xi Y_xi^* G_xi - Id."""
    mixed = _mixed_frame_matrix(frame, dual)
    return float(np.linalg.norm(mixed - np.eye(frame.n * frame.d), 2))


def fusion_frame(submodules, weights, index_convention: str = "linear") -> GFusionFrame:
    """The classical specialization Y_xi = v_xi P_{N_xi} with weights v_xi > 0."""
    submodules = list(submodules)
    weights = [float(w) for w in weights]
    if len(submodules) != len(weights):
        raise LengthMismatch("one weight per submodule is required")
    for w in weights:
        if w <= 0.0:
            raise NonpositiveWeight(f"weights must be positive, got {w}")
    elements = [(s, s.projection * w) for s, w in zip(submodules, weights)]
    return GFusionFrame(elements, index_convention)


def _random_vector(rng, n: int, d: int) -> ModuleVector:
    flat = rng.standard_normal((d, n * d)) + 1j * rng.standard_normal((d, n * d))
    return ModuleVector(flat / np.sqrt(2.0), n, d)
