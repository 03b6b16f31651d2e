"""Seeded constructors for the frame families used by the CLI generator and
the test harnesses.  Identical (parameters, seed) always reproduce identical
arrays, which the CLI turns into identical bytes.
"""

import numpy as np

from .exceptions import InvalidDimensions, NotAFrame
from .frames import GFusionFrame, frame_bounds, fusion_frame
from .hilbert import ModuleOperator, ModuleVector, Submodule

KINDS = ("fusion", "dilation", "unitary-orbit", "random")


def _validate(n: int, d: int, m: int):
    if n < 1 or d < 1 or m < 1:
        raise InvalidDimensions(f"n, d, m must be positive, got ({n}, {d}, {m})")


def random_complex(rng, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_unitary(rng, k: int) -> np.ndarray:
    """Haar-distributed unitary (QR with the standard phase fix)."""
    z = random_complex(rng, k, k)
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_unitary_involution(rng, k: int) -> np.ndarray:
    """Self-adjoint unitary: Haar eigenbasis with a mixed +-1 spectrum."""
    v = random_unitary(rng, k)
    signs = rng.choice([-1.0, 1.0], size=k)
    if k >= 2:
        signs[0], signs[-1] = 1.0, -1.0
    u = (v * signs) @ v.conj().T
    return (u + u.conj().T) / 2.0


def random_vector(rng, n: int, d: int) -> ModuleVector:
    return ModuleVector(random_complex(rng, d, n * d), n, d)


def random_orthogonal_decomposition(rng, n: int, d: int, m: int):
    """m nonempty mutually orthogonal submodules summing to the whole module."""
    nd = n * d
    if m > nd:
        raise InvalidDimensions(f"cannot split a rank-{nd} module into {m} nonempty parts")
    basis = random_unitary(rng, nd).conj().T  # orthonormal rows
    cuts = [0] + sorted(rng.choice(np.arange(1, nd), size=m - 1, replace=False).tolist()) + [nd]
    return [Submodule.from_basis_rows(basis[a:b], n, d) for a, b in zip(cuts, cuts[1:])]


def fusion_decomposition_frame(n: int, d: int, m: int, seed: int = 0) -> GFusionFrame:
    """Parseval fusion frame: a random orthogonal decomposition, unit weights."""
    _validate(n, d, m)
    rng = np.random.default_rng(seed)
    return fusion_frame(random_orthogonal_decomposition(rng, n, d, m), [1.0] * m)


def dilation_frame(n: int, d: int, m: int, seed: int = 0, ratio=None) -> GFusionFrame:
    """Y_xi = c^xi * Id with a seeded contraction c in (0, 1); linear indexing."""
    _validate(n, d, m)
    rng = np.random.default_rng(seed)
    c = float(rng.uniform(0.3, 0.8)) if ratio is None else float(ratio)
    full = Submodule.full(n, d)
    elements = [(full, ModuleOperator.identity(n, d) * (c ** xi)) for xi in range(m)]
    return GFusionFrame(elements, "linear")


def unitary_orbit_frame(n: int, d: int, m: int, seed: int = 0,
                        base: np.ndarray | None = None) -> GFusionFrame:
    """Y_xi = U^xi Y_0 for a seeded self-adjoint unitary U; cyclic indexing.

    With the default base Y_0 = Id the orbit is tight.  A self-adjoint base
    commuting with U keeps every member self-adjoint; for even m the orbit
    closes, making the family exactly representable with an isometric T.
    """
    _validate(n, d, m)
    rng = np.random.default_rng(seed)
    nd = n * d
    u = random_unitary_involution(rng, nd)
    full = Submodule.full(n, d)
    current = np.eye(nd, dtype=np.complex128) if base is None else np.asarray(base, dtype=np.complex128)
    elements = []
    for _ in range(m):
        elements.append((full, ModuleOperator(current, n, d)))
        current = current @ u
    return GFusionFrame(elements, "cyclic")


def commuting_orbit_frame(n: int, d: int, m: int, seed: int = 0,
                          spread: float = 2.0) -> GFusionFrame:
    """Unitary orbit of a positive-definite base sharing U's eigenbasis.

    Hypothesis-passing and exactly representable like the plain orbit, but
    not tight: the bound ratio B/A equals the squared condition spread of
    the base.
    """
    _validate(n, d, m)
    rng = np.random.default_rng(seed)
    nd = n * d
    v = random_unitary(rng, nd)
    signs = rng.choice([-1.0, 1.0], size=nd)
    if nd >= 2:
        signs[0], signs[-1] = 1.0, -1.0
    u = (v * signs) @ v.conj().T
    diag = rng.uniform(1.0, max(spread, 1.0 + 1e-6), size=nd)
    base = (v * diag) @ v.conj().T
    base = (base + base.conj().T) / 2.0
    full = Submodule.full(n, d)
    current = base
    elements = []
    for _ in range(m):
        elements.append((full, ModuleOperator(current, n, d)))
        current = u @ current
    return GFusionFrame(elements, "cyclic")


def random_family_frame(n: int, d: int, m: int, seed: int = 0) -> GFusionFrame:
    """Seeded dense operators projected into random submodules; may fail the
    frame inequality (that is a legitimate outcome for analysis commands)."""
    _validate(n, d, m)
    rng = np.random.default_rng(seed)
    nd = n * d
    elements = []
    for _ in range(m):
        rank = int(rng.integers(1, nd + 1))
        basis = random_unitary(rng, nd).conj().T[:rank]
        sub = Submodule.from_basis_rows(basis, n, d)
        op = random_complex(rng, nd, nd) @ sub.projection.matrix
        elements.append((sub, ModuleOperator(op, n, d)))
    return GFusionFrame(elements, "linear")


def random_frame(n: int, d: int, m: int, seed: int = 0, max_cond: float = 1e8,
                 attempts: int = 64) -> GFusionFrame:
    """A random family guaranteed to be a frame with condition <= max_cond.

    The first element spans the whole module, which makes the frame operator
    generically nonsingular; seeds are retried deterministically until the
    conditioning target is met.
    """
    _validate(n, d, m)
    nd = n * d
    full = Submodule.full(n, d)
    for attempt in range(attempts):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(attempt,)))
        elements = [(full, ModuleOperator(random_complex(rng, nd, nd), n, d))]
        for _ in range(m - 1):
            rank = int(rng.integers(1, nd + 1))
            basis = random_unitary(rng, nd).conj().T[:rank]
            sub = Submodule.from_basis_rows(basis, n, d)
            op = random_complex(rng, nd, nd) @ sub.projection.matrix
            elements.append((sub, ModuleOperator(op, n, d)))
        frame = GFusionFrame(elements, "linear")
        try:
            lower, upper = frame_bounds(frame)
        except NotAFrame:
            continue
        if upper / lower <= max_cond:
            return frame
    raise NotAFrame(f"no acceptable random frame found in {attempts} attempts")


def generate(kind: str, n: int, d: int, m: int, seed: int = 0) -> GFusionFrame:
    """Dispatch used by the CLI generator."""
    if kind == "fusion":
        return fusion_decomposition_frame(n, d, m, seed)
    if kind == "dilation":
        return dilation_frame(n, d, m, seed)
    if kind == "unitary-orbit":
        return unitary_orbit_frame(n, d, m, seed)
    if kind == "random":
        return random_family_frame(n, d, m, seed)
    raise InvalidDimensions(f"unknown family kind {kind!r}; choose from {KINDS}")
