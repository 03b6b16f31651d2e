"""The free Hilbert module H = A^n over A = M_d(C), with adjointable
operators, orthogonally complemented submodules, and finite sequences.

Conventions, fixed once and used by every other module:

* a vector f = (f_1, ..., f_n) is stored flattened as the d x (n*d)
  row-block matrix [f_1 | ... | f_n];
* the algebra acts on the left: a . f  <->  a @ f.flat;
* operators are (n*d) x (n*d) matrices acting on the right of the
  flattened form: apply(op, f) <-> f.flat @ op.matrix.  Right action makes
  every operator A-linear by construction and commutes with the left
  algebra action;
* <f, g> = sum_i f_i g_i^*  <->  f.flat @ g.flat^H, a d x d element of A;
* ||f|| = ||<f, f>||^(1/2) = largest singular value of f.flat.

Under these conventions the operator adjoint is the conjugate transpose of
the matrix, and composition s-after-t has matrix t.matrix @ s.matrix.
A submodule closed under the A-action corresponds exactly to a complex
subspace V of the n*d-dimensional row space; its projection matrix is the
orthogonal projection onto V applied on the right.
"""

import numpy as np

from .exceptions import DimensionMismatch, MembershipViolation

RANK_TOL = 1e-10  # relative singular-value cutoff for all rank decisions

_CONVENTIONS = ("linear", "cyclic")


def _check_convention(convention: str) -> str:
    if convention not in _CONVENTIONS:
        raise ValueError(f"index convention must be one of {_CONVENTIONS}, got {convention!r}")
    return convention


class ModuleVector:
    """Element of A^n in flattened row-block form."""

    __slots__ = ("flat", "n", "d")

    def __init__(self, flat, n: int, d: int):
        flat = np.array(flat, dtype=np.complex128)
        if n < 1 or d < 1 or flat.shape != (d, n * d):
            raise DimensionMismatch(f"expected shape ({d}, {n * d}), got {flat.shape}")
        flat.setflags(write=False)
        self.flat = flat
        self.n = n
        self.d = d

    @classmethod
    def from_components(cls, components) -> "ModuleVector":
        components = [np.asarray(c, dtype=np.complex128) for c in components]
        if not components:
            raise DimensionMismatch("a module vector needs at least one component")
        d = components[0].shape[0]
        for c in components:
            if c.shape != (d, d):
                raise DimensionMismatch("all components must be d x d with a common d")
        return cls(np.hstack(components), len(components), d)

    @classmethod
    def zero(cls, n: int, d: int) -> "ModuleVector":
        return cls(np.zeros((d, n * d), dtype=np.complex128), n, d)

    def component(self, i: int) -> np.ndarray:
        return self.flat[:, i * self.d : (i + 1) * self.d]

    def components(self):
        return [self.component(i) for i in range(self.n)]

    def norm(self) -> float:
        """||<f, f>||^(1/2), the module norm."""
        return float(np.linalg.norm(self.flat, 2))

    def algebra_action(self, a) -> "ModuleVector":
        """Left action a . f of an algebra element on the vector."""
        a = np.asarray(a, dtype=np.complex128)
        if a.shape != (self.d, self.d):
            raise DimensionMismatch(f"algebra element must be {self.d} x {self.d}")
        return ModuleVector(a @ self.flat, self.n, self.d)

    def _same_shape(self, other: "ModuleVector"):
        if not isinstance(other, ModuleVector) or (self.n, self.d) != (other.n, other.d):
            raise DimensionMismatch("module vectors of different shape")

    def __add__(self, other):
        self._same_shape(other)
        return ModuleVector(self.flat + other.flat, self.n, self.d)

    def __sub__(self, other):
        self._same_shape(other)
        return ModuleVector(self.flat - other.flat, self.n, self.d)

    def __mul__(self, scalar):
        return ModuleVector(self.flat * complex(scalar), self.n, self.d)

    __rmul__ = __mul__

    def __neg__(self):
        return ModuleVector(-self.flat, self.n, self.d)

    def __repr__(self):
        return f"ModuleVector(n={self.n}, d={self.d})"


class ModuleOperator:
    """Adjointable A-linear map on A^n as an (n*d) x (n*d) matrix."""

    __slots__ = ("matrix", "n", "d")

    def __init__(self, matrix, n: int, d: int):
        matrix = np.array(matrix, dtype=np.complex128)
        if n < 1 or d < 1 or matrix.shape != (n * d, n * d):
            raise DimensionMismatch(f"expected shape ({n * d}, {n * d}), got {matrix.shape}")
        matrix.setflags(write=False)
        self.matrix = matrix
        self.n = n
        self.d = d

    @classmethod
    def identity(cls, n: int, d: int) -> "ModuleOperator":
        return cls(np.eye(n * d, dtype=np.complex128), n, d)

    @classmethod
    def zero(cls, n: int, d: int) -> "ModuleOperator":
        return cls(np.zeros((n * d, n * d), dtype=np.complex128), n, d)

    @classmethod
    def from_blocks(cls, blocks) -> "ModuleOperator":
        """Assemble from an n x n array of d x d algebra elements."""
        rows = [np.hstack([np.asarray(b, dtype=np.complex128) for b in row]) for row in blocks]
        matrix = np.vstack(rows)
        n = len(blocks)
        if matrix.shape[0] % n != 0:
            raise DimensionMismatch("ragged block structure")
        return cls(matrix, n, matrix.shape[0] // n)

    def block(self, i: int, j: int) -> np.ndarray:
        d = self.d
        return self.matrix[i * d : (i + 1) * d, j * d : (j + 1) * d]

    def norm(self) -> float:
        return operator_norm_module(self)

    def _same_shape(self, other: "ModuleOperator"):
        if not isinstance(other, ModuleOperator) or (self.n, self.d) != (other.n, other.d):
            raise DimensionMismatch("module operators of different shape")

    def __add__(self, other):
        self._same_shape(other)
        return ModuleOperator(self.matrix + other.matrix, self.n, self.d)

    def __sub__(self, other):
        self._same_shape(other)
        return ModuleOperator(self.matrix - other.matrix, self.n, self.d)

    def __mul__(self, scalar):
        return ModuleOperator(self.matrix * complex(scalar), self.n, self.d)

    __rmul__ = __mul__

    def __neg__(self):
        return ModuleOperator(-self.matrix, self.n, self.d)

    def __repr__(self):
        return f"ModuleOperator(n={self.n}, d={self.d})"


def inner_product(f: ModuleVector, g: ModuleVector) -> np.ndarray:
    """The A-valued inner product sum_i f_i g_i^*, a d x d matrix.

    A-linear in the first slot, conjugate-symmetric: <f, g> = <g, f>^*.
    """
    f._same_shape(g)
    return f.flat @ g.flat.conj().T


def apply(op: ModuleOperator, f: ModuleVector) -> ModuleVector:
    """Evaluate the operator: component j of the result is sum_i f_i B_ij."""
    if (op.n, op.d) != (f.n, f.d):
        raise DimensionMismatch("operator and vector shapes differ")
    return ModuleVector(f.flat @ op.matrix, f.n, f.d)


def compose(s: ModuleOperator, t: ModuleOperator) -> ModuleOperator:
    """s after t: apply(compose(s, t), f) == apply(s, apply(t, f))."""
    s._same_shape(t)
    return ModuleOperator(t.matrix @ s.matrix, s.n, s.d)


def operator_adjoint(op: ModuleOperator) -> ModuleOperator:
    """The unique adjoint: <apply(op, f), g> = <f, apply(adjoint, g)>."""
    return ModuleOperator(op.matrix.conj().T, op.n, op.d)


def operator_norm_module(op: ModuleOperator) -> float:
    """Operator norm sup ||op f|| / ||f||, the top singular value of the
    flattened matrix (attained at a rank-one row-block vector)."""
    return float(np.linalg.norm(op.matrix, 2))


def orthonormal_rows(rows, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (as rows) of the row space of `rows`."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.complex128))
    u, s, vh = np.linalg.svd(rows, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((0, rows.shape[1]), dtype=np.complex128)
    rank = int(np.sum(s > rank_tol * s[0]))
    return vh[:rank]


class Submodule:
    """Closed orthogonally complemented A-submodule, held as its projection.

    Internally a complex row subspace V of C^(n*d): a vector lies in the
    submodule iff every row of its flattened form lies in V.
    """

    __slots__ = ("projection", "basis_rows", "rank", "n", "d")

    def __init__(self, projection: ModuleOperator, tol: float = 1e-8):
        q = projection.matrix
        scale = 1.0 + float(np.linalg.norm(q, 2))
        if np.linalg.norm(q - q.conj().T, 2) > tol * scale:
            raise ValueError("projection is not self-adjoint within tolerance")
        if np.linalg.norm(q @ q - q, 2) > tol * scale:
            raise ValueError("projection is not idempotent within tolerance")
        self.projection = projection
        self.basis_rows = orthonormal_rows(q) if np.any(q) else np.zeros((0, q.shape[0]), dtype=np.complex128)
        self.basis_rows.setflags(write=False)
        self.rank = self.basis_rows.shape[0]
        self.n = projection.n
        self.d = projection.d

    @classmethod
    def from_basis_rows(cls, rows, n: int, d: int) -> "Submodule":
        rows = orthonormal_rows(rows)
        q = rows.conj().T @ rows if rows.size else np.zeros((n * d, n * d), dtype=np.complex128)
        return cls(ModuleOperator(q, n, d))

    @classmethod
    def full(cls, n: int, d: int) -> "Submodule":
        return cls(ModuleOperator.identity(n, d))

    def contains(self, f: ModuleVector, tol: float = 1e-10) -> bool:
        residual = f.flat - f.flat @ self.projection.matrix
        return float(np.linalg.norm(residual, 2)) <= tol * (1.0 + f.norm())

    def project(self, f: ModuleVector) -> ModuleVector:
        return apply(self.projection, f)

    def __repr__(self):
        return f"Submodule(rank={self.rank}, n={self.n}, d={self.d})"


def submodule_from_generators(generators, rank_tol: float = RANK_TOL) -> Submodule:
    """Projection onto the smallest A-submodule containing the generators.

    The A-orbit of a vector spans exactly the complex row space of its
    flattened form, so closure under the algebra action is automatic once
    all rows of all generators are stacked.
    """
    generators = list(generators)
    if not generators:
        raise DimensionMismatch("at least one generator is required")
    n, d = generators[0].n, generators[0].d
    for g in generators:
        if (g.n, g.d) != (n, d):
            raise DimensionMismatch("generators of different shape")
    stacked = np.vstack([g.flat for g in generators])
    return Submodule.from_basis_rows(orthonormal_rows(stacked, rank_tol), n, d)


def span_of_submodules(submodules) -> Submodule:
    """Projection onto the closed submodule generated by the union of ranges."""
    submodules = list(submodules)
    if not submodules:
        raise DimensionMismatch("at least one submodule is required")
    n, d = submodules[0].n, submodules[0].d
    for s in submodules:
        if (s.n, s.d) != (n, d):
            raise DimensionMismatch("submodules of different shape")
    stacked = np.vstack([s.basis_rows for s in submodules if s.rank > 0])
    if stacked.size == 0:
        return Submodule.from_basis_rows(np.zeros((0, n * d)), n, d)
    return Submodule.from_basis_rows(stacked, n, d)


class ModuleSequence:
    """Finite sequence {f_xi} with f_xi constrained to a target submodule.

    `submodules` is optional; when present, membership of each term can be
    checked and the right shift enforces it.
    """

    __slots__ = ("terms", "index_convention", "submodules")

    def __init__(self, terms, index_convention: str = "linear", submodules=None):
        terms = list(terms)
        if not terms:
            raise DimensionMismatch("a sequence needs at least one term")
        n, d = terms[0].n, terms[0].d
        for t in terms:
            if (t.n, t.d) != (n, d):
                raise DimensionMismatch("sequence terms of different shape")
        if submodules is not None:
            submodules = tuple(submodules)
            if len(submodules) != len(terms):
                raise DimensionMismatch("one target submodule per term is required")
        self.terms = tuple(terms)
        self.index_convention = _check_convention(index_convention)
        self.submodules = submodules

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def n(self):
        return self.terms[0].n

    @property
    def d(self):
        return self.terms[0].d

    def norm(self) -> float:
        """||sum_xi <f_xi, f_xi>||^(1/2), the l2 norm of the sequence."""
        gram = sum(inner_product(t, t) for t in self.terms)
        return float(np.sqrt(max(np.linalg.norm(gram, 2), 0.0)))

    def scaled(self, scalar) -> "ModuleSequence":
        return ModuleSequence([t * scalar for t in self.terms], self.index_convention, self.submodules)


def sequence_inner_product(f: ModuleSequence, g: ModuleSequence) -> np.ndarray:
    """sum_xi <f_xi, g_xi>, the A-valued l2 inner product."""
    if len(f) != len(g):
        raise DimensionMismatch("sequences of different length")
    return sum(inner_product(a, b) for a, b in zip(f.terms, g.terms))


def right_shift(seq: ModuleSequence, repair: bool = False, tol: float = 1e-10) -> ModuleSequence:
    """The sequence whose term xi is the input's term xi+1.

    Cyclic convention rotates; linear drops the leading term and appends a
    zero.  When target submodules are attached, a shifted term that leaves
    its new target by more than `tol` raises MembershipViolation, unless
    `repair=True`, in which case it is orthogonally projected back.
    """
    m = len(seq)
    if seq.index_convention == "cyclic":
        shifted = [seq.terms[(xi + 1) % m] for xi in range(m)]
    else:
        shifted = list(seq.terms[1:]) + [ModuleVector.zero(seq.n, seq.d)]
    if seq.submodules is None:
        return ModuleSequence(shifted, seq.index_convention)
    out = []
    for xi, (term, target) in enumerate(zip(shifted, seq.submodules)):
        if target.contains(term, tol):
            out.append(term)
        elif repair:
            out.append(target.project(term))
        else:
            raise MembershipViolation(
                f"shifted term {xi} leaves its target submodule; "
                "pass repair=True to project it back"
            )
    return ModuleSequence(out, seq.index_convention, seq.submodules)
