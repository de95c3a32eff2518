"""Matrix model for braided symmetries of elementary abelian centers.

For ``G`` the elementary abelian group of order ``p**n`` the simple objects
of the center are labelled by pairs (grading, character), and those labels
form the vector space F_p^{2n}.  A braided symmetry whose object mapping is
additive on labels therefore acts by a matrix ``M``, and exactness of the
S/T equivariance translates into the form equation ``M^T J M = J`` for the
hyperbolic Gram matrix ``J = [[0, I], [I, 0]]`` pairing grading coordinates
with character coordinates.  This module makes that dictionary executable:

* :func:`hyperbolic_form` -- the Gram matrix ``J``.
* :func:`autoeq_to_matrix` / :func:`matrix_to_autoeq` -- exact translation
  between label-additive braided symmetries and form-preserving matrices.
* :func:`subgroup_generators` -- block generators for the four structural
  families: block-diagonal GL_n embeddings ("V"), lower and upper unipotent
  blocks ("BV", "EV"), and the coordinate-pair swaps r_0, ..., r_n ("R").
* :func:`group_order_oracle` -- an independent count of all form-preserving
  matrices by constrained column extension, used to cross-check the order of
  the group generated by the four families.
* :func:`bruhat_factorize` -- the rank-indexed triangular factorization
  ``M = b @ e @ r`` exhibiting the n + 1 cell partition.

Conventions.  At odd ``p`` the form is the split (plus-type) symmetric form
and the matrix group is O_{2n}^+(F_p).  At ``p = 2`` the same equation is
read symplectically: the unipotent generator blocks run over a basis of all
symmetric matrices, not just alternating ones, and the matrix group is
Sp_{2n}(F_2).  The symplectic group is strictly larger than the group of
label-additive braided symmetries at ``p = 2``: matrices whose unipotent
part carries a nonzero diagonal preserve the bilinear form but not its
quadratic refinement, so they fail the twist check and
:func:`matrix_to_autoeq` raises :class:`~brpic.errors.NotBraided` for them.

The cell index of :func:`bruhat_factorize` is ``d = n - rank(X)`` where
``X`` is the upper-left ``n x n`` block; it is constant on cells because
left and right multiplication by triangular factors replaces ``X`` by
``P @ X @ R`` with ``P`` and ``R`` invertible.  The reflection factor
returned for a given element swaps a ``d``-subset of hyperbolic coordinate
pairs chosen so that the remaining block-LU step is closed-form; it lies in
the same cell as the standard ``r_d``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

from .autoeq import BraidedAutoeq, Provenance
from .chars import character_table
from .errors import (
    BudgetExceeded,
    CapExceeded,
    DomainMismatch,
    NoFactorization,
    NotAdditive,
    NotFormPreserving,
    NotPrime,
)
from .groups import FiniteGroup, class_of, conjugacy_classes, named_group

__all__ = [
    "FpMatrix",
    "BruhatCell",
    "hyperbolic_form",
    "autoeq_to_matrix",
    "matrix_to_autoeq",
    "subgroup_generators",
    "standard_generators",
    "generate_matrix_group",
    "group_order_oracle",
    "bruhat_factorize",
]

#: Default element cap for matrix-group closures.
GENERATE_CAP = 1_000_000

# Exhaustive-oracle feasibility bounds (matrix size 2n and prime p).
_ORACLE_MAX_SIZE = 4
_ORACLE_MAX_P = 5


def _check_prime(p: int) -> int:
    p = int(p)
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise NotPrime(f"{p} is not prime")
    return p


def hyperbolic_form(p: int, n: int) -> np.ndarray:
    """The 2n x 2n Gram matrix [[0, I], [I, 0]] over F_p.

    Grading coordinates occupy the first n slots, character coordinates the
    last n; the form pairs each grading coordinate with its dual.  Symmetric
    for odd p, symplectic (alternating with zero diagonal) for p = 2.
    """
    _check_prime(p)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    J = np.zeros((2 * n, 2 * n), dtype=np.int64)
    J[:n, n:] = np.eye(n, dtype=np.int64)
    J[n:, :n] = np.eye(n, dtype=np.int64)
    J.setflags(write=False)
    return J


# -- matrices over F_p -----------------------------------------------------


class FpMatrix:
    """An immutable square matrix over F_p of even size 2n.

    Supports ``@`` (product mod p), equality and hashing by entries, and the
    form-preservation test against :func:`hyperbolic_form`.
    """

    __slots__ = ("p", "entries", "_hash")

    def __init__(self, p: int, entries) -> None:
        _check_prime(p)
        arr = np.array(entries, dtype=np.int64) % p
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("entries must form a square matrix")
        if arr.shape[0] % 2 or arr.shape[0] == 0:
            raise ValueError("matrix size must be even and positive")
        arr.setflags(write=False)
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "_hash", hash((int(p), arr.tobytes())))

    def __setattr__(self, name, value):
        raise AttributeError("FpMatrix is immutable")

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, np.eye(2 * n, dtype=np.int64))

    @property
    def size(self) -> int:
        """Matrix size 2n."""
        return int(self.entries.shape[0])

    @property
    def half(self) -> int:
        """The block size n (half the matrix size)."""
        return self.size // 2

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if not isinstance(other, FpMatrix):
            return NotImplemented
        if self.p != other.p or self.size != other.size:
            raise DomainMismatch("matrix product requires equal p and size")
        return FpMatrix(self.p, (self.entries @ other.entries) % self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.size == other.size
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.entries.tolist()!r})"

    def tolist(self) -> List[List[int]]:
        return [[int(x) for x in row] for row in self.entries]

    def is_form_preserving(self) -> bool:
        """True when M^T J M = J for the hyperbolic Gram matrix."""
        J = hyperbolic_form(self.p, self.half)
        lhs = (self.entries.T @ J @ self.entries) % self.p
        return bool(np.array_equal(lhs, J))

    def inverse(self) -> "FpMatrix":
        """The inverse matrix; raises ValueError when singular."""
        return FpMatrix(self.p, _inv_mod(self.entries, self.p))


def _rank_mod(A: np.ndarray, p: int) -> int:
    """Rank of an integer matrix read mod p, by Gaussian elimination."""
    M = np.array(A, dtype=np.int64) % p
    rows, cols = M.shape
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if M[r, c] % p), None)
        if pivot is None:
            continue
        M[[rank, pivot]] = M[[pivot, rank]]
        inv = pow(int(M[rank, c]), p - 2, p)
        M[rank] = (M[rank] * inv) % p
        for r in range(rows):
            if r != rank and M[r, c]:
                M[r] = (M[r] - M[r, c] * M[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def _inv_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square integer matrix mod p; ValueError when singular."""
    M = np.array(A, dtype=np.int64) % p
    k = M.shape[0]
    aug = np.concatenate([M, np.eye(k, dtype=np.int64)], axis=1)
    for c in range(k):
        pivot = next((r for r in range(c, k) if aug[r, c] % p), None)
        if pivot is None:
            raise ValueError("matrix is singular mod p")
        aug[[c, pivot]] = aug[[pivot, c]]
        inv = pow(int(aug[c, c]), p - 2, p)
        aug[c] = (aug[c] * inv) % p
        for r in range(k):
            if r != c and aug[r, c]:
                aug[r] = (aug[r] - aug[r, c] * aug[c]) % p
    return aug[:, k:]


# -- the label dictionary --------------------------------------------------

_LABEL_GROUPS: dict = {}


def _label_group(p: int, n: int) -> FiniteGroup:
    """The elementary abelian group of order p**n (shared per (p, n))."""
    key = (p, n)
    if key not in _LABEL_GROUPS:
        name = f"Z/{p}" if n == 1 else f"Z/{p}^{n}"
        _LABEL_GROUPS[key] = named_group(name)
    return _LABEL_GROUPS[key]


def _coordinates(G: FiniteGroup):
    """Label coordinates of an elementary abelian group.

    Returns ``(p, n, vec_of_elem, elem_of_vec, vec_of_char, char_of_vec)``
    where element vectors are digit tuples relative to a fixed minimal
    generating set and character vectors are the exponent tuples with
    ``chi(x) = zeta_p ** <y, x>``.  Raises NotAdditive when the group is not
    elementary abelian.
    """
    key = ("fpn_coordinates",)
    if key in G._memo:
        return G._memo[key]
    gens = G.minimal_generators()
    n = len(gens)
    p = G.exponent()
    try:
        _check_prime(p)
    except NotPrime:
        raise NotAdditive(
            f"{G.name} is not elementary abelian (exponent {p} is not prime)"
        ) from None
    if not G.is_abelian() or p**n != G.n:
        raise NotAdditive(f"{G.name} is not elementary abelian")
    powers = []
    for g in gens:
        row = [G.identity]
        for _ in range(p - 1):
            row.append(G.mul(row[-1], g))
        powers.append(row)
    vec_of_elem: List[Tuple[int, ...]] = [None] * G.n  # type: ignore[list-item]
    elem_of_vec: dict = {}
    for digits in itertools.product(range(p), repeat=n):
        g = G.identity
        for i, d in enumerate(digits):
            g = G.mul(g, powers[i][d])
        if vec_of_elem[g] is not None:
            raise NotAdditive(f"{G.name} generators are not independent")
        vec_of_elem[g] = digits
        elem_of_vec[digits] = g
    table = character_table(G)
    vec_of_char: List[Tuple[int, ...]] = []
    char_of_vec: dict = {}
    for k, chi in enumerate(table):
        y = []
        for g in gens:
            root = chi.value_at_element(g).as_root_of_unity()
            if root is None:
                raise NotAdditive(f"character {k} of {G.name} is not linear")
            m, e = root
            y.append((e * (p // m)) % p)
        vec = tuple(y)
        vec_of_char.append(vec)
        char_of_vec[vec] = k
    G._memo[key] = (p, n, vec_of_elem, elem_of_vec, vec_of_char, char_of_vec)
    return G._memo[key]


def _label_of_simple(G: FiniteGroup, index: int) -> Tuple[int, ...]:
    p, n, vec_of_elem, _, vec_of_char, _ = _coordinates(G)
    classes = conjugacy_classes(G)
    a, k = divmod(index, G.n)
    return vec_of_elem[classes[a].rep] + vec_of_char[k]


def _simple_of_label(G: FiniteGroup, label) -> int:
    p, n, _, elem_of_vec, _, char_of_vec = _coordinates(G)
    g = elem_of_vec[tuple(int(x) % p for x in label[:n])]
    k = char_of_vec[tuple(int(x) % p for x in label[n:])]
    return class_of(G, g) * G.n + k


def autoeq_to_matrix(F: BraidedAutoeq) -> FpMatrix:
    """The matrix of a label-additive braided symmetry.

    The underlying group must be elementary abelian of order p**n; the
    object mapping is read on labels (grading, character) in F_p^{2n} and
    must be additive there.  Raises NotAdditive otherwise, and
    NotFormPreserving if the extracted matrix failed the form equation
    (impossible for a verified braided symmetry; kept as a defensive
    cross-check).
    """
    G = F.group
    p, n, *_ = _coordinates(G)
    m = 2 * n
    cols = []
    for i in range(m):
        basis = tuple(1 if j == i else 0 for j in range(m))
        image = F(_simple_of_label(G, basis))
        cols.append(_label_of_simple(G, image))
    M = np.array(cols, dtype=np.int64).T % p
    for s, target in enumerate(F.mapping):
        z = np.array(_label_of_simple(G, s), dtype=np.int64)
        if _simple_of_label(G, (M @ z) % p) != target:
            raise NotAdditive(
                f"object mapping is not additive on labels (simple {s})"
            )
    mat = FpMatrix(p, M)
    if not mat.is_form_preserving():
        raise NotFormPreserving(
            "label action does not preserve the hyperbolic form"
        )
    return mat


def matrix_to_autoeq(M: FpMatrix) -> BraidedAutoeq:
    """The braided symmetry acting on labels by the given matrix.

    Verifies form-preservation first (NotFormPreserving otherwise), then
    builds the object permutation on the center of the elementary abelian
    group of order p**n and runs the full construction checks.  At p = 2 a
    matrix may preserve the symplectic form but not its quadratic
    refinement; the twist check then raises NotBraided.
    """
    if not M.is_form_preserving():
        raise NotFormPreserving(
            "matrix does not preserve the hyperbolic form"
        )
    G = _label_group(M.p, M.half)
    p = M.p
    mapping = []
    for s in range(G.n * G.n):
        z = np.array(_label_of_simple(G, s), dtype=np.int64)
        mapping.append(_simple_of_label(G, (M.entries @ z) % p))
    return BraidedAutoeq(G, tuple(mapping), Provenance("searched"))


# -- structural generator families ----------------------------------------


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            return g
    return 1


def _prime_factors(m: int) -> List[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _gl_generators(p: int, n: int) -> List[np.ndarray]:
    """Standard generators of GL_n(F_p) (at most two)."""
    if n == 1:
        if p == 2:
            return []
        return [np.array([[_primitive_root(p)]], dtype=np.int64)]
    trans = np.eye(n, dtype=np.int64)
    trans[0, 1] = 1
    cyc = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        cyc[i + 1, i] = 1
    # Scale the wrap-around entry so det(cyc) is a primitive root: the two
    # generators then cover both SL_n and the determinant quotient.
    cyc[0, n - 1] = ((-1) ** (n - 1) * _primitive_root(p)) % p
    return [trans, cyc]


def _unipotent_basis(p: int, n: int) -> List[np.ndarray]:
    """Basis blocks A for the unipotent generators [[I, 0], [A, I]].

    Alternating matrices at odd p; all symmetric matrices at p = 2 (the
    symplectic convention -- see the module docstring).
    """
    out = []
    if p == 2:
        for i in range(n):
            A = np.zeros((n, n), dtype=np.int64)
            A[i, i] = 1
            out.append(A)
    for i in range(n):
        for j in range(i + 1, n):
            A = np.zeros((n, n), dtype=np.int64)
            A[i, j] = 1
            A[j, i] = (-1) % p
            out.append(A)
    return out


def _embed_gl(p: int, v: np.ndarray) -> FpMatrix:
    n = v.shape[0]
    M = np.zeros((2 * n, 2 * n), dtype=np.int64)
    M[:n, :n] = v % p
    M[n:, n:] = _inv_mod(v, p).T % p
    return FpMatrix(p, M)


def _pair_swap(p: int, n: int, subset: Iterable[int]) -> FpMatrix:
    """The dualization matrix swapping the listed hyperbolic pairs."""
    M = np.eye(2 * n, dtype=np.int64)
    for i in subset:
        M[i, i] = M[n + i, n + i] = 0
        M[i, n + i] = M[n + i, i] = 1
    return FpMatrix(p, M)


def subgroup_generators(p: int, n: int, which: str) -> List[FpMatrix]:
    """Generating matrices for one structural family.

    ``which`` selects: "V" -- standard GL_n generators embedded as
    diag(v, (v^T)^-1); "BV" -- lower unipotents [[I, 0], [A, I]] over the
    basis blocks A; "EV" -- the corresponding upper unipotents; "R" -- the
    pair swaps r_0 = identity, r_1, ..., r_n.  The unipotent blocks are
    alternating at odd p and run over all symmetric matrices at p = 2.
    """
    _check_prime(p)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if which == "V":
        return [_embed_gl(p, v) for v in _gl_generators(p, n)]
    if which in ("BV", "EV"):
        out = []
        for A in _unipotent_basis(p, n):
            M = np.eye(2 * n, dtype=np.int64)
            if which == "BV":
                M[n:, :n] = A
            else:
                M[:n, n:] = A
            out.append(FpMatrix(p, M))
        return out
    if which == "R":
        return [_pair_swap(p, n, range(d)) for d in range(n + 1)]
    raise ValueError(f"unknown family {which!r}: expected V, BV, EV, or R")


def standard_generators(p: int, n: int) -> List[FpMatrix]:
    """The union of the V, BV, EV, and R families, duplicates removed."""
    out: List[FpMatrix] = []
    seen = set()
    for which in ("V", "BV", "EV", "R"):
        for M in subgroup_generators(p, n, which):
            if M not in seen:
                seen.add(M)
                out.append(M)
    return out


def generate_matrix_group(
    generators: Iterable[FpMatrix], cap: int = GENERATE_CAP
) -> Tuple[FpMatrix, ...]:
    """Breadth-first closure of the group generated by the given matrices.

    Deterministic order: identity first, then products by generation.
    Raises CapExceeded past ``cap`` elements and DomainMismatch on mixed p
    or size; at least one generator is required (to fix p and the size).
    """
    gens = list(generators)
    if not gens:
        raise ValueError("at least one generator is required")
    p, size = gens[0].p, gens[0].size
    for g in gens:
        if g.p != p or g.size != size:
            raise DomainMismatch("generators live over different forms")
    identity = FpMatrix.identity(p, size // 2)
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = g @ x
                if y not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded(
                            f"generated matrix group exceeds cap {cap}"
                        )
                    seen.add(y)
                    elements.append(y)
                    new.append(y)
        frontier = new
    return tuple(elements)


# -- independent order oracle ----------------------------------------------


def group_order_oracle(p: int, n: int) -> int:
    """Count all matrices with M^T J M = J by constrained column extension.

    Independent of the generator machinery: columns are chosen left to
    right, keeping exactly the candidate vectors compatible with the Gram
    constraints against the columns already fixed.  Invertibility is
    automatic (a dependent column set would make M^T J M singular).
    Restricted to 2n <= 4 and p <= 5; larger inputs raise BudgetExceeded.
    """
    _check_prime(p)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if 2 * n > _ORACLE_MAX_SIZE or p > _ORACLE_MAX_P:
        raise BudgetExceeded(
            f"oracle enumeration restricted to 2n <= {_ORACLE_MAX_SIZE},"
            f" p <= {_ORACLE_MAX_P}; got (p, n) = ({p}, {n})"
        )
    J = hyperbolic_form(p, n)
    m = 2 * n
    vecs = np.array(
        list(itertools.product(range(p), repeat=m)), dtype=np.int64
    )
    vecs = vecs[np.any(vecs, axis=1)]
    # J has zero diagonal, so the self-constraint v^T J v = 0 is the same
    # for every column slot.
    iso = vecs[(np.einsum("ij,jk,ik->i", vecs, J, vecs) % p) == 0]

    def count(cols: List[np.ndarray]) -> int:
        k = len(cols)
        if k == m:
            return 1
        cand = iso
        for i, c in enumerate(cols):
            cand = cand[(cand @ ((J @ c) % p) % p) == J[k, i]]
            if not len(cand):
                return 0
        return sum(count(cols + [c]) for c in cand)

    return count([])


# -- Bruhat factorization --------------------------------------------------


@dataclass(frozen=True)
class BruhatCell:
    """One cell of the rank-indexed triangular factorization.

    ``reflection_rank`` is the cell index d in {0, ..., n}; ``factors`` is
    the witness triple (b, e, r) with b lower block-triangular, e upper
    block-triangular, r a d-pair dualization, and b @ e @ r the factored
    element.
    """

    reflection_rank: int
    factors: Tuple[FpMatrix, FpMatrix, FpMatrix]


def bruhat_factorize(M: FpMatrix) -> BruhatCell:
    """Factor a form-preserving matrix as b @ e @ r.

    The cell index is d = n - rank(upper-left block).  The reflection r
    swaps a d-subset of hyperbolic coordinate pairs chosen so that M @ r
    has invertible upper-left block X; the triangular witnesses are then
    closed-form: b = [[X, 0], [Z, (X^T)^-1]] and e = [[I, X^-1 Y], [0, I]].
    Raises NotFormPreserving for an invalid input and NoFactorization if no
    coordinate subset works (a counterexample to the cell decomposition,
    reported rather than suppressed).
    """
    if not M.is_form_preserving():
        raise NotFormPreserving(
            "matrix does not preserve the hyperbolic form"
        )
    p, n = M.p, M.half
    E = M.entries
    d = n - _rank_mod(E[:n, :n], p)
    for subset in itertools.combinations(range(n), d):
        r = _pair_swap(p, n, subset)
        swapped = (E @ r.entries) % p
        X = swapped[:n, :n]
        if _rank_mod(X, p) < n:
            continue
        Y, Z = swapped[:n, n:], swapped[n:, :n]
        Xinv = _inv_mod(X, p)
        b = np.zeros((2 * n, 2 * n), dtype=np.int64)
        b[:n, :n] = X
        b[n:, :n] = Z
        b[n:, n:] = _inv_mod(X.T, p)
        e = np.eye(2 * n, dtype=np.int64)
        e[:n, n:] = (Xinv @ Y) % p
        bM, eM = FpMatrix(p, b), FpMatrix(p, e)
        if not (bM.is_form_preserving() and eM.is_form_preserving()):
            continue
        if (bM @ eM @ r) == M:
            return BruhatCell(d, (bM, eM, r))
    raise NoFactorization(
        f"no rank-{d} pair subset factorizes the given matrix"
    )
