"""2-cocycles valued in roots of unity, their classes, pairings, laziness.

Values live in mu_m written additively as Z/m.  ``h2_classes`` computes one
representative per class of the image of H^2(G, mu_m) inside H^2(G, C*):
cocycles modulo coboundaries *and* modulo the connecting images of linear
characters (the part of H^2(G, mu_m) that dies once mu_m sits inside the
divisible group C*).  With m = |G| that image is the whole Schur multiplier,
so the class count matches the classical tables.

Everything is exact linear algebra over Z/m; no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .cyclo import Cyclotomic, cyclo_sum, root_of_unity, zero
from .errors import (
    BrpicError,
    BudgetExceeded,
    Degenerate,
    NoSuchElement,
    NotAbelian,
    NotACocycle,
)
from .groups import FiniteGroup, Subgroup
from .zmodlin import (
    DiagonalizedSystem,
    diagonalize_mod,
    echelon_rows_mod,
    elementary_divisor_chain,
    nullspace_mod,
    solve_mod,
)

__all__ = [
    "Cocycle2",
    "coboundary",
    "h2_classes",
    "H2Classes",
    "coboundary_witness",
    "Pairing",
    "antisymmetrize",
    "is_nondegenerate",
    "dual_element",
    "is_lazy",
    "lazy_representative",
    "sigma_from_eta",
]

# ceiling on equation-matrix entries (rows x cols) for the class computation
H2_ENTRY_BUDGET = 100_000_000
# ceiling on the number of class representatives enumerated
H2_CLASS_BUDGET = 4096


# ---------------------------------------------------------------------------
# cocycles
# ---------------------------------------------------------------------------

class Cocycle2:
    """A normalized 2-cocycle: values in Z/m with the standard identity.

    eta(a,b) + eta(ab,c) = eta(b,c) + eta(a,bc) for all triples, and
    eta(1,.) = eta(.,1) = 0.  Construction normalizes (subtracts the
    constant eta(1,1)) and verifies the identity, naming a witness triple
    on failure.
    """

    __slots__ = ("group", "m", "values")

    def __init__(self, group: FiniteGroup, m: int, values, check: bool = True):
        v = np.asarray(values, dtype=np.int64) % m
        if v.shape != (group.n, group.n):
            raise NotACocycle(f"value table must be {group.n}x{group.n}")
        e = group.identity
        v = (v - v[e, e]) % m
        if check:
            tbl = group.table
            t1 = v[:, :, None] + v[tbl, :]       # eta(a,b) + eta(ab,c)
            t2 = v[None, :, :] + v[:, tbl]       # eta(b,c) + eta(a,bc)
            bad = np.argwhere((t1 - t2) % m != 0)
            if bad.size:
                a, b, c = (int(x) for x in bad[0])
                raise NotACocycle(
                    f"cocycle identity fails at ({group.names[a]}, "
                    f"{group.names[b]}, {group.names[c]})"
                )
            if v[e, :].any() or v[:, e].any():
                raise NotACocycle("table cannot be normalized")
        self.group = group
        self.m = m
        self.values = v
        self.values.setflags(write=False)

    # -- algebra ------------------------------------------------------------
    def _like(self, other: "Cocycle2"):
        if self.group != other.group or self.m != other.m:
            raise ValueError("cocycles on different groups or moduli")

    def __add__(self, other: "Cocycle2") -> "Cocycle2":
        self._like(other)
        return Cocycle2(self.group, self.m, (self.values + other.values) % self.m,
                        check=False)

    def __sub__(self, other: "Cocycle2") -> "Cocycle2":
        self._like(other)
        return Cocycle2(self.group, self.m, (self.values - other.values) % self.m,
                        check=False)

    def __neg__(self) -> "Cocycle2":
        return Cocycle2(self.group, self.m, (-self.values) % self.m, check=False)

    def is_trivial(self) -> bool:
        return not self.values.any()

    def __eq__(self, other):
        return (
            isinstance(other, Cocycle2)
            and self.group == other.group
            and self.m == other.m
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.m, self.values.tobytes()))

    def __repr__(self):
        tag = "trivial" if self.is_trivial() else "nontrivial"
        return f"Cocycle2({self.group.name}, m={self.m}, {tag})"

    # -- transport ----------------------------------------------------------
    def conjugate_by(self, g: int) -> "Cocycle2":
        """(g . eta)(a, b) = eta(g^-1 a g, g^-1 b g)."""
        G = self.group
        ginv = G.inv_of(g)
        q = np.fromiter((G.conj(a, ginv) for a in range(G.n)), dtype=np.int64)
        return Cocycle2(G, self.m, self.values[np.ix_(q, q)], check=False)

    def restrict(self, S: Subgroup) -> "Cocycle2":
        """The same cocycle on a subgroup, as a cocycle of S's own group."""
        if S.parent != self.group:
            raise ValueError("subgroup of a different group")
        Sgrp, elems = S.as_group()
        idx = np.asarray(elems, dtype=np.int64)
        return Cocycle2(Sgrp, self.m, self.values[np.ix_(idx, idx)], check=False)

    def to_json(self):
        return {"m": self.m, "values": self.values.tolist()}


def coboundary(G: FiniteGroup, phi, m: int) -> Cocycle2:
    """d(phi)(a,b) = phi(a) + phi(b) - phi(ab) as a normalized cocycle."""
    p = np.asarray(phi, dtype=np.int64) % m
    vals = (p[:, None] + p[None, :] - p[G.table]) % m
    return Cocycle2(G, m, vals, check=False)


# ---------------------------------------------------------------------------
# the class computation
# ---------------------------------------------------------------------------

def _nontrivial_elements(G: FiniteGroup) -> list[int]:
    return [g for g in range(G.n) if g != G.identity]


def _unknown_index(G: FiniteGroup):
    """Map (a, b) with a, b != 1 to flat unknown indices 0..(n-1)^2-1."""
    idx = np.full(G.n, -1, dtype=np.int64)
    for i, g in enumerate(_nontrivial_elements(G)):
        idx[g] = i
    return idx


def _cocycle_equations(G: FiniteGroup, m: int) -> np.ndarray:
    """Dense matrix of the cocycle identity over the (n-1)^2 unknowns."""
    n = G.n
    nz = np.asarray(_nontrivial_elements(G), dtype=np.int64)
    idx = _unknown_index(G)
    w = n - 1
    N = w * w
    a, b, c = np.meshgrid(nz, nz, nz, indexing="ij")
    a, b, c = a.ravel(), b.ravel(), c.ravel()
    E = a.size
    if E * N > H2_ENTRY_BUDGET:
        raise BudgetExceeded(
            f"cocycle system {E}x{N} exceeds the linear-algebra budget"
        )
    A = np.zeros((E, N), dtype=np.int64)
    rows = np.arange(E)
    ab = G.table[a, b]
    bc = G.table[b, c]
    np.add.at(A, (rows, idx[a] * w + idx[b]), 1)
    keep = ab != G.identity
    np.add.at(A, (rows[keep], idx[ab[keep]] * w + idx[c[keep]]), 1)
    np.add.at(A, (rows, idx[b] * w + idx[c]), -1)
    keep = bc != G.identity
    np.add.at(A, (rows[keep], idx[a[keep]] * w + idx[bc[keep]]), -1)
    return A % m


def _select_spanning_rows(A: np.ndarray, p: int, k: int) -> list[int]:
    """Indices of rows spanning A's row module over Z/p^k.

    Vectorized echelon sweep with minimal-valuation pivoting; the returned
    rows (in their original, unreduced form) generate every row of A as a
    Z/p^k-combination.
    """
    q = p ** k
    W = A % q
    E, N = W.shape
    active = np.ones(E, dtype=bool)
    pivots: list[int] = []
    for j in range(N):
        col = W[:, j]
        cand = np.nonzero(active & (col != 0))[0]
        if cand.size == 0:
            continue
        # p-adic valuations of the candidate entries
        x = col[cand].copy()
        v = np.zeros(cand.size, dtype=np.int64)
        for _ in range(k):
            divisible = (x % p == 0) & (x != 0)
            v[divisible] += 1
            x[divisible] //= p
        order = np.lexsort((cand, v))
        r = int(cand[order[0]])
        vmin = int(v[order[0]])
        pv = p ** vmin
        unit = int(col[r]) // pv
        W[r, j:] = (W[r, j:] * pow(unit, -1, q)) % q      # entry at j becomes pv
        others = cand[cand != r]
        if others.size:
            t = col[others] // pv
            W[others, j:] = (W[others, j:] - t[:, None] * W[r, j:]) % q
        active[r] = False
        pivots.append(r)
    return pivots


def _prime_powers(m: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out.append((p, k))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def _hom_generators(G: FiniteGroup) -> list[np.ndarray]:
    """Generators of Hom(G, Z/e), e = exp(G), as value vectors on G."""
    e = G.exponent()
    nz = _nontrivial_elements(G)
    pos = {g: i for i, g in enumerate(nz)}
    rows = []
    for a in nz:
        for b in nz:
            row = np.zeros(len(nz), dtype=np.int64)
            row[pos[a]] += 1
            row[pos[b]] += 1
            ab = G.mul(a, b)
            if ab != G.identity:
                row[pos[ab]] -= 1
            rows.append(row % e)
    if not rows:
        return []
    basis = nullspace_mod(np.vstack(rows), e)
    out = []
    for i in range(basis.shape[1]):
        h = np.zeros(G.n, dtype=np.int64)
        for g, val in zip(nz, basis[:, i]):
            h[g] = int(val) % e
        out.append(h)
    return out


def _carry_cocycle(G: FiniteGroup, h: np.ndarray, m: int) -> np.ndarray:
    """Connecting image of a linear character given by exponents h over Z/e.

    h(a)+h(b)-h(ab) is divisible by e = exp(G); the integer quotient (the
    "carry") is a mu_m-valued 2-cocycle representing the obstruction to
    taking an m-th root of the character inside mu_m.
    """
    e = G.exponent()
    lift = h % e
    raw = lift[:, None] + lift[None, :] - lift[G.table]
    if np.any(raw % e):
        raise BrpicError("character exponents are not a homomorphism")
    return (raw // e) % m


@dataclass(eq=False)
class H2Classes:
    """Representatives of H^2(G, mu_m) -> H^2(G, C*), plus classification."""

    group: FiniteGroup
    m: int
    representatives: list[Cocycle2]
    elementary_divisors: tuple[int, ...]
    _zsolver: DiagonalizedSystem | None = field(default=None, repr=False)
    _uprime: np.ndarray | None = field(default=None, repr=False)
    _gvec: tuple[int, ...] = field(default=(), repr=False)
    _label_index: dict = field(default_factory=lambda: {(): 0}, repr=False)

    def __len__(self):
        return len(self.representatives)

    def __iter__(self):
        return iter(self.representatives)

    def __getitem__(self, i) -> Cocycle2:
        return self.representatives[i]

    def _label(self, eta: Cocycle2) -> tuple[int, ...]:
        G, m = self.group, self.m
        if eta.group != G or eta.m != m:
            raise ValueError("cocycle on a different group or modulus")
        if self._zsolver is None:      # trivial-group or rank-0 case
            return ()
        idx = _unknown_index(G)
        nz = _nontrivial_elements(G)
        vec = eta.values[np.ix_(nz, nz)].ravel()
        y = self._zsolver.solve(vec)
        if y is None:
            raise NotACocycle("value table solves no cocycle system")
        w = (self._uprime @ y) % m
        return tuple(
            int(w[i]) % g for i, g in enumerate(self._gvec) if g > 1
        )

    def class_index(self, eta: Cocycle2) -> int:
        """Which representative's class a cocycle belongs to."""
        return self._label_index[self._label(eta)]


def h2_classes(G: FiniteGroup, m: int | None = None) -> H2Classes:
    """One normalized representative per class, trivial class first.

    The underlying group of classes is reported through
    ``elementary_divisors`` (empty for a trivial class group).
    """
    if m is None:
        m = G.n
    key = ("h2", m)
    if key in G._memo:
        return G._memo[key]
    n = G.n
    if n == 1:
        res = H2Classes(G, m, [Cocycle2(G, m, np.zeros((1, 1)), check=False)], ())
        G._memo[key] = res
        return res

    A = _cocycle_equations(G, m)
    chosen: set[int] = set()
    for p, k in _prime_powers(m):
        chosen.update(_select_spanning_rows(A, p, k))
    A_small = echelon_rows_mod(A[sorted(chosen)], A.shape[1], m)
    zbasis = nullspace_mod(A_small, m) if A_small.shape[0] else np.eye(
        A.shape[1], dtype=np.int64
    )
    zsolver = DiagonalizedSystem(zbasis, m)

    # coboundary + connecting-image generators, in cocycle coordinates
    nz = _nontrivial_elements(G)
    idx = _unknown_index(G)
    span_vecs = []
    for x in nz:
        phi = np.zeros(n, dtype=np.int64)
        phi[x] = 1
        span_vecs.append(coboundary(G, phi, m).values[np.ix_(nz, nz)].ravel())
    for h in _hom_generators(G):
        span_vecs.append(_carry_cocycle(G, h, m)[np.ix_(nz, nz)].ravel())

    # express the spanning vectors in z-coordinates, add the coordinate
    # redundancy of the parametrization, and diagonalize the joint span
    coords = []
    for vec in span_vecs:
        y = zsolver.solve(vec)
        if y is None:
            raise BrpicError("coboundary escaped the cocycle module")
        coords.append(y)
    redundancy = zsolver.nullspace()
    k = zbasis.shape[1]
    Q = np.concatenate(
        [np.stack(coords, axis=1)] + ([redundancy] if redundancy.size else []),
        axis=1,
    ) if coords else redundancy.reshape(k, -1)
    D, T = diagonalize_mod(Q, m)
    gvec = []
    for i in range(k):
        d = int(D[i, i]) if i < min(D.shape) else 0
        gvec.append(gcd(d, m) if d else m)
    count = 1
    for g in gvec:
        count *= g
    if count > H2_CLASS_BUDGET:
        raise BudgetExceeded(f"{count} classes exceed the enumeration budget")

    # enumerate labels lexicographically; reconstruct a cocycle per label
    positions = [i for i, g in enumerate(gvec) if g > 1]
    reps: list[Cocycle2] = []
    label_index: dict = {}
    labels: list[tuple[int, ...]] = [()]
    for i in positions:
        labels = [lab + (v,) for lab in labels for v in range(gvec[i])]
    for j, lab in enumerate(labels):
        w = np.zeros(k, dtype=np.int64)
        for pos, val in zip(positions, lab):
            w[pos] = val
        y = (T.Uinv @ w) % m
        vec = (zbasis @ y) % m
        table = np.zeros((n, n), dtype=np.int64)
        table[np.ix_(nz, nz)] = vec.reshape(len(nz), len(nz))
        reps.append(Cocycle2(G, m, table))          # checked at construction
        label_index[lab] = j
    divisors = elementary_divisor_chain([g for g in gvec if g > 1])
    res = H2Classes(
        G, m, reps, divisors,
        _zsolver=zsolver, _uprime=T.U, _gvec=tuple(gvec),
        _label_index=label_index,
    )
    G._memo[key] = res
    return res


def coboundary_witness(e1: Cocycle2, e2: Cocycle2):
    """phi with e2 - e1 = d(phi), as a length-|G| array, or None.

    This is strict cohomology over mu_m (no connecting images), the
    equivalence under which pairings and autoequivalence constructions are
    invariant.
    """
    e1._like(e2)
    G, m = e1.group, e1.m
    diff = (e2.values - e1.values) % m
    nz = _nontrivial_elements(G)
    pos = {g: i for i, g in enumerate(nz)}
    rows, rhs = [], []
    for a in nz:
        for b in nz:
            row = np.zeros(len(nz), dtype=np.int64)
            row[pos[a]] += 1
            row[pos[b]] += 1
            ab = G.mul(a, b)
            if ab != G.identity:
                row[pos[ab]] -= 1
            rows.append(row)
            rhs.append(diff[a, b])
    sol = solve_mod(np.vstack(rows) % m, np.asarray(rhs) % m, m)
    if sol is None:
        return None
    phi = np.zeros(G.n, dtype=np.int64)
    for g, val in zip(nz, sol):
        phi[g] = int(val)
    assert coboundary(G, phi, m) == (e2 - e1)
    return phi


# ---------------------------------------------------------------------------
# pairings
# ---------------------------------------------------------------------------

class Pairing:
    """A bimultiplicative Z/m-valued pairing on an abelian subgroup.

    ``values[i, j]`` pairs the i-th and j-th elements of ``subgroup``'s own
    group (element order inherited from the parent).  Bimultiplicativity is
    verified exhaustively at construction.
    """

    __slots__ = ("subgroup", "m", "values")

    def __init__(self, subgroup: Subgroup, m: int, values):
        if not subgroup.is_abelian():
            raise NotAbelian(f"{subgroup!r} is not abelian")
        Sgrp, _ = subgroup.as_group()
        V = np.asarray(values, dtype=np.int64) % m
        if V.shape != (Sgrp.n, Sgrp.n):
            raise ValueError(f"pairing table must be {Sgrp.n}x{Sgrp.n}")
        tbl = Sgrp.table
        left = (V[tbl, :] - V[:, None, :] - V[None, :, :]) % m
        right = (V[:, tbl] - V[:, :, None] - V[:, None, :]) % m
        if left.any() or right.any():
            raise BrpicError("pairing is not bimultiplicative")
        self.subgroup = subgroup
        self.m = m
        self.values = V
        self.values.setflags(write=False)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, Pairing)
            and self.subgroup == other.subgroup
            and self.m == other.m
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.m, self.values.tobytes()))

    def __repr__(self):
        return f"Pairing(|S|={self.size}, m={self.m})"


def antisymmetrize(eta: Cocycle2, S: Subgroup) -> Pairing:
    """<a, b> = eta(a,b) - eta(b,a) on an abelian subgroup."""
    if not S.is_abelian():
        raise NotAbelian(f"{S!r} is not abelian")
    Sgrp, elems = S.as_group()
    if eta.group == S.parent:
        R = eta.restrict(S).values
    elif eta.group == Sgrp:
        R = eta.values
    else:
        raise ValueError("cocycle lives on neither the parent nor the subgroup")
    return Pairing(S, eta.m, (R - R.T) % eta.m)


def is_nondegenerate(pairing: Pairing) -> bool:
    """True iff a -> <a, .> has trivial kernel."""
    S = pairing.subgroup
    _, elems = S.as_group()
    id_pos = elems.index(S.parent.identity)
    for i in range(pairing.size):
        if i != id_pos and not pairing.values[i].any():
            return False
    return True


def dual_element(pairing: Pairing, linear_char) -> int:
    """The unique s in S with chi(r) = zeta_m^<r, s> for all r.

    ``linear_char`` is a degree-1 character of the subgroup's own group;
    the returned value is a parent-group element index.
    """
    if not is_nondegenerate(pairing):
        raise Degenerate("dual elements need a nondegenerate pairing")
    S, m = pairing.subgroup, pairing.m
    _, elems = S.as_group()
    target = []
    for val in linear_char.values:
        order, k = val.as_root_of_unity()
        if m % order:
            raise NoSuchElement(
                f"character order {order} does not divide the modulus {m}"
            )
        target.append(k * (m // order) % m)
    target = np.asarray(target, dtype=np.int64)
    hits = [
        j for j in range(pairing.size)
        if np.array_equal(pairing.values[:, j] % m, target)
    ]
    if not hits:
        raise NoSuchElement("character is not in the image of the pairing")
    assert len(hits) == 1
    return elems[hits[0]]


# ---------------------------------------------------------------------------
# laziness
# ---------------------------------------------------------------------------

def _conj_position_map(G: FiniteGroup, S: Subgroup, g: int) -> np.ndarray:
    """Positions of s -> g^-1 s g within the subgroup's element list."""
    _, elems = S.as_group()
    pos = {e: i for i, e in enumerate(elems)}
    ginv = G.inv_of(g)
    return np.fromiter(
        (pos[G.conj(s, ginv)] for s in elems), dtype=np.int64, count=len(elems)
    )


def is_lazy(eta: Cocycle2, G: FiniteGroup, S: Subgroup) -> bool:
    """Whether eta on S is invariant (as a cochain) under G-conjugation."""
    Sgrp, _ = S.as_group()
    if eta.group != Sgrp:
        raise ValueError("cocycle must live on the subgroup's own group")
    for g in G.minimal_generators():
        q = _conj_position_map(G, S, g)
        if not np.array_equal(eta.values[np.ix_(q, q)], eta.values):
            return False
    return True


def lazy_representative(eta: Cocycle2, G: FiniteGroup, S: Subgroup):
    """An invariant cocycle in eta's coboundary orbit on S, or None.

    Solves, over phi: S -> Z/m, the linear system requiring
    eta(g^-1 . g, g^-1 . g) - eta = d(phi - phi(g^-1 . g)) for each
    generator g of G; solvability is exactly the existence of a lazy
    representative, so None is a certificate of non-laziness for the class.
    """
    Sgrp, elems = S.as_group()
    if eta.group != Sgrp:
        raise ValueError("cocycle must live on the subgroup's own group")
    m = eta.m
    ns = Sgrp.n
    e = Sgrp.identity
    vars_ = [i for i in range(ns) if i != e]
    vpos = {i: j for j, i in enumerate(vars_)}
    rows, rhs = [], []
    for g in G.minimal_generators():
        q = _conj_position_map(G, S, g)
        diff = (eta.values[np.ix_(q, q)] - eta.values) % m
        for a in vars_:
            for b in vars_:
                row = np.zeros(len(vars_), dtype=np.int64)
                for x, sign in ((a, 1), (b, 1), (Sgrp.mul(a, b), -1)):
                    # psi(x) = phi(x) - phi(g^-1 x g) contributes both terms
                    if x != e:
                        row[vpos[x]] += sign
                    cx = int(q[x])
                    if cx != e:
                        row[vpos[cx]] -= sign
                rows.append(row % m)
                rhs.append(int(diff[a, b]))
    if not rows:
        return eta
    sol = solve_mod(np.vstack(rows), np.asarray(rhs, dtype=np.int64) % m, m)
    if sol is None:
        return None
    phi = np.zeros(ns, dtype=np.int64)
    for i, val in zip(vars_, sol):
        phi[i] = int(val)
    fixed = eta + coboundary(Sgrp, phi, m)
    assert is_lazy(fixed, G, S)
    return fixed


# ---------------------------------------------------------------------------
# the dual-side cocycle
# ---------------------------------------------------------------------------

def sigma_from_eta(S: Subgroup, eta: Cocycle2, *,
                   check_nondegenerate: bool = True) -> np.ndarray:
    """The dual cocycle table sigma(e_a, e_b) over parent-element pairs.

    sigma(e_a, e_b) = [a, b in S] / |S|^2 * sum over (t, t') in S^2 of
    zeta^(eta(t,t') + <t,a> + <t',b>), returned as a |G| x |G| object array
    of exact cyclotomic numbers.  The antisymmetrization pairing of eta is
    required to be nondegenerate unless explicitly waived (degenerate input
    raises Degenerate).
    """
    G = S.parent
    pairing = antisymmetrize(eta, S)
    if check_nondegenerate and not is_nondegenerate(pairing):
        raise Degenerate("dual cocycle needs a nondegenerate pairing")
    Sgrp, elems = S.as_group()
    m = eta.m
    if eta.group == G:
        table = eta.restrict(S).values
    else:
        table = eta.values
    ns = len(elems)
    sigma = np.empty((G.n, G.n), dtype=object)
    sigma[:, :] = zero()
    for a_pos, a in enumerate(elems):
        for b_pos, b in enumerate(elems):
            expo = (
                table
                + pairing.values[:, a_pos][:, None]
                + pairing.values[:, b_pos][None, :]
            ) % m
            counts = np.bincount(expo.ravel(), minlength=m)
            total = cyclo_sum(
                root_of_unity(m, t) * int(c)
                for t, c in enumerate(counts) if c
            )
            sigma[a, b] = total / (ns * ns)
    return sigma
