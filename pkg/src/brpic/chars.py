"""Exact irreducible character tables and Clifford decomposition.

The table is computed by the modular class-algebra method: the class-sum
structure constants are simultaneously diagonalized over F_p for a prime
p = 1 (mod exp G), p > 2*sqrt(|G|), and each character is lifted exactly to
cyclotomic values via root-of-unity multiplicities on cyclic subgroups.  The
result is certified by exact row and column orthogonality before being
returned, so downstream consumers can rely on it unconditionally.

Row order is deterministic: by (degree, per-class value keys), where the
value key orders rationals before irrationals and +1 before -1 (so the
trivial character is always row 0, and for a cyclic group the zeta-character
precedes the zeta^2-character).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .cyclo import Cyclotomic, cyclo_sum, from_rational, one, root_of_unity, zero
from .errors import (
    CharacterTableError,
    NoSuchCharacter,
    NotAbelianNormal,
    NotASubgroup,
    NotIrreducible,
)
from .groups import FiniteGroup, Subgroup, centralizer, class_of, conjugacy_classes

__all__ = [
    "ClassFunction",
    "Character",
    "CliffordComponent",
    "character_table",
    "centralizer_table",
    "restrict",
    "inner_product",
    "tensor",
    "is_irreducible",
    "decompose",
    "find_character",
    "linear_characters",
    "clifford_decomposition",
]


# ---------------------------------------------------------------------------
# class functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassFunction:
    """A function on conjugacy classes, one Cyclotomic per class."""
    group: FiniteGroup
    values: tuple[Cyclotomic, ...]

    def value_at_element(self, g: int) -> Cyclotomic:
        return self.values[class_of(self.group, g)]

    def key(self):
        return tuple(v.order_key() for v in self.values)


class Character(ClassFunction):
    """An irreducible character (certified at table construction)."""

    @property
    def degree(self) -> int:
        return int(self.values[0].as_rational())

    def is_linear(self) -> bool:
        return self.degree == 1


@dataclass(frozen=True)
class CliffordComponent:
    """One isotypic piece of a restriction to an abelian normal subgroup:
    a linear character of S, its multiplicity dimension (dim E_i), and its
    inertia subgroup in G."""
    linear_char: Character
    multiplicity_dim: int
    inertia: Subgroup


# ---------------------------------------------------------------------------
# modular arithmetic helpers (prime field; local to the table algorithm)
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _dixon_prime(e: int, order: int) -> int:
    bound = 2 * isqrt(order - 1) + 2 if order > 1 else 2
    p = e + 1
    while True:
        if p > bound and _is_prime(p):
            return p
        p += e


def _smallest_primitive_root(p: int) -> int:
    fac = []
    m = p - 1
    q = 2
    while q * q <= m:
        if m % q == 0:
            fac.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        fac.append(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            return g
    raise CharacterTableError(f"no primitive root mod {p}")


def _rref_p(A: np.ndarray, p: int):
    """Reduced row echelon form mod p; returns (R, pivot column list)."""
    R = A.copy() % p
    rows, cols = R.shape
    pivots = []
    rank = 0
    for j in range(cols):
        hit = None
        for i in range(rank, rows):
            if R[i, j] % p:
                hit = i
                break
        if hit is None:
            continue
        R[[rank, hit]] = R[[hit, rank]]
        inv = pow(int(R[rank, j]), -1, p)
        R[rank] = (R[rank] * inv) % p
        for i in range(rows):
            if i != rank and R[i, j]:
                R[i] = (R[i] - R[i, j] * R[rank]) % p
        pivots.append(j)
        rank += 1
        if rank == rows:
            break
    return R, pivots


def _kernel_p(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning ker(A) mod p."""
    rows, cols = A.shape
    R, pivots = _rref_p(A, p)
    free = [j for j in range(cols) if j not in pivots]
    out = np.zeros((cols, len(free)), dtype=np.int64)
    for idx, j in enumerate(free):
        out[j, idx] = 1
        for i, pj in enumerate(pivots):
            out[pj, idx] = (-R[i, j]) % p
    return out


# ---------------------------------------------------------------------------
# the table algorithm
# ---------------------------------------------------------------------------

def _class_matrices(G: FiniteGroup):
    classes = conjugacy_classes(G)
    r = len(classes)
    cls_of = G._memo["class_of"]
    mats = np.zeros((r, r, r), dtype=np.int64)
    # a[i, j, k] = #{(x, y) in C_i x C_j : x y in fixed rep position of C_k},
    # accumulated over all of C_k and divided by |C_k| at the end.
    for i, ci in enumerate(classes):
        for x in ci.members:
            prods = cls_of[G.table[x, :]]
            np.add.at(mats[i], (cls_of, prods), 1)
    for k, ck in enumerate(classes):
        mats[:, :, k] //= ck.size
    return mats


def character_table(G: FiniteGroup) -> list[Character]:
    """All irreducible characters, exact, certified, deterministically ordered."""
    if "chartable" in G._memo:
        return G._memo["chartable"]
    classes = conjugacy_classes(G)
    r = len(classes)
    n = G.n
    e = G.exponent()
    p = _dixon_prime(e, n)
    mats = _class_matrices(G)          # mats[i]: matrix (M_i)_{jk} = a_{ijk}
    # --- simultaneous eigenvectors over F_p --------------------------------
    spaces = [np.eye(r, dtype=np.int64)]           # columns are basis vectors
    for i in range(1, r):
        M = mats[i] % p
        nxt = []
        for B in spaces:
            d = B.shape[1]
            if d == 1:
                nxt.append(B)
                continue
            # restriction: M B = B A with A = B[R]^-1 (M B)[R] on pivot rows
            _, pivots = _rref_p(B.T, p)
            Rsel = pivots                 # row indices making B[Rsel] invertible
            Bs = B[Rsel, :] % p
            MB = (M @ B) % p
            MBs = MB[Rsel, :]
            # invert Bs mod p
            aug = np.concatenate([Bs, np.eye(d, dtype=np.int64)], axis=1)
            R2, piv2 = _rref_p(aug, p)
            Binv = R2[:, d:]
            A = (Binv @ MBs) % p
            found = []
            for lam in range(p):
                K = _kernel_p((A - lam * np.eye(d, dtype=np.int64)) % p, p)
                if K.shape[1]:
                    found.append((B @ K) % p)
            if sum(k.shape[1] for k in found) != d:
                raise CharacterTableError("eigen-splitting lost dimensions")
            nxt.extend(found)
        spaces = nxt
        if all(B.shape[1] == 1 for B in spaces):
            break
    if not all(B.shape[1] == 1 for B in spaces):
        raise CharacterTableError("class algebra did not fully split")
    # --- per-character data mod p ------------------------------------------
    inv_class = [class_of(G, G.inv_of(c.rep)) for c in classes]
    sizes = [c.size for c in classes]
    w_root = pow(_smallest_primitive_root(p), (p - 1) // e, p)
    raw_rows = []
    for B in spaces:
        w = B[:, 0] % p
        if w[0] % p == 0:
            raise CharacterTableError("eigenvector vanishes on the unit class")
        w = (w * pow(int(w[0]), -1, p)) % p
        t = 0
        for j in range(r):
            t = (t + w[j] * w[inv_class[j]] * pow(sizes[j], -1, p)) % p
        d2 = n * pow(int(t), -1, p) % p
        deg = None
        for d in range(1, isqrt(n) + 1):
            if d * d % p == d2:
                deg = d
                break
        if deg is None:
            raise CharacterTableError("no integer degree matches d^2 mod p")
        chi_p = [(w[j] * deg * pow(sizes[j], -1, p)) % p for j in range(r)]
        raw_rows.append((deg, chi_p))
    # --- exact lift via root-of-unity multiplicities -----------------------
    power_class = []
    for c in classes:
        g = c.rep
        nj = G.order_of(g)
        pcs = []
        x = G.identity
        for _ in range(nj):
            pcs.append(class_of(G, x))
            x = G.mul(x, g)
        power_class.append((nj, pcs))
    chars = []
    for deg, chi_p in raw_rows:
        values = []
        for j in range(r):
            nj, pcs = power_class[j]
            zj = pow(w_root, e // nj, p)
            inv_nj = pow(nj, -1, p)
            terms = []
            total = 0
            for t in range(nj):
                mt = 0
                for k in range(nj):
                    mt = (mt + chi_p[pcs[k]] * pow(zj, (-t * k) % nj, p)) % p
                mt = (mt * inv_nj) % p
                if mt > deg:
                    raise CharacterTableError(
                        f"multiplicity lift {mt} exceeds degree {deg}"
                    )
                total += mt
                if mt:
                    terms.append(root_of_unity(nj, t) * mt)
            if total != deg:
                raise CharacterTableError(
                    f"eigenvalue multiplicities sum to {total}, expected {deg}"
                )
            values.append(cyclo_sum(terms) if terms else zero())
        chars.append(Character(G, tuple(values)))
    # --- deterministic order and exact certification -----------------------
    chars.sort(key=lambda ch: (ch.degree, ch.key()))
    _certify(G, chars)
    G._memo["chartable"] = chars
    return chars


def _certify(G: FiniteGroup, chars: list[Character]):
    classes = conjugacy_classes(G)
    r = len(classes)
    if len(chars) != r:
        raise CharacterTableError(f"{len(chars)} characters for {r} classes")
    if sum(ch.degree ** 2 for ch in chars) != G.n:
        raise CharacterTableError("sum of squared degrees != |G|")
    for i in range(r):
        for j in range(i, r):
            got = inner_product(chars[i], chars[j])
            want = one() if i == j else zero()
            if got != want:
                raise CharacterTableError(
                    f"row orthogonality fails at ({i},{j}): {got!r}"
                )
    for a in range(r):
        for b in range(a, r):
            s = cyclo_sum(
                ch.values[a] * ch.values[b].conj() for ch in chars
            )
            want = (
                from_rational(G.n // classes[a].size) if a == b else zero()
            )
            if s != want:
                raise CharacterTableError(
                    f"column orthogonality fails at ({a},{b}): {s!r}"
                )


def centralizer_table(G: FiniteGroup, g: int):
    """(centralizer-as-group, parent element list, its character table).

    Computed independently per element (memoized); the minimal class
    representative should be used for stable labels.
    """
    key = ("centtable", g)
    if key not in G._memo:
        C = centralizer(G, g)
        H, elems = C.as_group()
        G._memo[key] = (H, elems, character_table(H))
    return G._memo[key]


# ---------------------------------------------------------------------------
# operations on class functions
# ---------------------------------------------------------------------------

def restrict(chi: ClassFunction, H: Subgroup) -> ClassFunction:
    """Restriction to a subgroup, as a class function on H's own group."""
    if not isinstance(H, Subgroup) or H.parent != chi.group:
        raise NotASubgroup("restriction target is not a subgroup of the domain")
    Hgrp, elems = H.as_group()
    vals = tuple(
        chi.value_at_element(elems[c.rep]) for c in conjugacy_classes(Hgrp)
    )
    return ClassFunction(Hgrp, vals)


def inner_product(a: ClassFunction, b: ClassFunction) -> Cyclotomic:
    """(1/|G|) sum_g a(g) conj(b(g)), computed classwise."""
    if a.group != b.group:
        raise ValueError("inner product across different groups")
    G = a.group
    total = cyclo_sum(
        a.values[c.index] * b.values[c.index].conj() * c.size
        for c in conjugacy_classes(G)
    )
    return total / G.n


def tensor(a: ClassFunction, b: ClassFunction) -> ClassFunction:
    if a.group != b.group:
        raise ValueError("tensor across different groups")
    return ClassFunction(
        a.group, tuple(x * y for x, y in zip(a.values, b.values))
    )


def is_irreducible(a: ClassFunction) -> bool:
    return inner_product(a, a) == 1


def decompose(a: ClassFunction) -> list[tuple[int, Character]]:
    """Multiplicities of each irreducible in a class function (exact)."""
    out = []
    for ch in character_table(a.group):
        m = inner_product(a, ch)
        if not m.is_rational() or m.as_rational().denominator != 1:
            raise CharacterTableError(f"non-integral multiplicity {m!r}")
        mi = int(m.as_rational())
        if mi:
            out.append((mi, ch))
    return out


def find_character(G: FiniteGroup, values) -> int:
    """Index of the table row with the given per-class values."""
    vals = tuple(values)
    for i, ch in enumerate(character_table(G)):
        if ch.values == vals:
            return i
    raise NoSuchCharacter(f"no character of {G.name} with values {vals}")


def linear_characters(G: FiniteGroup) -> list[tuple[int, Character]]:
    return [(i, ch) for i, ch in enumerate(character_table(G)) if ch.is_linear()]


# ---------------------------------------------------------------------------
# Clifford decomposition over an abelian normal subgroup
# ---------------------------------------------------------------------------

def clifford_decomposition(chi: Character, S: Subgroup) -> list[CliffordComponent]:
    """Isotypic components of chi restricted to an abelian normal subgroup.

    The returned linear characters form a single orbit under conjugation,
    all with equal multiplicity dimension; inertia subgroups are the
    stabilizers.  Raises NotAbelianNormal / NotIrreducible on bad input.
    """
    G = chi.group
    if not isinstance(S, Subgroup) or S.parent != G:
        raise NotASubgroup("S is not a subgroup of the character's group")
    if not (S.is_abelian() and S.is_normal()):
        raise NotAbelianNormal(f"{S!r} is not abelian normal")
    if not is_irreducible(chi):
        raise NotIrreducible("Clifford decomposition needs an irreducible character")
    Sgrp, elems = S.as_group()
    res = restrict(chi, S)
    table = character_table(Sgrp)
    comps = []
    for idx, lam in enumerate(table):
        m = inner_product(res, lam)
        mi = int(m.as_rational())
        if mi == 0:
            continue
        inertia = _inertia_subgroup(G, S, lam)
        comps.append((idx, CliffordComponent(lam, mi, inertia)))
    dims = {c.multiplicity_dim for _, c in comps}
    if len(dims) != 1:
        raise CharacterTableError("Clifford multiplicities are not all equal")
    # single-orbit check: conjugating the first listed character must reach
    # every listed one and nothing else
    orbit = _char_orbit(G, S, comps[0][0])
    if orbit != {i for i, _ in comps}:
        raise CharacterTableError("Clifford components are not one orbit")
    return [c for _, c in comps]


def conjugate_linear_char(G: FiniteGroup, S: Subgroup, lam_idx: int, g: int) -> int:
    """Index of g . lam, where (g . lam)(s) = lam(g^-1 s g)."""
    Sgrp, elems = S.as_group()
    table = character_table(Sgrp)
    lam = table[lam_idx]
    pos = {e: i for i, e in enumerate(elems)}
    ginv = G.inv_of(g)
    vals = []
    for c in conjugacy_classes(Sgrp):
        s = elems[c.rep]
        moved = G.conj(s, ginv)
        vals.append(lam.values[class_of(Sgrp, pos[moved])])
    return find_character(Sgrp, vals)


def _char_orbit(G: FiniteGroup, S: Subgroup, lam_idx: int) -> set[int]:
    orbit = {lam_idx}
    frontier = [lam_idx]
    while frontier:
        cur = frontier.pop()
        for g in range(G.n):
            nxt = conjugate_linear_char(G, S, cur, g)
            if nxt not in orbit:
                orbit.add(nxt)
                frontier.append(nxt)
    return orbit


def _inertia_subgroup(G: FiniteGroup, S: Subgroup, lam: Character) -> Subgroup:
    Sgrp, elems = S.as_group()
    pos = {e: i for i, e in enumerate(elems)}
    members = []
    for g in range(G.n):
        ginv = G.inv_of(g)
        ok = True
        for c in conjugacy_classes(Sgrp):
            s = elems[c.rep]
            moved = G.conj(s, ginv)
            if lam.values[class_of(Sgrp, pos[moved])] != lam.values[c.index]:
                ok = False
                break
        if ok:
            members.append(g)
    return Subgroup(G, members, check=False)
