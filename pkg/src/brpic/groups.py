"""Finite groups as validated Cayley tables, plus the constructions the rest
of the toolkit needs: conjugacy classes, centralizers, subgroups, quotients,
morphisms, automorphism groups, normal-subgroup and semidirect-product
enumeration, and a small naming mini-language ("S4", "Z/3:Z/2@inv", ...).

Elements are integer indices into a fixed ordering; ``names`` gives stable
human-readable labels (cycle notation for permutation groups).  All
enumerations are deterministic: elements, classes, subgroups and search
results are produced in ascending index order, so repeated runs are
byte-identical.  Derived data (classes, centralizers, ...) is memoized on the
group object; groups are immutable after construction, so the memos are safe
to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import (
    BadSemidirectAction,
    CapExceeded,
    NoIdentity,
    NoInverse,
    NotAnAutomorphism,
    NotAssociative,
    NotNormal,
    UnknownName,
)

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "GroupMorphism",
    "ConjClass",
    "SemidirectDecomposition",
    "group_from_table",
    "named_group",
    "cyclic_group",
    "symmetric_group",
    "alternating_group",
    "dihedral_group_8",
    "quaternion_group",
    "permutation_group",
    "direct_product",
    "opposite_group",
    "semidirect_product",
    "conjugacy_classes",
    "centralizer",
    "identity_morphism",
    "automorphisms",
    "isomorphisms",
    "inner_automorphisms",
    "outer_representatives",
    "all_subgroups",
    "normal_subgroups",
    "abelian_normal_subgroups",
    "semidirect_decompositions",
    "quotient",
    "first_conjugator",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 10000


# ---------------------------------------------------------------------------
# core group object
# ---------------------------------------------------------------------------

class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a, b]`` is the index of the product a*b.  Construction validates
    the table is a group (associativity, two-sided identity, inverses) and
    raises with a witness if not; pass ``validate=False`` only for tables
    produced by the constructors in this module.
    """

    def __init__(self, table, names=None, name="G", validate=True):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("multiplication table must be square")
        self.table = table
        self.table.setflags(write=False)
        self.n = table.shape[0]
        self.name = name
        self.names = tuple(names) if names is not None else tuple(
            f"g{i}" for i in range(self.n)
        )
        if len(self.names) != self.n:
            raise ValueError("need one name per element")
        if validate:
            self._validate()
        else:
            self.identity = self._find_identity()
        self.inv = self._inverses()
        self._memo: dict = {}

    # -- validation --------------------------------------------------------

    def _find_identity(self):
        idx = np.arange(self.n)
        for e in range(self.n):
            if np.array_equal(self.table[e], idx) and np.array_equal(self.table[:, e], idx):
                return e
        raise NoIdentity("no two-sided identity in multiplication table")

    def _validate(self):
        t = self.table
        if t.size and (t.min() < 0 or t.max() >= self.n):
            raise ValueError("table entries out of range")
        self.identity = self._find_identity()
        left = t[t, :]    # [a, b, c] = t[t[a, b], c] = (a*b)*c
        right = t[:, t]   # [a, b, c] = t[a, t[b, c]] = a*(b*c)
        if not np.array_equal(left, right):
            a, b, c = np.argwhere(left != right)[0]
            na, nb, nc = self.names[a], self.names[b], self.names[c]
            raise NotAssociative(
                f"({na}*{nb})*{nc} != {na}*({nb}*{nc}) in table"
            )

    def _inverses(self):
        inv = np.full(self.n, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.table == self.identity)
        for a, b in zip(rows, cols):
            if self.table[b, a] == self.identity:
                inv[a] = b
        if (inv < 0).any():
            g = int(np.nonzero(inv < 0)[0][0])
            raise NoInverse(f"element {self.names[g]} has no two-sided inverse")
        inv.setflags(write=False)
        return inv

    # -- basic operations --------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv_of(self, a: int) -> int:
        return int(self.inv[a])

    def conj(self, g: int, x: int) -> int:
        """x g x^-1."""
        return int(self.table[self.table[x, g], self.inv[x]])

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv_of(g), -k
        out, base = self.identity, g
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def order_of(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def exponent(self) -> int:
        if "exponent" not in self._memo:
            e = 1
            for g in range(self.n):
                o = self.order_of(g)
                e = e * o // np.gcd(e, o)
            self._memo["exponent"] = int(e)
        return self._memo["exponent"]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def center_elements(self) -> tuple[int, ...]:
        return tuple(
            g for g in range(self.n)
            if np.array_equal(self.table[g], self.table[:, g])
        )

    def closure(self, gens) -> tuple[int, ...]:
        """Subgroup generated by ``gens`` (always contains the identity)."""
        cur = {self.identity}
        cur.update(int(g) for g in gens)
        arr = np.fromiter(sorted(cur), dtype=np.int64)
        while True:
            prods = np.unique(self.table[np.ix_(arr, arr)])
            if prods.size == arr.size:
                return tuple(int(x) for x in arr)
            arr = np.unique(np.concatenate([arr, prods]))

    def minimal_generators(self) -> tuple[int, ...]:
        gens: list[int] = []
        have = {self.identity}
        while len(have) < self.n:
            g = min(x for x in range(self.n) if x not in have)
            gens.append(g)
            have = set(self.closure(gens))
        return tuple(gens)

    def subgroup(self, elements, check: bool = True) -> "Subgroup":
        return Subgroup(self, elements, check=check)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (self.identity,), check=False)

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.n)), check=False)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order {self.n})"

    def __eq__(self, other):
        return self is other or (
            isinstance(other, FiniteGroup)
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))


def group_from_table(table, names=None, name="G") -> FiniteGroup:
    """Validating constructor; raises NoIdentity/NoInverse/NotAssociative."""
    return FiniteGroup(table, names=names, name=name, validate=True)


# ---------------------------------------------------------------------------
# conjugacy classes and centralizers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConjClass:
    index: int
    rep: int
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def conjugacy_classes(G: FiniteGroup) -> list[ConjClass]:
    """Classes sorted by minimal member; reps are the minimal members."""
    if "classes" in G._memo:
        return G._memo["classes"]
    t, inv = G.table, G.inv
    every = np.arange(G.n)
    seen = np.zeros(G.n, dtype=bool)
    out: list[ConjClass] = []
    for g in range(G.n):
        if seen[g]:
            continue
        orbit = np.unique(t[t[every, g], inv[every]])
        seen[orbit] = True
        out.append(ConjClass(len(out), g, tuple(int(x) for x in orbit)))
    G._memo["classes"] = out
    G._memo["class_of"] = class_of = np.empty(G.n, dtype=np.int64)
    for c in out:
        for m in c.members:
            class_of[m] = c.index
    return out


def class_of(G: FiniteGroup, g: int) -> int:
    conjugacy_classes(G)
    return int(G._memo["class_of"][g])


def centralizer(G: FiniteGroup, g: int) -> "Subgroup":
    key = ("cent", g)
    if key not in G._memo:
        members = np.nonzero(G.table[:, g] == G.table[g, :])[0]
        G._memo[key] = Subgroup(G, tuple(int(x) for x in members), check=False)
    return G._memo[key]


def first_conjugator(G: FiniteGroup, a: int, b: int):
    """Minimal x with x a x^-1 = b, or None."""
    conj = G.table[G.table[np.arange(G.n), a], G.inv[np.arange(G.n)]]
    hits = np.nonzero(conj == b)[0]
    return int(hits[0]) if hits.size else None


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

class Subgroup:
    """A subgroup of a fixed parent, stored as a sorted element tuple."""

    def __init__(self, parent: FiniteGroup, elements, check: bool = True):
        self.parent = parent
        self.elements = tuple(sorted(int(x) for x in set(elements)))
        if check:
            got = parent.closure(self.elements)
            if got != self.elements:
                raise ValueError(
                    f"elements {self.elements} are not closed in {parent.name}"
                )
        self._memo: dict = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        if "set" not in self._memo:
            self._memo["set"] = frozenset(self.elements)
        return int(g) in self._memo["set"]

    def is_normal(self) -> bool:
        if "normal" not in self._memo:
            G, S = self.parent, np.asarray(self.elements)
            ok = True
            members = self._memo.setdefault("set", frozenset(self.elements))
            for x in range(G.n):
                conj = G.table[G.table[x, S], G.inv[x]]
                if not all(int(c) in members for c in conj):
                    ok = False
                    break
            self._memo["normal"] = ok
        return self._memo["normal"]

    def is_abelian(self) -> bool:
        S = np.asarray(self.elements)
        sub = self.parent.table[np.ix_(S, S)]
        return bool(np.array_equal(sub, sub.T))

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """(subgroup as its own FiniteGroup, index-to-parent map).

        Element i of the returned group is ``self.elements[i]``; names are
        inherited from the parent.
        """
        if "group" not in self._memo:
            S = self.elements
            pos = {g: i for i, g in enumerate(S)}
            table = [[pos[self.parent.mul(a, b)] for b in S] for a in S]
            H = FiniteGroup(
                table,
                names=tuple(self.parent.names[g] for g in S),
                name=f"{self.parent.name}-sub{len(S)}",
                validate=False,
            )
            self._memo["group"] = (H, S)
        return self._memo["group"]

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __repr__(self):
        return f"Subgroup(order {self.order} of {self.parent.name})"


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

class GroupMorphism:
    """A verified homomorphism, stored as the full image tuple."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images,
                 check: bool = True):
        self.source = source
        self.target = target
        self.images = tuple(int(x) for x in images)
        if len(self.images) != source.n:
            raise ValueError("need one image per source element")
        if check:
            img = np.asarray(self.images)
            lhs = target.table[np.ix_(img, img)]
            rhs = img[source.table]
            if not np.array_equal(lhs, rhs):
                a, b = np.argwhere(lhs != rhs)[0]
                raise NotAnAutomorphism(
                    f"map is not a homomorphism at ({source.names[a]}, {source.names[b]})"
                )

    def __call__(self, g: int) -> int:
        return self.images[g]

    def is_bijective(self) -> bool:
        return (
            self.source.n == self.target.n
            and len(set(self.images)) == self.source.n
        )

    def is_automorphism(self) -> bool:
        return self.source is self.target and self.is_bijective()

    def compose(self, other: "GroupMorphism") -> "GroupMorphism":
        """self after other (self o other)."""
        if other.target is not self.source:
            raise ValueError("composition mismatch")
        return GroupMorphism(
            other.source, self.target,
            tuple(self.images[x] for x in other.images), check=False,
        )

    def inverse(self) -> "GroupMorphism":
        if not self.is_bijective():
            raise NotAnAutomorphism("cannot invert a non-bijective morphism")
        inv = [0] * self.source.n
        for x, y in enumerate(self.images):
            inv[y] = x
        return GroupMorphism(self.target, self.source, inv, check=False)

    def __eq__(self, other):
        return (
            isinstance(other, GroupMorphism)
            and self.source is other.source
            and self.target is other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((id(self.source), id(self.target), self.images))

    def __repr__(self):
        return f"GroupMorphism({self.source.name} -> {self.target.name})"


def identity_morphism(G: FiniteGroup) -> GroupMorphism:
    return GroupMorphism(G, G, tuple(range(G.n)), check=False)


def _iso_backtrack(G: FiniteGroup, H: FiniteGroup, cap):
    """All isomorphisms G -> H as image tuples, by generator backtracking."""
    if G.n != H.n:
        return []
    gens = G.minimal_generators()
    orders_G = [G.order_of(g) for g in range(G.n)]
    orders_H = [H.order_of(h) for h in range(H.n)]
    class_size_G = {g: len(conjugacy_classes(G)[class_of(G, g)].members)
                    for g in range(G.n)}
    class_size_H = {h: len(conjugacy_classes(H)[class_of(H, h)].members)
                    for h in range(H.n)}
    results: list[tuple[int, ...]] = []

    def propagate(chosen):
        """Build the hom on <gens so far> or return None on inconsistency."""
        imgs = {G.identity: H.identity}
        frontier = list(imgs)
        for g, h in chosen:
            if g in imgs:
                if imgs[g] != h:
                    return None
            else:
                imgs[g] = h
                frontier.append(g)
        work = list(imgs.items())
        known = dict(imgs)
        i = 0
        while i < len(work):
            a, fa = work[i]
            i += 1
            for b, fb in list(known.items()):
                for x, fx in ((G.mul(a, b), H.mul(fa, fb)),
                              (G.mul(b, a), H.mul(fb, fa))):
                    if x in known:
                        if known[x] != fx:
                            return None
                    else:
                        known[x] = fx
                        work.append((x, fx))
        return known

    def dfs(i, chosen):
        if len(results) >= cap > 0:
            raise CapExceeded(
                f"more than {cap} isomorphisms {G.name} -> {H.name}"
            )
        if i == len(gens):
            known = propagate(chosen)
            if known is None or len(known) != G.n:
                return
            if len(set(known.values())) != G.n:
                return
            results.append(tuple(known[g] for g in range(G.n)))
            return
        g = gens[i]
        for h in range(H.n):
            if orders_H[h] != orders_G[g]:
                continue
            if class_size_H[h] != class_size_G[g]:
                continue
            known = propagate(chosen + [(g, h)])
            if known is None:
                continue
            dfs(i + 1, chosen + [(g, h)])

    dfs(0, [])
    return sorted(results)


def isomorphisms(G: FiniteGroup, H: FiniteGroup, cap: int = DEFAULT_CAP):
    """All isomorphisms G -> H, deterministically ordered by image tuple."""
    return [GroupMorphism(G, H, imgs) for imgs in _iso_backtrack(G, H, cap)]


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    if G.n != H.n:
        return False
    return bool(_iso_backtrack(G, H, cap=1 << 30))


def automorphisms(G: FiniteGroup, cap: int = DEFAULT_CAP):
    """Aut(G) as verified morphisms, sorted by image tuple; CapExceeded if huge."""
    key = ("aut", cap)
    if key not in G._memo:
        G._memo[key] = [
            GroupMorphism(G, G, imgs) for imgs in _iso_backtrack(G, G, cap)
        ]
    return G._memo[key]


def inner_automorphisms(G: FiniteGroup):
    """Conjugation maps, deduplicated, sorted by image tuple."""
    seen = set()
    every = np.arange(G.n)
    for g in range(G.n):
        imgs = tuple(int(x) for x in G.table[G.table[g, every], G.inv[g]])
        seen.add(imgs)
    return [GroupMorphism(G, G, imgs, check=False) for imgs in sorted(seen)]


def outer_representatives(G: FiniteGroup, cap: int = DEFAULT_CAP):
    """One automorphism per coset of Inn(G) in Aut(G), deterministic."""
    inner = {a.images for a in inner_automorphisms(G)}
    reps = []
    covered: set = set()
    for a in automorphisms(G, cap=cap):
        if a.images in covered:
            continue
        reps.append(a)
        for i in inner:
            covered.add(tuple(a.images[x] for x in i))
    return reps


# Name used in interface documentation: outer classes = Aut/Inn representatives.
outer_classes = outer_representatives


# ---------------------------------------------------------------------------
# subgroup enumeration / normal structure
# ---------------------------------------------------------------------------

def all_subgroups(G: FiniteGroup, cap: int = DEFAULT_CAP) -> list[Subgroup]:
    """Every subgroup, by breadth-first cyclic extension; sorted by
    (order, element tuple).  Raises CapExceeded past ``cap`` subgroups."""
    key = ("subgroups", cap)
    if key in G._memo:
        return G._memo[key]
    found: set[tuple[int, ...]] = set()
    queue: list[tuple[int, ...]] = []
    triv = (G.identity,)
    found.add(triv)
    queue.append(triv)
    while queue:
        base = queue.pop(0)
        for g in range(G.n):
            if g in base:
                continue
            ext = G.closure(set(base) | {g})
            if ext not in found:
                found.add(ext)
                if len(found) > cap:
                    raise CapExceeded(
                        f"more than {cap} subgroups in {G.name}"
                    )
                queue.append(ext)
    out = [Subgroup(G, elems, check=False)
           for elems in sorted(found, key=lambda e: (len(e), e))]
    G._memo[key] = out
    return out


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups, via closures of unions of conjugacy classes.

    Breadth-first join closure: start from the trivial subgroup and keep
    adjoining whole conjugacy classes; every normal subgroup is a join of
    class-closures, so this enumerates them all without enumerating all
    subgroups.  Sorted by (order, element tuple).
    """
    if "normals" in G._memo:
        return G._memo["normals"]
    classes = conjugacy_classes(G)
    found: set[tuple[int, ...]] = set()
    triv = (G.identity,)
    found.add(triv)
    queue = [triv]
    while queue:
        base = queue.pop(0)
        for c in classes:
            if c.members[0] in base:
                continue
            ext = G.closure(set(base) | set(c.members))
            if ext not in found:
                found.add(ext)
                queue.append(ext)
    out = [Subgroup(G, elems, check=False)
           for elems in sorted(found, key=lambda e: (len(e), e))]
    for s in out:
        s._memo["normal"] = True
    G._memo["normals"] = out
    return out


def abelian_normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Normal subgroups with abelian underlying group, same ordering."""
    return [s for s in normal_subgroups(G) if s.is_abelian()]


@dataclass(frozen=True)
class SemidirectDecomposition:
    """G = N : Q with N abelian normal, Q a complement, and the action of Q
    on N by conjugation (image tuples per Q-element, in N-subgroup indices)."""
    n: Subgroup
    q: Subgroup
    action: tuple[tuple[int, ...], ...]


def semidirect_decompositions(G: FiniteGroup, cap: int = DEFAULT_CAP):
    """All decompositions G = N : Q with N abelian normal.

    Includes the trivial ones (N = 1, Q = G; and N = G, Q = 1 when G is
    abelian).  Deterministic order: by (|N|, N elements, Q elements).
    """
    subs = all_subgroups(G, cap=cap)
    by_order: dict[int, list[Subgroup]] = {}
    for s in subs:
        by_order.setdefault(s.order, []).append(s)
    out = []
    for N in abelian_normal_subgroups(G):
        want = G.n // N.order
        for Q in by_order.get(want, []):
            inter = set(N.elements) & set(Q.elements)
            if inter != {G.identity}:
                continue
            Ngrp, Nelems = N.as_group()
            pos = {g: i for i, g in enumerate(Nelems)}
            action = []
            ok = True
            for q in Q.elements:
                imgs = tuple(pos[G.conj(s, q)] for s in Nelems)
                if len(set(imgs)) != len(imgs):
                    ok = False
                    break
                action.append(imgs)
            if ok:
                out.append(SemidirectDecomposition(N, Q, tuple(action)))
    out.sort(key=lambda d: (d.n.order, d.n.elements, d.q.elements))
    return out


def quotient(G: FiniteGroup, N: Subgroup):
    """(G/N, projection morphism); raises NotNormal.

    Cosets are indexed in order of their minimal member; the coset of the
    identity is index 0.
    """
    if N.parent is not G:
        raise ValueError("subgroup of a different parent")
    if not N.is_normal():
        raise NotNormal(f"subgroup {N.elements} is not normal in {G.name}")
    coset_of = np.full(G.n, -1, dtype=np.int64)
    reps: list[int] = []
    S = np.asarray(N.elements)
    for g in range(G.n):
        if coset_of[g] >= 0:
            continue
        idx = len(reps)
        reps.append(g)
        coset_of[G.table[g, S]] = idx
    m = len(reps)
    table = [[int(coset_of[G.mul(reps[i], reps[j])]) for j in range(m)]
             for i in range(m)]
    Q = FiniteGroup(
        table,
        names=tuple(f"{G.names[r]}N" for r in reps),
        name=f"{G.name}/N{N.order}",
        validate=False,
    )
    proj = GroupMorphism(G, Q, tuple(int(x) for x in coset_of), check=False)
    return Q, proj


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def direct_product(A: FiniteGroup, B: FiniteGroup, name=None) -> FiniteGroup:
    """A x B with pairs ordered lexicographically (A-coordinate major)."""
    n, m = A.n, B.n
    table = np.empty((n * m, n * m), dtype=np.int64)
    for a1 in range(n):
        for b1 in range(m):
            row = (A.table[a1][:, None] * m + B.table[b1][None, :])
            table[a1 * m + b1] = row.reshape(-1)
    names = tuple(
        f"({A.names[a]},{B.names[b]})" for a in range(n) for b in range(m)
    )
    return FiniteGroup(
        table, names=names, name=name or f"{A.name}x{B.name}", validate=False
    )


def opposite_group(G: FiniteGroup) -> FiniteGroup:
    """Same elements, reversed multiplication."""
    return FiniteGroup(
        G.table.T.copy(), names=G.names, name=f"{G.name}^op", validate=False
    )


def semidirect_product(N: FiniteGroup, Q: FiniteGroup, action) -> FiniteGroup:
    """N : Q for a homomorphism Q -> Aut(N).

    ``action`` is a sequence of |Q| image tuples (the automorphism of N given
    by each q).  Raises BadSemidirectAction if some tuple is not an
    automorphism or q -> alpha_q is not a homomorphism.
    """
    action = [tuple(int(x) for x in a) for a in action]
    if len(action) != Q.n:
        raise BadSemidirectAction("need one automorphism per element of Q")
    for q, imgs in enumerate(action):
        if sorted(imgs) != list(range(N.n)):
            raise BadSemidirectAction(
                f"action of {Q.names[q]} is not a bijection of N"
            )
        try:
            GroupMorphism(N, N, imgs, check=True)
        except NotAnAutomorphism as exc:
            raise BadSemidirectAction(
                f"action of {Q.names[q]} is not an automorphism: {exc}"
            ) from exc
    for q1 in range(Q.n):
        for q2 in range(Q.n):
            composed = tuple(action[q1][x] for x in action[q2])
            if composed != action[Q.mul(q1, q2)]:
                raise BadSemidirectAction(
                    f"q -> alpha_q is not a homomorphism at "
                    f"({Q.names[q1]}, {Q.names[q2]})"
                )
    m = Q.n
    size = N.n * m
    table = np.empty((size, size), dtype=np.int64)
    for n1 in range(N.n):
        for q1 in range(m):
            a = action[q1]
            for n2 in range(N.n):
                prod_n = N.table[n1, a[n2]]
                table[n1 * m + q1, n2 * m:(n2 + 1) * m] = (
                    prod_n * m + Q.table[q1]
                )
    names = tuple(
        f"({N.names[i]},{Q.names[j]})" for i in range(N.n) for j in range(m)
    )
    return FiniteGroup(
        table, names=names, name=f"{N.name}:{Q.name}", validate=False
    )


# ---------------------------------------------------------------------------
# permutation groups and the naming mini-language
# ---------------------------------------------------------------------------

def _perm_name(perm: tuple[int, ...]) -> str:
    """Cycle notation on 1-based points, fixed points omitted."""
    seen = [False] * len(perm)
    cycles = []
    for i in range(len(perm)):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        cycles.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
    return "".join(cycles) if cycles else "e"


def _group_from_perms(perms: list[tuple[int, ...]], name: str) -> FiniteGroup:
    perms = sorted(set(perms))
    pos = {p: i for i, p in enumerate(perms)}
    table = [
        [pos[tuple(a[b[i]] for i in range(len(a)))] for b in perms]
        for a in perms
    ]
    return FiniteGroup(
        table,
        names=tuple(_perm_name(p) for p in perms),
        name=name,
        validate=False,
    )


def _perm_closure(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    npts = len(gens[0])
    ident = tuple(range(npts))
    have = {ident}
    queue = [ident]
    while queue:
        a = queue.pop()
        for g in gens:
            prod = tuple(a[g[i]] for i in range(npts))
            if prod not in have:
                have.add(prod)
                queue.append(prod)
    return sorted(have)


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on points 1..n; elements sorted lexicographically as one-line
    permutations, composed as (a*b)(i) = a(b(i))."""
    return _group_from_perms(list(permutations(range(n))), f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    def sign(p):
        s, seen = 1, [False] * len(p)
        for i in range(len(p)):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    evens = [p for p in permutations(range(n)) if sign(p) == 1]
    return _group_from_perms(evens, f"A{n}")


def cyclic_group(n: int) -> FiniteGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(
        table, names=tuple(str(i) for i in range(n)), name=f"Z/{n}",
        validate=False,
    )


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    G = cyclic_group(p)
    out = G
    for _ in range(k - 1):
        out = direct_product(out, G)
    out.name = f"Z/{p}^{k}"
    return out


def dihedral_group_8() -> FiniteGroup:
    """Symmetries of a square as permutations of its 4 vertices; generated by
    two reflections x, y with x^2 = y^2 = (xy)^4 = e."""
    r = (1, 2, 3, 0)   # (1 2 3 4)
    s = (2, 1, 0, 3)   # (1 3)
    G = _group_from_perms(_perm_closure([r, s]), "D4")
    return G


def quaternion_group() -> FiniteGroup:
    """Q8 = {1, -1, i, -i, j, -j, k, -k}."""
    names = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    axis = {0: "1", 1: "1", 2: "i", 3: "i", 4: "j", 5: "j", 6: "k", 7: "k"}
    sign = {i: (1 if i % 2 == 0 else -1) for i in range(8)}
    mul_axis = {
        ("1", "1"): ("1", 1), ("1", "i"): ("i", 1), ("1", "j"): ("j", 1),
        ("1", "k"): ("k", 1), ("i", "1"): ("i", 1), ("j", "1"): ("j", 1),
        ("k", "1"): ("k", 1), ("i", "i"): ("1", -1), ("j", "j"): ("1", -1),
        ("k", "k"): ("1", -1), ("i", "j"): ("k", 1), ("j", "i"): ("k", -1),
        ("j", "k"): ("i", 1), ("k", "j"): ("i", -1), ("k", "i"): ("j", 1),
        ("i", "k"): ("j", -1),
    }
    idx = {("1", 1): 0, ("1", -1): 1, ("i", 1): 2, ("i", -1): 3,
           ("j", 1): 4, ("j", -1): 5, ("k", 1): 6, ("k", -1): 7}
    table = [[0] * 8 for _ in range(8)]
    for a in range(8):
        for b in range(8):
            ax, sg = mul_axis[(axis[a], axis[b])]
            table[a][b] = idx[(ax, sg * sign[a] * sign[b])]
    return FiniteGroup(table, names=names, name="Q8", validate=False)


def permutation_group(spec: str) -> FiniteGroup:
    """Closure of generators given in cycle notation, e.g. "(1 2 3)(4 5),(1 2)"."""
    gen_strs = [s.strip() for s in spec.split(",") if s.strip()]
    if not gen_strs:
        raise UnknownName("empty permutation generator list")
    cycles_per_gen = []
    maxpt = 0
    for gs in gen_strs:
        if not gs.startswith("("):
            raise UnknownName(f"bad cycle string {gs!r}")
        cycles = []
        for part in gs.replace(")(", ")|(").split("|"):
            body = part.strip()
            if not (body.startswith("(") and body.endswith(")")):
                raise UnknownName(f"bad cycle string {gs!r}")
            pts = [int(x) for x in body[1:-1].replace(",", " ").split()]
            if len(pts) != len(set(pts)) or any(p < 1 for p in pts):
                raise UnknownName(f"bad cycle {body!r}")
            cycles.append(pts)
            maxpt = max(maxpt, max(pts))
        cycles_per_gen.append(cycles)
    gens = []
    for cycles in cycles_per_gen:
        perm = list(range(maxpt))
        for cyc in cycles:
            for i, p in enumerate(cyc):
                perm[p - 1] = cyc[(i + 1) % len(cyc)] - 1
        gens.append(tuple(perm))
    return _group_from_perms(_perm_closure(gens), f"perm<{spec}>")


def _parse_semidirect(text: str) -> FiniteGroup:
    head, _, action_spec = text.partition("@")
    npart, _, qpart = head.partition(":")
    N = named_group(npart.strip())
    Q = named_group(qpart.strip())
    # Bare "N:Q" means the inversion action (so "Z/3:Z/2" is the S3-shaped
    # semidirect product); write "NxQ" for the direct product.
    action_spec = action_spec.strip() or "inv"
    # Q must be cyclic for the shorthand actions: the named automorphism is
    # what a chosen generator of Q does.
    gen = None
    for q in range(Q.n):
        if Q.order_of(q) == Q.n:
            gen = q
            break
    if gen is None:
        raise BadSemidirectAction(
            f"Q = {Q.name} is not cyclic; use an explicit action"
        )
    if action_spec == "id":
        alpha = tuple(range(N.n))
    elif action_spec == "inv":
        alpha = tuple(int(N.inv[x]) for x in range(N.n))
    elif action_spec.startswith("["):
        body = action_spec.strip("[]")
        alpha = tuple(int(x) for x in body.replace(",", " ").split())
        if len(alpha) != N.n:
            raise BadSemidirectAction(
                f"explicit action needs {N.n} images, got {len(alpha)}"
            )
    else:
        raise BadSemidirectAction(f"unknown action {action_spec!r}")
    try:
        GroupMorphism(N, N, alpha, check=True)
    except NotAnAutomorphism as exc:
        raise BadSemidirectAction(str(exc)) from exc
    # alpha^|Q| must be the identity for q -> alpha^j to be a homomorphism
    power = tuple(range(N.n))
    action = [None] * Q.n
    g = Q.identity
    for j in range(Q.n):
        action[g] = power
        power = tuple(alpha[x] for x in power)
        g = Q.mul(g, gen)
    if any(a is None for a in action):
        raise BadSemidirectAction("generator powers do not cover Q")
    return semidirect_product(N, Q, action)


ORDER_CAP = 200


def named_group(spec: str, cap: int = ORDER_CAP) -> FiniteGroup:
    """Resolve a group name.

    Supported: "S3".."S5", "A4", "A5", "D4", "Q8", "Z/n", "Z/p^k"
    (elementary abelian), "N:Q@inv|id|[images]" (semidirect with cyclic Q;
    bare "N:Q" means the inversion action), "perm:<generators in cycle
    notation>", and "AxB" direct products of any of these.  Raises
    UnknownName for anything else and CapExceeded past the order cap
    (default 200; dense-table algorithms are only sane at desk scale).
    """
    G = _named_group_inner(spec)
    if G.n > cap:
        raise CapExceeded(f"group {spec!r} has order {G.n} > cap {cap}")
    return G


def _named_group_inner(spec: str) -> FiniteGroup:
    spec = spec.strip()
    if ":" in spec and not spec.startswith("perm:"):
        return _parse_semidirect(spec)
    if spec.startswith("perm:"):
        return permutation_group(spec[len("perm:"):])
    if "x" in spec and not spec.startswith("perm"):
        parts = spec.split("x")
        try:
            groups = [named_group(p) for p in parts]
        except UnknownName:
            raise UnknownName(f"unknown group name {spec!r}") from None
        out = groups[0]
        for g in groups[1:]:
            out = direct_product(out, g)
        out.name = spec
        return out
    fixed = {
        "S3": lambda: symmetric_group(3),
        "S4": lambda: symmetric_group(4),
        "S5": lambda: symmetric_group(5),
        "A4": lambda: alternating_group(4),
        "A5": lambda: alternating_group(5),
        "D4": dihedral_group_8,
        "Q8": quaternion_group,
    }
    if spec in fixed:
        return fixed[spec]()
    if spec.startswith("Z/"):
        body = spec[2:]
        if "^" in body:
            base, _, exp = body.partition("^")
            try:
                p, k = int(base), int(exp)
            except ValueError:
                raise UnknownName(f"unknown group name {spec!r}") from None
            if p < 2 or k < 1:
                raise UnknownName(f"unknown group name {spec!r}")
            return elementary_abelian(p, k)
        try:
            n = int(body)
        except ValueError:
            raise UnknownName(f"unknown group name {spec!r}") from None
        if n < 1:
            raise UnknownName(f"unknown group name {spec!r}")
        return cyclic_group(n)
    raise UnknownName(f"unknown group name {spec!r}")
