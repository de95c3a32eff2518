"""Braided autoequivalences of the center, as permutations of simple objects.

Autoequivalences are represented extensionally: a total (or partial)
permutation of the simple objects of the center, verified against the exact
modular data.  Construction data (automorphism, cocycle, subgroup/pairing)
is retained as provenance so that bimodule-category invariants can be
derived from the construction rather than from the permutation.

Composition convention: ``compose(F, H)`` applies H first, then F, and a
generator word (i1, ..., ik) denotes g_{i1} after ... after g_{ik}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .center import ModularData, modular_data, simple_objects
from .chars import (
    centralizer_table,
    character_table,
    clifford_decomposition,
    find_character,
)
from .cohom import (
    Cocycle2,
    Pairing,
    antisymmetrize,
    dual_element,
    is_lazy,
    is_nondegenerate,
    lazy_representative,
)
from .cyclo import root_of_unity
from .errors import (
    BudgetExceeded,
    CapExceeded,
    ConditionFailed,
    Degenerate,
    DomainMismatch,
    NoComplement,
    NoExtension,
    NotAbelianNormal,
    NotAnAutomorphism,
    NotASubgroup,
    NotBraided,
    NotLazy,
    NotSelfDual,
    TwistNotCharacter,
    UnsupportedProvenance,
)
from .groups import (
    FiniteGroup,
    GroupMorphism,
    Subgroup,
    all_subgroups,
    class_of,
    conjugacy_classes,
    direct_product,
    first_conjugator,
    identity_morphism,
    named_group,
    opposite_group,
    quotient,
)

__all__ = [
    "Provenance",
    "BraidedAutoeq",
    "PartialBrEq",
    "BimoduleData",
    "PreservationReport",
    "GeneratedGroup",
    "identity_autoeq",
    "from_hopf_auto",
    "from_bv",
    "from_ev_lazy",
    "self_dual_pairing",
    "partial_dualization_rprime",
    "complete_extensions",
    "compose",
    "inverse",
    "equal",
    "generate_group",
    "preserves_modular_data",
    "bimodule_data",
    "autoeq_to_json",
    "autoeq_from_json",
]

GENERATE_CAP = 1_000_000
EXTENSION_NODE_BUDGET = 1_000_000


@dataclass(frozen=True)
class Provenance:
    """How an autoequivalence was built.

    kind is one of "v", "bv", "ev", "rprime", "composite", "searched";
    data holds the construction objects (morphisms, cocycles, subgroups) for
    the elementary kinds and the factor provenances for "composite".
    """

    kind: str
    data: tuple = ()


class PreservationReport:
    """Boolean result of an S/T-preservation check with a failure witness."""

    __slots__ = ("ok", "witness")

    def __init__(self, ok: bool, witness: Optional[str] = None):
        self.ok = ok
        self.witness = witness

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self):
        return f"PreservationReport(ok={self.ok}, witness={self.witness!r})"


def _check_preservation(md: ModularData, mapping) -> PreservationReport:
    S, T = md.S, md.T
    ns = md.size
    for i in range(ns):
        if T[mapping[i]] != T[i]:
            return PreservationReport(
                False, f"T mismatch: object {i} -> {mapping[i]}"
            )
    for i in range(ns):
        for j in range(i, ns):
            if S[mapping[i], mapping[j]] != S[i, j]:
                return PreservationReport(
                    False,
                    f"S mismatch at ({i}, {j}) -> ({mapping[i]}, {mapping[j]})",
                )
    return PreservationReport(True)


class BraidedAutoeq:
    """A total braided autoequivalence: a verified permutation of simples.

    Construction checks (and refuses with NotBraided otherwise) that the
    mapping is a bijection fixing the unit object, preserving quantum
    dimensions, and commuting with the exact S and T matrices.
    """

    __slots__ = ("group", "mapping", "provenance")

    def __init__(self, group: FiniteGroup, mapping,
                 provenance: Provenance = Provenance("searched")):
        mapping = tuple(int(x) for x in mapping)
        md = modular_data(group)
        ns = md.size
        if sorted(mapping) != list(range(ns)):
            raise NotBraided(
                f"mapping is not a bijection of the {ns} simple objects"
            )
        unit = _unit_index(group)
        if mapping[unit] != unit:
            raise NotBraided(f"unit object {unit} moved to {mapping[unit]}")
        simples = simple_objects(group)
        for i, s in enumerate(simples):
            if simples[mapping[i]].qdim != s.qdim:
                raise NotBraided(
                    f"quantum dimension changes at object {i}"
                )
        rep = _check_preservation(md, mapping)
        if not rep:
            raise NotBraided(rep.witness)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "mapping", mapping)
        object.__setattr__(self, "provenance", provenance)

    def __setattr__(self, name, value):
        raise AttributeError("BraidedAutoeq instances are immutable")

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def is_identity(self) -> bool:
        return all(t == i for i, t in enumerate(self.mapping))

    def __eq__(self, other):
        if not isinstance(other, BraidedAutoeq):
            return NotImplemented
        return self.group == other.group and self.mapping == other.mapping

    def __hash__(self):
        return hash((self.mapping, self.group.n))

    def __repr__(self):
        return (
            f"BraidedAutoeq({self.group.name}, {self.mapping}, "
            f"kind={self.provenance.kind!r})"
        )


@dataclass(eq=False)
class PartialBrEq:
    """A partially-determined braided map on simple objects.

    ``mapping`` holds the determined images; ``candidates`` holds, for each
    still-ambiguous source, the tuple of admissible targets (always at least
    two).  Raises NoExtension if a source has no admissible target at all.
    """

    group: FiniteGroup
    mapping: dict[int, int]
    candidates: dict[int, tuple[int, ...]]
    provenance: Provenance

    def __post_init__(self):
        self.mapping = {int(k): int(v) for k, v in self.mapping.items()}
        targets = list(self.mapping.values())
        if len(set(targets)) != len(targets):
            raise NoExtension("determined images are not injective")
        clean = {}
        for k, pool in self.candidates.items():
            pool = tuple(sorted(int(t) for t in pool))
            if not pool:
                raise NoExtension(f"source {k} has no admissible target")
            if int(k) in self.mapping:
                raise NoExtension(f"source {k} is both determined and open")
            clean[int(k)] = pool
        self.candidates = clean

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.mapping) | set(self.candidates)))

    def __repr__(self):
        return (
            f"PartialBrEq({self.group.name}, determined={self.mapping}, "
            f"open={self.candidates}, kind={self.provenance.kind!r})"
        )


@dataclass(eq=False)
class BimoduleData:
    """The subgroup-and-cocycle invariant of an invertible bimodule category.

    ``U`` is a subgroup of G x G^op, ``U1``/``U2`` its intersections with the
    factors (returned as subgroups of G), ``eta_class`` a description of the
    2-cocycle datum, and ``conditions`` the three verified conditions
    (surjectivity onto both factors, abelian intersections, nondegenerate
    pairing; None = not computable from the stored description).
    """

    U: Subgroup
    eta_class: str
    U1: Subgroup
    U2: Subgroup
    conditions: tuple


class GeneratedGroup(NamedTuple):
    order: int
    elements: tuple
    words: tuple


# ---------------------------------------------------------------------------
# shared lookups
# ---------------------------------------------------------------------------

def _simple_index(G: FiniteGroup) -> dict:
    key = ("simple_index",)
    if key not in G._memo:
        G._memo[key] = {
            (s.class_index, s.char_index): i
            for i, s in enumerate(simple_objects(G))
        }
    return G._memo[key]


def _unit_index(G: FiniteGroup) -> int:
    return _simple_index(G)[(class_of(G, G.identity), 0)]


def _fingerprints(md: ModularData):
    """Per-object invariant (qdim row entry, twist, sorted S-row) preserved
    by every braided autoequivalence; used to prune candidate targets."""
    S, T = md.S, md.T
    ns = md.size
    out = []
    for i in range(ns):
        row = tuple(sorted(S[i, j].key() for j in range(ns)))
        out.append((S[0, i].key(), T[i].key(), row))
    return out


def _is_identity_morphism(v: GroupMorphism) -> bool:
    return all(v(g) == g for g in range(v.source.n))


# ---------------------------------------------------------------------------
# V and BV constructors
# ---------------------------------------------------------------------------

def identity_autoeq(G: FiniteGroup) -> BraidedAutoeq:
    return from_hopf_auto(identity_morphism(G), G)


def from_hopf_auto(v: GroupMorphism, G: Optional[FiniteGroup] = None
                   ) -> BraidedAutoeq:
    """The autoequivalence induced by a group automorphism:
    (class of g, chi) -> (class of v(g), chi after v^-1)."""
    if G is None:
        G = v.target
    if v.source != G or v.target != G or not v.is_automorphism():
        raise NotAnAutomorphism(f"{v!r} is not an automorphism of {G.name}")
    return _twisted_transport(G, v, None, Provenance("v", (v,)))


def from_bv(v: GroupMorphism, mu: Cocycle2,
            G: Optional[FiniteGroup] = None) -> BraidedAutoeq:
    """Automorphism plus monoidal 2-cocycle twist:
    (g, chi) -> (v(g), chi(v^-1(.)) times the mu-commutator character)."""
    if G is None:
        G = v.target
    if v.source != G or v.target != G or not v.is_automorphism():
        raise NotAnAutomorphism(f"{v!r} is not an automorphism of {G.name}")
    if mu.group != G:
        raise DomainMismatch("cocycle lives on a different group")
    return _twisted_transport(G, v, mu, Provenance("bv", (v, mu)))


def _twisted_transport(G, v, mu, provenance) -> BraidedAutoeq:
    simples = simple_objects(G)
    index_of = _simple_index(G)
    classes = conjugacy_classes(G)
    vinv = v.inverse()
    mapping = [0] * len(simples)

    # per source class: target class, conjugator to its representative, and
    # the verified additive twist t(u) = mu(v^-1 u, g) - mu(g, v^-1 u)
    class_info = {}
    for cl in classes:
        g = cl.rep
        h = v(g)
        cj = class_of(G, h)
        r = classes[cj].rep
        c = first_conjugator(G, h, r)
        cent_h = [x for x in range(G.n) if G.mul(x, h) == G.mul(h, x)]
        twist = None
        if mu is not None:
            m = mu.m
            vals = mu.values
            twist = {
                u: int(vals[vinv(u), g] - vals[g, vinv(u)]) % m
                for u in cent_h
            }
            for u1 in cent_h:
                for u2 in cent_h:
                    if (twist[G.mul(u1, u2)]
                            - twist[u1] - twist[u2]) % m:
                        raise TwistNotCharacter(
                            f"twist at class of {G.names[g]} is not "
                            f"multiplicative on ({G.names[u1]}, {G.names[u2]})"
                        )
        class_info[cl.index] = (cj, c, twist)

    for i, s in enumerate(simples):
        g = classes[s.class_index].rep
        Hg, elems_g, table_g = centralizer_table(G, g)
        pos_g = {e: k for k, e in enumerate(elems_g)}
        chi = table_g[s.char_index]
        cj, c, twist = class_info[s.class_index]
        r = classes[cj].rep
        Hr, elems_r, _ = centralizer_table(G, r)
        cinv = G.inv_of(c)
        vals = []
        for cc in conjugacy_classes(Hr):
            y = elems_r[cc.rep]
            u = G.mul(G.mul(cinv, y), c)          # in Cent(v(g))
            w = vinv(u)                           # in Cent(g)
            val = chi.value_at_element(pos_g[w])
            if twist is not None and twist[u]:
                val = val * root_of_unity(mu.m, twist[u])
            vals.append(val)
        j = find_character(Hr, vals)
        mapping[i] = index_of[(cj, j)]

    return BraidedAutoeq(G, mapping, provenance)


# ---------------------------------------------------------------------------
# dualization partials (EV and R')
# ---------------------------------------------------------------------------

def _dualization_partial(G, S, pairing, provenance) -> PartialBrEq:
    """Common core of the EV and R' constructions: each irreducible V of G
    goes to the class of the pairing-dual of a Clifford constituent of V|_S,
    with the target character narrowed by preserved invariants.

    Sources whose restriction meets only the trivial character of S map to
    themselves exactly (the construction's twisting modules are trivial
    there)."""
    md = modular_data(G)
    index_of = _simple_index(G)
    classes = conjugacy_classes(G)
    unit_class = class_of(G, G.identity)
    fps = _fingerprints(md)
    table = character_table(G)
    cand: dict[int, list[int]] = {}

    for k, chi in enumerate(table):
        src = index_of[(unit_class, k)]
        comps = clifford_decomposition(chi, S)
        duals = {class_of(G, dual_element(pairing, c.linear_char))
                 for c in comps}
        # the pairing is G-equivariant, so the dual orbit is one class
        assert len(duals) == 1, "pairing is not equivariant on the orbit"
        cj = duals.pop()
        if cj == unit_class:
            # the restriction meets only the trivial character of S, so the
            # twisting modules are trivial and the source maps to itself
            cand[src] = [src]
            continue
        _, _, target_table = centralizer_table(G, classes[cj].rep)
        pool = [
            index_of[(cj, j)]
            for j in range(len(target_table))
            if fps[index_of[(cj, j)]] == fps[src]
        ]
        if not pool:
            raise NoExtension(
                f"no admissible target over class {cj} for source {src}"
            )
        cand[src] = pool

    _refine_candidates(md, cand)
    mapping = {a: pool[0] for a, pool in cand.items() if len(pool) == 1}
    open_cand = {a: tuple(pool) for a, pool in cand.items() if len(pool) > 1}
    return PartialBrEq(G, mapping, open_cand, provenance)


def _refine_candidates(md: ModularData, cand: dict[int, list[int]]) -> None:
    """Arc-consistency pass: a target survives only if every other source
    retains a distinct partner with the same S-entry as the source pair."""
    S = md.S
    changed = True
    while changed:
        changed = False
        for a, pool_a in cand.items():
            keep = []
            for t in pool_a:
                ok = True
                for b, pool_b in cand.items():
                    if b == a:
                        continue
                    if not any(
                        u != t and S[t, u] == S[a, b] for u in pool_b
                    ):
                        ok = False
                        break
                if ok:
                    keep.append(t)
            if not keep:
                raise NoExtension(
                    f"source {a} has no S-consistent target left"
                )
            if len(keep) != len(pool_a):
                cand[a] = keep
                changed = True


def from_ev_lazy(S: Subgroup, eta: Cocycle2,
                 v: Optional[GroupMorphism] = None,
                 G: Optional[FiniteGroup] = None) -> PartialBrEq:
    """The dualization along an abelian normal subgroup with a lazy,
    nondegenerate 2-cocycle: O_1^V -> O_[s_i]^(twisted multiplicity).

    ``eta`` may be any representative of its class; an invariant one is
    located first (NotLazy if none exists).  A non-identity ``v`` is applied
    on top of the v = id reduction."""
    if G is None:
        G = S.parent
    if S.parent != G:
        raise NotASubgroup("S does not live in the given group")
    if not (S.is_abelian() and S.is_normal()):
        raise NotAbelianNormal(f"{S!r} is not abelian normal")
    Sgrp, _ = S.as_group()
    if eta.group == G:
        eta = eta.restrict(S)
    elif eta.group != Sgrp:
        raise DomainMismatch("cocycle lives on neither G nor S")
    if not is_lazy(eta, G, S):
        fixed = lazy_representative(eta, G, S)
        if fixed is None:
            raise NotLazy(
                "no conjugation-invariant representative in the class"
            )
        eta = fixed
    pairing = antisymmetrize(eta, S)
    if not is_nondegenerate(pairing):
        raise Degenerate("the antisymmetrization pairing is degenerate on S")

    partial = _dualization_partial(
        G, S, pairing, Provenance("ev", (S, eta, v))
    )
    if v is not None and not _is_identity_morphism(v):
        F = from_hopf_auto(v, G)
        partial = PartialBrEq(
            G,
            {a: F.mapping[t] for a, t in partial.mapping.items()},
            {a: tuple(sorted(F.mapping[t] for t in pool))
             for a, pool in partial.candidates.items()},
            Provenance("ev", (S, eta, v)),
        )
    return partial


def self_dual_pairing(N: Subgroup, Q, action=None) -> Optional[Pairing]:
    """Search for a nondegenerate bimultiplicative Q-equivariant pairing
    N x N -> mu_m with m = exp(N); None if the module is not self-dual.

    ``action`` defaults to conjugation by Q inside the common parent; an
    explicit action is a sequence of |Q| position-permutations of N."""
    if not N.is_abelian():
        raise NotAbelianNormal(f"{N!r} is not abelian")
    Ngrp, elems = N.as_group()
    n = Ngrp.n
    perms = _q_action_perms(N, Q, action)

    table = character_table(Ngrp)
    # value of character c at element x (abelian: class index = element index)
    m = Ngrp.exponent()
    expo = np.zeros((len(table), n), dtype=np.int64)
    for ci, ch in enumerate(table):
        for x in range(n):
            order, k = ch.value_at_element(x).as_root_of_unity()
            expo[ci, x] = (k * (m // order)) % m

    gens = Ngrp.minimal_generators()
    hom: dict[int, int] = {Ngrp.identity: 0}     # element -> character index

    def assign(gi: int) -> Optional[np.ndarray]:
        if gi == len(gens):
            V = np.zeros((n, n), dtype=np.int64)
            for a, ca in hom.items():
                V[a] = expo[ca]
            if len({tuple(r) for r in V}) != n:
                return None                      # rows repeat: degenerate
            for q in perms:
                if not np.array_equal(V[np.ix_(q, q)], V):
                    return None                  # not Q-equivariant
            return V
        g = gens[gi]
        for ci in range(len(table)):
            trial = dict(hom)
            ok = True
            frontier = [(g, ci)]
            while frontier and ok:
                x, cx = frontier.pop()
                if x in trial:
                    if trial[x] != cx:
                        ok = False
                    continue
                trial[x] = cx
                for y, cy in list(trial.items()):
                    xy = Ngrp.mul(x, y)
                    cxy = find_character(
                        Ngrp,
                        tuple(
                            table[cx].values[i] * table[cy].values[i]
                            for i in range(n)
                        ),
                    )
                    frontier.append((xy, cxy))
            if not ok:
                continue
            saved = dict(hom)
            hom.clear()
            hom.update(trial)
            V = assign(gi + 1)
            if V is not None:
                return V
            hom.clear()
            hom.update(saved)
        return None

    V = assign(0)
    if V is None:
        return None
    return Pairing(N, m, V)


def _q_action_perms(N: Subgroup, Q, action):
    """Position-permutations of N for each element of Q."""
    Ngrp, elems = N.as_group()
    if action is not None:
        perms = [tuple(int(x) for x in p) for p in action]
        for p in perms:
            if sorted(p) != list(range(Ngrp.n)):
                raise NotSelfDual("action entry is not a permutation of N")
        return perms
    if not isinstance(Q, Subgroup) or Q.parent != N.parent:
        raise NotASubgroup("Q must be a subgroup of the same parent group")
    G = N.parent
    pos = {e: i for i, e in enumerate(elems)}
    perms = []
    for q in Q.elements:
        img = []
        for e in elems:
            moved = G.conj(e, q)
            if moved not in pos:
                raise NotSelfDual("Q does not normalize N")
            img.append(pos[moved])
        perms.append(tuple(img))
    return perms


def partial_dualization_rprime(N: Subgroup, Q: Optional[Subgroup] = None,
                               pairing: Optional[Pairing] = None,
                               G: Optional[FiniteGroup] = None) -> PartialBrEq:
    """Partial dualization along an abelian normal factor of G = N : Q.

    A complement Q is located if not supplied (NoComplement when none
    exists); the pairing must be (or is searched as) a Q-equivariant
    nondegenerate self-duality of N (NotSelfDual otherwise)."""
    if G is None:
        G = N.parent
    if N.parent != G:
        raise NotASubgroup("N does not live in the given group")
    if not (N.is_abelian() and N.is_normal()):
        raise NotAbelianNormal(f"{N!r} is not abelian normal")
    if Q is None:
        Q = _find_complement(G, N)
        if Q is None:
            raise NoComplement(f"no complement of order {G.n // N.order}")
    else:
        if Q.parent != G or not _is_complement(G, N, Q):
            raise NoComplement(f"{Q!r} is not a complement of N")
    if pairing is None:
        pairing = self_dual_pairing(N, Q)
        if pairing is None:
            raise NotSelfDual(
                "N admits no Q-equivariant nondegenerate self-pairing"
            )
    else:
        if pairing.subgroup != N:
            raise NotSelfDual("pairing is defined on a different subgroup")
        if not is_nondegenerate(pairing):
            raise NotSelfDual("pairing is degenerate")
        _, elems = N.as_group()
        pos = {e: i for i, e in enumerate(elems)}
        for q in Q.elements:
            perm = [pos[G.conj(e, q)] for e in elems]
            if not np.array_equal(
                pairing.values[np.ix_(perm, perm)], pairing.values
            ):
                raise NotSelfDual(
                    f"pairing is not equivariant under {G.names[q]}"
                )
    return _dualization_partial(
        G, N, pairing, Provenance("rprime", (N, Q, pairing))
    )


def _is_complement(G, N, Q) -> bool:
    if N.order * Q.order != G.n:
        return False
    inter = set(N.elements) & set(Q.elements)
    return inter == {G.identity}


def _find_complement(G, N) -> Optional[Subgroup]:
    want = G.n // N.order
    for H in all_subgroups(G):
        if H.order == want and _is_complement(G, N, H):
            return H
    return None


# ---------------------------------------------------------------------------
# completion search
# ---------------------------------------------------------------------------

def complete_extensions(partial: PartialBrEq,
                        md: Optional[ModularData] = None,
                        cap: int = EXTENSION_NODE_BUDGET
                        ) -> list[BraidedAutoeq]:
    """All total braided autoequivalences extending a partial map.

    Backtracking over the undetermined sources with fingerprint and
    incremental S-consistency pruning; raises NoExtension when the partial
    map admits no completion and BudgetExceeded past ``cap`` search nodes."""
    G = partial.group
    if md is None:
        md = modular_data(G)
    S = md.S
    ns = md.size
    fps = _fingerprints(md)

    assigned = dict(partial.mapping)
    for a, t in assigned.items():
        if fps[a] != fps[t]:
            raise NoExtension(
                f"determined image {a} -> {t} changes preserved invariants"
            )
    items = list(assigned.items())
    for x, (a, t) in enumerate(items):
        for b, u in items[x + 1:]:
            if S[t, u] != S[a, b]:
                raise NoExtension(
                    f"determined images at ({a}, {b}) break the S-matrix"
                )

    pools = {}
    for src in range(ns):
        if src in assigned:
            continue
        base = partial.candidates.get(src, range(ns))
        pool = sorted(t for t in base if fps[t] == fps[src])
        if not pool:
            raise NoExtension(f"source {src} has no admissible target")
        pools[src] = pool

    order = sorted(pools, key=lambda s: (len(pools[s]), s))
    results: list[tuple[int, ...]] = []
    nodes = 0

    def dfs(idx: int):
        nonlocal nodes
        if idx == len(order):
            full = [0] * ns
            for a, t in assigned.items():
                full[a] = t
            results.append(tuple(full))
            return
        src = order[idx]
        used = set(assigned.values())
        for t in pools[src]:
            if t in used:
                continue
            nodes += 1
            if nodes > cap:
                raise BudgetExceeded(
                    f"completion search exceeded {cap} nodes"
                )
            if all(S[t, u] == S[src, b] for b, u in assigned.items()):
                assigned[src] = t
                dfs(idx + 1)
                del assigned[src]

    dfs(0)
    if not results:
        raise NoExtension("partial map admits no braided completion")
    prov = Provenance("searched", (partial.provenance,))
    return [BraidedAutoeq(G, m, prov) for m in sorted(results)]


# ---------------------------------------------------------------------------
# group structure
# ---------------------------------------------------------------------------

def compose(F: BraidedAutoeq, H: BraidedAutoeq) -> BraidedAutoeq:
    """F after H."""
    if F.group != H.group:
        raise DomainMismatch("autoequivalences live over different groups")
    mapping = tuple(F.mapping[t] for t in H.mapping)
    return BraidedAutoeq(
        F.group, mapping,
        Provenance("composite", (F.provenance, H.provenance)),
    )


def inverse(F: BraidedAutoeq) -> BraidedAutoeq:
    inv = [0] * len(F.mapping)
    for i, t in enumerate(F.mapping):
        inv[t] = i
    return BraidedAutoeq(
        F.group, inv, Provenance("composite", (F.provenance,))
    )


def equal(F: BraidedAutoeq, H: BraidedAutoeq) -> bool:
    if F.group != H.group:
        raise DomainMismatch("autoequivalences live over different groups")
    return F.mapping == H.mapping


def generate_group(generators, cap: int = GENERATE_CAP,
                   group: Optional[FiniteGroup] = None) -> GeneratedGroup:
    """BFS closure under composition with shortest-word provenance.

    Element order is discovery order (identity first, then by word length);
    the word (i1, ..., ik) stands for generators[i1] after ... after
    generators[ik]."""
    gens = list(generators)
    for F in gens:
        if group is None:
            group = F.group
        elif F.group != group:
            raise DomainMismatch("generators live over different groups")
    if group is None:
        return GeneratedGroup(1, (), ())

    ident = identity_autoeq(group)
    seen: dict[tuple, tuple] = {ident.mapping: ()}
    elements = [ident]
    words = [()]
    frontier = [ident]
    while frontier:
        nxt = []
        for cur in frontier:
            for gi, g in enumerate(gens):
                new = compose(g, cur)
                if new.mapping in seen:
                    continue
                word = (gi,) + seen[cur.mapping]
                seen[new.mapping] = word
                if len(seen) > cap:
                    raise CapExceeded(
                        f"generated group exceeds the cap of {cap}"
                    )
                elements.append(new)
                words.append(word)
                nxt.append(new)
        frontier = nxt
    return GeneratedGroup(len(elements), tuple(elements), tuple(words))


def preserves_modular_data(F, md: Optional[ModularData] = None
                           ) -> PreservationReport:
    """Exact S- and T-equivariance check with a first-failure witness.

    ``F`` may be a BraidedAutoeq (always passes, by construction) or a raw
    mapping sequence to test; a raw mapping needs ``md`` supplied."""
    if isinstance(F, BraidedAutoeq):
        mapping = F.mapping
        if md is None:
            md = modular_data(F.group)
    else:
        mapping = tuple(int(x) for x in F)
        if md is None:
            raise ValueError("raw mappings need explicit modular data")
    if sorted(mapping) != list(range(md.size)):
        return PreservationReport(False, "mapping is not a bijection")
    return _check_preservation(md, mapping)


# ---------------------------------------------------------------------------
# bimodule invariants
# ---------------------------------------------------------------------------

def _product_group(G: FiniteGroup) -> FiniteGroup:
    key = ("bimodule_product",)
    if key not in G._memo:
        G._memo[key] = direct_product(
            G, opposite_group(G), name=f"{G.name}x{G.name}^op"
        )
    return G._memo[key]


def bimodule_data(element: Union[BraidedAutoeq, PartialBrEq]) -> BimoduleData:
    """The invariant (U <= G x G^op, eta description) of the bimodule
    category attached to a constructed element; requires construction
    provenance (UnsupportedProvenance for searched/composite elements)."""
    prov = element.provenance
    G = element.group
    if prov.kind not in ("v", "bv", "ev", "rprime"):
        raise UnsupportedProvenance(
            f"no construction data behind kind {prov.kind!r}"
        )
    P = _product_group(G)
    n = G.n

    def idx(a: int, b: int) -> int:
        return a * n + b

    if prov.kind in ("v", "bv"):
        v = prov.data[0]
        members = sorted(idx(v(g), G.inv_of(g)) for g in range(G.n))
        eta_class = "trivial" if prov.kind == "v" else "pullback of mu"
        pairing_ok: Optional[bool] = True
    else:
        S = prov.data[0]
        Qgrp, proj = quotient(G, S)
        vbar = None
        if prov.kind == "ev" and prov.data[2] is not None:
            v = prov.data[2]
            images = [proj(v(r)) for r in range(G.n)]
            vbar = [0] * Qgrp.n
            for r in range(G.n):
                vbar[proj(r)] = images[r]
        members = sorted(
            idx(a, b)
            for a in range(n)
            for b in range(n)
            if proj(a) == (
                Qgrp.inv_of(proj(b)) if vbar is None
                else vbar[Qgrp.inv_of(proj(b))]
            )
        )
        if prov.kind == "ev":
            eta_class = "pullback of eta"
            eta = prov.data[1]
            pairing_ok = is_nondegenerate(antisymmetrize(eta, S))
        else:
            eta_class = "not-computed"
            pairing_ok = None

    U = P.subgroup(members, check=True)
    member_set = set(members)
    U1 = G.subgroup(sorted(
        a for a in range(n) if idx(a, G.identity) in member_set
    ))
    U2 = G.subgroup(sorted(
        b for b in range(n) if idx(G.identity, b) in member_set
    ))

    proj1 = {m // n for m in member_set}
    proj2 = {m % n for m in member_set}
    cond1 = proj1 == set(range(n)) and proj2 == set(range(n))
    cond2 = U1.is_abelian() and U2.is_abelian()
    conditions = (cond1, cond2, pairing_ok)
    if cond1 is False:
        raise ConditionFailed(
            "condition 1: U does not cover both factors of G x G^op"
        )
    if cond2 is False:
        raise ConditionFailed("condition 2: U1 or U2 is not abelian")
    if pairing_ok is False:
        raise ConditionFailed(
            "condition 3: the eta pairing on U1 x U2 is degenerate"
        )
    return BimoduleData(U, eta_class, U1, U2, conditions)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _provenance_json(p: Provenance):
    if p.kind == "v":
        return {"kind": "v", "images": [p.data[0](g) for g in
                                        range(p.data[0].source.n)]}
    if p.kind == "bv":
        v, mu = p.data
        return {
            "kind": "bv",
            "images": [v(g) for g in range(v.source.n)],
            "modulus": mu.m,
            "cocycle": mu.values.tolist(),
        }
    if p.kind == "ev":
        S, eta, v = p.data
        return {
            "kind": "ev",
            "subgroup": list(S.elements),
            "modulus": eta.m,
            "cocycle": eta.values.tolist(),
            "images": None if v is None else [v(g) for g in
                                              range(v.source.n)],
        }
    if p.kind == "rprime":
        N, Q, pairing = p.data
        return {
            "kind": "rprime",
            "normal": list(N.elements),
            "complement": list(Q.elements),
            "modulus": pairing.m,
            "pairing": pairing.values.tolist(),
        }
    if p.kind == "composite":
        return {
            "kind": "composite",
            "factors": [_provenance_json(f) for f in p.data],
        }
    return {"kind": p.kind}


def autoeq_to_json(F: BraidedAutoeq) -> dict:
    return {
        "group": F.group.name,
        "mapping": list(F.mapping),
        "provenance": _provenance_json(F.provenance),
    }


def autoeq_from_json(data: dict,
                     G: Optional[FiniteGroup] = None) -> BraidedAutoeq:
    """Rebuild (and re-verify) an autoequivalence from its mapping JSON.

    The construction data is not reconstructed: the result carries
    provenance "searched" with the original description attached."""
    if G is None:
        G = named_group(data["group"])
    prov = Provenance("searched")
    return BraidedAutoeq(G, data["mapping"], prov)
