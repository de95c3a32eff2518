"""Drinfeld-center simple objects and exact modular data.

Simple objects of the center of the category of G-graded vector spaces are
pairs (conjugacy class of g, irreducible character of the centralizer of g).
The S and T matrices are computed exactly over cyclotomic numbers.

Normalization convention (fixed once, here): S is the *unnormalized* integer-
friendly matrix, i.e. ``|G|`` times the unitary S-matrix,

    S[(a, chi), (b, psi)] = |G| / (|Cent(a)| * |Cent(b)|) *
        sum over x in G with x b x^-1 in Cent(a) of
            conj(chi(x b x^-1)) * conj(psi(x^-1 a x)).

With this convention the unit row consists of the quantum dimensions,
S * conj(S)^T = |G|^2 * Id, and S^2 = |G|^2 * (charge conjugation).  All
preservation checks downstream compare unnormalized matrices, which is
equivalent to comparing the unitary ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chars import centralizer_table
from .cyclo import Cyclotomic, cyclo_sum, one, zero
from .errors import CapExceeded, NonIntegralFusion
from .groups import FiniteGroup, conjugacy_classes

__all__ = [
    "SimpleObject",
    "ModularData",
    "simple_objects",
    "modular_data",
    "verlinde_fusion",
]

# hard ceiling on the number of simple objects (and thus on N x N matrices)
SIMPLES_CAP = 4096


@dataclass(frozen=True)
class SimpleObject:
    """One simple object: a conjugacy class paired with a centralizer irrep.

    ``qdim`` caches the quantum dimension |class| * chi(1) (a positive
    integer).
    """

    class_index: int
    char_index: int
    qdim: int


@dataclass(eq=False)
class ModularData:
    """Exact S and T matrices over the simple objects of the center.

    ``S`` is an N x N object array of Cyclotomic entries in the unnormalized
    convention documented in the module docstring; ``T`` is the length-N
    diagonal of twists theta = chi(g)/chi(1).
    """

    group: FiniteGroup
    S: np.ndarray
    T: tuple[Cyclotomic, ...]

    @property
    def size(self) -> int:
        return len(self.T)


def simple_objects(G: FiniteGroup) -> list[SimpleObject]:
    """All simples (class, centralizer character), deterministically ordered.

    Classes come in conjugacy_classes order (sorted by minimal member) and
    characters in the centralizer's character-table order.
    """
    key = ("simples",)
    if key not in G._memo:
        out = []
        for cl in conjugacy_classes(G):
            _, _, table = centralizer_table(G, cl.rep)
            for ci, ch in enumerate(table):
                out.append(SimpleObject(cl.index, ci, cl.size * ch.degree))
            if len(out) > SIMPLES_CAP:
                raise CapExceeded(
                    f"more than {SIMPLES_CAP} simple objects for {G!r}"
                )
        total = sum(s.qdim * s.qdim for s in out)
        assert total == G.n * G.n, "quantum dimensions fail sum rule"
        G._memo[key] = tuple(out)
    return list(G._memo[key])


def _entry_profile(G, a, b, cent_a_set, pos_a, pos_b):
    """Count, over x in G with x b x^-1 in Cent(a), the pairs of positions
    (x b x^-1 in Cent(a), x^-1 a x in Cent(b)); the S-entry for every
    character pair over these two classes is a weighted sum over this profile.
    """
    counts: dict[tuple[int, int], int] = {}
    for x in range(G.n):
        u = G.conj(b, x)
        if u not in cent_a_set:
            continue
        v = G.conj(a, G.inv_of(x))
        k = (pos_a[u], pos_b[v])
        counts[k] = counts.get(k, 0) + 1
    return counts


def modular_data(G: FiniteGroup) -> ModularData:
    """The exact (S, T) pair; every structural invariant is asserted."""
    key = ("modular",)
    if key in G._memo:
        return G._memo[key]

    simples = simple_objects(G)
    classes = conjugacy_classes(G)
    n = G.n
    ns = len(simples)

    cents = []          # per class: (H, parent->H position, char table, |C|)
    for cl in classes:
        H, elems, table = centralizer_table(G, cl.rep)
        pos = {e: i for i, e in enumerate(elems)}
        cents.append((H, pos, table, len(elems)))

    # T: twists theta = chi(g)/chi(1)
    T = []
    for s in simples:
        cl = classes[s.class_index]
        _, pos, table, _ = cents[s.class_index]
        ch = table[s.char_index]
        T.append(ch.value_at_element(pos[cl.rep]) / ch.degree)

    # S: one x-profile per ordered class pair, then all character pairs
    S = np.empty((ns, ns), dtype=object)
    by_class: dict[int, list[int]] = {}
    for idx, s in enumerate(simples):
        by_class.setdefault(s.class_index, []).append(idx)

    for ca, rows in by_class.items():
        a = classes[ca].rep
        _, pos_a, table_a, cent_a_size = cents[ca]
        cent_a_set = set(pos_a)
        for cb, cols in by_class.items():
            b = classes[cb].rep
            _, pos_b, table_b, cent_b_size = cents[cb]
            profile = _entry_profile(G, a, b, cent_a_set, pos_a, pos_b)
            for i in rows:
                chi = table_a[simples[i].char_index]
                for j in cols:
                    psi = table_b[simples[j].char_index]
                    total = cyclo_sum(
                        chi.value_at_element(u).conj()
                        * psi.value_at_element(v).conj()
                        * cnt
                        for (u, v), cnt in profile.items()
                    )
                    S[i, j] = total * n / (cent_a_size * cent_b_size)

    _certify_modular(G, simples, S, T)
    S.setflags(write=False)
    md = ModularData(G, S, tuple(T))
    G._memo[key] = md
    return md


def _certify_modular(G, simples, S, T):
    """Assert every structural property of (S, T) before releasing them."""
    n, ns = G.n, len(simples)
    n2 = n * n
    for i in range(ns):
        for j in range(i, ns):
            assert S[i, j] == S[j, i], f"S not symmetric at {(i, j)}"
    for j in range(ns):
        assert S[0, j] == one() * simples[j].qdim, \
            f"unit row is not the quantum dimension at {j}"

    Sbar = np.empty_like(S)
    for i in range(ns):
        for j in range(ns):
            Sbar[i, j] = S[i, j].conj()
    gram = S @ Sbar.T
    square = S @ S
    perm = []
    for i in range(ns):
        for j in range(ns):
            want = one() * n2 if i == j else zero()
            assert gram[i, j] == want, f"S conj(S)^T is not |G|^2 I at {(i, j)}"
        hits = [j for j in range(ns) if not square[i, j].is_zero()]
        assert len(hits) == 1 and square[i, hits[0]] == one() * n2, \
            f"S^2 row {i} is not |G|^2 times a permutation"
        perm.append(hits[0])
    assert sorted(perm) == list(range(ns)), "charge conjugation is not a bijection"
    assert all(perm[perm[i]] == i for i in range(ns)), \
        "charge conjugation is not an involution"

    bound = G.exponent() * n
    for i, th in enumerate(T):
        rt = th.as_root_of_unity()
        assert rt is not None, f"twist {i} is not a root of unity"
        order, _ = rt
        assert bound % order == 0, \
            f"twist {i} order {order} does not divide exp(G)*|G|"


def verlinde_fusion(md: ModularData, i: int, j: int, k: int) -> int:
    """Fusion multiplicity N_ij^k from the S-matrix.

    N_ij^k = (1/|G|^2) * sum over r of S[i,r] S[j,r] conj(S[k,r]) / S[0,r]
    in the unnormalized convention; the result is asserted to be a
    non-negative rational integer.
    """
    S = md.S
    ns = md.size
    n2 = md.group.n * md.group.n
    total = cyclo_sum(
        S[i, r] * S[j, r] * S[k, r].conj() / S[0, r] for r in range(ns)
    )
    val = total / n2
    if not val.is_rational():
        raise NonIntegralFusion(f"N[{i},{j}]^{k} = {val!r} is irrational")
    q = val.as_rational()
    if q.denominator != 1 or q.numerator < 0:
        raise NonIntegralFusion(f"N[{i},{j}]^{k} = {q} is not in Z>=0")
    return int(q)
