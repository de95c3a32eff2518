"""Command-line entry point with deterministic JSON reports.

Subcommands
-----------
``chartable <group>``
    Exact character table; cyclotomic values rendered as strings.
``h2 <group> [--modulus m]``
    Cohomology class representatives realizable with Z/m coefficients.
``center <group>``
    The simple objects of the center with quantum dimensions and twists.
``autoeq {v,bv,ev,rprime,generate,verify,bimodule} ...``
    Construct braided symmetries, close them under composition, re-verify a
    serialized mapping, or report the bimodule invariant.
``fpn <p> <n> {orders,generate,bruhat}``
    The prime-field matrix model: generated-versus-oracle orders, generator
    or closure listings, and the triangular cell factorization.
``examples <name> [--regen]``
    Replay a named scenario with fresh library calls and diff the payload
    against the committed fixture (``--regen`` rewrites the fixture).

Output contract
---------------
The report on standard output is pretty-printed JSON with sorted keys and no
timestamps, so identical inputs produce byte-identical output; timing goes
to standard error.  Exit codes: 0 success (and fixture PASS), 1 domain error
with a structured error JSON on standard output (and fixture FAIL), 2 usage
error with argparse text on standard error.

Serialized mappings use the same JSON shape everywhere:
``{"group": name, "mapping": [...], "provenance": {...}}``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from math import lcm
from pathlib import Path
from typing import Optional

from .autoeq import (
    BraidedAutoeq,
    PartialBrEq,
    autoeq_from_json,
    autoeq_to_json,
    bimodule_data,
    complete_extensions,
    from_bv,
    from_ev_lazy,
    from_hopf_auto,
    generate_group,
    identity_autoeq,
    partial_dualization_rprime,
    preserves_modular_data,
)
from .center import modular_data, simple_objects
from .chars import character_table
from .cohom import h2_classes
from .errors import (
    BadArguments,
    BrpicError,
    NotASubgroup,
    UnknownName,
)
from .fpn import (
    FpMatrix,
    bruhat_factorize,
    generate_matrix_group,
    group_order_oracle,
    standard_generators,
    subgroup_generators,
)
from .groups import (
    FiniteGroup,
    GroupMorphism,
    Subgroup,
    abelian_normal_subgroups,
    conjugacy_classes,
    identity_morphism,
    named_group,
    semidirect_decompositions,
)

_GROUP_CAP = 200
_CLOSURE_CAP = 1_000_000

_FPN_CONFIGS = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)]


# -- small helpers ---------------------------------------------------------


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _parse_ids(text: str, what: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise BadArguments(f"{what} must be comma-separated integers, got {text!r}")


def _resolve_group(name: str, cap: Optional[int]) -> FiniteGroup:
    return named_group(name, cap=cap if cap else _GROUP_CAP)


def _subgroup_of(G: FiniteGroup, text: str, what: str) -> Subgroup:
    ids = _parse_ids(text, what)
    try:
        return Subgroup(G, ids)
    except ValueError as e:
        raise NotASubgroup(str(e)) from None


def _morphism(G: FiniteGroup, images: Optional[str]) -> GroupMorphism:
    if images is None:
        return identity_morphism(G)
    imgs = _parse_ids(images, "--images")
    if len(imgs) != G.n:
        raise BadArguments(
            f"--images needs {G.n} entries for {G.name}, got {len(imgs)}"
        )
    try:
        return GroupMorphism(G, G, imgs)
    except (ValueError, BrpicError) as e:
        if isinstance(e, BrpicError):
            raise
        raise BadArguments(str(e)) from None


def _cocycle_class(G: FiniteGroup, modulus: Optional[int], index: int):
    m = modulus if modulus else G.exponent()
    reps = h2_classes(G, m)
    if not 0 <= index < len(reps):
        raise BadArguments(
            f"--class-index {index} out of range: {G.name} has"
            f" {len(reps)} classes at modulus {m}"
        )
    return m, reps[index]


def _mapping_order(mapping) -> int:
    seen = [False] * len(mapping)
    order = 1
    for start in range(len(mapping)):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = mapping[i]
            length += 1
        order = lcm(order, length)
    return order


def _load_mapping_json(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise BadArguments(f"no such file: {path}")
    except json.JSONDecodeError as e:
        raise BadArguments(f"invalid JSON in {path}: {e}")
    if not isinstance(data, dict) or "group" not in data or "mapping" not in data:
        raise BadArguments(
            f"{path} must hold an object with 'group' and 'mapping' fields"
        )
    return data


def _partial_report(partial: PartialBrEq, completions) -> dict:
    return {
        "determined": {
            str(k): int(v) for k, v in sorted(partial.mapping.items())
        },
        "open": {
            str(k): [int(x) for x in v]
            for k, v in sorted(partial.candidates.items())
        },
        "completions": [autoeq_to_json(F) for F in completions],
        "count": len(completions),
    }


# -- command implementations -----------------------------------------------


def _cmd_chartable(ns) -> tuple:
    G = _resolve_group(ns.group, ns.cap)
    classes = conjugacy_classes(G)
    table = character_table(G)
    payload = {
        "group": ns.group,
        "order": G.n,
        "classes": [
            {"index": c.index, "rep": G.names[c.rep], "size": c.size}
            for c in classes
        ],
        "characters": [
            {
                "index": k,
                "degree": chi.degree,
                "values": [str(chi.value_at_element(c.rep)) for c in classes],
            }
            for k, chi in enumerate(table)
        ],
    }
    return payload, ["exact cyclotomic values; characters sorted by degree then value key"], 0


def _cmd_h2(ns) -> tuple:
    G = _resolve_group(ns.group, ns.cap)
    m = ns.modulus if ns.modulus else G.exponent()
    reps = h2_classes(G, m)
    payload = {
        "group": ns.group,
        "modulus": m,
        "count": len(reps),
        "representatives": [
            [[int(x) for x in row] for row in rep.values] for rep in reps
        ],
    }
    return payload, ["classes of the coefficient-m image in full cohomology; trivial class first"], 0


def _cmd_center(ns) -> tuple:
    G = _resolve_group(ns.group, ns.cap)
    md = modular_data(G)
    classes = conjugacy_classes(G)
    objects = []
    for i, s in enumerate(simple_objects(G)):
        c = classes[s.class_index]
        objects.append(
            {
                "index": i,
                "class_rep": G.names[c.rep],
                "class_size": c.size,
                "char_index": s.char_index,
                "qdim": s.qdim,
                "theta": str(md.T[i]),
            }
        )
    payload = {"group": ns.group, "size": md.size, "objects": objects}
    return payload, ["objects ordered class-major; theta is the exact twist"], 0


def _cmd_autoeq(ns) -> tuple:
    sub = ns.autoeq_command
    if sub == "v":
        G = _resolve_group(ns.group, ns.cap)
        F = from_hopf_auto(_morphism(G, ns.images))
        return autoeq_to_json(F), ["construction re-verified S/T equivariance"], 0
    if sub == "bv":
        G = _resolve_group(ns.group, ns.cap)
        m, mu = _cocycle_class(G, ns.modulus, ns.class_index)
        F = from_bv(_morphism(G, ns.images), mu)
        return (
            autoeq_to_json(F),
            [f"cocycle class {ns.class_index} at modulus {m}"],
            0,
        )
    if sub == "ev":
        G = _resolve_group(ns.group, ns.cap)
        S = _subgroup_of(G, ns.subgroup, "--subgroup")
        Sg, _ = S.as_group()
        m, eta = _cocycle_class(Sg, ns.modulus, ns.class_index)
        v = _morphism(G, ns.images) if ns.images else None
        partial = from_ev_lazy(S, eta, v)
        completions = complete_extensions(
            partial, cap=ns.cap if ns.cap else _CLOSURE_CAP
        )
        return (
            _partial_report(partial, completions),
            [f"lazy dualization along {len(S.elements)} elements, eta class {ns.class_index} at modulus {m}"],
            0,
        )
    if sub == "rprime":
        G = _resolve_group(ns.group, ns.cap)
        N = _subgroup_of(G, ns.normal, "--normal")
        Q = _subgroup_of(G, ns.complement, "--complement") if ns.complement else None
        partial = partial_dualization_rprime(N, Q)
        completions = complete_extensions(
            partial, cap=ns.cap if ns.cap else _CLOSURE_CAP
        )
        return (
            _partial_report(partial, completions),
            ["self-dual pairing found by search; completions sorted by mapping"],
            0,
        )
    if sub == "generate":
        elements = [autoeq_from_json(_load_mapping_json(p)) for p in ns.files]
        gg = generate_group(
            elements, cap=ns.cap if ns.cap else _CLOSURE_CAP
        )
        payload = {
            "order": gg.order,
            "elements": [list(F.mapping) for F in gg.elements],
            "words": [list(w) for w in gg.words],
        }
        return payload, ["word (i1,...,ik) means generator i1 applied last"], 0
    if sub == "verify":
        data = _load_mapping_json(ns.file)
        G = _resolve_group(data["group"], ns.cap)
        report = preserves_modular_data(data["mapping"], modular_data(G))
        payload = {
            "group": data["group"],
            "ok": bool(report),
            "witness": report.witness,
        }
        return payload, ["exact S/T equivariance with first-failure witness"], 0
    if sub == "bimodule":
        element = _build_bimodule_element(ns)
        bd = bimodule_data(element)
        G = element.group
        pairs = sorted(
            (int(e) // G.n, int(e) % G.n) for e in bd.U.elements
        )
        payload = {
            "group": ns.group,
            "U_order": bd.U.order,
            "U_pairs": [[a, b] for a, b in pairs],
            "U1": [int(x) for x in bd.U1.elements],
            "U2": [int(x) for x in bd.U2.elements],
            "eta_class": bd.eta_class,
            "conditions": list(bd.conditions),
        }
        return payload, ["U lives in G x G-opposite; conditions are (surjectivity, abelian intersections, pairing)"], 0
    raise BadArguments(f"unknown autoeq subcommand {sub!r}")


def _build_bimodule_element(ns):
    G = _resolve_group(ns.group, ns.cap)
    kind = ns.kind
    if kind == "v":
        return from_hopf_auto(_morphism(G, ns.images))
    if kind == "bv":
        if ns.class_index is None:
            raise BadArguments("bimodule bv needs --class-index")
        _, mu = _cocycle_class(G, ns.modulus, ns.class_index)
        return from_bv(_morphism(G, ns.images), mu)
    if kind == "ev":
        if ns.subgroup is None or ns.class_index is None:
            raise BadArguments("bimodule ev needs --subgroup and --class-index")
        S = _subgroup_of(G, ns.subgroup, "--subgroup")
        Sg, _ = S.as_group()
        _, eta = _cocycle_class(Sg, ns.modulus, ns.class_index)
        v = _morphism(G, ns.images) if ns.images else None
        return from_ev_lazy(S, eta, v)
    if kind == "rprime":
        if ns.normal is None:
            raise BadArguments("bimodule rprime needs --normal")
        N = _subgroup_of(G, ns.normal, "--normal")
        Q = _subgroup_of(G, ns.complement, "--complement") if ns.complement else None
        return partial_dualization_rprime(N, Q)
    raise BadArguments(
        f"unknown bimodule kind {kind!r}: expected v, bv, ev, or rprime"
    )


def _cmd_fpn(ns) -> tuple:
    p, n = ns.p, ns.n
    cap = ns.cap if ns.cap else _CLOSURE_CAP
    sub = ns.fpn_command
    if sub == "orders":
        generated = len(generate_matrix_group(standard_generators(p, n), cap=cap))
        oracle = group_order_oracle(p, n)
        payload = {
            "p": p,
            "n": n,
            "generated": generated,
            "oracle": oracle,
            "match": generated == oracle,
        }
        return payload, ["oracle counts form-preserving matrices by column extension"], 0
    if sub == "generate":
        which = ns.which
        if which == "all":
            mats = generate_matrix_group(standard_generators(p, n), cap=cap)
            note = "closure of the V, BV, EV, R families"
        else:
            mats = subgroup_generators(p, n, which)
            note = f"generator list for family {which}"
        payload = {
            "p": p,
            "n": n,
            "which": which,
            "count": len(mats),
            "matrices": [M.tolist() for M in mats],
        }
        return payload, [note], 0
    if sub == "bruhat":
        if ns.matrix is not None:
            try:
                rows = json.loads(ns.matrix)
            except json.JSONDecodeError as e:
                raise BadArguments(f"--matrix must be a JSON matrix: {e}")
            cell = bruhat_factorize(FpMatrix(p, rows))
            b, e, r = cell.factors
            payload = {
                "p": p,
                "n": n,
                "reflection_rank": cell.reflection_rank,
                "b": b.tolist(),
                "e": e.tolist(),
                "r": r.tolist(),
            }
            return payload, ["b lower triangular, e upper unipotent, b@e@r = input"], 0
        if ns.all:
            census: dict = {}
            for M in generate_matrix_group(standard_generators(p, n), cap=cap):
                d = bruhat_factorize(M).reflection_rank
                census[str(d)] = census.get(str(d), 0) + 1
            payload = {
                "p": p,
                "n": n,
                "total": sum(census.values()),
                "cells": census,
            }
            return payload, ["every element factored; cells keyed by reflection rank"], 0
        raise BadArguments("fpn bruhat needs --all or --matrix")
    raise BadArguments(f"unknown fpn subcommand {sub!r}")


# -- example scenarios -----------------------------------------------------


def _example_s3_reflection() -> dict:
    G = named_group("S3")
    rotations = tuple(
        g for g in range(G.n) if G.order_of(g) in (1, 3)
    )
    partial = partial_dualization_rprime(Subgroup(G, rotations))
    completions = complete_extensions(partial)
    generated = generate_group([identity_autoeq(G)] + completions)
    return {
        "group": "S3",
        "normal_subgroup": [int(x) for x in rotations],
        "determined": {str(k): int(v) for k, v in sorted(partial.mapping.items())},
        "completions": [list(F.mapping) for F in completions],
        "completion_orders": [_mapping_order(F.mapping) for F in completions],
        "generated_order": generated.order,
    }


def _example_s4_bv_swap() -> dict:
    G = named_group("S4")
    mu = h2_classes(G, 2)[1]
    F = from_bv(identity_morphism(G), mu)
    swapped = sorted(
        [i, F(i)] for i in range(len(F.mapping)) if i < F(i)
    )
    return {
        "group": "S4",
        "modulus": 2,
        "class_index": 1,
        "mapping": list(F.mapping),
        "swapped_pairs": swapped,
    }


def _example_fpn_orders() -> dict:
    orders = {}
    for p, n in _FPN_CONFIGS:
        generated = len(generate_matrix_group(standard_generators(p, n)))
        oracle = group_order_oracle(p, n)
        orders[f"{p},{n}"] = {
            "generated": generated,
            "oracle": oracle,
            "match": generated == oracle,
        }
    return {"orders": orders}


def _example_a5_rigidity() -> dict:
    G = named_group("A5")
    normals = abelian_normal_subgroups(G)
    decomps = semidirect_decompositions(G)
    return {
        "group": "A5",
        "abelian_normal_subgroup_orders": [s.order for s in normals],
        "semidirect_decompositions": [
            {"n_order": d.n.order, "q_order": d.q.order} for d in decomps
        ],
    }


_EXAMPLES = {
    "s3-reflection": _example_s3_reflection,
    "s4-bv-swap": _example_s4_bv_swap,
    "fpn-orders": _example_fpn_orders,
    "a5-rigidity": _example_a5_rigidity,
}


def _fixture_path(name: str) -> Path:
    return Path(__file__).resolve().parent / "fixtures" / f"{name}.json"


def _cmd_examples(ns) -> tuple:
    name = ns.name
    if name not in _EXAMPLES:
        known = ", ".join(sorted(_EXAMPLES))
        raise UnknownName(f"unknown example {name!r}; known: {known}")
    payload = _EXAMPLES[name]()
    path = _fixture_path(name)
    notes = ["fixture regenerated by library calls, never hand-edited"]
    if ns.regen:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return {"example": name, "status": "REGENERATED"}, notes, 0
    if not path.exists():
        return (
            {"example": name, "status": "FAIL", "reason": "missing fixture"},
            notes,
            1,
        )
    expected = json.loads(path.read_text())
    if expected == payload:
        return {"example": name, "status": "PASS"}, notes, 0
    return (
        {
            "example": name,
            "status": "FAIL",
            "expected": expected,
            "actual": payload,
        },
        notes,
        1,
    )


# -- argument parsing and dispatch -----------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brpic",
        description="Exact center symmetries: tables, cohomology, matrix model.",
    )
    parser.add_argument(
        "--cap",
        type=int,
        default=None,
        help="order cap for named groups and generated closures",
    )
    parser.add_argument(
        "--modulus",
        type=int,
        default=None,
        help="cohomology coefficient modulus (default: group exponent)",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="reserved; dispatch is single-threaded and deterministic",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for name in ("chartable", "h2", "center"):
        sp = commands.add_parser(name)
        sp.add_argument("group")

    autoeq = commands.add_parser("autoeq")
    asub = autoeq.add_subparsers(dest="autoeq_command", required=True)
    sp = asub.add_parser("v")
    sp.add_argument("group")
    sp.add_argument("--images", required=True)
    sp = asub.add_parser("bv")
    sp.add_argument("group")
    sp.add_argument("--class-index", type=int, required=True)
    sp.add_argument("--images", default=None)
    sp = asub.add_parser("ev")
    sp.add_argument("group")
    sp.add_argument("--subgroup", required=True)
    sp.add_argument("--class-index", type=int, required=True)
    sp.add_argument("--images", default=None)
    sp = asub.add_parser("rprime")
    sp.add_argument("group")
    sp.add_argument("--normal", required=True)
    sp.add_argument("--complement", default=None)
    sp = asub.add_parser("generate")
    sp.add_argument("files", nargs="+")
    sp = asub.add_parser("verify")
    sp.add_argument("file")
    sp = asub.add_parser("bimodule")
    sp.add_argument("kind", choices=["v", "bv", "ev", "rprime"])
    sp.add_argument("group")
    sp.add_argument("--images", default=None)
    sp.add_argument("--class-index", type=int, default=None)
    sp.add_argument("--subgroup", default=None)
    sp.add_argument("--normal", default=None)
    sp.add_argument("--complement", default=None)

    fpn = commands.add_parser("fpn")
    fpn.add_argument("p", type=int)
    fpn.add_argument("n", type=int)
    fsub = fpn.add_subparsers(dest="fpn_command", required=True)
    fsub.add_parser("orders")
    sp = fsub.add_parser("generate")
    sp.add_argument(
        "--which", choices=["V", "BV", "EV", "R", "all"], default="all"
    )
    sp = fsub.add_parser("bruhat")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--matrix", default=None)

    sp = commands.add_parser("examples")
    sp.add_argument("name")
    sp.add_argument("--regen", action="store_true")
    return parser


_HANDLERS = {
    "chartable": _cmd_chartable,
    "h2": _cmd_h2,
    "center": _cmd_center,
    "autoeq": _cmd_autoeq,
    "fpn": _cmd_fpn,
    "examples": _cmd_examples,
}


def dispatch(argv) -> int:
    """Run one command; returns the process exit code."""
    argv = list(argv)
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    start = time.perf_counter()
    try:
        payload, notes, code = _HANDLERS[ns.command](ns)
    except BadArguments as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"error: {e}\n")
        return 2
    except BrpicError as e:
        _emit(
            {
                "command": argv,
                "error": type(e).__name__,
                "message": str(e),
            }
        )
        sys.stderr.write(f"time: {time.perf_counter() - start:.3f}s\n")
        return 1
    report = {
        "command": argv,
        "notes": notes,
        "result": payload,
    }
    _emit(report)
    sys.stderr.write(f"time: {time.perf_counter() - start:.3f}s\n")
    return code


def main() -> int:
    return dispatch(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
