"""Command-line interface.

Exit codes: 0 success / identity holds, 1 refuted or mismatch found,
2 usage or format error, 3 capacity exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import tables as tables_mod
from .derivation import (SearchLimits, bounded_search, bundled_scripts, load_script,
                         replay_script)
from .errors import CapacityError, SemiringError
from .identities import GROUPS, IDENTITIES
from .matrix import (constant_embedding, find_isomorphism, matrix_semiring, named_semiring,
                     padding_embedding, phi_block_embedding, subsemiring_closure,
                     verify_homomorphism)
from .satisfaction import (MAX_VARS, equational_agreement, necessary_conditions, satisfies,
                           satisfies_basis, syntactic_criterion)
from .semiring import catalog, natural_order, verify_ai_axioms
from .terms import parse_identity, reduce_identity

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def resolve_semiring(name: str):
    return named_semiring(name)


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _split(values):
    out = []
    for v in values:
        out.extend(x for x in v.split(",") if x)
    return out


def _sat_kwargs(args):
    kw = {"max_vars": args.max_vars}
    if args.workers:
        kw["workers"] = args.workers
    if args.samples is not None:
        if args.seed is None:
            raise UsageError("--samples needs an explicit --seed")
        kw.update(samples=args.samples, seed=args.seed)
    return kw


# -- subcommands -----------------------------------------------------------------------

def cmd_axioms(args):
    S = resolve_semiring(args.semiring)
    rep = verify_ai_axioms(S)
    payload = {"semiring": S.name, "passed": rep.passed,
               "failures": {ax: [S.label(w) for w in wit] for ax, wit in rep.failures.items()}}
    _emit(args, payload, f"{S.name}: {rep.describe(S)}")
    return EXIT_OK if rep.passed else EXIT_REFUTED


def cmd_order(args):
    S = resolve_semiring(args.semiring)
    order = natural_order(S)
    edges = [(S.label(a), S.label(b)) for a, b in order.edges]
    if args.dot:
        print(tables_mod.to_dot(tables_mod.Rendering("hasse", {"edges": edges})))
        return EXIT_OK
    payload = {"semiring": S.name, "edges": edges,
               "leq": [[S.label(b) for b in range(S.size) if order.leq[a, b]]
                       for a in range(S.size)]}
    _emit(args, payload, "\n".join(f"{a} < {b}" for a, b in edges) or "(antichain)")
    return EXIT_OK


def cmd_check(args):
    S = resolve_semiring(args.semiring)
    ident = parse_identity(args.identity)
    v = satisfies(S, ident, **_sat_kwargs(args))
    _emit(args, v.to_json(S), f"{ident}: {v.describe(S)}")
    return EXIT_OK if v.holds else EXIT_REFUTED


def cmd_criterion(args):
    ident = parse_identity(args.identity)
    simple = reduce_identity(ident)
    tag = args.tag
    decide = syntactic_criterion if tag in ("L2", "R2", "N2", "T2", "M2", "D2") else necessary_conditions
    rows = [(str(si), decide(tag, si)) for si in simple]
    result = all(ok for _, ok in rows)
    payload = {"tag": tag, "identity": str(ident), "result": result,
               "simple": [{"identity": s, "result": ok} for s, ok in rows]}
    if args.brute:
        v = satisfies(catalog(tag), ident, **_sat_kwargs(args))
        payload["brute_force"] = v.holds
    text = "\n".join(f"{s}: {ok}" for s, ok in rows) or "trivial identity"
    text += f"\n{tag}: {'true' if result else 'false'}"
    if args.brute:
        text += f" (brute force: {'holds' if payload['brute_force'] else 'fails'})"
    _emit(args, payload, text)
    return EXIT_OK if result else EXIT_REFUTED


def cmd_matrix(args):
    base = resolve_semiring(args.base)
    M = matrix_semiring(base, args.n, lazy=not args.materialize)
    if args.out:
        if getattr(M, "lazy", False):
            raise CapacityError(f"{M.name} is not materialized and cannot be exported")
        with open(args.out, "w") as fh:
            json.dump(M.to_json(), fh)
    if args.json and not getattr(M, "lazy", False):
        print(json.dumps(M.to_json(), ensure_ascii=False))
    else:
        kind = "lazy" if getattr(M, "lazy", False) else "materialized"
        print(f"{M.name}: {M.size} elements ({kind})")
    return EXIT_OK


def cmd_closure(args):
    M = resolve_semiring(args.semiring)
    seed = _split(args.elements)
    closed = sorted(subsemiring_closure(M, seed))
    labels = [M.label(e) for e in closed]
    _emit(args, {"semiring": M.name, "seed": seed, "closure": labels}, " ".join(labels))
    return EXIT_OK


def cmd_iso(args):
    S = resolve_semiring(args.first)
    T = resolve_semiring(args.second)
    if args.subset1:
        S = S.induced(_split([args.subset1]))
    if args.subset2:
        T = T.induced(_split([args.subset2]))
    f = find_isomorphism(S, T)
    if f is None:
        _emit(args, {"first": S.name, "second": T.name, "isomorphism": None},
              f"{S.name} and {T.name} are not isomorphic")
        return EXIT_REFUTED
    pairs = {S.label(a): T.label(b) for a, b in enumerate(f)}
    _emit(args, {"first": S.name, "second": T.name, "isomorphism": pairs},
          "\n".join(f"{a} -> {b}" for a, b in pairs.items()))
    return EXIT_OK


def cmd_embed(args):
    if args.kind == "phi":
        f = phi_block_embedding(args.n)
    else:
        if not args.base:
            raise UsageError(f"embed {args.kind} needs --base")
        base = resolve_semiring(args.base)
        f = (constant_embedding if args.kind == "constant" else padding_embedding)(base, args.n)
    rep = verify_homomorphism(f)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(f.to_json(), fh)
    payload = {**f.to_json(), "homomorphism": rep.homomorphism, "injective": rep.injective,
               "violation": list(rep.violation) if rep.violation else None}
    text = (f"{args.kind}: {f.source.name} -> {f.target.name}: homomorphism={rep.homomorphism}, "
            f"injective={rep.injective}")
    if rep.violation:
        text += f", first violation {rep.violation}"
    _emit(args, payload, text)
    return EXIT_OK if rep.monomorphism else EXIT_REFUTED


def cmd_basis(args):
    S = resolve_semiring(args.semiring)
    rep = satisfies_basis(S, _split(args.keys), **_sat_kwargs(args))
    text = "\n".join(f"{k}: {v.describe(S)}" for k, v in rep.verdicts.items())
    _emit(args, rep.to_json(S), text)
    return EXIT_OK if rep.passed else EXIT_REFUTED


def cmd_agree(args):
    if args.seed is None:
        raise UsageError("agree needs an explicit --seed")
    S = resolve_semiring(args.first)
    T = resolve_semiring(args.second)
    rep = equational_agreement(S, T, count=args.samples if args.samples is not None else 1000,
                               max_vars=min(args.max_vars, 4) if args.pool is None else args.pool,
                               max_word_len=args.max_word_len, seed=args.seed)
    first = rep.first_disagreement
    text = f"{rep.checked} identities, {len(rep.disagreements)} disagreements"
    if first:
        text += f"; first: {first[0]} (holds in {S.name}: {first[1]}, in {T.name}: {first[2]})"
    _emit(args, rep.to_json(), text)
    return EXIT_REFUTED if rep.disagreements else EXIT_OK


def cmd_derive(args):
    if args.search:
        if not args.basis:
            raise UsageError("derive --search needs --basis")
        goal = reduce_identity(parse_identity(args.target))
        if len(goal) != 1:
            raise UsageError("search goals must have the shape u ≈ u + q")
        limits = SearchLimits(args.max_steps, args.max_context, args.max_subst_len)
        script = bounded_search(_split(args.basis), goal[0], limits)
        if script is None:
            _emit(args, {"found": False}, "no derivation found within the limits")
            return EXIT_REFUTED
        _emit(args, {"found": True, "script": script.to_json()},
              json.dumps(script.to_json(), indent=2, ensure_ascii=False))
        return EXIT_OK
    script = load_script(args.target)
    res = replay_script(script, validate=args.validate, seed=args.seed or 0)
    payload = {"script": args.target, "ok": res.ok, "trace": [str(t) for t in res.trace],
               "failed_step": res.failed_step, "reason": res.reason}
    text = "\n".join(f"{i}: {t}" for i, t in enumerate(res.trace))
    text += "\nreplay " + ("succeeded" if res.ok else f"failed: {res.reason}")
    _emit(args, payload, text)
    return EXIT_OK if res.ok else EXIT_REFUTED


def cmd_tables(args):
    r = tables_mod.compute(args.which)
    if args.diff:
        problems = tables_mod.diff(args.which)
        _emit(args, {"which": args.which, "mismatches": problems},
              "\n".join(problems) if problems else f"{args.which}: 0 mismatches")
        return EXIT_REFUTED if problems else EXIT_OK
    if args.dot and args.which.startswith("hasse"):
        print(tables_mod.to_dot(r))
    else:
        _emit(args, {"which": r.which, **r.data}, tables_mod.render_text(r))
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, help="seed for every randomized step")
    common.add_argument("--max-vars", type=int, default=MAX_VARS,
                        help="cap on distinct variables per identity")
    common.add_argument("--samples", type=int,
                        help="check this many random assignments (or identities) instead")
    common.add_argument("--workers", type=int, help="parallel workers for exhaustive checks")

    p = argparse.ArgumentParser(prog="aisemiring",
                                description="Workbench for finite ai-semirings and their identities.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("axioms", cmd_axioms, "verify the ai-semiring axioms")
    sp.add_argument("semiring")
    sp = add("order", cmd_order, "natural order and Hasse edges")
    sp.add_argument("semiring")
    sp.add_argument("--dot", action="store_true")
    sp = add("check", cmd_check, "decide an identity")
    sp.add_argument("semiring")
    sp.add_argument("identity")
    sp = add("criterion", cmd_criterion, "syntactic criterion / necessary conditions")
    sp.add_argument("tag", choices=["L2", "R2", "N2", "T2", "M2", "D2", "S54", "S57", "S60"])
    sp.add_argument("identity")
    sp.add_argument("--brute", action="store_true", help="also decide by enumeration")
    sp = add("matrix", cmd_matrix, "build M_n(S)")
    sp.add_argument("base")
    sp.add_argument("n", type=int)
    sp.add_argument("--out", help="write the semiring JSON here")
    sp.add_argument("--materialize", action="store_true", help="fail instead of going lazy")
    sp = add("closure", cmd_closure, "subsemiring generated by elements")
    sp.add_argument("semiring")
    sp.add_argument("elements", nargs="+")
    sp = add("iso", cmd_iso, "search for an isomorphism")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--subset1", help="restrict the first semiring to these elements")
    sp.add_argument("--subset2", help="restrict the second semiring to these elements")
    sp = add("embed", cmd_embed, "build and verify an embedding")
    sp.add_argument("kind", choices=["constant", "padding", "phi"])
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--base")
    sp.add_argument("--out", help="write the element map JSON here")
    sp = add("basis", cmd_basis, "check catalog identities")
    sp.add_argument("semiring")
    sp.add_argument("keys", nargs="+",
                    help=f"identity keys or groups, e.g. {', '.join(list(GROUPS)[:3])}")
    sp = add("agree", cmd_agree, "compare two semirings on random identities")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--pool", type=int, help="variables in the sampler pool (default 4)")
    sp.add_argument("--max-word-len", type=int, default=4)
    sp = add("derive", cmd_derive, "replay a derivation script or search for one")
    sp.add_argument("target", help=f"script ({', '.join(bundled_scripts())}) or path; "
                                   "with --search, the goal identity")
    sp.add_argument("--validate", action="store_true")
    sp.add_argument("--search", action="store_true")
    sp.add_argument("--basis", action="append")
    sp.add_argument("--max-steps", type=int, default=6)
    sp.add_argument("--max-context", type=int, default=2)
    sp.add_argument("--max-subst-len", type=int, default=4)
    sp = add("tables", cmd_tables, "print a recomputed table or Hasse diagram")
    sp.add_argument("which", choices=tables_mod.WHICH)
    sp.add_argument("--diff", action="store_true", help="compare against the transcription")
    sp.add_argument("--dot", action="store_true")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (SemiringError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

__all__ = ["run", "main", "build_parser", "resolve_semiring", "IDENTITIES"]
