"""Deciding identities in finite ai-semirings by enumerating assignments.

An identity holds in ``S`` when both sides agree under every assignment of
elements of ``S`` to its variables.  Assignments are enumerated in
lexicographic order (variables ordered by first occurrence in the printed
identity); the trailing variables of each block are evaluated together with
numpy broadcasting and word prefixes shared between summands are evaluated
once per block.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .errors import AssignmentError, CapacityError, UnknownNameError
from .identities import resolve_keys
from .terms import Identity, SimpleIdentity, Sum, Term, Var, term_stats

__all__ = [
    "MAX_VARS", "MAX_ASSIGNMENTS", "Verdict", "BasisReport", "AgreementReport",
    "evaluate", "evaluate_ast", "satisfies", "satisfies_basis",
    "syntactic_criterion", "necessary_conditions", "equational_agreement",
    "random_simple_identity", "random_identity", "default_workers",
]

MAX_VARS = 8
MAX_ASSIGNMENTS = 10 ** 10
BLOCK = 1 << 20


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("AISEMIRING_WORKERS", "1")))
    except ValueError:
        return 1


# -- evaluation ----------------------------------------------------------------------

def _eval_terms(S, terms: Sequence[Term], columns: dict) -> list:
    """Values of ``terms`` when variable ``v`` takes the (broadcastable) value ``columns[v]``."""
    cache = {}

    def word_value(w):
        best = len(w)
        while best > 0 and w[:best] not in cache:
            best -= 1
        if best == 0:
            val = columns[w[0]]
            cache[w[:1]] = val
            best = 1
        val = cache[w[:best]]
        for i in range(best, len(w)):
            val = S.mul_op(val, columns[w[i]])
            cache[w[:i + 1]] = val
        return val

    out = []
    for t in terms:
        acc = None
        for w in t:
            v = word_value(w)
            acc = v if acc is None else S.add_op(acc, v)
        out.append(acc)
    return out


def _coerce(S, value):
    try:
        return S.index(value)
    except UnknownNameError as exc:
        raise AssignmentError(str(exc)) from None


def evaluate(S, t: Term, assignment: dict) -> int:
    """Value of ``t`` in ``S`` under ``assignment`` (variable -> element index or label)."""
    missing = [v for v in t.variables() if v not in assignment]
    if missing:
        raise AssignmentError(f"no value for variable(s) {', '.join(missing)}")
    cols = {v: np.int64(_coerce(S, assignment[v])) for v in t.variables()}
    return int(_eval_terms(S, [t], cols)[0])


def evaluate_ast(S, ast, assignment: dict) -> int:
    """Evaluate a parsed (not normalized) term directly, following its tree shape."""
    if isinstance(ast, Var):
        if ast.name not in assignment:
            raise AssignmentError(f"no value for variable {ast.name}")
        return _coerce(S, assignment[ast.name])
    if isinstance(ast, Term):
        return evaluate(S, ast, assignment)
    vals = [evaluate_ast(S, item, assignment) for item in ast.items]
    op = S.add_op if isinstance(ast, Sum) else S.mul_op
    acc = vals[0]
    for v in vals[1:]:
        acc = int(op(acc, v))
    return acc


# -- verdicts ------------------------------------------------------------------------

@dataclass
class Verdict:
    holds: bool
    witness: Optional[dict] = None  # variable -> element index
    lhs_value: Optional[int] = None
    rhs_value: Optional[int] = None
    assignments_checked: int = 0
    exhaustive: bool = True
    seed: Optional[int] = None
    identity: Optional[Identity] = None

    def __bool__(self):
        return self.holds

    def witness_labels(self, S) -> Optional[dict]:
        if self.witness is None:
            return None
        return {v: S.label(e) for v, e in self.witness.items()}

    def to_json(self, S) -> dict:
        out = {
            "semiring": S.name,
            "identity": str(self.identity) if self.identity is not None else None,
            "holds": self.holds,
            "exhaustive": self.exhaustive,
            "assignments_checked": self.assignments_checked,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if not self.holds:
            out["witness"] = self.witness_labels(S)
            out["lhs_value"] = S.label(self.lhs_value)
            out["rhs_value"] = S.label(self.rhs_value)
        return out

    def describe(self, S) -> str:
        how = "exhaustively" if self.exhaustive else f"on {self.assignments_checked} samples"
        if self.holds:
            return f"holds in {S.name} ({how}, {self.assignments_checked} assignments)"
        wit = ", ".join(f"{v}={lab}" for v, lab in self.witness_labels(S).items())
        return (f"fails in {S.name}: {wit} gives {S.label(self.lhs_value)} ≠ "
                f"{S.label(self.rhs_value)}")


def _scan_block(S, identity, variables, lead_values, trailing, m):
    """First mismatch inside one block of assignments, as (flat offset, values) or None."""
    t = len(trailing)
    cols = {v: np.int64(x) for v, x in zip(variables, lead_values)}
    for j, v in enumerate(trailing):
        shape = [1] * t
        shape[j] = m
        cols[v] = np.arange(m, dtype=np.int64).reshape(shape)
    lhs, rhs = _eval_terms(S, [identity.lhs, identity.rhs], cols)
    bad = np.broadcast_to(np.asarray(lhs != rhs), (m,) * t)
    if not bad.any():
        return None
    flat = int(np.argmax(bad))
    pos = np.unravel_index(flat, (m,) * t) if t else ()
    lv = np.broadcast_to(np.asarray(lhs), (m,) * t)[pos]
    rv = np.broadcast_to(np.asarray(rhs), (m,) * t)[pos]
    return flat, tuple(lead_values) + tuple(int(p) for p in pos), int(lv), int(rv)


def satisfies(S, identity: Identity, *, max_vars: int = MAX_VARS,
              samples: Optional[int] = None, seed: Optional[int] = None,
              workers: Optional[int] = None, block: int = BLOCK,
              max_assignments: int = MAX_ASSIGNMENTS) -> Verdict:
    """Decide whether ``S`` satisfies ``identity``.

    Without ``samples`` every one of the ``m**k`` assignments is checked and a
    failing verdict carries the lexicographically least counterexample.
    With ``samples`` that many seeded random assignments are checked instead.
    """
    variables = identity.variables()
    k = len(variables)
    m = S.size
    if k > max_vars:
        raise CapacityError(f"identity has {k} variables; the limit is {max_vars}")
    if identity.trivial:
        return Verdict(True, assignments_checked=0, identity=identity)
    if samples is not None:
        return _satisfies_sampled(S, identity, variables, samples, seed, block)
    total = m ** k
    if total > max_assignments:
        raise CapacityError(
            f"{total} assignments exceed the exhaustive limit {max_assignments}; use sampling")

    t = 1
    while t < k and m ** (t + 1) <= block:
        t += 1
    lead, trailing = variables[:k - t], variables[k - t:]
    width = m ** t
    n_blocks = m ** len(lead)
    workers = workers or default_workers()

    def run(lo, hi):
        it = product(range(m), repeat=len(lead))
        for bi, vals in enumerate(it):
            if bi < lo:
                continue
            if bi >= hi:
                break
            hit = _scan_block(S, identity, lead, vals, trailing, m)
            if hit is not None:
                return bi * width + hit[0], hit[1:]
        return None

    if workers <= 1 or n_blocks < 2:
        hits = [run(0, n_blocks)]
    else:
        bounds = np.linspace(0, n_blocks, min(workers, n_blocks) + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = list(pool.map(lambda ab: run(*ab), zip(bounds[:-1], bounds[1:])))
    hits = [h for h in hits if h is not None]
    if not hits:
        return Verdict(True, assignments_checked=total, identity=identity)
    index, (values, lv, rv) = min(hits, key=lambda h: h[0])
    return Verdict(False, dict(zip(variables, values)), lv, rv,
                   assignments_checked=index + 1, identity=identity)


def _satisfies_sampled(S, identity, variables, samples, seed, block):
    if seed is None:
        raise ValueError("sampled satisfaction needs an explicit seed")
    rng = np.random.default_rng(seed)
    k, m = len(variables), S.size
    best = None
    done = 0
    batch = max(1, block // 4)
    while done < samples:
        n = min(batch, samples - done)
        vals = rng.integers(0, m, size=(n, k), dtype=np.int64)
        cols = {v: vals[:, j] for j, v in enumerate(variables)}
        lhs, rhs = _eval_terms(S, [identity.lhs, identity.rhs], cols)
        lhs = np.broadcast_to(np.asarray(lhs), (n,))
        rhs = np.broadcast_to(np.asarray(rhs), (n,))
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            rows = vals[bad]
            least = bad[np.lexsort(rows.T[::-1])[0]]
            cand = (tuple(int(x) for x in vals[least]), int(lhs[least]), int(rhs[least]))
            if best is None or cand[0] < best[0]:
                best = cand
        done += n
    if best is None:
        return Verdict(True, assignments_checked=samples, exhaustive=False, seed=seed,
                       identity=identity)
    return Verdict(False, dict(zip(variables, best[0])), best[1], best[2],
                   assignments_checked=samples, exhaustive=False, seed=seed, identity=identity)


@dataclass
class BasisReport:
    semiring: str
    verdicts: dict = field(default_factory=dict)  # key -> Verdict

    @property
    def passed(self) -> bool:
        return all(v.holds for v in self.verdicts.values())

    def to_json(self, S) -> dict:
        return {"semiring": self.semiring, "passed": self.passed,
                "identities": {k: v.to_json(S) for k, v in self.verdicts.items()}}


def satisfies_basis(S, keys, **kwargs) -> BasisReport:
    report = BasisReport(S.name)
    for key, ident in resolve_keys(keys):
        report.verdicts[key] = satisfies(S, ident, **kwargs)
    return report


# -- syntactic criteria ----------------------------------------------------------------

TWO_ELEMENT_TAGS = ("L2", "R2", "N2", "T2", "M2", "D2")


def syntactic_criterion(tag: str, si: SimpleIdentity) -> bool:
    """Decide ``u ≈ u+q`` in a two-element ai-semiring from the shape of ``u`` and ``q``."""
    if tag not in TWO_ELEMENT_TAGS:
        raise UnknownNameError(f"no syntactic criterion for {tag!r}")
    if si.trivial:
        return True
    u, q = si.u, si.q
    if tag == "L2":
        return any(w[0] == q[0] for w in u)
    if tag == "R2":
        return any(w[-1] == q[-1] for w in u)
    if tag == "N2":
        return len(q) >= 2
    if tag == "T2":
        return any(len(w) >= 2 for w in u)
    if tag == "M2":
        return set(q) <= term_stats(u).content
    return any(set(q) >= set(w) for w in u)  # D2


def necessary_conditions(tag: str, si: SimpleIdentity) -> bool:
    """Conditions that every identity ``u ≈ u+q`` of S54, S57 or S60 must meet.

    ``c(s(u))`` and ``c(p(u))`` for a sum ``u`` are read as unions over its
    summands.
    """
    if tag not in ("S54", "S57", "S60"):
        raise UnknownNameError(f"no necessary conditions recorded for {tag!r}")
    if si.trivial:
        return True
    u, q = si.u, si.q
    st = term_stats(u)
    has_long = bool(st.long_words)
    if tag == "S54":
        return has_long and set(q[1:]) <= st.suffix_content and q[0] in st.content
    if tag == "S57":
        return has_long and set(q[:-1]) <= st.prefix_content and q[-1] in st.content
    if not has_long:
        return False
    if len(q) == 1:
        return q[0] in st.content
    return set(q) <= st.long_content


# -- random identities and agreement ----------------------------------------------------

def _pool(n):
    return [f"x{i}" for i in range(1, n + 1)]


def _random_word(rng, pool, max_len):
    length = int(rng.integers(1, max_len + 1))
    return tuple(pool[int(i)] for i in rng.integers(0, len(pool), size=length))


def random_simple_identity(rng, *, max_vars: int = 5, max_word_len: int = 6,
                           max_summands: int = 4) -> SimpleIdentity:
    pool = _pool(int(rng.integers(1, max_vars + 1)))
    u = Term(_random_word(rng, pool, max_word_len)
             for _ in range(int(rng.integers(1, max_summands + 1))))
    if rng.random() < 0.15:
        q = u.words[int(rng.integers(0, len(u)))]
    else:
        q = _random_word(rng, pool, max_word_len)
    return SimpleIdentity(u, q)


def random_identity(rng, *, max_vars: int = 4, max_word_len: int = 4,
                    max_summands: int = 3) -> Identity:
    """Each side: 1..max_summands words of length 1..max_word_len over ≤ max_vars variables."""
    pool = _pool(max_vars)

    def side():
        return Term(_random_word(rng, pool, max_word_len)
                    for _ in range(int(rng.integers(1, max_summands + 1))))
    return Identity(side(), side())


@dataclass
class AgreementReport:
    left: str
    right: str
    seed: int
    checked: int = 0
    agreements: int = 0
    disagreements: list = field(default_factory=list)  # (identity, holds_left, holds_right)
    config: dict = field(default_factory=dict)

    @property
    def first_disagreement(self):
        return self.disagreements[0] if self.disagreements else None

    def to_json(self) -> dict:
        return {
            "left": self.left, "right": self.right, "seed": self.seed, **self.config,
            "checked": self.checked, "agreements": self.agreements,
            "disagreements": [{"identity": str(i), "left": a, "right": b}
                              for i, a, b in self.disagreements],
        }


def equational_agreement(S, T, *, count: int = 1000, max_vars: int = 4,
                         max_word_len: int = 4, max_summands: int = 3, seed: int = 0,
                         identities: Sequence[Identity] = (), stop_at_first: bool = False,
                         **kwargs) -> AgreementReport:
    """Compare which identities hold in ``S`` and ``T``.

    The explicit ``identities`` are checked first, then ``count`` identities
    drawn from a generator seeded with ``seed``.
    """
    if max_vars > MAX_VARS:
        raise CapacityError(f"sampler uses {max_vars} variables; the limit is {MAX_VARS}")
    rng = np.random.default_rng(seed)
    report = AgreementReport(S.name, T.name, seed, config={
        "count": count, "max_vars": max_vars, "max_word_len": max_word_len,
        "max_summands": max_summands})
    stream = list(identities) + [None] * count
    for ident in stream:
        if ident is None:
            ident = random_identity(rng, max_vars=max_vars, max_word_len=max_word_len,
                                    max_summands=max_summands)
        a = satisfies(S, ident, **kwargs).holds
        b = satisfies(T, ident, **kwargs).holds
        report.checked += 1
        if a == b:
            report.agreements += 1
        else:
            report.disagreements.append((ident, a, b))
            if stop_at_first:
                break
    return report
