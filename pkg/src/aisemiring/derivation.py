"""Equational derivations over sum-of-words terms.

A step instantiates a basis identity ``L ≈ R`` by a substitution, wraps every
word of both sides in a multiplicative context ``a·_·b`` and then either
adds the wrapped ``R`` to the current term (``enlarge``, sound because
``t ≈ t + a·σL·b`` whenever ``a·σL·b ⊆ t``) or swaps the wrapped ``L`` for it
(``replace``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import product
from typing import Optional

import numpy as np

from .errors import CapacityError, FormatError, PreconditionError, StepMismatchError
from .identities import IDENTITIES, identity as catalog_identity, resolve_keys
from .matrix import named_semiring
from .terms import (Identity, SimpleIdentity, Term, format_word, parse_identity,
                    parse_word, term, var_key)

__all__ = [
    "Substitution", "RewriteStep", "DerivationScript", "ReplayResult", "apply_step",
    "replay_script", "bounded_search", "load_script", "bundled_scripts",
    "designated_model", "SearchLimits",
]


class Substitution(dict):
    """Map from variable names to :class:`Term` images."""

    def __init__(self, mapping=()):
        super().__init__()
        for v, img in dict(mapping).items():
            img = term(img)
            self[v] = img

    def apply(self, t: Term) -> Term:
        words = []
        for w in t:
            parts = [self[v].words if v in self else ((v,),) for v in w]
            words.extend(sum(combo, ()) for combo in product(*parts))
        return Term(words)

    def to_json(self) -> dict:
        return {v: str(img) for v, img in self.items()}


@dataclass
class RewriteStep:
    identity: object  # catalog key or Identity
    direction: str = "fwd"
    substitution: Substitution = field(default_factory=Substitution)
    context: tuple = ((), ())
    mode: str = "enlarge"

    def __post_init__(self):
        if self.direction not in ("fwd", "bwd"):
            raise FormatError(f"direction must be fwd or bwd, not {self.direction!r}")
        if self.mode not in ("enlarge", "replace"):
            raise FormatError(f"mode must be enlarge or replace, not {self.mode!r}")
        if not isinstance(self.substitution, Substitution):
            self.substitution = Substitution(self.substitution)
        a, b = self.context
        self.context = (parse_word(a) if isinstance(a, str) else tuple(a),
                        parse_word(b) if isinstance(b, str) else tuple(b))

    @property
    def key(self) -> str:
        return self.identity if isinstance(self.identity, str) else str(self.identity)

    def resolved(self) -> Identity:
        if isinstance(self.identity, Identity):
            return self.identity
        if self.identity in IDENTITIES:
            return catalog_identity(self.identity)
        return parse_identity(self.identity)

    def sides(self) -> tuple[Term, Term]:
        """Wrapped instances of the trigger side and the result side."""
        ident = self.resolved()
        lhs, rhs = (ident.lhs, ident.rhs) if self.direction == "fwd" else (ident.rhs, ident.lhs)
        a, b = self.context
        wrap = lambda t: Term(a + w + b for w in self.substitution.apply(t))  # noqa: E731
        return wrap(lhs), wrap(rhs)

    def to_json(self) -> dict:
        return {"id": self.key, "dir": self.direction, "subst": self.substitution.to_json(),
                "ctx": [format_word(self.context[0]), format_word(self.context[1])],
                "mode": self.mode}

    @classmethod
    def from_json(cls, data: dict) -> "RewriteStep":
        try:
            return cls(data["id"], data.get("dir", "fwd"), Substitution(data.get("subst", {})),
                       tuple(data.get("ctx", ["", ""])), data.get("mode", "enlarge"))
        except KeyError as exc:
            raise FormatError(f"step lacks {exc}") from None


def apply_step(t: Term, step: RewriteStep) -> Term:
    trigger, result = step.sides()
    missing = [w for w in trigger if w not in t]
    if missing:
        raise StepMismatchError(
            f"{step.key} needs {format_word(missing[0])}, which is not a summand of {t}",
            missing[0])
    if step.mode == "enlarge":
        return t | result
    rest = [w for w in t if w not in trigger]
    return Term(rest + list(result.words))


# -- scripts --------------------------------------------------------------------------

@dataclass
class DerivationScript:
    start: Term
    steps: list
    expected_end: Term
    name: str = ""
    note: str = ""

    def to_json(self) -> dict:
        out = {"start": str(self.start), "steps": [s.to_json() for s in self.steps],
               "end": str(self.expected_end)}
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "DerivationScript":
        try:
            return cls(term(data["start"]), [RewriteStep.from_json(s) for s in data["steps"]],
                       term(data["end"]), name=name, note=data.get("note", ""))
        except KeyError as exc:
            raise FormatError(f"script lacks {exc}") from None


BUNDLED = ("cor42", "prop31-case1", "prop31-case2-witness-note",
           "prop41-case1", "prop41-case2", "prop41-case3")


def bundled_scripts() -> tuple:
    return BUNDLED


def load_script(name_or_path: str) -> DerivationScript:
    """Load a bundled script by name, or a script file by path."""
    if name_or_path in BUNDLED:
        ref = resources.files("aisemiring").joinpath(f"data/scripts/{name_or_path}.json")
        return DerivationScript.from_json(json.loads(ref.read_text("utf-8")), name_or_path)
    try:
        with open(name_or_path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise FormatError(f"no bundled script or file named {name_or_path!r}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{name_or_path}: invalid JSON: {exc}") from None
    return DerivationScript.from_json(data, name_or_path)


# -- replay and validation ---------------------------------------------------------------

_MODEL_FOR = {
    "F9": "M2x2", "F10": "M2x2", "F11": "M2x2", "F12": "M2x2",
    "F1": "L2x2", "T22": "L2x2", "F3": "R2x2",
    "N21": "N2x2", "N22": "N2x2",
}


def designated_model(key: str):
    """A small semiring satisfying the identity ``key``, used to spot-check steps."""
    name = _MODEL_FOR.get(key)
    if name is None:
        for base in ("L2", "R2", "N2", "T2", "M2", "D2", "S54", "S56", "S57", "S58", "S60"):
            if key == f"B-{base}" or key.startswith(f"B-{base}."):
                name = base
                break
    if name is None:
        raise PreconditionError(f"no designated model for identity {key!r}")
    return named_semiring(name)


@dataclass
class ReplayResult:
    ok: bool
    trace: list  # canonical Term after each step, starting with the start term
    failed_step: Optional[int] = None
    reason: str = ""
    validated_steps: int = 0


def _validate_step(before: Term, after: Term, key: str, samples: int, seed: int, model=None):
    from .satisfaction import _eval_terms
    S = model if model is not None else designated_model(key)
    variables = list(dict.fromkeys(before.variables() + after.variables()))
    rng = np.random.default_rng(seed)
    vals = rng.integers(0, S.size, size=(samples, len(variables)), dtype=np.int64)
    cols = {v: vals[:, j] for j, v in enumerate(variables)}
    lv, rv = _eval_terms(S, [before, after], cols)
    bad = np.flatnonzero(np.broadcast_to(np.asarray(lv != rv), (samples,)))
    if bad.size:
        row = vals[bad[0]]
        wit = ", ".join(f"{v}={S.label(x)}" for v, x in zip(variables, row))
        return f"step changes the value in {S.name} at {wit}"
    return None


def replay_script(script: DerivationScript, *, validate: bool = False, samples: int = 1000,
                  seed: int = 0, model=None) -> ReplayResult:
    """Apply every step in order; succeed iff each trigger matches and the end term is reached.

    With ``validate`` each step is also checked semantically: the terms before
    and after must agree under ``samples`` seeded random assignments in a
    model of the step's identity.
    """
    t = script.start
    trace = [t]
    validated = 0
    for i, step in enumerate(script.steps):
        try:
            nxt = apply_step(t, step)
        except StepMismatchError as exc:
            return ReplayResult(False, trace, i, str(exc), validated)
        if validate:
            problem = _validate_step(t, nxt, step.key, samples, seed + i, model)
            if problem:
                return ReplayResult(False, trace, i, problem, validated)
            validated += 1
        t = nxt
        trace.append(t)
    if t != script.expected_end:
        return ReplayResult(False, trace, None,
                            f"ended at {t}, expected {script.expected_end}", validated)
    return ReplayResult(True, trace, None, "", validated)


# -- bounded proof search -----------------------------------------------------------------

@dataclass
class SearchLimits:
    max_steps: int = 6
    max_context: int = 2
    max_subst_len: int = 4
    max_frontier: int = 100_000

    def __post_init__(self):
        if min(self.max_steps, self.max_context + 1, self.max_subst_len, self.max_frontier) < 1:
            raise PreconditionError("search limits must be positive")


def _match_word(pattern, target, sigma, max_len):
    """Extensions of ``sigma`` (var -> word) making ``pattern`` spell ``target``."""
    if not pattern:
        if not target:
            yield sigma
        return
    v, rest = pattern[0], pattern[1:]
    if v in sigma:
        img = sigma[v]
        if target[:len(img)] == img:
            yield from _match_word(rest, target[len(img):], sigma, max_len)
        return
    upper = min(max_len, len(target) - len(rest))
    for k in range(1, upper + 1):
        yield from _match_word(rest, target[k:], {**sigma, v: target[:k]}, max_len)


def _factors(words, max_len):
    out = set()
    for w in words:
        for i in range(len(w)):
            for j in range(i + 1, min(len(w), i + max_len) + 1):
                out.add(w[i:j])
    return sorted(out, key=lambda w: (len(w), tuple(var_key(v) for v in w)))


def _candidate_steps(t: Term, basis, goal_q, limits: SearchLimits):
    words = list(t)
    contexts = set()
    for w in words:
        for i in range(0, min(limits.max_context, len(w) - 1) + 1):
            for j in range(0, min(limits.max_context, len(w) - 1 - i) + 1):
                contexts.add((w[:i], w[len(w) - j:] if j else ()))
    pool = _factors(words + [goal_q], limits.max_subst_len)
    ctx_order = sorted(contexts, key=lambda c: (len(c[0]) + len(c[1]), c))
    for label, ident in basis:
        for direction in ("fwd", "bwd"):
            lhs, rhs = (ident.lhs, ident.rhs) if direction == "fwd" else (ident.rhs, ident.lhs)
            lvars = set(lhs.variables())
            free = [v for v in rhs.variables() if v not in lvars]
            for a, b in ctx_order:
                middles = [w[len(a):len(w) - len(b)] for w in words
                           if len(w) > len(a) + len(b) and w[:len(a)] == a
                           and (not b or w[len(w) - len(b):] == b)]
                if not middles:
                    continue
                for sigma in _match_all(list(lhs), middles, {}, limits.max_subst_len):
                    for extra in product(pool, repeat=len(free)):
                        full = {**sigma, **dict(zip(free, extra))}
                        subst = Substitution({v: Term([full[v]]) for v in
                                              sorted(full, key=var_key)})
                        yield RewriteStep(label, direction, subst, (a, b), "enlarge")


def _match_all(patterns, middles, sigma, max_len):
    if not patterns:
        yield sigma
        return
    first, rest = patterns[0], patterns[1:]
    seen = set()
    for target in middles:
        for s in _match_word(first, target, sigma, max_len):
            for s2 in _match_all(rest, middles, s, max_len):
                k = tuple(sorted(s2.items()))
                if k not in seen:
                    seen.add(k)
                    yield s2


def bounded_search(basis, goal: SimpleIdentity, limits: Optional[SearchLimits] = None
                   ) -> Optional[DerivationScript]:
    """Breadth-first search over enlarge steps from ``goal.u`` to a term containing ``goal.q``.

    ``None`` only means nothing was found within the limits.  A frontier
    larger than ``limits.max_frontier`` raises :class:`CapacityError`.
    """
    limits = limits or SearchLimits()
    basis = resolve_keys(basis)
    start = goal.u
    q = tuple(goal.q)
    if q in start:
        return DerivationScript(start, [], start)
    parents = {start: None}
    frontier = [start]
    for _ in range(limits.max_steps):
        nxt = []
        for t in frontier:
            for step in _candidate_steps(t, basis, q, limits):
                _, result = step.sides()
                if result.issubset(t):
                    continue
                new = t | result
                if new in parents:
                    continue
                parents[new] = (t, step)
                if q in new:
                    return _script_from(parents, start, new)
                nxt.append(new)
                if len(nxt) > limits.max_frontier:
                    raise CapacityError(
                        f"search frontier exceeds {limits.max_frontier} terms")
        if not nxt:
            return None
        frontier = nxt
    return None


def _script_from(parents, start, end) -> DerivationScript:
    steps = []
    t = end
    while parents[t] is not None:
        prev, step = parents[t]
        steps.append(step)
        t = prev
    return DerivationScript(start, steps[::-1], end)
