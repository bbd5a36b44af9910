"""Finite ai-semirings given by operation tables."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityError, FormatError, UnknownNameError

__all__ = [
    "CARRIER_LIMIT", "FiniteSemiring", "AxiomReport", "OrderRelation",
    "verify_ai_axioms", "natural_order", "zero_element", "zero_diagnosis",
    "direct_product", "catalog", "CATALOG_NAMES", "load_semiring",
    "trivial_semiring",
]

CARRIER_LIMIT = 1_000_000

_INDEX_DTYPE = np.int64


class FiniteSemiring:
    """A finite algebra ``(S, +, ·)`` over the carrier ``0..m-1``.

    ``add[i, j]`` and ``mul[i, j]`` are element indices; ``labels`` are only
    used for printing.  Construction checks shapes and ranges but not the
    ai-semiring axioms (see :func:`verify_ai_axioms`).
    """

    lazy = False

    def __init__(self, name: str, labels: Sequence[str], add, mul):
        labels = tuple(str(x) for x in labels)
        m = len(labels)
        if m == 0:
            raise FormatError("carrier must be nonempty")
        if len(set(labels)) != m:
            raise FormatError("element labels must be distinct")
        tables = []
        for op, table in (("add", add), ("mul", mul)):
            try:
                arr = np.array(table, dtype=_INDEX_DTYPE)
            except (TypeError, ValueError) as exc:
                raise FormatError(f"{op} table is not an integer matrix: {exc}") from None
            if arr.shape != (m, m):
                raise FormatError(f"{op} table has shape {arr.shape}, expected {(m, m)}")
            if arr.size and (arr.min() < 0 or arr.max() >= m):
                bad = np.argwhere((arr < 0) | (arr >= m))[0]
                raise FormatError(
                    f"{op}[{bad[0]}][{bad[1]}] = {arr[tuple(bad)]} is out of range 0..{m - 1}")
            arr.setflags(write=False)
            tables.append(arr)
        self.name = name
        self.labels = labels
        self.add, self.mul = tables
        self._index = {lab: i for i, lab in enumerate(labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"<FiniteSemiring {self.name} of order {self.size}>"

    def label(self, i: int) -> str:
        return self.labels[int(i)]

    def index(self, label) -> int:
        """Element index from a label (or an index given as int)."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.size:
                raise UnknownNameError(f"element index {label} out of range for {self.name}")
            return int(label)
        try:
            return self._index[str(label)]
        except KeyError:
            raise UnknownNameError(f"{self.name} has no element {label!r}") from None

    def add_op(self, a, b):
        return self.add[a, b]

    def mul_op(self, a, b):
        return self.mul[a, b]

    def relabel(self, labels: Sequence[str], name: Optional[str] = None) -> "FiniteSemiring":
        return FiniteSemiring(name or self.name, labels, self.add, self.mul)

    def induced(self, elements, name: Optional[str] = None) -> "FiniteSemiring":
        """Subalgebra on ``elements`` (in the given order); must be closed."""
        idx = [self.index(e) for e in elements]
        pos = {e: k for k, e in enumerate(idx)}
        try:
            add = [[pos[int(self.add[a, b])] for b in idx] for a in idx]
            mul = [[pos[int(self.mul[a, b])] for b in idx] for a in idx]
        except KeyError as exc:
            raise FormatError(
                f"subset is not closed: produces {self.label(exc.args[0])}") from None
        labels = [self.labels[i] for i in idx]
        return FiniteSemiring(name or f"{self.name}[{','.join(labels)}]", labels, add, mul)

    def to_json(self) -> dict:
        return {"name": self.name, "elements": list(self.labels),
                "add": self.add.tolist(), "mul": self.mul.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSemiring":
        if not isinstance(data, dict):
            raise FormatError("semiring JSON must be an object")
        missing = {"elements", "add", "mul"} - set(data)
        if missing:
            raise FormatError(f"semiring JSON lacks {sorted(missing)}")
        return cls(data.get("name", "S"), data["elements"], data["add"], data["mul"])

    def same_tables(self, other) -> bool:
        return (self.size == other.size and np.array_equal(self.add, other.add)
                and np.array_equal(self.mul, other.mul))


def load_semiring(path: str | os.PathLike) -> FiniteSemiring:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from None
    return FiniteSemiring.from_json(data)


def trivial_semiring() -> FiniteSemiring:
    return FiniteSemiring("1", ["0"], [[0]], [[0]])


# -- axioms ------------------------------------------------------------------------

AXIOMS = (
    "add_idempotent",
    "add_commutative",
    "add_associative",
    "mul_associative",
    "left_distributive",
    "right_distributive",
)


@dataclass
class AxiomReport:
    passed: bool
    # axiom name -> lexicographically least witness (1, 2 or 3 elements)
    failures: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def describe(self, S=None) -> str:
        if self.passed:
            return "all ai-semiring axioms hold"
        lines = []
        for ax, wit in self.failures.items():
            names = [S.label(w) for w in wit] if S is not None else list(wit)
            lines.append(f"{ax} fails at {tuple(names)}")
        return "\n".join(lines)


def _first_failure(bad: np.ndarray):
    if not bad.any():
        return None
    return tuple(int(i) for i in np.unravel_index(int(np.argmax(bad)), bad.shape))


def verify_ai_axioms(S: FiniteSemiring) -> AxiomReport:
    """Exhaustive check of the ai-semiring axioms.

    Triple-based axioms are scanned one leading element at a time, so the
    reported witness is the lexicographically least failing triple.
    """
    add, mul = S.add, S.mul
    m = S.size
    r = np.arange(m)
    failures = {}

    diag = add[r, r] != r
    if diag.any():
        failures["add_idempotent"] = (int(np.argmax(diag)),)
    wit = _first_failure(add != add.T)
    if wit:
        failures["add_commutative"] = wit

    b = r[:, None]
    c = r[None, :]
    checks = {
        "add_associative": lambda a: add[add[a, b], c] != add[a, add[b, c]],
        "mul_associative": lambda a: mul[mul[a, b], c] != mul[a, mul[b, c]],
        "left_distributive": lambda a: mul[a, add[b, c]] != add[mul[a, b], mul[a, c]],
        "right_distributive": lambda a: mul[add[a, b], c] != add[mul[a, c], mul[b, c]],
    }
    for ax, bad_for in checks.items():
        for a in range(m):
            wit = _first_failure(bad_for(a))
            if wit:
                failures[ax] = (a,) + wit
                break
    ordered = {ax: failures[ax] for ax in AXIOMS if ax in failures}
    return AxiomReport(not ordered, ordered)


# -- order -------------------------------------------------------------------------

@dataclass
class OrderRelation:
    """``leq[a, b]`` iff ``a + b = b``; ``edges`` are the covering pairs ``(a, b)``, a < b."""

    leq: np.ndarray
    edges: list

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def is_partial_order(self) -> bool:
        leq = self.leq
        refl = bool(np.all(np.diag(leq)))
        antisym = not np.any(leq & leq.T & ~np.eye(self.size, dtype=bool))
        trans = not np.any((leq.astype(np.int64) @ leq.astype(np.int64) > 0) & ~leq)
        return refl and antisym and trans


def covering_pairs(leq: np.ndarray) -> list:
    lt = leq & ~np.eye(leq.shape[0], dtype=bool)
    lt_i = lt.astype(np.int64)
    cover = lt & ~((lt_i @ lt_i) > 0)
    return [(int(a), int(b)) for a, b in np.argwhere(cover)]


def natural_order(S: FiniteSemiring) -> OrderRelation:
    r = np.arange(S.size)
    leq = S.add == r[None, :]
    return OrderRelation(leq, covering_pairs(leq))


# -- zero --------------------------------------------------------------------------

def zero_diagnosis(S: FiniteSemiring):
    """Return ``(zero, reason)``: the zero element or ``None`` with an explanation."""
    r = np.arange(S.size)
    identities = [e for e in range(S.size) if np.array_equal(S.add[e], r)]
    if not identities:
        return None, f"{S.name} has no additive identity"
    e = identities[0]
    left = np.flatnonzero(S.mul[e] != e)
    if left.size:
        a = int(left[0])
        return None, (f"left absorption fails in {S.name}: "
                      f"{S.label(e)}·{S.label(a)} = {S.label(S.mul[e, a])} ≠ {S.label(e)}")
    right = np.flatnonzero(S.mul[:, e] != e)
    if right.size:
        a = int(right[0])
        return None, (f"right absorption fails in {S.name}: "
                      f"{S.label(a)}·{S.label(e)} = {S.label(S.mul[a, e])} ≠ {S.label(e)}")
    return e, None


def zero_element(S: FiniteSemiring) -> Optional[int]:
    """The additive identity that is also a multiplicative zero, if any."""
    return zero_diagnosis(S)[0]


# -- products ----------------------------------------------------------------------

def direct_product(S: FiniteSemiring, T: FiniteSemiring, *,
                   carrier_limit: int = CARRIER_LIMIT) -> FiniteSemiring:
    m, k = S.size, T.size
    if m * k > carrier_limit:
        raise CapacityError(f"{S.name}×{T.name} has {m * k} elements (limit {carrier_limit})")
    # element (s, t) has index s*k + t
    s = np.repeat(np.arange(m), k)
    t = np.tile(np.arange(k), m)
    add = S.add[s[:, None], s[None, :]] * k + T.add[t[:, None], t[None, :]]
    mul = S.mul[s[:, None], s[None, :]] * k + T.mul[t[:, None], t[None, :]]
    labels = [f"({S.labels[i]},{T.labels[j]})" for i, j in zip(s, t)]
    return FiniteSemiring(f"{S.name}x{T.name}", labels, add, mul)


# -- catalog -----------------------------------------------------------------------

_ADD2 = [[0, 1], [1, 1]]
# 3-element semirings: carrier printed as 1, 2, 3 (indices 0, 1, 2)
_ADD3 = [[0, 0, 2], [0, 1, 2], [2, 2, 2]]

_TABLES = {
    "L2": (["0", "1"], _ADD2, [[0, 0], [1, 1]]),
    "R2": (["0", "1"], _ADD2, [[0, 1], [0, 1]]),
    "N2": (["0", "1"], _ADD2, [[0, 0], [0, 0]]),
    "T2": (["0", "1"], _ADD2, [[1, 1], [1, 1]]),
    "M2": (["0", "1"], _ADD2, [[0, 1], [1, 1]]),
    "D2": (["0", "1"], _ADD2, [[0, 0], [0, 1]]),
    "S54": (["1", "2", "3"], _ADD3, [[2, 0, 2], [2, 1, 2], [2, 2, 2]]),
    "S56": (["1", "2", "3"], _ADD3, [[2, 1, 2], [2, 1, 2], [2, 1, 2]]),
    "S57": (["1", "2", "3"], _ADD3, [[2, 2, 2], [0, 1, 2], [2, 2, 2]]),
    "S58": (["1", "2", "3"], _ADD3, [[2, 2, 2], [1, 1, 1], [2, 2, 2]]),
    "S60": (["1", "2", "3"], _ADD3, [[2, 2, 2], [2, 1, 2], [2, 2, 2]]),
}

# SR6 multiplication over O, A, P, R, Z, F and its additive Hasse diagram.
_SR6_LABELS = ["O", "A", "P", "R", "Z", "F"]
_SR6_MUL = [
    "O P P F F F",
    "R Z Z F F F",
    "F F F F F F",
    "R Z Z F F F",
    "F F F F F F",
    "F F F F F F",
]
_SR6_COVERS = [("O", "A"), ("A", "P"), ("A", "R"), ("P", "Z"), ("R", "Z"), ("Z", "F")]

CATALOG_NAMES = tuple(_TABLES) + ("SR6",)


def join_table_from_covers(labels: Sequence[str], covers) -> list:
    """Addition table of the join-semilattice with the given Hasse diagram."""
    m = len(labels)
    pos = {lab: i for i, lab in enumerate(labels)}
    leq = np.eye(m, dtype=bool)
    for a, b in covers:
        leq[pos[a], pos[b]] = True
    for k in range(m):  # Warshall closure
        leq |= leq[:, [k]] & leq[[k], :]
    add = np.empty((m, m), dtype=_INDEX_DTYPE)
    for a in range(m):
        for b in range(m):
            ub = np.flatnonzero(leq[a] & leq[b])
            least = [c for c in ub if leq[c, ub].all()]
            if len(least) != 1:
                raise FormatError(f"{labels[a]} and {labels[b]} have no join")
            add[a, b] = least[0]
    return add.tolist()


def _sr6() -> FiniteSemiring:
    pos = {lab: i for i, lab in enumerate(_SR6_LABELS)}
    mul = [[pos[c] for c in row.split()] for row in _SR6_MUL]
    add = join_table_from_covers(_SR6_LABELS, _SR6_COVERS)
    return FiniteSemiring("SR6", _SR6_LABELS, add, mul)


def catalog(name: str) -> FiniteSemiring:
    """One of the named semirings L2, R2, N2, T2, M2, D2, S54..S60, SR6."""
    if name == "SR6":
        return _sr6()
    try:
        labels, add, mul = _TABLES[name]
    except KeyError:
        raise UnknownNameError(
            f"unknown semiring {name!r}; known: {', '.join(CATALOG_NAMES)}") from None
    return FiniteSemiring(name, labels, add, mul)
