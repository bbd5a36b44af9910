"""Recompute the printed tables and Hasse diagrams and compare them with the
bundled transcriptions."""
from __future__ import annotations

from dataclasses import dataclass, field

from .identities import BASIS_OF, identity as catalog_identity
from .matrix import m2m2, reference_tables, subsemiring_closure
from .semiring import FiniteSemiring, catalog, natural_order
from .terms import parse_identity

__all__ = ["WHICH", "Rendering", "compute", "diff", "sr6_from_m2m2", "render_text", "to_dot"]

WHICH = ("table1", "table2", "table3", "table4", "hasse-m2m2", "hasse-sr6")

SR6_ORDER = ["O", "A", "P", "R", "Z", "F"]


@dataclass
class Rendering:
    which: str
    # tables: {semiring: {"add": rows, "mul": rows, "basis": [...]}}; cells: {row: [..]}; edges: [(a, b)]
    data: dict = field(default_factory=dict)


def sr6_from_m2m2() -> FiniteSemiring:
    """The subsemiring of M2(M2) generated by O and A, in the order O, A, P, R, Z, F."""
    M = m2m2()
    closed = subsemiring_closure(M, ["O", "A"])
    labels = sorted((M.label(e) for e in closed), key=lambda x: SR6_ORDER.index(x)
                    if x in SR6_ORDER else len(SR6_ORDER))
    return M.induced(labels, name="SR6")


def _table_rows(S: FiniteSemiring, tab, order=None):
    order = order or list(S.labels)
    idx = [S.index(x) for x in order]
    return {order[i]: [S.label(tab[a, b]) for b in idx] for i, a in enumerate(idx)}


def _edges(S: FiniteSemiring):
    return sorted((S.label(a), S.label(b)) for a, b in natural_order(S).edges)


def compute(which: str) -> Rendering:
    if which in ("table1", "table2"):
        names = ("L2", "R2", "N2", "T2", "M2", "D2") if which == "table1" else \
            ("S54", "S56", "S57", "S58", "S60")
        data = {}
        for name in names:
            S = catalog(name)
            data[name] = {
                "elements": list(S.labels),
                "add": [" ".join(r) for r in _table_rows(S, S.add).values()],
                "mul": [" ".join(r) for r in _table_rows(S, S.mul).values()],
                "basis": [str(catalog_identity(k)) for k in BASIS_OF[name]],
            }
        return Rendering(which, data)
    if which == "table3":
        M = m2m2()
        order = reference_tables()["table3"]["order"]
        return Rendering(which, {"order": order, "rows": _table_rows(M, M.mul, order)})
    if which == "table4":
        S = sr6_from_m2m2()
        return Rendering(which, {"order": SR6_ORDER, "rows": _table_rows(S, S.mul, SR6_ORDER)})
    if which == "hasse-m2m2":
        return Rendering(which, {"edges": _edges(m2m2())})
    if which == "hasse-sr6":
        return Rendering(which, {"edges": _edges(sr6_from_m2m2())})
    raise ValueError(f"unknown table {which!r}; choose from {', '.join(WHICH)}")


def diff(which: str) -> list[str]:
    """Human-readable mismatches between the computed rendering and the transcription."""
    got = compute(which).data
    ref = reference_tables()
    out = []
    if which in ("table1", "table2"):
        for name, want in ref[which].items():
            have = got.get(name)
            if have is None:
                out.append(f"{name}: missing from catalog")
                continue
            for op in ("add", "mul"):
                for r, (a, b) in enumerate(zip(have[op], want[op])):
                    for c, (x, y) in enumerate(zip(a.split(), b.split())):
                        if x != y:
                            out.append(f"{name} {op}[{r}][{c}]: computed {x}, printed {y}")
            have_basis = {str(parse_identity(t)) for t in have["basis"]}
            want_basis = {str(parse_identity(t)) for t in want["basis"]}
            if have_basis != want_basis:
                out.append(f"{name} basis: computed {sorted(have_basis)}, printed {sorted(want_basis)}")
        return out
    if which in ("table3", "table4"):
        want = ref[which]
        for r in want["order"]:
            row = want["rows"][r].split()
            for c, y in zip(want["order"], row):
                x = got["rows"][r][want["order"].index(c)]
                if x != y:
                    out.append(f"{r}·{c}: computed {x}, printed {y}")
        return out
    key = "hasse_m2m2" if which == "hasse-m2m2" else "hasse_sr6"
    want = {tuple(e) for e in ref[key]}
    have = set(got["edges"])
    out += [f"extra edge {a}-{b}" for a, b in sorted(have - want)]
    out += [f"missing edge {a}-{b}" for a, b in sorted(want - have)]
    return out


def render_text(r: Rendering) -> str:
    d = r.data
    if r.which in ("table1", "table2"):
        blocks = []
        for name, t in d.items():
            lines = [f"{name}  elements {' '.join(t['elements'])}", "  +      ·"]
            for a, b in zip(t["add"], t["mul"]):
                lines.append(f"  {a:<6} {b}")
            lines.append("  basis: " + "; ".join(t["basis"]))
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks)
    if r.which in ("table3", "table4"):
        order = d["order"]
        lines = ["· | " + " ".join(order), "--+" + "-" * (2 * len(order))]
        lines += [f"{row} | " + " ".join(d["rows"][row]) for row in order]
        return "\n".join(lines)
    return "\n".join(f"{a} -- {b}" for a, b in d["edges"])


def to_dot(r: Rendering) -> str:
    lines = ["graph hasse {", "  rankdir=BT;"]
    lines += [f'  "{a}" -- "{b}";' for a, b in r.data["edges"]]
    lines.append("}")
    return "\n".join(lines)
