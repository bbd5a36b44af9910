"""Named identities: the printed equational bases and the numbered identities
used in the derivations."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownNameError
from .terms import Identity, parse_identity

__all__ = ["CatalogEntry", "IDENTITIES", "GROUPS", "identity", "resolve_keys"]


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    identity: Identity
    note: str

    @property
    def lhs(self):
        return self.identity.lhs

    @property
    def rhs(self):
        return self.identity.rhs


_RAW = [
    ("B-L2", "xy ≈ x", "basis of L2"),
    ("B-R2", "xy ≈ y", "basis of R2"),
    ("N21", "x1x2 ≈ y1y2", "basis of N2 and T2"),
    ("N22", "x + x^2 ≈ x", "basis of N2"),
    ("T22", "x + x^2 ≈ x^2", "basis of T2; with F1 a basis of M_n(L2)"),
    ("B-M2", "x + y ≈ xy", "basis of M2"),
    ("B-D2.1", "x^2 ≈ x", "basis of D2"),
    ("B-D2.2", "xy ≈ yx", "basis of D2"),
    ("B-D2.3", "x + xy ≈ x", "basis of D2"),
    ("F1", "xy ≈ xz", "with T22 a basis of M_n(L2)"),
    ("F3", "xy ≈ zy", "with T22 a basis of M_n(R2)"),
    ("F9", "xy ≈ xy + x", "basis of SR6 and M_n(M2)"),
    ("F10", "xy ≈ xy + y", "basis of SR6 and M_n(M2)"),
    ("F11", "x1x2 + x3x4 ≈ x1x2 + x3x4 + x1x4", "basis of SR6 and M_n(M2)"),
    ("F12", "x1x2x3x4 ≈ x1x2x3 + x1x2x4 + x1x3x4 + x2x3x4",
     "basis of SR6; follows from F9-F11"),
    ("B-S54.1", "xyz ≈ xzy", "basis of S54"),
    ("B-S54.2", "xy^2 ≈ xy", "basis of S54"),
    ("B-S54.3", "x + zy ≈ xy + zy", "basis of S54"),
    ("B-S54.4", "x^2 + yx ≈ yx", "basis of S54"),
    ("B-S56.1", "xy ≈ zy", "basis of S56"),
    ("B-S56.2", "x + x^2 ≈ x^2", "basis of S56"),
    ("B-S57.1", "xyz ≈ yxz", "basis of S57"),
    ("B-S57.2", "x^2y ≈ xy", "basis of S57"),
    ("B-S57.3", "x + yz ≈ yx + yz", "basis of S57"),
    ("B-S57.4", "x^2 + xy ≈ xy", "basis of S57"),
    ("B-S58.1", "xy ≈ xz", "basis of S58"),
    ("B-S58.2", "x + x^2 ≈ x^2", "basis of S58"),
    ("B-S60.1", "x^3 ≈ x^2", "basis of S60"),
    ("B-S60.2", "x^2 + y^2 ≈ xy", "basis of S60"),
    ("B-S60.3", "x + x^2 ≈ x^2", "basis of S60"),
]

IDENTITIES: dict[str, CatalogEntry] = {
    key: CatalogEntry(key, parse_identity(text), note) for key, text, note in _RAW
}


def _numbered(prefix):
    return [k for k in IDENTITIES if k.startswith(prefix + ".")]


# basis names that expand to several catalog keys
GROUPS: dict[str, list] = {
    "B-N2": ["N21", "N22"],
    "B-T2": ["N21", "T22"],
    "B-D2": _numbered("B-D2"),
    "B-S54": _numbered("B-S54"),
    "B-S56": _numbered("B-S56"),
    "B-S57": _numbered("B-S57"),
    "B-S58": _numbered("B-S58"),
    "B-S60": _numbered("B-S60"),
    "B-SR6": ["F9", "F10", "F11", "F12"],
    "B-MnL2": ["T22", "F1"],
    "B-MnR2": ["T22", "F3"],
    "B-MnM2": ["F9", "F10", "F11"],
}

# printed basis of each catalog semiring
BASIS_OF = {
    "L2": ["B-L2"], "R2": ["B-R2"], "N2": GROUPS["B-N2"], "T2": GROUPS["B-T2"],
    "M2": ["B-M2"], "D2": GROUPS["B-D2"], "S54": GROUPS["B-S54"],
    "S56": GROUPS["B-S56"], "S57": GROUPS["B-S57"], "S58": GROUPS["B-S58"],
    "S60": GROUPS["B-S60"], "SR6": GROUPS["B-SR6"],
}


def identity(key: str) -> Identity:
    try:
        return IDENTITIES[key].identity
    except KeyError:
        raise UnknownNameError(f"unknown identity key {key!r}") from None


def resolve_keys(keys) -> list[tuple[str, Identity]]:
    """Expand keys, group names and inline identity strings into ``(label, Identity)``."""
    out = []
    for key in keys:
        if isinstance(key, Identity):
            out.append((str(key), key))
        elif key in GROUPS:
            out.extend((k, IDENTITIES[k].identity) for k in GROUPS[key])
        elif key in IDENTITIES:
            out.append((key, IDENTITIES[key].identity))
        elif "≈" in key or "=" in key:
            out.append((key, parse_identity(key)))
        else:
            raise UnknownNameError(f"unknown identity key {key!r}")
    return out
