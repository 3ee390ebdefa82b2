"""The shipped instance corpus, generated deterministically.

``build()`` returns the instance list and the manifest of relative pairs,
direct-sum triples and ring instances; ``write(dir)`` serialises both in
canonical JSON so a rebuild is byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .instances import Instance, canonical_json, load, plain
from .suites import partitions

MANIFEST = "manifest.json"

_R11 = ((1, 0, 0), (0, 0, 0), (0, 0, 0))
_R12 = ((0, 0, 0), (1, 0, 0), (0, 0, 0))
_R22 = ((0, 0, 0), (0, 1, 0), (0, 0, 1))
_L11 = ((1, 0, 0), (0, 1, 0), (0, 0, 0))
_L12 = ((0, 0, 0), (0, 0, 1), (0, 0, 0))
_L22 = ((0, 0, 0), (0, 0, 0), (0, 0, 1))
_G = ((1, 0, 0), (1, 1, 1), (0, 0, 1))

_SKEW_NOTE = (
    "Upper-triangular 2x2 matrices [[a,b],[0,c]] over F2 with coordinates (a,b,c), "
    "twisted by the order-2 automorphism g(x) = u x u^-1, u = [[1,1],[0,1]]. "
)


@dataclass
class Corpus:
    instances: list[Instance]
    manifest: dict[str, Any]

    def by_name(self) -> dict[str, Instance]:
        return {i.name: i for i in self.instances}


def _two_groups() -> list[Instance]:
    out = []
    for total in range(1, 7):
        for lam in partitions(total):
            out.append(plain(tuple(2**e for e in sorted(lam)), notes="abelian 2-group"))
    return out


def _modules() -> list[Instance]:
    # specific entries first: the first occurrence of a name wins
    out = [
        plain((4, 8), notes="extending, not weak duo: the endomorphism e1 -> 2 e2 moves the summand Z4"),
        plain((2, 16), notes="components are dual self-CS-Baer but the sum is not: exponents 1 and 4 are not adjacent"),
        plain((2, 8), notes="non-adjacent exponents"),
        plain((4, 9), notes="coprime components, Hom zero both ways"),
        plain((2, 8, 9), notes="2-part exponents {1, 3}"),
        plain((2, 12), notes="2-part (1, 2) and 3-part (1)"),
        plain((3, 9), notes="B(1, 2) at p = 3"),
        plain((2, 3), notes="Z6 as a direct sum"),
        Instance("swap_z2_z2", (2, 2), (("s", ((0, 1), (1, 0))),), "Z[C2]",
                 "Z2 + Z2 with the coordinate swap as ring action; the swap moves the summand Z2 + 0"),
        Instance("z12_regular", (12,), (("1", ((1,),)),), "Z12", "regular module of Z12"),
        Instance("t2_f2_regular", (2, 2, 2), (("e11", _R11), ("e12", _R12), ("e22", _R22)), "T2(F2)",
                 "regular right module of upper-triangular 2x2 matrices over F2, coordinates (a,b,c); "
                 "actions are right multiplications by the matrix units"),
        Instance("skew_right_mult_conj", (2, 2, 2),
                 (("e11", _R11), ("e12", _R12), ("e22", _R22), ("g", _G)), "T2(F2)*C2",
                 _SKEW_NOTE + "Candidate acting by right multiplication and g. Its endomorphisms are the "
                 "four left multiplications by 0, e12, 1 and 1 + e12; the endomorphism 1 + e12 is a unit, "
                 "so its kernel is zero. Verdicts: self-CS-Baer and strongly self-CS-Baer, not self-Rickart, "
                 "not strongly self-Baer, End abelian."),
        Instance("skew_right_mult_only", (2, 2, 2),
                 (("e11", _R11), ("e12", _R12), ("e22", _R22)), "T2(F2)",
                 _SKEW_NOTE + "Candidate without the twist: End has 8 elements and is not abelian."),
        Instance("skew_left_mult_conj", (2, 2, 2),
                 (("e11", _L11), ("e12", _L12), ("e22", _L22), ("g", _G)), "T2(F2)*C2",
                 _SKEW_NOTE + "Candidate acting by left multiplication and g: End has 4 elements, "
                 "a different set of maps from the right-multiplication candidate."),
        plain((), "zero", "zero module"),
    ]
    out += [plain((n,), notes="cyclic group") for n in range(2, 31)]
    out += _two_groups()
    seen: dict[str, Instance] = {}
    for inst in out:
        seen.setdefault(inst.name, inst)
    return sorted(seen.values(), key=lambda i: i.name)


_PAIRS = [
    ("z6", "z4"), ("z4", "z2"), ("z2", "z3"), ("z2", "z4"), ("z4", "z8"), ("z8", "z4"),
    ("z4", "z4"), ("z2_z8", "z3"), ("z2_z4", "z2"), ("z2", "z2_z4"), ("z4", "z2_z2"),
    ("z8", "z2_z2"), ("z2_z2", "z4"), ("z3", "z9"), ("z9", "z3"), ("z12", "z6"),
    ("z6", "z12"), ("z2_z16", "z4"), ("z4_z8", "z2"), ("t2_f2_regular", "t2_f2_regular"),
    ("swap_z2_z2", "swap_z2_z2"),
]

_DSUMS = [
    {"m": "z8", "parts": ["z2", "z4"]},
    {"m": "z2", "parts": ["z2", "z4"]},
    {"m": "z4", "parts": ["z2", "z3"]},
    {"m": "z6", "parts": ["z4", "z9"]},
    {"m": "z2", "parts": ["z3", "z5", "z4"]},
    {"m": "z4", "parts": ["z4", "z8"]},
    {"m": "z4", "parts": ["z2", "z16"]},
    {"m": "z2", "parts": ["z2", "z2", "z2"]},
]

_RINGS = [
    {"ring": "z12_regular", "commutative": True, "cyclic": ["z2", "z3", "z4", "z6", "z12"]},
    {"ring": "t2_f2_regular", "commutative": False, "cyclic": []},
]

_PLUS_RING = [
    {"m": "z2_z4", "ring": "z4"},
    {"m": "z2_z8", "ring": "z8"},
    {"m": "z3", "ring": "z9"},
]


def build() -> Corpus:
    manifest = {
        "pairs": [list(p) for p in _PAIRS],
        "dsums": _DSUMS,
        "rings": _RINGS,
        "plus_ring": _PLUS_RING,
    }
    return Corpus(_modules(), manifest)


def write(directory: str | Path) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    c = build()
    paths = []
    for inst in c.instances:
        p = d / f"{inst.name}.json"
        p.write_text(canonical_json(inst.to_json()) + "\n")
        paths.append(p)
    p = d / MANIFEST
    p.write_text(canonical_json(c.manifest) + "\n")
    paths.append(p)
    return paths


def read(directory: str | Path) -> Corpus:
    """Load a corpus directory; a missing manifest means no pairs."""
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"corpus directory {d} does not exist")
    instances = sorted((load(p) for p in d.glob("*.json") if p.name != MANIFEST), key=lambda i: i.name)
    manifest: dict[str, Any] = {}
    mp = d / MANIFEST
    if mp.exists():
        manifest = json.loads(mp.read_text())
    return Corpus(instances, manifest)
