"""Scene files: named tori, levels, morphisms and groups in TOML (or JSON).

Example::

    [tori.T2]
    rank = 2

    [levels.tau]
    torus = "T2"
    K = [[-1, 0], [0, -1]]

    [morphisms.g]
    source = "T2"
    target = "T2"
    matrix = [[1, 1], [1, -1]]
    kind = "local_injection"

Groups add ``[groups.NAME]`` with ``level``, ``weyl`` (list of generator
matrices) and optional ``rho``; ``[group_morphisms.NAME]`` has ``source``,
``target`` (group names), ``torus_map`` (a morphism name) and ``f_star``;
``[rho_shifts.NAME]`` pairs a ``low`` and a ``high`` group.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
import tomli_w

from .errors import AffineCharError, SceneError
from .lattice import IntMat
from .torus import Kind, Level, TorusMorphism
from .weyl import CompactGroupData, GroupMorphismData, WeylGroup

SECTIONS = ("tori", "levels", "morphisms", "groups", "group_morphisms", "rho_shifts")


@dataclass
class Scene:
    tori: dict = field(default_factory=dict)
    levels: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    groups: dict = field(default_factory=dict)
    group_morphisms: dict = field(default_factory=dict)
    rho_shifts: dict = field(default_factory=dict)
    sha256: str | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {s: getattr(self, s) for s in SECTIONS if getattr(self, s)}

    def level(self, name: str) -> Level:
        return Level(IntMat.from_rows(self._get("levels", name)["K"]))

    def morphism(self, name: str) -> TorusMorphism:
        m = self._get("morphisms", name)
        cols = self.tori[m["source"]]["rank"]
        return TorusMorphism.from_matrix(IntMat.from_rows(m["matrix"], cols))

    def group(self, name: str) -> CompactGroupData:
        g = self._get("groups", name)
        tau = self.level(g["level"])
        weyl = WeylGroup(tau.rank, tuple(IntMat.from_rows(w) for w in g.get("weyl", [])))
        rho = tuple(g["rho"]) if "rho" in g else None
        return CompactGroupData(tau, weyl, rho)

    def group_morphism(self, name: str) -> GroupMorphismData:
        m = self._get("group_morphisms", name)
        return GroupMorphismData(self.group(m["source"]), self.group(m["target"]),
                                 self.morphism(m["torus_map"]),
                                 tuple(IntMat.from_rows(w) for w in m.get("f_star", [])))

    def _get(self, section: str, name: str) -> dict:
        table = getattr(self, section)
        if name not in table:
            raise SceneError(f"no entry {name!r} in [{section}]",
                             available=sorted(table))
        return table[name]

    def validate(self) -> Scene:
        for name, t in self.tori.items():
            _require(isinstance(t.get("rank"), int) and t["rank"] >= 0,
                     f"torus {name!r} needs a nonnegative integer rank")
        for name, lv in self.levels.items():
            _require(lv.get("torus") in self.tori, f"level {name!r} refers to an unknown torus")
            rank = self.tori[lv["torus"]]["rank"]
            K = _matrix(lv.get("K"), f"level {name!r}")
            _require(len(K) == rank and all(len(r) == rank for r in K),
                     f"level {name!r} is not {rank}x{rank}")
            if not self.level(name).K.is_symmetric():
                raise SceneError(f"level {name!r} is not symmetric")
        for name, m in self.morphisms.items():
            for end in ("source", "target"):
                _require(m.get(end) in self.tori, f"morphism {name!r} has unknown {end}")
            rows, cols = self.tori[m["target"]]["rank"], self.tori[m["source"]]["rank"]
            F = _matrix(m.get("matrix"), f"morphism {name!r}")
            _require(len(F) == rows and all(len(r) == cols for r in F),
                     f"morphism {name!r} must be {rows}x{cols}")
            if "kind" in m:
                _check_kind(name, m["kind"], self.morphism(name))
        for name, g in self.groups.items():
            _require(g.get("level") in self.levels, f"group {name!r} has unknown level")
            self.group(name)
        for name, m in self.group_morphisms.items():
            _require(m.get("source") in self.groups and m.get("target") in self.groups,
                     f"group morphism {name!r} refers to an unknown group")
            _require(m.get("torus_map") in self.morphisms,
                     f"group morphism {name!r} refers to an unknown torus map")
            self.group_morphism(name)
        for name, r in self.rho_shifts.items():
            _require(r.get("low") in self.groups and r.get("high") in self.groups,
                     f"rho shift {name!r} refers to an unknown group")
        return self


def _require(ok: bool, msg: str) -> None:
    if not ok:
        raise SceneError(msg)


def _matrix(rows, what: str) -> list:
    ok = isinstance(rows, list) and all(
        isinstance(r, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in r)
        for r in rows)
    _require(ok, f"{what}: matrix must be a list of integer rows")
    return rows


def _check_kind(name: str, kind: str, f: TorusMorphism) -> None:
    try:
        declared = Kind(kind)
    except ValueError:
        raise SceneError(f"morphism {name!r} has unknown kind {kind!r}",
                         allowed=[k.value for k in Kind]) from None
    ok = {
        Kind.FINITE_COVERING: f.is_finite_covering,
        Kind.PRODUCT_INCLUSION: f.kind == Kind.PRODUCT_INCLUSION,
        Kind.LOCAL_INJECTION: f.is_local_injection,
        Kind.GENERAL: True,
    }[declared]
    if not ok:
        raise SceneError(f"morphism {name!r} is declared {kind} but is not",
                         matrix=f.F, actual=f.kind.value)


def from_dict(data: dict) -> Scene:
    if not isinstance(data, dict):
        raise SceneError("scene must be a table")
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise SceneError("unknown scene sections", sections=unknown)
    for s in SECTIONS:
        if not isinstance(data.get(s, {}), dict):
            raise SceneError(f"[{s}] must be a table of named entries")
    return Scene(**{s: data.get(s, {}) for s in SECTIONS}).validate()


def loads(text: str, fmt: str = "toml") -> Scene:
    try:
        data = json.loads(text) if fmt == "json" else tomllib.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as e:
        raise SceneError(f"cannot parse scene: {e}") from None
    try:
        scene = from_dict(data)
    except AffineCharError:
        raise
    except (TypeError, KeyError, IndexError, ValueError) as e:
        raise SceneError(f"malformed scene: {e}") from None
    scene.sha256 = hashlib.sha256(text.encode()).hexdigest()
    return scene


def dumps(scene: Scene, fmt: str = "toml") -> str:
    data = scene.to_dict()
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    return tomli_w.dumps(_sorted(data))


def _sorted(d):
    if isinstance(d, dict):
        return {k: _sorted(d[k]) for k in sorted(d)}
    return d


def load(path: str | Path) -> Scene:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SceneError(f"cannot read scene file: {e.strerror}", path=str(path)) from None
    return loads(text, "json" if path.suffix == ".json" else "toml")


COUNTEREXAMPLE = """\
[tori.T]
rank = 1

[tori.T2]
rank = 2

[levels.tau]
torus = "T2"
K = [[-1, 0], [0, -1]]

[levels.g_tau]
torus = "T2"
K = [[-2, 0], [0, -2]]

[levels.h_tau]
torus = "T"
K = [[-4]]

[morphisms.f]
source = "T"
target = "T2"
matrix = [[1], [-1]]
kind = "local_injection"

[morphisms.g]
source = "T2"
target = "T2"
matrix = [[1, 1], [1, -1]]
kind = "finite_covering"

[morphisms.h]
source = "T"
target = "T2"
matrix = [[0], [2]]
kind = "local_injection"
"""

U3 = """\
[tori.T]
rank = 1

[tori.T3]
rank = 3

[levels.tau]
torus = "T3"
K = [[-3, 0, 0], [0, -3, 0], [0, 0, -3]]

[levels.pulled]
torus = "T"
K = [[-3]]

[morphisms.i1]
source = "T"
target = "T3"
matrix = [[1], [0], [0]]
kind = "product_inclusion_first_factor"

[groups.U3]
level = "tau"
weyl = [[[0, 1, 0], [1, 0, 0], [0, 0, 1]], [[1, 0, 0], [0, 0, 1], [0, 1, 0]]]

[groups.circle]
level = "pulled"
weyl = []

[group_morphisms.f]
source = "circle"
target = "U3"
torus_map = "i1"
f_star = []
"""

RHO_SHIFT = """\
[tori.T]
rank = 1

[tori.T2]
rank = 2

[tori.T3]
rank = 3

[levels.su2_low]
torus = "T"
K = [[-2]]

[levels.su2_high]
torus = "T"
K = [[-6]]

[levels.u2_low]
torus = "T2"
K = [[-1, 0], [0, -1]]

[levels.u2_high]
torus = "T2"
K = [[-2, 1], [1, -2]]

[levels.u3_low]
torus = "T3"
K = [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]

[levels.u3_high]
torus = "T3"
K = [[-3, 0, 0], [0, -3, 0], [0, 0, -3]]

[levels.bad_low]
torus = "T"
K = [[-2]]

[levels.bad_high]
torus = "T"
K = [[-4]]

[groups.su2_low]
level = "su2_low"
weyl = [[[-1]]]

[groups.su2_high]
level = "su2_high"
weyl = [[[-1]]]
rho = [1]

[groups.u2_low]
level = "u2_low"
weyl = [[[0, 1], [1, 0]]]

[groups.u2_high]
level = "u2_high"
weyl = [[[0, 1], [1, 0]]]
rho = [1, 0]

[groups.u3_low]
level = "u3_low"
weyl = [[[0, 1, 0], [1, 0, 0], [0, 0, 1]], [[1, 0, 0], [0, 0, 1], [0, 1, 0]]]

[groups.u3_high]
level = "u3_high"
weyl = [[[0, 1, 0], [1, 0, 0], [0, 0, 1]], [[1, 0, 0], [0, 0, 1], [0, 1, 0]]]
rho = [1, 0, -1]

[groups.bad_low]
level = "bad_low"
weyl = [[[-1]]]

[groups.bad_high]
level = "bad_high"
weyl = [[[-1]]]
rho = [1]

[rho_shifts.su2]
low = "su2_low"
high = "su2_high"

[rho_shifts.u2]
low = "u2_low"
high = "u2_high"

[rho_shifts.u3]
low = "u3_low"
high = "u3_high"
"""

# kept separate so the consistent scene verifies cleanly
RHO_SHIFT_INCONSISTENT = RHO_SHIFT.split("[rho_shifts.su2]")[0] + """\
[rho_shifts.bad]
low = "bad_low"
high = "bad_high"
"""

BUILTIN = {
    "counterexample": COUNTEREXAMPLE,
    "u3": U3,
    "rho-shift": RHO_SHIFT,
    "rho-shift-inconsistent": RHO_SHIFT_INCONSISTENT,
}


def builtin(name: str) -> Scene:
    if name not in BUILTIN:
        raise SceneError(f"no built-in scene {name!r}", available=sorted(BUILTIN))
    return loads(BUILTIN[name])
