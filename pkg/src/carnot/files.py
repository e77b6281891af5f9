"""TOML group and scenario files.

Group files carry the dimension, the layer partition of the adapted basis and
the structure constants; scenario files reference groups and add polynomial
map components, forms, cocycles and command parameters.  Baked-in names
(heisenberg, h1xR, r2, ...) resolve without touching the filesystem; anything
ending in .toml is read relative to the referencing file.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

from . import groups as stock
from .algebra import StratifiedAlgebra
from .fiber import FiberForm
from .forms import PolyForm
from .pansu import PolyMap
from .scalars import rat


class InputError(ValueError):
    """Malformed group or scenario input; maps to exit code 2 in the CLI."""


_BUILTIN_GROUPS = {
    "heisenberg": stock.heisenberg,
    "h1": stock.heisenberg,
    "h1xR": stock.h1_x_r,
    "h1xr": stock.h1_x_r,
    "r2": lambda: stock.abelian(2),
    "r3": lambda: stock.abelian(3),
    "engel": stock.engel,
    "nonstrat5": stock.nonstratifiable_5d,
}


def _load_toml(path: Path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"TOML parse error in {path}: {exc}")


def load_group(path: str | Path) -> StratifiedAlgebra:
    path = Path(path)
    data = _load_toml(path)
    return group_from_dict(data, where=str(path))


def group_from_dict(data: dict, where: str = "<group>") -> StratifiedAlgebra:
    try:
        dim = int(data["dim"])
        layers = data["layers"]
    except KeyError as exc:
        raise InputError(f"{where}: missing required key {exc}")
    weights = [0] * dim
    for depth, members in enumerate(layers, start=1):
        for index in members:
            if not 1 <= int(index) <= dim:
                raise InputError(f"{where}: layer index {index} out of range")
            weights[int(index) - 1] = depth
    if any(w == 0 for w in weights):
        missing = [i + 1 for i, w in enumerate(weights) if w == 0]
        raise InputError(f"{where}: basis vectors {missing} missing from layers")
    brackets = []
    for entry in data.get("brackets", []):
        try:
            i, j = int(entry["i"]), int(entry["j"])
            terms = [(int(k), rat(str(c))) for k, c in entry["terms"]]
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"{where}: malformed bracket entry {entry}: {exc}")
        brackets.append((i, j, terms))
    try:
        return StratifiedAlgebra(
            weights=weights,
            brackets=brackets,
            labels=data.get("labels"),
            coordinates=data.get("coordinates"),
            name=data.get("name", ""),
        )
    except ValueError as exc:
        raise InputError(f"{where}: {exc}")


def resolve_group(ref: str, base: Path | None = None) -> StratifiedAlgebra:
    if ref in _BUILTIN_GROUPS:
        return _BUILTIN_GROUPS[ref]()
    path = Path(ref)
    if not path.is_absolute() and base is not None:
        path = base / path
    if path.suffix == ".toml":
        return load_group(path)
    raise InputError(f"unknown group reference {ref!r}")


@dataclass
class Scenario:
    name: str
    source: StratifiedAlgebra
    target: StratifiedAlgebra
    map: PolyMap | None
    forms: list[tuple[str, PolyForm, list[int]]]
    cocycle: FiberForm | None
    source_cocycle: FiberForm | None
    lift_mode: str
    params: dict = field(default_factory=dict)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    data = _load_toml(path)
    base = path.parent

    groups_block = data.get("groups", {})
    if "group" in data:
        source_ref = target_ref = data["group"]
    else:
        try:
            source_ref = groups_block["source"]
            target_ref = groups_block["target"]
        except KeyError:
            raise InputError(f"{path}: need either 'group' or [groups] source/target")
    source = resolve_group(source_ref, base)
    target = resolve_group(target_ref, base)

    pmap = None
    if "map" in data:
        comps = data["map"].get("components")
        if not comps:
            raise InputError(f"{path}: [map] needs a components list")
        try:
            pmap = PolyMap(source, target, comps)
        except ValueError as exc:
            raise InputError(f"{path}: bad map: {exc}")

    forms = []
    for block in data.get("forms", []):
        try:
            name = block.get("name", f"form{len(forms) + 1}")
            degree = int(block["degree"])
            coeffs = {}
            for idx, text in block["coefficients"]:
                index = tuple(int(v) for v in idx)
                coeffs[index] = target.ring().from_string(str(text))
            pages = [int(p) for p in block.get("pages", [])]
            forms.append((name, PolyForm(target, degree, coeffs), pages))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"{path}: bad form block: {exc}")

    def read_cocycle(block, algebra) -> FiberForm | None:
        if block is None:
            return None
        if block.get("on") == "source":
            algebra = source
        try:
            coeffs = {}
            for idx, text in block["coefficients"]:
                index = tuple(int(v) for v in idx)
                coeffs[index] = rat(str(text))
            return FiberForm(algebra, 2, coeffs)
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"{path}: bad cocycle block: {exc}")

    return Scenario(
        name=data.get("name", path.stem),
        source=source,
        target=target,
        map=pmap,
        forms=forms,
        cocycle=read_cocycle(data.get("cocycle"), target),
        source_cocycle=read_cocycle(data.get("source_cocycle"), source),
        lift_mode=data.get("lift", {}).get("mode", "pullback"),
        params=data.get("params", {}),
    )
