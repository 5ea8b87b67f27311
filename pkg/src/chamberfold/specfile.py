"""JSON group specs and the built-in catalog."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .coxeter import DEFAULT_HORIZON, GEOMETRIES, GroupSpec, ReflectionGroup, build_group
from .errors import SpecError

MATRIX_KEYS = ("cartan", "coxeter", "gram")


def catalog_names() -> list[str]:
    root = resources.files("chamberfold") / "catalog"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def spec_from_dict(doc: dict) -> GroupSpec:
    if not isinstance(doc, dict):
        raise SpecError("group spec must be a JSON object")
    keys = [k for k in MATRIX_KEYS if k in doc]
    if len(keys) != 1:
        raise SpecError("group spec needs exactly one of cartan, coxeter, gram")
    geometry = doc.get("geometry")
    if geometry not in GEOMETRIES:
        raise SpecError(f"geometry must be one of {', '.join(GEOMETRIES)}")
    matrix = doc[keys[0]]
    if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
        raise SpecError("matrix must be a list of rows")
    eps = doc.get("epsilon")
    if eps is not None and not isinstance(eps, (int, float)):
        raise SpecError("epsilon must be a number")
    return GroupSpec(
        geometry=geometry,
        source=keys[0],
        matrix=tuple(tuple(r) for r in matrix),
        name=str(doc.get("name", "")),
        backend=doc.get("backend"),
        epsilon=eps,
    )


def load_spec(path_or_name) -> GroupSpec:
    """Read a spec from a file, or from the catalog by name (``a2``, ``a2.json``)."""
    p = Path(path_or_name)
    if p.is_file():
        text = p.read_text(encoding="utf-8")
    else:
        name = p.name[:-5] if p.name.endswith(".json") else p.name
        if name not in catalog_names():
            raise SpecError(f"no spec file or catalog entry named {str(path_or_name)!r}")
        text = (resources.files("chamberfold") / "catalog" / f"{name}.json").read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from exc
    return spec_from_dict(doc)


def load_group(path_or_name, horizon: int = DEFAULT_HORIZON) -> ReflectionGroup:
    return build_group(load_spec(path_or_name), horizon)
