"""JSON (de)serialisation of models and update models, and DOT export."""

from __future__ import annotations

import itertools
import json
from pathlib import Path

from .complex import SimplicialModel, build_model, face_key
from .dynamics import UpdateModel, build_update_model
from .errors import ModelError
from .formula import to_text

PALETTE = ("red", "blue", "green", "orange", "purple")


def _sorted_faces(faces):
    return [sorted(f) for f in sorted(faces, key=face_key)]


def model_to_dict(model: SimplicialModel) -> dict:
    out = {
        "agents": list(model.agents),
        "vertices": [
            {"id": v.id, "agent": v.agent, "props": sorted(v.props)} for v in model.vertices.values()
        ],
        "facets": _sorted_faces(model.facets),
    }
    if model.named:
        out["named"] = {k: sorted(f) for k, f in sorted(model.named.items())}
    return out


def _require(data, key, kind, where):
    if not isinstance(data, dict) or key not in data:
        raise ModelError(f"{where}: missing {key!r}")
    value = data[key]
    if not isinstance(value, kind):
        raise ModelError(f"{where}: {key!r} has the wrong type")
    return value


def model_from_dict(data: dict) -> SimplicialModel:
    agents = _require(data, "agents", list, "model")
    vertices = _require(data, "vertices", list, "model")
    facets = _require(data, "facets", list, "model")
    named = data.get("named") or {}
    try:
        verts = [(v["id"], v["agent"], v.get("props", [])) for v in vertices]
    except (KeyError, TypeError, AttributeError) as exc:
        raise ModelError(f"model: malformed vertex entry ({exc})") from None
    return build_model(agents, verts, facets, named)


def update_to_dict(update: UpdateModel) -> dict:
    out = {
        "name": update.name,
        "agents": list(update.agents),
        "vertices": [
            {"id": e.id, "agent": e.agent, "com": to_text(e.com)} for e in update.events.values()
        ],
        "facets": _sorted_faces(update.facets),
    }
    if update.named:
        out["named"] = {k: sorted(f) for k, f in sorted(update.named.items())}
    if update.parts:
        out["parts"] = [update_to_dict(p) for p in update.parts]
    return out


def update_from_dict(data: dict, default_name: str = "U") -> UpdateModel:
    agents = _require(data, "agents", list, "update model")
    vertices = _require(data, "vertices", list, "update model")
    facets = _require(data, "facets", list, "update model")
    parts = tuple(update_from_dict(p) for p in data.get("parts", []))
    try:
        events = [(v["id"], v["agent"], v.get("com", "true")) for v in vertices]
    except (KeyError, TypeError, AttributeError) as exc:
        raise ModelError(f"update model: malformed vertex entry ({exc})") from None
    return build_update_model(
        data.get("name", default_name), agents, events, facets, data.get("named") or {}, parts
    )


def _read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: invalid JSON ({exc})") from None


def load_model(path) -> SimplicialModel:
    return model_from_dict(_read_json(path))


def load_update(path) -> UpdateModel:
    return update_from_dict(_read_json(path), default_name=Path(path).stem)


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def save_model(model: SimplicialModel, path) -> None:
    Path(path).write_text(dumps(model_to_dict(model)), encoding="utf-8")


def save_update(update: UpdateModel, path) -> None:
    Path(path).write_text(dumps(update_to_dict(update)), encoding="utf-8")


def edges(model: SimplicialModel) -> list[tuple[str, str]]:
    out = set()
    for f in model.facets:
        out.update(itertools.combinations(sorted(f), 2))
    return sorted(out)


def to_dot(model: SimplicialModel, name: str = "model") -> str:
    colour = {a: PALETTE[i % len(PALETTE)] for i, a in enumerate(model.agents)}
    lines = [f'graph "{name}" {{', f"  // agents: {','.join(model.agents)}"]
    for v in model.vertices.values():
        label = v.id + "".join(f"\\n{p}@{v.agent}" for p in sorted(v.props))
        lines.append(f'  "{v.id}" [label="{label}", color="{colour[v.agent]}"];')
    for x, y in edges(model):
        lines.append(f'  "{x}" -- "{y}";')
    for f in model.facets:
        if len(f) >= 3:
            lines.append(f"  // facet: {','.join(sorted(f))}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(model: SimplicialModel, path, name: str = "model") -> None:
    Path(path).write_text(to_dot(model, name), encoding="utf-8")
