"""Tagged JSON encoding of the objects that appear in suite instances."""
from __future__ import annotations

from .complexes import ChainMap, Complex, SchemaError
from .linalg import mat_from_json, mat_to_json
from .simplicial import FiniteSimplicialSet, SSetMap, SimplicialMap, Truncated


def encode(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, float):
        raise TypeError("floats are not part of the exact encoding")
    if isinstance(v, (list, tuple)):
        return [encode(x) for x in v]
    if isinstance(v, dict):
        return {"type": "dict", "items": {str(k): encode(x) for k, x in v.items()}}
    if isinstance(v, Complex):
        return {"type": "complex", **v.to_json()}
    if isinstance(v, ChainMap):
        return {"type": "chain_map", **v.to_json()}
    if isinstance(v, Truncated):
        return {"type": "truncated", **v.to_json()}
    if isinstance(v, SimplicialMap):
        return {"type": "simplicial_map", "source": v.source.to_json(), "target": v.target.to_json(),
                "comps": [{str(q): mat_to_json(m) for q, m in sorted(c.comps.items())}
                          for c in v.comps]}
    if isinstance(v, FiniteSimplicialSet):
        return {"type": "sset", **v.to_json()}
    if isinstance(v, SSetMap):
        return {"type": "sset_map", "source": v.source.to_json(), "target": v.target.to_json(),
                "images": {c: [s[0], list(s[1])] for c, s in sorted(v.images.items())}}
    enc = getattr(v, "to_json", None)
    if enc is not None:
        return {"type": type(v).__name__, **enc()}
    raise TypeError(f"cannot encode {type(v).__name__}")


_EXTRA: dict = {}


def register(name: str, decoder) -> None:
    """Decoders for module-specific types (filtered complexes, grids, ...)."""
    _EXTRA[name] = decoder


def decode(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, list):
        return [decode(x) for x in obj]
    if not isinstance(obj, dict) or "type" not in obj:
        raise SchemaError("untagged value in instance encoding")
    t = obj["type"]
    body = {k: x for k, x in obj.items() if k != "type"}
    if t == "dict":
        return {k: decode(x) for k, x in body["items"].items()}
    if t == "complex":
        return Complex.from_json(body)
    if t == "chain_map":
        return ChainMap.from_json(body)
    if t == "truncated":
        return Truncated.from_json(body)
    if t == "simplicial_map":
        S = Truncated.from_json(body["source"])
        T = Truncated.from_json(body["target"])
        if len(body["comps"]) != S.N + 1:
            raise SchemaError("simplicial map needs one component per degree")
        comps = []
        for n, cm in enumerate(body["comps"]):
            a, b = S.objects[n], T.objects[n]
            comps.append(ChainMap(a, b, {int(q): mat_from_json(r, b.dim(int(q)), a.dim(int(q)))
                                         for q, r in cm.items()}))
        return SimplicialMap(S, T, comps)
    if t == "sset":
        return FiniteSimplicialSet.from_json(body)
    if t == "sset_map":
        return SSetMap(FiniteSimplicialSet.from_json(body["source"]),
                       FiniteSimplicialSet.from_json(body["target"]),
                       {c: (s[0], tuple(s[1])) for c, s in body["images"].items()})
    if t in _EXTRA:
        return _EXTRA[t](body)
    raise SchemaError(f"unknown instance type {t!r}")
