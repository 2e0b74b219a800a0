"""JSON formats for configurations, point sets and invariant reports.

Rationals travel as integers or "p/q" strings; floats are rejected so the
exact predicates never see rounded data.
"""

from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .classify import Profile
from .bracket import LaurentPoly
from .errors import ConfigFileError
from .geometry import Configuration, OrientedLine, PointSet, Vec3
from .invariants import ChiralityVerdict, TripleTable


def fraction_from_json(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ConfigFileError(f"{where}: rationals must be integers or 'p/q' strings")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigFileError(f"{where}: cannot parse rational {value!r}") from exc
    raise ConfigFileError(f"{where}: unsupported value {value!r}")


def fraction_to_json(value: Fraction) -> Union[int, str]:
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def _vec_from_json(value, where: str) -> Vec3:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ConfigFileError(f"{where}: expected a triple of rationals")
    x, y, z = (fraction_from_json(v, where) for v in value)
    return Vec3(x, y, z)


def _vec_to_json(v: Vec3) -> list:
    return [fraction_to_json(v.x), fraction_to_json(v.y), fraction_to_json(v.z)]


@dataclass(frozen=True)
class LoadedDocument:
    configuration: Optional[Configuration]
    point_set: Optional[PointSet]


def document_from_json(doc) -> LoadedDocument:
    """Parse a {"lines": [...], "points": [...]} document.

    Geometry validation happens in the constructors, so malformed skewness
    surfaces as :class:`NotSkew` with the offending labels.
    """
    if not isinstance(doc, dict):
        raise ConfigFileError("top level must be a JSON object")
    unknown = set(doc) - {"lines", "points"}
    if unknown:
        raise ConfigFileError(f"unknown keys: {sorted(unknown)}")
    config = None
    points = None
    if "lines" in doc:
        if not isinstance(doc["lines"], list) or not doc["lines"]:
            raise ConfigFileError("'lines' must be a nonempty list")
        lines = []
        for idx, entry in enumerate(doc["lines"], start=1):
            if not isinstance(entry, dict) or set(entry) != {"point", "direction"}:
                raise ConfigFileError(
                    f"line {idx}: expected an object with 'point' and 'direction'"
                )
            base = _vec_from_json(entry["point"], f"line {idx} point")
            direction = _vec_from_json(entry["direction"], f"line {idx} direction")
            lines.append(OrientedLine(base, direction))
        config = Configuration(tuple(lines))
    if "points" in doc:
        if not isinstance(doc["points"], list) or not doc["points"]:
            raise ConfigFileError("'points' must be a nonempty list")
        points = PointSet(tuple(
            _vec_from_json(entry, f"point {idx}")
            for idx, entry in enumerate(doc["points"], start=1)
        ))
    if config is None and points is None:
        raise ConfigFileError("document contains neither 'lines' nor 'points'")
    return LoadedDocument(config, points)


def load_document(path: Union[str, Path]) -> LoadedDocument:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigFileError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigFileError(f"{path} is not valid JSON: {exc}") from exc
    return document_from_json(doc)


def configuration_to_json(c: Configuration) -> dict:
    return {
        "lines": [
            {"point": _vec_to_json(l.base), "direction": _vec_to_json(l.dir)}
            for l in c.lines
        ]
    }


def point_set_to_json(p: PointSet) -> dict:
    return {"points": [_vec_to_json(v) for v in p.points]}


def triple_table_to_json(t: TripleTable) -> list:
    return [[list(subset), s] for subset, s in zip(t.subsets(), t.signs)]


def poly_to_json(p: LaurentPoly) -> list:
    return [[e, c] for e, c in p.terms]


def chirality_to_json(v: ChiralityVerdict) -> dict:
    out: dict = {"verdict": "nonamphicheiral" if v.nonamphicheiral else "inconclusive"}
    if v.reason is not None:
        out["reason"] = v.reason.value
    if v.value is not None:
        out["triple_sum"] = v.value
    return out


def profile_report(prof: Profile, chirality: ChiralityVerdict) -> dict:
    symbol: str
    if prof.symbol is None:
        symbol = "nondecomposable"
    else:
        symbol = prof.symbol.render()
    return {
        "n": prof.n,
        "triple_table": triple_table_to_json(prof.canonical),
        "triple_sum": prof.triple_sum,
        "symbol": symbol,
        "bracket": None if prof.bracket is None else poly_to_json(prof.bracket),
        "chirality": chirality_to_json(chirality),
    }


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"
