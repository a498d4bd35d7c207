"""JSON file formats and canonical serialization.

Rationals are written as "p/q" in lowest terms ("p" when integral). Output
JSON has sorted keys so identical data always produces identical bytes.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .cyclotomic import Cyclotomic
from .groups import FiniteGroup, GroupError, builtin_group, group_from_generators, group_from_table
from .ring import GroupRingElement, GroupRingMatrix, augmentation, hs, is_idempotent, kaplansky


class ConfigError(ValueError):
    """Bad input file or flag; the CLI maps it to exit code 2."""


def rational_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(x, where: str = "value") -> Fraction:
    if isinstance(x, bool):
        raise ConfigError(f"{where}: expected a number, got {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ConfigError(f"{where}: not finite")
        return Fraction(str(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"{where}: cannot parse {x!r} as a rational") from None
    raise ConfigError(f"{where}: expected a number, got {type(x).__name__}")


def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, Cyclotomic):
        if obj.is_rational():
            return rational_str(obj.to_fraction())
        return {"level": obj.level, "coords": [rational_str(c) for c in obj.coords]}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(obj, path: str | Path | None) -> str:
    text = dumps(obj)
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text, encoding="utf-8")
    return text


def load_json(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# -- groups -------------------------------------------------------------------------


def group_from_spec(spec, cap: int, where: str = "group") -> FiniteGroup:
    """A built-in name, or {"name", "degree", "generators"}, or {"table"}."""
    try:
        if isinstance(spec, str):
            return builtin_group(spec, cap=cap)
        if not isinstance(spec, dict):
            raise ConfigError(f"{where}: expected a built-in name or an object")
        name = spec.get("name", "")
        if "builtin" in spec:
            return builtin_group(spec["builtin"], cap=cap)
        if "table" in spec:
            rows = spec["table"]
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                raise ConfigError(f"{where}.table: expected a list of rows")
            return group_from_table(rows, name=name)
        if "generators" in spec:
            if "degree" not in spec or not isinstance(spec["degree"], int):
                raise ConfigError(f"{where}.degree: required integer")
            return group_from_generators(spec["degree"], spec["generators"], cap=cap, name=name)
    except GroupError as exc:
        if type(exc).__name__ == "CapExceeded":
            raise
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}: needs one of 'table', 'generators' or 'builtin'")


def resolve_group_arg(arg: str, cap: int) -> FiniteGroup:
    """CLI --group: a built-in name or a path to a group file."""
    p = Path(arg)
    if p.exists():
        return group_from_spec(load_json(p), cap, where=str(p))
    try:
        return builtin_group(arg, cap=cap)
    except GroupError:
        raise ConfigError(f"--group: {arg!r} is neither a file nor a built-in group") from None


def group_info(G: FiniteGroup, subgroup_cap: int) -> dict:
    from .groups import abelian_subgroups, all_subgroups, lambda_ring

    subs = all_subgroups(G, cap=subgroup_cap)
    return {
        "name": G.name,
        "order": G.order,
        "abelian": G.is_abelian(),
        "exponent": G.exponent,
        "class_sizes": G.partition.sizes,
        "class_orders": list(G.partition.class_orders),
        "abelian_subgroups": len(abelian_subgroups(G, cap=subgroup_cap)),
        "subgroups": len(subs),
        "lambda_primes": sorted(lambda_ring(subs).primes),
    }


# -- group ring matrices ----------------------------------------------------------


def element_from_spec(G, spec, where: str) -> GroupRingElement:
    if not isinstance(spec, list):
        raise ConfigError(f"{where}: expected a list of [element, numerator, denominator] triples")
    coeffs: dict = {}
    for k, term in enumerate(spec):
        if not (isinstance(term, list) and len(term) == 3 and all(isinstance(v, int) for v in term)):
            raise ConfigError(f"{where}[{k}]: expected [element, numerator, denominator] integers")
        g, num, den = term
        if not 0 <= g < G.order:
            raise ConfigError(f"{where}[{k}]: element {g} out of range")
        if den == 0:
            raise ConfigError(f"{where}[{k}]: zero denominator")
        coeffs[g] = coeffs.get(g, 0) + Fraction(num, den)
    return GroupRingElement(G, coeffs)


def matrix_from_spec(G: FiniteGroup, spec, where: str = "matrix") -> GroupRingMatrix:
    rows = spec.get("entries") if isinstance(spec, dict) else spec
    if not isinstance(rows, list) or not rows:
        raise ConfigError(f"{where}: expected a non-empty list of rows")
    n = len(rows)
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ConfigError(f"{where}[{i}]: row must have {n} entries")
        out.append([element_from_spec(G, e, f"{where}[{i}][{j}]") for j, e in enumerate(row)])
    return GroupRingMatrix(G, out)


def element_to_spec(a: GroupRingElement) -> list:
    return [[g, c.numerator, c.denominator] for g, c in sorted(a.coeffs.items())]


def matrix_to_spec(M: GroupRingMatrix) -> list:
    return M.map_entries(element_to_spec)


def trace_report(M: GroupRingMatrix) -> dict:
    tr = M.trace()
    return {
        "kaplansky": kaplansky(tr),
        "augmentation": augmentation(tr),
        "hs": {str(k): v for k, v in sorted(hs(tr).values.items())},
        "idempotent": is_idempotent(M),
    }


# -- metric spaces ------------------------------------------------------------------


def space_from_spec(spec, tol: float, seed: int = 0, cap: int = 5040, where: str = "space"):
    from .bolicity import MetricError, make_space, validate_metric

    if not isinstance(spec, dict):
        raise ConfigError(f"{where}: expected an object")
    try:
        if "d" in spec:
            exact = spec.get("exact")
            rows = spec["d"]
            if exact:
                rows = [[parse_rational(x, f"{where}.d[{i}][{j}]") for j, x in enumerate(r)]
                        for i, r in enumerate(rows)]
            X = validate_metric(rows, exact=exact, tol=tol, source=spec.get("source", "matrix"))
            if "n" in spec and spec["n"] != X.n:
                raise ConfigError(f"{where}.n: says {spec['n']} but d has {X.n} rows")
            return X
        kind = spec.get("kind")
        if kind is None:
            raise ConfigError(f"{where}: needs 'd' or 'kind'")
        params = {k: v for k, v in spec.items() if k not in ("kind", "seed", "label", "expect")}
        if kind == "cayley_ball":
            params = _cayley_params(params, cap, where)
        return make_space(kind, params, seed=int(spec.get("seed", seed)), tol=tol)
    except MetricError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    except KeyError as exc:
        raise ConfigError(f"{where}: missing parameter {exc}") from None
    except TypeError as exc:
        raise ConfigError(f"{where}: bad parameters ({exc})") from None


def _cayley_params(params: dict, cap: int, where: str) -> dict:
    from .hnn import build_a1

    gspec = params.get("group")
    if isinstance(gspec, dict) and "a1" in gspec:
        group = build_a1(group_from_spec(gspec["a1"], cap, f"{where}.group.a1"), cap=cap)
    else:
        group = group_from_spec(gspec, cap, f"{where}.group")
    return {**params, "group": group}
