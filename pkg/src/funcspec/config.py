"""JSON configuration: building rings, functions and ideals from plain data.

Schema (all keys optional unless a command needs them)::

    {
      "base": {"kind": "Integers"} | {"kind": "IntegersMod", "m": 6}
            | {"kind": "PrimeField", "p": 5} | {"kind": "ExtField", "p": 2, "k": 2},
      "E": [0, 1, 2],                    # points; field elements as coefficient lists
      "generators": {"x": "x", "y": [1, 0, 1]},   # expression in x, or values
      "M": 2,                            # generator of M; 0 or null for the zero ideal
      ...                                # command options
    }

In generator expressions ``x`` is the inclusion E -> D.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .algebra import BaseRing, ExtField, Integers, IntegersMod, PrimeField
from .errors import InputError, UnknownIdentifier
from .expr import evaluate, parse_expression, variables
from .funcring import FnValue, FuncRing, MDescriptor


def load_config(path: str | Path | None) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("config must be a JSON object")
    return data


def require(cfg: dict, key: str) -> Any:
    if key not in cfg or cfg[key] is None:
        raise InputError(f"config needs {key!r}")
    return cfg[key]


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{what} must be an integer, got {value!r}")
    return value


def build_base(desc) -> BaseRing:
    if desc is None:
        return Integers()
    if not isinstance(desc, dict) or "kind" not in desc:
        raise InputError("base must be an object with a 'kind'")
    kind = desc["kind"]
    if kind == "Integers":
        return Integers()
    if kind == "IntegersMod":
        return IntegersMod(_int(require(desc, "m"), "m"))
    if kind == "PrimeField":
        return PrimeField(_int(require(desc, "p"), "p"))
    if kind == "ExtField":
        modulus = desc.get("modulus")
        return ExtField(_int(require(desc, "p"), "p"), _int(require(desc, "k"), "k"), tuple(modulus) if modulus else None)
    raise InputError(f"unknown base kind {kind!r}")


def _value(base: BaseRing, v):
    if isinstance(v, bool) or not isinstance(v, (int, list)):
        raise InputError(f"cannot read {v!r} as an element of {base}")
    if isinstance(v, list):
        if not isinstance(base, ExtField):
            raise InputError(f"coefficient lists are only valid over extension fields, got {v!r}")
        if not all(isinstance(c, int) for c in v):
            raise InputError(f"coefficients must be integers, got {v!r}")
    return base.elem(v)


def build_funcring(cfg: dict) -> FuncRing:
    base = build_base(cfg.get("base"))
    points = require(cfg, "E")
    if not isinstance(points, list):
        raise InputError("E must be a list")
    plain = FuncRing(base, [_value(base, e) for e in points])
    gens = {}
    for name, spec in (cfg.get("generators") or {}).items():
        gens[name] = function_from_x(plain, spec)
    return FuncRing(base, plain.E, gens)


def function_from_x(R: FuncRing, spec) -> FnValue:
    """A function on E given by values or by an expression in x."""
    if isinstance(spec, str):
        node = parse_expression(spec)
        extra = variables(node) - {"x"}
        if extra:
            raise UnknownIdentifier(f"unknown identifier {sorted(extra)[0]!r}; generators are expressions in x")
        return evaluate(node, {"x": R.identity()}, R.const)
    if isinstance(spec, list):
        return R.fn([_value(R.base, v) for v in spec])
    raise InputError(f"a function is an expression or a list of values, got {spec!r}")


def ring_element(R: FuncRing, spec) -> FnValue:
    """An element of R: an expression in the generators (and x, the inclusion E -> D)."""
    if not isinstance(spec, str):
        raise InputError(f"ring elements are expressions in the generators, got {spec!r}")
    node = parse_expression(spec)
    env = {name: R.generator(name) for name in R.generators}
    env.setdefault("x", R.identity())
    unknown = variables(node) - set(env)
    if unknown:
        raise UnknownIdentifier(f"unknown identifier {sorted(unknown)[0]!r}")
    return evaluate(node, env, R.const)


def with_functions(R: FuncRing, specs: dict) -> tuple[FuncRing, dict[str, FnValue]]:
    """Elements named in ``specs``; value lists are adjoined to R as new generators."""
    extra = {k: v for k, v in specs.items() if isinstance(v, list)}
    if extra:
        clash = set(extra) & set(R.generators)
        if clash:
            raise InputError(f"{sorted(clash)[0]!r} is already a generator")
        gens = dict(R.generators)
        for k, v in extra.items():
            gens[k] = [_value(R.base, x) for x in v]
        R = FuncRing(R.base, R.E, gens)
    out = {}
    for k, v in specs.items():
        out[k] = R.generator(k) if isinstance(v, list) else ring_element(R, v)
    return R, out


def build_M(base: BaseRing, value) -> MDescriptor:
    if value is None or value == 0:
        return MDescriptor.zero(base)
    return MDescriptor.principal(base, _int(value, "M"))
