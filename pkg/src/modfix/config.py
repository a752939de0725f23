"""Experiment configuration: strict JSON ingestion and normalization.

The accepted document shape (unknown keys are rejected everywhere, numbers
may be written as JSON numbers or as exact strings like "64/81" or "1e-9"):

    {
      "space":       {"dimension": 1, "backend": "exact"},
      "modular":     {"family": "power", "p": 2, "weights": [...], "convex": true}
                     | {"expr": "x^2", "convex": true},
      "map":         {"affine": {"p": "1/3", "q": 0}}
                     | {"piecewise": [{"when": "x = 1", "value": "1/10"},
                                      {"else": "1/2"}]}
                     | {"expr": "x/3"},
      "graph":       {"kind": "complete"}
                     | {"kind": "poset", "order": "x <= y"?}
                     | {"kind": "custom", "edge": "x + 1 <= y"},
      "contraction": {"banach": {"k": .., "a": .., "b": ..},
                      "undirected": false}
                     | {"kannan": {"k": .., "l": .., "a1": .., "a2": .., "b": ..},
                        "undirected": false},
      "solve":       {"x0": 1 | [..], "tol": "1e-9", "max_iter": 500,
                      "cf_depth": 20, "bounds_depth": 50},           # optional
      "samples":     {"grid": {"min": -2, "max": 2, "count": 9},
                      "random_pairs": 0, "coeff_pairs": 0, "seed": 1} # optional
    }

Expression-based maps, modulars and predicates are one-dimensional.  A seed
is required whenever random sampling is requested.  Serialization
(``config_to_dict``) emits the normalized form, so parse -> serialize is
idempotent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path as FsPath
from typing import Optional

from .backend import Backend, get_backend
from .contractions import (BanachConstants, KannanConstants, SelfMap,
                           affine_map)
from .errors import AdmissibilityError, ConfigError, ExprError
from .expr import eval_expr, parse_expression, parse_predicate
from .graphs import SpaceGraph, make_complete, make_custom, make_poset
from .modular import ModularSpec, abs_norm, custom_modular, power, weighted_power


@dataclass
class SolveSettings:
    x0: tuple
    tol: object
    max_iter: int
    cf_depth: int
    bounds_depth: int


@dataclass
class SampleSettings:
    grid_min: object
    grid_max: object
    grid_count: int
    random_pairs: int
    coeff_pairs: int
    seed: Optional[int]


@dataclass
class ExperimentConfig:
    backend: Backend
    dimension: int
    spec: ModularSpec
    map: SelfMap
    graph: SpaceGraph
    mode: str  # "banach" | "kannan"
    banach: Optional[BanachConstants]
    kannan: Optional[KannanConstants]
    undirected: bool
    solve: Optional[SolveSettings]
    samples: SampleSettings
    normalized: dict


def _check_keys(obj: dict, path: str, allowed) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(path, f"expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in allowed:
            raise ConfigError(path, f"unknown key {key!r} "
                                    f"(allowed: {', '.join(sorted(allowed))})")


def _get(obj: dict, path: str, key: str, required: bool = True, default=None):
    if key not in obj:
        if required:
            raise ConfigError(path, f"missing required key {key!r}")
        return default
    return obj[key]


def _number(be: Backend, value, path: str):
    try:
        return be.number(value)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise ConfigError(path, f"bad number {value!r}: {e}") from None


def _int(value, path: str, minimum: int = 0) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigError(path, f"expected an integer >= {minimum}, got {value!r}")
    return value


def _parse_modular(be: Backend, obj, dimension: int) -> tuple:
    path = "modular"
    _check_keys(obj, path, {"family", "p", "weights", "convex", "expr"})
    if "expr" in obj:
        if "family" in obj or "p" in obj or "weights" in obj:
            raise ConfigError(path, "give either 'expr' or a builtin family, not both")
        if dimension != 1:
            raise ConfigError(path, "expression modulars are one-dimensional")
        src = obj["expr"]
        try:
            ast = parse_expression(src, variables=("x",))
        except ExprError as e:
            raise ConfigError(f"{path}.expr", str(e)) from None
        convex = bool(obj.get("convex", False))
        spec = custom_modular(lambda pt: eval_expr(ast, {"x": pt[0]}, be),
                              label=src, convex=convex)
        norm = {"expr": src, "convex": convex}
        return spec, norm
    family = _get(obj, path, "family")
    convex = bool(obj.get("convex", True))
    if family == "abs-norm":
        spec = abs_norm()
        norm = {"family": "abs-norm", "convex": convex}
    elif family == "power":
        p = _number(be, _get(obj, path, "p"), f"{path}.p")
        spec = power(p)
        norm = {"family": "power", "p": be.format(p), "convex": convex}
    elif family == "weighted-power":
        p = _number(be, _get(obj, path, "p"), f"{path}.p")
        raw_w = _get(obj, path, "weights")
        if not isinstance(raw_w, list) or len(raw_w) != dimension:
            raise ConfigError(f"{path}.weights",
                              f"expected a list of {dimension} weights")
        weights = tuple(_number(be, w, f"{path}.weights[{i}]")
                        for i, w in enumerate(raw_w))
        spec = weighted_power(p, weights)
        norm = {"family": "weighted-power", "p": be.format(p),
                "weights": [be.format(w) for w in weights], "convex": convex}
    else:
        raise ConfigError(f"{path}.family", f"unknown family {family!r}")
    if convex != spec.convex:
        spec = ModularSpec(spec.family, spec.p, spec.weights, convex,
                           spec.fn, spec.label)
    return spec, norm


def _parse_map(be: Backend, obj, dimension: int) -> tuple:
    path = "map"
    _check_keys(obj, path, {"affine", "piecewise", "expr"})
    given = [k for k in ("affine", "piecewise", "expr") if k in obj]
    if len(given) != 1:
        raise ConfigError(path, "give exactly one of 'affine', 'piecewise', 'expr'")
    kind = given[0]
    if kind == "affine":
        sub = obj["affine"]
        _check_keys(sub, f"{path}.affine", {"p", "q"})
        p = _number(be, _get(sub, f"{path}.affine", "p"), f"{path}.affine.p")
        q = _number(be, _get(sub, f"{path}.affine", "q"), f"{path}.affine.q")
        return (affine_map(p, q),
                {"affine": {"p": be.format(p), "q": be.format(q)}})
    if dimension != 1:
        raise ConfigError(path, f"{kind} maps are one-dimensional")
    if kind == "expr":
        src = obj["expr"]
        try:
            ast = parse_expression(src, variables=("x",))
        except ExprError as e:
            raise ConfigError(f"{path}.expr", str(e)) from None
        fn = SelfMap(lambda pt: (eval_expr(ast, {"x": pt[0]}, be),), src)
        return fn, {"expr": src}
    branches = obj["piecewise"]
    if not isinstance(branches, list) or not branches:
        raise ConfigError(f"{path}.piecewise", "expected a nonempty list of branches")
    compiled = []
    norm_branches = []
    for i, br in enumerate(branches):
        bpath = f"{path}.piecewise[{i}]"
        if "else" in br:
            _check_keys(br, bpath, {"else"})
            if i != len(branches) - 1:
                raise ConfigError(bpath, "the else branch must come last")
            value = _number(be, br["else"], f"{bpath}.else")
            compiled.append((None, value))
            norm_branches.append({"else": be.format(value)})
        else:
            _check_keys(br, bpath, {"when", "value"})
            src = _get(br, bpath, "when")
            try:
                guard = parse_predicate(src, variables=("x",))
            except ExprError as e:
                raise ConfigError(f"{bpath}.when", str(e)) from None
            value = _number(be, _get(br, bpath, "value"), f"{bpath}.value")
            compiled.append((guard, value))
            norm_branches.append({"when": src, "value": be.format(value)})

    def apply(pt):
        for guard, value in compiled:
            if guard is None or eval_expr(guard, {"x": pt[0]}, be):
                return (value,)
        raise ConfigError(f"{path}.piecewise", f"no branch matched {pt[0]!r}")

    return SelfMap(apply, "piecewise-constant"), {"piecewise": norm_branches}


def _parse_graph(be: Backend, obj, dimension: int) -> tuple:
    path = "graph"
    _check_keys(obj, path, {"kind", "order", "edge"})
    kind = _get(obj, path, "kind")
    if kind == "complete":
        if "order" in obj or "edge" in obj:
            raise ConfigError(path, "complete graphs take no predicate")
        return make_complete(), {"kind": "complete"}
    if kind == "poset":
        if "edge" in obj:
            raise ConfigError(path, "poset graphs use 'order', not 'edge'")
        src = obj.get("order")
        if src is None:
            return make_poset(), {"kind": "poset"}
        if dimension != 1:
            raise ConfigError(f"{path}.order",
                              "expression orders are one-dimensional")
        try:
            ast = parse_predicate(src, variables=("x", "y"))
        except ExprError as e:
            raise ConfigError(f"{path}.order", str(e)) from None
        pred = lambda x, y: bool(eval_expr(ast, {"x": x[0], "y": y[0]}, be))
        return make_poset(pred), {"kind": "poset", "order": src}
    if kind == "custom":
        if "order" in obj:
            raise ConfigError(path, "custom graphs use 'edge', not 'order'")
        src = _get(obj, path, "edge")
        if dimension != 1:
            raise ConfigError(f"{path}.edge",
                              "expression predicates are one-dimensional")
        try:
            ast = parse_predicate(src, variables=("x", "y"))
        except ExprError as e:
            raise ConfigError(f"{path}.edge", str(e)) from None
        pred = lambda x, y: bool(eval_expr(ast, {"x": x[0], "y": y[0]}, be))
        return make_custom(pred), {"kind": "custom", "edge": src}
    raise ConfigError(f"{path}.kind", f"unknown graph kind {kind!r}")


def _parse_contraction(be: Backend, obj) -> tuple:
    path = "contraction"
    _check_keys(obj, path, {"banach", "kannan", "undirected"})
    undirected = bool(obj.get("undirected", False))
    given = [k for k in ("banach", "kannan") if k in obj]
    if len(given) != 1:
        raise ConfigError(path, "give exactly one of 'banach' or 'kannan'")
    mode = given[0]
    sub = obj[mode]
    if mode == "banach":
        _check_keys(sub, f"{path}.banach", {"k", "a", "b"})
        vals = {n: _number(be, _get(sub, f"{path}.banach", n), f"{path}.banach.{n}")
                for n in ("k", "a", "b")}
        try:
            constants = BanachConstants(**vals)
        except AdmissibilityError as e:
            raise ConfigError(f"{path}.banach", str(e)) from None
        norm = {"banach": {n: be.format(v) for n, v in vals.items()},
                "undirected": undirected}
        return mode, constants, None, undirected, norm
    _check_keys(sub, f"{path}.kannan", {"k", "l", "a1", "a2", "b"})
    vals = {n: _number(be, _get(sub, f"{path}.kannan", n), f"{path}.kannan.{n}")
            for n in ("k", "l", "a1", "a2", "b")}
    try:
        constants = KannanConstants(**vals)
    except AdmissibilityError as e:
        raise ConfigError(f"{path}.kannan", str(e)) from None
    norm = {"kannan": {n: be.format(v) for n, v in vals.items()},
            "undirected": undirected}
    return mode, None, constants, undirected, norm


def _parse_solve(be: Backend, obj, dimension: int) -> tuple:
    path = "solve"
    _check_keys(obj, path, {"x0", "tol", "max_iter", "cf_depth", "bounds_depth"})
    raw_x0 = _get(obj, path, "x0")
    if not isinstance(raw_x0, list):
        raw_x0 = [raw_x0]
    if len(raw_x0) != dimension:
        raise ConfigError(f"{path}.x0",
                          f"expected {dimension} coordinates, got {len(raw_x0)}")
    x0 = tuple(_number(be, c, f"{path}.x0[{i}]") for i, c in enumerate(raw_x0))
    tol = _number(be, _get(obj, path, "tol"), f"{path}.tol")
    if not tol > 0:
        raise ConfigError(f"{path}.tol", "tolerance must be positive")
    max_iter = _int(obj.get("max_iter", 500), f"{path}.max_iter", 1)
    cf_depth = _int(obj.get("cf_depth", 20), f"{path}.cf_depth", 1)
    bounds_depth = _int(obj.get("bounds_depth", 50), f"{path}.bounds_depth", 1)
    settings = SolveSettings(x0, tol, max_iter, cf_depth, bounds_depth)
    norm = {"x0": [be.format(c) for c in x0], "tol": be.format(tol),
            "max_iter": max_iter, "cf_depth": cf_depth,
            "bounds_depth": bounds_depth}
    return settings, norm


def _parse_samples(be: Backend, obj) -> tuple:
    path = "samples"
    _check_keys(obj, path, {"grid", "random_pairs", "coeff_pairs", "seed"})
    grid = obj.get("grid", {"min": -2, "max": 2, "count": 9})
    _check_keys(grid, f"{path}.grid", {"min", "max", "count"})
    gmin = _number(be, _get(grid, f"{path}.grid", "min"), f"{path}.grid.min")
    gmax = _number(be, _get(grid, f"{path}.grid", "max"), f"{path}.grid.max")
    gcount = _int(_get(grid, f"{path}.grid", "count"), f"{path}.grid.count", 1)
    if gcount > 64:
        raise ConfigError(f"{path}.grid.count",
                          "grid count above 64 makes the pair sample explode")
    random_pairs = _int(obj.get("random_pairs", 0), f"{path}.random_pairs")
    coeff_pairs = _int(obj.get("coeff_pairs", 0), f"{path}.coeff_pairs")
    seed = obj.get("seed")
    if seed is not None:
        seed = _int(seed, f"{path}.seed")
    if (random_pairs > 0 or coeff_pairs > 0) and seed is None:
        raise ConfigError(f"{path}.seed",
                          "a seed is required whenever random sampling is requested")
    settings = SampleSettings(gmin, gmax, gcount, random_pairs, coeff_pairs, seed)
    norm = {"grid": {"min": be.format(gmin), "max": be.format(gmax),
                     "count": gcount},
            "random_pairs": random_pairs, "coeff_pairs": coeff_pairs}
    if seed is not None:
        norm["seed"] = seed
    return settings, norm


TOP_KEYS = {"space", "modular", "map", "graph", "contraction", "solve", "samples"}


def load_config(source, backend_override: Optional[str] = None) -> ExperimentConfig:
    """Parse a config from a dict, a JSON string, or a file path."""
    if isinstance(source, dict):
        doc = source
    else:
        s = str(source)
        if s.lstrip().startswith("{"):
            text = s
        else:
            try:
                text = FsPath(s).read_text()
            except OSError as e:
                raise ConfigError("", f"cannot read config file: {e}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError("", f"invalid JSON: {e}") from None

    _check_keys(doc, "", TOP_KEYS)
    space = _get(doc, "", "space")
    _check_keys(space, "space", {"dimension", "backend"})
    dimension = _int(_get(space, "space", "dimension"), "space.dimension", 1)
    backend_name = backend_override or space.get("backend", "float")
    try:
        be = get_backend(backend_name)
    except ValueError as e:
        raise ConfigError("space.backend", str(e)) from None

    spec, norm_modular = _parse_modular(be, _get(doc, "", "modular"), dimension)
    self_map, norm_map = _parse_map(be, _get(doc, "", "map"), dimension)
    graph, norm_graph = _parse_graph(be, _get(doc, "", "graph"), dimension)
    mode, banach, kannan, undirected, norm_contraction = _parse_contraction(
        be, _get(doc, "", "contraction"))

    solve = None
    norm_solve = None
    if "solve" in doc:
        solve, norm_solve = _parse_solve(be, doc["solve"], dimension)
    samples, norm_samples = _parse_samples(be, doc.get("samples", {}))

    normalized = {
        "space": {"dimension": dimension, "backend": be.name},
        "modular": norm_modular,
        "map": norm_map,
        "graph": norm_graph,
        "contraction": norm_contraction,
        "samples": norm_samples,
    }
    if norm_solve is not None:
        normalized["solve"] = norm_solve

    return ExperimentConfig(
        backend=be, dimension=dimension, spec=spec, map=self_map, graph=graph,
        mode=mode, banach=banach, kannan=kannan, undirected=undirected,
        solve=solve, samples=samples, normalized=normalized)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Normalized serialization; parsing it back yields the same config."""
    return json.loads(json.dumps(cfg.normalized))
