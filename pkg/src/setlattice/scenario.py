"""Scenario loading and execution: a JSON scenario names a workspace,
functions, candidate spaces and a task list; running it produces a
deterministic JSON report and optional SVG plots."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .calculus import (
    regularity_check,
    scalar_dini,
    set_derivative,
)
from .extres import residual as ext_residual
from .instances import (
    BUILTIN_NAMES,
    builtin_function,
    example23_sets,
    example23_workspace,
    noncommutation_trail,
)
from .kernel import (
    DirectionSet,
    LatticeError,
    UpperSet,
    Workspace,
    frac_str,
    inf_family,
)
from .setfun import (
    ConcavePWL,
    ConvexPWL,
    EpiVectorFunction,
    ParamPolyFunction,
    Polyhedron,
    SetFunction,
)
from .svgplot import render_svg
from .vectoropt import (
    PWLVectorFunction,
    VectorFunction,
    classify_dini,
    efficient_set,
    efficiency_minimality_bridge,
    infdir_plus_cone,
    vector_dini,
    vector_minty_check,
)
from .vi import (
    CandidateSpace,
    implication_audit,
    infimizer_check,
    minimal_check,
    run_checker,
    solution_check,
)

SCHEMA_VERSION = 1


class ValidationError(LatticeError):
    pass


class TaskError(LatticeError):
    pass


def _rat(x) -> Fraction:
    if isinstance(x, bool):
        raise ValidationError(f"expected a rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad rational {x!r}") from exc
    raise ValidationError(f"expected a rational, got {x!r}")


def _vec(x) -> tuple:
    if not isinstance(x, (list, tuple)):
        raise ValidationError(f"expected a vector, got {x!r}")
    return tuple(_rat(c) for c in x)


@dataclass
class Scenario:
    name: str
    workspace: Optional[Workspace]
    functions: Dict[str, object]
    sets: Dict[str, UpperSet]
    spaces: Dict[str, List[tuple]]
    tasks: List[dict]
    tolerance: Fraction = Fraction(1, 10**6)

    @staticmethod
    def from_json(doc: dict, name: str = "scenario") -> "Scenario":
        if not isinstance(doc, dict):
            raise ValidationError("scenario document must be an object")
        if doc.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ValidationError("unsupported schema version")
        name = doc.get("name", name)
        ws = None
        if "workspace" in doc:
            w = doc["workspace"]
            try:
                ws = Workspace(
                    int(w["dim"]),
                    [_vec(g) for g in w.get("cone", [])],
                    [_vec(d) for d in w.get("directions", [])],
                )
            except (KeyError, TypeError, LatticeError) as exc:
                raise ValidationError(f"bad workspace: {exc}") from exc
        functions: Dict[str, object] = {}
        for fname, spec in doc.get("functions", {}).items():
            functions[fname] = _build_function(ws, spec)
        sets: Dict[str, UpperSet] = {}
        for sname, spec in doc.get("sets", {}).items():
            if ws is None:
                raise ValidationError("named sets need a workspace")
            sets[sname] = _build_set(ws, spec)
        spaces: Dict[str, List[tuple]] = {}
        for gname, spec in doc.get("spaces", {}).items():
            spaces[gname] = _build_space(spec)
        tasks = doc.get("tasks", [])
        if not isinstance(tasks, list):
            raise ValidationError("tasks must be a list")
        tol = _rat(doc.get("tolerance", "1/1000000"))
        return Scenario(name, ws, functions, sets, spaces, tasks, tol)


def _build_function(ws: Optional[Workspace], spec: dict):
    if not isinstance(spec, dict) or "variant" not in spec:
        raise ValidationError(f"bad function spec {spec!r}")
    variant = spec["variant"]
    if variant == "builtin":
        bname = spec.get("name")
        if bname not in BUILTIN_NAMES:
            raise ValidationError(f"unknown builtin {bname!r}")
        return builtin_function(bname)
    if ws is None:
        raise ValidationError("non-builtin functions need a workspace")
    xdim = int(spec.get("xdim", ws.dim))
    domain = Polyhedron(
        xdim, [(_vec(a), _rat(r)) for a, r in spec.get("domain", [])]
    )
    if variant == "parampoly":
        normals = [_vec(n) for n in spec["normals"]]
        offsets = [
            ConcavePWL([(_vec(c), _rat(k)) for c, k in pieces])
            for pieces in spec["offsets"]
        ]
        return ParamPolyFunction(ws, xdim, normals, offsets, domain, name=spec.get("name", ""))
    if variant == "epivector":
        comps = [
            ConvexPWL([(_vec(c), _rat(k)) for c, k in pieces])
            for pieces in spec["components"]
        ]
        return EpiVectorFunction(ws, xdim, comps, domain, name=spec.get("name", ""))
    if variant == "pwlvector":
        comps = [
            ConvexPWL([(_vec(c), _rat(k)) for c, k in pieces])
            for pieces in spec["components"]
        ]
        return PWLVectorFunction(ws, xdim, comps, domain, name=spec.get("name", ""))
    raise ValidationError(f"unknown function variant {variant!r}")


def _build_set(ws: Workspace, spec: dict) -> UpperSet:
    if spec.get("tag") == "empty":
        return ws.empty_set()
    cons = [(_vec(item["n"]), _rat(item["b"])) for item in spec.get("constraints", [])]
    return ws.upper_set(cons)


def _build_space(spec) -> List[tuple]:
    if isinstance(spec, dict) and "points" in spec:
        return [_vec(p) for p in spec["points"]]
    if isinstance(spec, dict) and "box" in spec:
        step = _rat(spec.get("step", 1))
        if step <= 0:
            raise ValidationError("grid step must be positive")
        axes = []
        for lo, hi in spec["box"]:
            lo, hi = _rat(lo), _rat(hi)
            vals = []
            v = lo
            while v <= hi:
                vals.append(v)
                v += step
            axes.append(vals)
        pts = [()]
        for axis in axes:
            pts = [p + (v,) for p in pts for v in axis]
        return pts
    raise ValidationError(f"bad space spec {spec!r}")


# ---------------------------------------------------------------------------
# Task dispatch
# ---------------------------------------------------------------------------


def _function_of(scn: Scenario, task: dict):
    fname = task.get("function")
    if fname not in scn.functions:
        raise ValidationError(f"unknown function {fname!r}")
    return scn.functions[fname]


def _set_function_of(scn: Scenario, task: dict) -> SetFunction:
    f = _function_of(scn, task)
    if isinstance(f, VectorFunction):
        from .vectoropt import epigraphical

        return epigraphical(f)
    if isinstance(f, tuple):
        raise ValidationError("task needs a set-valued function")
    return f


def _vector_function_of(scn: Scenario, task: dict) -> VectorFunction:
    f = _function_of(scn, task)
    if not isinstance(f, VectorFunction):
        raise ValidationError("task needs a vector-valued function")
    return f


def _space_of(scn: Scenario, task: dict, key: str = "space") -> List[tuple]:
    gname = task.get(key)
    if gname not in scn.spaces:
        raise ValidationError(f"unknown space {gname!r}")
    return scn.spaces[gname]


def _named_set(scn: Scenario, key: str) -> UpperSet:
    if key not in scn.sets:
        raise ValidationError(f"unknown set {key!r}")
    return scn.sets[key]


def _dirs_for(obj) -> DirectionSet:
    return obj.workspace.directions


def run_task(scn: Scenario, task: dict) -> dict:
    op = task.get("op")
    out = {"op": op}
    if op == "eval":
        f = _set_function_of(scn, task)
        out["value"] = f.eval(_vec(task["x"])).to_json()
    elif op == "residual":
        a = _named_set(scn, task["a"])
        b = _named_set(scn, task["b"])
        out["value"] = a.residual(b).to_json()
    elif op == "scalar_residuals":
        a = _named_set(scn, task["a"])
        b = _named_set(scn, task["b"])
        vals = {}
        for z in a.workspace.directions:
            r = ext_residual(a.neg_support(z), b.neg_support(z))
            vals[",".join(map(str, z))] = r.to_json()
        out["values"] = vals
        out["residual_empty"] = a.residual(b).is_empty
    elif op == "check_vi":
        f = _set_function_of(scn, task)
        space = CandidateSpace.of(_space_of(scn, task), base=_vec(task["base"]))
        names = task.get("inequalities", ["svi_I"])
        out["reports"] = [
            run_checker(n, f, _vec(task["base"]), space, _dirs_for(f)).to_json()
            for n in names
        ]
    elif op == "implication_audit":
        f = _set_function_of(scn, task)
        space = CandidateSpace.of(_space_of(scn, task), base=_vec(task["base"]))
        audit = implication_audit(
            f, _vec(task["base"]), space, _dirs_for(f), enrich=task.get("enrich", True)
        )
        out["audit"] = audit.to_json()
        out["matrix"] = audit.matrix_text()
        out["violations"] = len(audit.violations)
    elif op == "derivative":
        f = _set_function_of(scn, task)
        out["result"] = set_derivative(f, _vec(task["x"]), _vec(task["u"])).to_json()
    elif op == "scalar_dini":
        f = _set_function_of(scn, task)
        out["values"] = {
            ",".join(map(str, z)): scalar_dini(f, z, _vec(task["x"]), _vec(task["u"])).to_json()
            for z in _dirs_for(f)
        }
    elif op == "regularity":
        f = _set_function_of(scn, task)
        rep = regularity_check(f, _vec(task["x"]), _vec(task["u"]), _dirs_for(f))
        out["strong"] = rep.strong
        out["weak"] = rep.weak
        out["exact"] = rep.exact
        out["derivative"] = rep.derivative.to_json()
        out["intersection"] = rep.intersection.to_json()
    elif op == "minimal_scan":
        f = _set_function_of(scn, task)
        pts = _space_of(scn, task)
        probe = CandidateSpace.of(
            _space_of(scn, task, "probe_space") if "probe_space" in task else pts
        )
        dirs = _dirs_for(f)
        minimal = []
        for x in pts:
            if f.eval(x).is_empty:
                continue
            rep = minimal_check(f, x, probe, dirs)
            if rep.conditions["a"]:
                minimal.append([frac_str(c) for c in x])
        out["minimal"] = minimal
    elif op == "infimizer":
        f = _set_function_of(scn, task)
        space = CandidateSpace.of(_space_of(scn, task))
        out["report"] = infimizer_check(
            f, [_vec(m) for m in task["M"]], space, _dirs_for(f)
        ).to_json()
    elif op == "solution":
        f = _set_function_of(scn, task)
        space = CandidateSpace.of(_space_of(scn, task))
        out["report"] = solution_check(
            f, [_vec(m) for m in task["M"]], space, _dirs_for(f)
        ).to_json()
    elif op == "efficient_set":
        psi = _vector_function_of(scn, task)
        grid = _space_of(scn, task, "grid" if "grid" in task else "space")
        out["efficient"] = [
            [frac_str(c) for c in p] for p in efficient_set(psi, grid)
        ]
        bridge = efficiency_minimality_bridge(psi, grid, _dirs_for(psi))
        out["bridge_agrees"] = bridge["agrees"]
    elif op == "vector_dini":
        psi = _vector_function_of(scn, task)
        dl = vector_dini(psi, _vec(task["base"]), _vec(task["direction"]))
        out["limit"] = dl.to_json()
        out["classification"] = {
            k: v if isinstance(v, bool) else str(v)
            for k, v in classify_dini(
                psi,
                _vec(task["base"]),
                tuple(
                    b + d
                    for b, d in zip(_vec(task["base"]), _vec(task["direction"]))
                ),
                dl,
                _dirs_for(psi),
            ).items()
        }
    elif op == "vector_minty":
        psi = _vector_function_of(scn, task)
        rep = vector_minty_check(
            psi, _vec(task["base"]), _space_of(scn, task, "grid" if "grid" in task else "space"), _dirs_for(psi)
        )
        out["report"] = {
            k: (v if isinstance(v, bool) else str(v))
            for k, v in rep.items()
            if k != "witnesses"
        }
        out["witness_count"] = len(rep["witnesses"])
    elif op == "infdir_plus_cone":
        ws = scn.workspace
        if ws is None:
            raise ValidationError("infdir_plus_cone needs a workspace")
        out["value"] = infdir_plus_cone(ws, _vec(task["direction"])).to_json()
    elif op == "noncommutation":
        ws = scn.workspace or example23_workspace()
        count = int(task.get("count", 6))
        hull = inf_family(
            ws, [ws.translated_cone(p) for p in noncommutation_trail(count)]
        )
        hull2 = inf_family(
            ws, [ws.translated_cone(p) for p in noncommutation_trail(2 * count)]
        )
        shadow = infdir_plus_cone(ws, (0, -1))
        out["trail_hull"] = hull.to_json()
        out["direction_shadow"] = shadow.to_json()
        # the trail hulls grow without bound while the shadow stays proper
        out["noncommutation"] = (
            hull2.leq(hull) and hull2 != hull and not shadow.is_whole
        )
    elif op == "plot":
        names = task.get("sets", [])
        pairs = [(n, _named_set(scn, n)) for n in names]
        out["svg"] = render_svg(pairs)
        out["sets"] = names
    else:
        raise ValidationError(f"unknown task op {op!r}")
    return out


@dataclass
class Report:
    scenario: str
    environment: dict
    tasks: List[dict] = field(default_factory=list)
    hard_failures: int = 0

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "scenario": self.scenario,
            "environment": self.environment,
            "tasks": self.tasks,
            "hard_failures": self.hard_failures,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def run_scenario(scn: Scenario, jobs: int = 1) -> Report:
    from . import __version__
    from .backend import IMPL_NAME

    report = Report(
        scenario=scn.name,
        environment={
            "backend": IMPL_NAME,
            "package": f"setlattice {__version__}",
            "tolerance": frac_str(scn.tolerance),
        },
    )
    results: List[Optional[dict]] = [None] * len(scn.tasks)
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_task, scn, t) for t in scn.tasks]
            for i, fut in enumerate(futures):
                results[i] = fut.result()
    else:
        for i, t in enumerate(scn.tasks):
            results[i] = run_task(scn, t)
    for res in results:
        report.tasks.append(res)
        report.hard_failures += int(res.get("violations", 0))
    return report


# ---------------------------------------------------------------------------
# Builtin scenarios
# ---------------------------------------------------------------------------


def builtin_scenario(name: str) -> Scenario:
    if name == "example23":
        ws = example23_workspace()
        A, B = example23_sets(ws)
        scn = Scenario(
            name,
            ws,
            {},
            {"A": A, "B": B, "A_div_B": A.residual(B)},
            {},
            [
                {"op": "residual", "a": "A", "b": "B"},
                {"op": "scalar_residuals", "a": "A", "b": "B"},
                {"op": "plot", "sets": ["A", "B", "A_div_B"]},
            ],
        )
        return scn
    if name == "heyde_a":
        grid = [
            [0, 0], [1, 0], [0, 1], [1, 1], [1, 2], [2, 1], [2, 2],
            ["3/2", "3/2"], [3, 0], [0, -2],
        ]
        return Scenario.from_json(
            {
                "name": name,
                "functions": {"f": {"variant": "builtin", "name": "heyde_a"}},
                "spaces": {
                    "grid": {"points": grid},
                    "corners": {"points": [[1, 1], [1, 2], [2, 1], [2, 2]]},
                    "square": {"points": [[1, 1], [1, 2], [2, 1], [2, 2], ["3/2", "3/2"]]},
                },
                "tasks": [
                    {"op": "minimal_scan", "function": "f", "space": "grid"},
                    {
                        "op": "solution",
                        "function": "f",
                        "M": [[1, 1], [1, 2], [2, 1], [2, 2]],
                        "space": "square",
                    },
                ],
            },
            name,
        )
    if name == "heyde_b":
        return Scenario.from_json(
            {
                "name": name,
                "functions": {"f": {"variant": "builtin", "name": "heyde_b"}},
                "spaces": {"grid": {"points": [[0], ["1/4"], ["1/2"], ["3/4"], [1]]}},
                "tasks": [{"op": "minimal_scan", "function": "f", "space": "grid"}],
            },
            name,
        )
    if name == "circle":
        return Scenario.from_json(
            {
                "name": name,
                "functions": {"f": {"variant": "builtin", "name": "circle"}},
                "spaces": {},
                "tasks": [
                    {"op": "derivative", "function": "f", "x": [0], "u": [1]},
                    {"op": "regularity", "function": "f", "x": [0], "u": [1]},
                ],
            },
            name,
        )
    if name == "infdir_example":
        scn = Scenario.from_json(
            {
                "name": name,
                "workspace": {
                    "dim": 2,
                    "cone": [[1, 0], [0, 1]],
                    "directions": [[-1, 0], [0, -1]],
                },
                "functions": {"psi": {"variant": "builtin", "name": "infdir_example"}},
                "spaces": {},
                "tasks": [
                    {"op": "vector_dini", "function": "psi", "base": [0], "direction": [1]},
                    {"op": "infdir_plus_cone", "direction": [0, -1]},
                    {"op": "infdir_plus_cone", "direction": [1, 1]},
                    {"op": "infdir_plus_cone", "direction": [0, 0]},
                    {"op": "noncommutation", "count": 6},
                ],
            },
            name,
        )
        return scn
    if name == "no_solution_line":
        return Scenario.from_json(
            {
                "name": name,
                "functions": {"f": {"variant": "builtin", "name": "no_solution_line"}},
                "spaces": {
                    "grid": {"points": [[0], [1], [2], [3], [4], [5]]},
                    "probe": {"points": [[0], [1], [2], [3], [4], [5], [6]]},
                    "tail": {"points": [[4], [5]]},
                },
                "tasks": [
                    {
                        "op": "infimizer",
                        "function": "f",
                        "M": [[0], [1], [2], [3], [4], [5]],
                        "space": "grid",
                    },
                    {"op": "infimizer", "function": "f", "M": [[4], [5]], "space": "grid"},
                    {"op": "infimizer", "function": "f", "M": [[0], [1], [2]], "space": "grid"},
                    {
                        "op": "minimal_scan",
                        "function": "f",
                        "space": "grid",
                        "probe_space": "probe",
                    },
                    {
                        "op": "solution",
                        "function": "f",
                        "M": [[4], [5]],
                        "space": "probe",
                    },
                ],
            },
            name,
        )
    raise ValidationError(f"unknown builtin scenario {name!r}")


def load_scenario(path_or_name: str) -> Scenario:
    if path_or_name.startswith("builtin:"):
        return builtin_scenario(path_or_name.split(":", 1)[1])
    try:
        with open(path_or_name, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read scenario: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed scenario JSON: {exc}") from exc
    return Scenario.from_json(doc, path_or_name)
