"""Batch front end: JSON config in, JSON report out.

Config schema ``hurwitz-fuchs/config/1``::

    {"schema": "hurwitz-fuchs/config/1",
     "name": str,
     "covering": {"kind": "hyperelliptic", "branch_values": [z, ...], "sign_choices": [...]}
               | {"kind": "rational", "numerator": [z, ...], "denominator": [z, ...]}
               | {"kind": "clebsch", "g": int, "d": int}
               | {"kind": "polynomial", "d": int}
               | {"kind": "permutation", "d": int, "transpositions": [[a, b], ...],
                  "infinity_type": [k, ...]}
               | {"kind": "none"},
     "basis": "standard" | "appendixA" | "lasso",
     "tolerance": float,
     "seed": int,
     "tasks": [{"name": task, ...params}, ...]}

Complex numbers are written as numbers or [re, im] pairs.  See docs/anchors.json
for the anchor identifiers that label every claim of a report.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from . import relhom
from .covering import (CoveringError, clebsch_transpositions, new_hyperelliptic,
                       new_permutation, new_rational, polynomial_transpositions)

CONFIG_SCHEMA = "hurwitz-fuchs/config/1"
REPORT_SCHEMA = "hurwitz-fuchs/report/1"

TASKS = ("verify_phi", "det", "monodromy", "compare", "schlesinger", "qladder",
         "isomonodromy", "orbit", "hurwitz", "braid_genus1", "degeneration")
ANALYTIC = {"verify_phi", "det", "compare", "schlesinger", "qladder", "isomonodromy"}
EXACT = {"monodromy"}
FAMILY = {"isomonodromy", "schlesinger"}

GOLDEN_GRID = [(0, 2), (1, 2), (2, 2), (0, 3), (1, 3), (2, 3), (0, 4), (1, 4)]
GOLDEN_POLY = [2, 3, 4, 5]


class ConfigError(ValueError):
    pass


# -- config ------------------------------------------------------------------------

def _cplx(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ConfigError(f"complex number must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    raise ConfigError(f"not a number: {x!r}")


def _clist(xs, what: str) -> list[complex]:
    if not isinstance(xs, list) or not xs:
        raise ConfigError(f"{what} must be a non-empty list")
    return [_cplx(x) for x in xs]


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


@dataclass
class TaskSpec:
    name: str
    params: dict = field(default_factory=dict)


@dataclass
class RunConfig:
    name: str
    covering: dict
    basis: str = "standard"
    tolerance: float = 1e-10
    seed: int = 0
    tasks: list[TaskSpec] = field(default_factory=list)
    source: str = ""


def parse_config(raw: dict, source: str = "") -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    if raw.get("schema") != CONFIG_SCHEMA:
        raise ConfigError(f"schema must be {CONFIG_SCHEMA!r}")
    cov = raw.get("covering")
    if not isinstance(cov, dict) or "kind" not in cov:
        raise ConfigError("covering block with a 'kind' is required")
    basis = raw.get("basis", "standard")
    if basis not in ("standard", "appendixA", "lasso"):
        raise ConfigError(f"unknown basis flavor {basis!r}")
    tol = raw.get("tolerance", 1e-10)
    if not isinstance(tol, (int, float)) or not 0 < tol < 1e-3:
        raise ConfigError("tolerance must be a float in (0, 1e-3)")
    tasks = []
    for t in raw.get("tasks", []):
        if not isinstance(t, dict) or t.get("name") not in TASKS:
            raise ConfigError(f"bad task entry {t!r}")
        params = {k: v for k, v in t.items() if k != "name"}
        tasks.append(TaskSpec(t["name"], params))
    cfg = RunConfig(str(raw.get("name", "unnamed")), cov, basis, float(tol),
                    int(raw.get("seed", 0)), tasks, source)
    build_covering(cfg.covering)  # validates
    return cfg


def build_covering(block: dict):
    """Covering object from a config block (None for kind 'none')."""
    kind = block.get("kind")
    try:
        if kind == "hyperelliptic":
            vals = _clist(block.get("branch_values"), "branch_values")
            return new_hyperelliptic(vals, block.get("sign_choices"))
        if kind == "rational":
            num = _clist(block.get("numerator"), "numerator")
            den = _clist(block.get("denominator", [1]), "denominator")
            return new_rational(num, den, block.get("sign_choices"))
        if kind == "clebsch":
            g, d = int(block["g"]), int(block["d"])
            return new_permutation(d, clebsch_transpositions(g, d), (1,) * d)
        if kind == "polynomial":
            d = int(block["d"])
            return new_permutation(d, polynomial_transpositions(d), (d,))
        if kind == "permutation":
            return new_permutation(int(block["d"]), [tuple(t) for t in block["transpositions"]],
                                   tuple(block["infinity_type"]))
        if kind == "none":
            return None
    except (CoveringError, KeyError, TypeError) as exc:
        raise ConfigError(f"invalid covering block: {exc}") from exc
    raise ConfigError(f"unknown covering kind {kind!r}")


def load_config(path: str) -> RunConfig:
    p = Path(path)
    if not p.exists():
        bundled = resources.files("hurwitz_fuchs") / "configs" / path
        if not bundled.is_file():
            raise ConfigError(f"config {path!r} not found")
        text, src = bundled.read_text(), f"bundled:{path}"
    else:
        text, src = p.read_text(), str(p)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(raw, src)


def bundled_configs() -> list[str]:
    root = resources.files("hurwitz_fuchs") / "configs"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".cfg"))


# -- task results -------------------------------------------------------------------

@dataclass
class Claim:
    anchor: str
    quantity: str
    value: object
    bound: object
    ok: bool


@dataclass
class TaskResult:
    name: str
    status: str  # pass | fail | inconclusive
    claims: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    error: str | None = None
    wall: float = 0.0


def _claim(out: list, anchor: str, quantity: str, value, bound, ok: bool):
    out.append(Claim(anchor, quantity, value, bound, bool(ok)))


def _close(claims: list) -> tuple[str, list]:
    failed = [c.anchor + ":" + c.quantity for c in claims if not c.ok]
    return ("fail" if failed else "pass"), failed


def _points(params, default) -> list[complex]:
    pts = params.get("points")
    return default if pts is None else _clist(pts, "points")


def _grid(cov, n: int = 10) -> list[complex]:
    """Generic points reachable from the base point, above the branch values."""
    v = np.asarray(cov.branch_values)
    lo, hi = float(v.real.min()), float(v.real.max())
    width = max(hi - lo, 1.0)
    top = float(v.imag.max())
    return [complex(lo + width * (0.1 + 0.8 * k / max(n - 1, 1)), top + 0.3 * width + 0.05 * k)
            for k in range(n)]


def _matrix(m) -> list:
    return np.asarray(m).astype(np.int64).tolist()


def _cmatrix(m) -> list:
    return [[_pair(complex(z)) for z in row] for row in np.asarray(m)]


# -- tasks --------------------------------------------------------------------------

def _engine(cfg: RunConfig, cov, tol):
    from .fuchsian import PhiEngine, system_for
    eng = PhiEngine(cov, tol=tol)
    return eng, system_for(cov, eng.data)


def _basis(cfg: RunConfig, shadow):
    return relhom.build_basis(shadow, cfg.basis)


def task_verify_phi(cfg, cov, params, tol):
    from .fuchsian import degree_two_phi, residual
    eng, system = _engine(cfg, cov, tol)
    basis = _basis(cfg, eng.shadow)
    pts = _points(params, _grid(cov))
    bound = float(params.get("bound", 1e-8))
    res = [residual(system, eng, z, basis) for z in pts]
    claims = []
    _claim(claims, "fuchsian_residual", "max ||Phi' - A Phi|| / ||Phi||", max(res), bound,
           max(res) <= bound)
    data = {"points": [_pair(z) for z in pts], "residuals": res}
    if params.get("closed_form"):
        cf_bound = float(params.get("closed_form_bound", 1e-10))
        errs = []
        for z in pts:
            y = cov.fiber(z)[0].value
            errs.append(float(np.max(np.abs(eng.phi(z, basis) - degree_two_phi(cov.branch_values, z, y)))))
        _claim(claims, "degree_two_closed_form", "max |Phi - closed form|", max(errs), cf_bound,
               max(errs) <= cf_bound)
        data["closed_form_errors"] = errs
    return claims, data


def task_det(cfg, cov, params, tol):
    from .fuchsian import det_check, det_stability
    eng, system = _engine(cfg, cov, tol)
    basis = _basis(cfg, eng.shadow)
    pts = _points(params, _grid(cov))
    rep = det_check(system, eng, basis, pts)
    claims = []
    cv_max = float(params.get("cv_max", 1e-7))
    _claim(claims, "det_constant", "coefficient of variation of C", rep.cv, cv_max, rep.cv <= cv_max)
    _claim(claims, "det_constant", "|C| > 0", rep.abs_mean, 0.0, rep.abs_mean > 0)
    data = {"C": _pair(rep.mean), "abs_C": rep.abs_mean, "constants": [_pair(c) for c in rep.constants]}
    if "expected_abs_C" in params:
        exp = float(params["expected_abs_C"])
        rel = abs(rep.abs_mean - exp) / exp
        rtol = float(params.get("rel_tol", 1e-9))
        _claim(claims, params.get("expected_anchor", "det_value"), "rel error of |C|", rel, rtol,
               rel <= rtol)
    if params.get("perturb"):
        st = det_stability(cov, pts, float(params["perturb"]), cfg.basis, tol)
        bound = float(params.get("stability_bound", 1e-5))
        _claim(claims, "det_constant", "max rel change of C under lam_j shifts",
               st["max_rel_change"], bound, st["max_rel_change"] <= bound)
        data["rel_changes"] = st["rel_changes"]
    return claims, data


def _golden_tuple(shadow) -> tuple[str, dict] | None:
    root = resources.files("hurwitz_fuchs") / "goldens"
    key = golden_key(shadow.genus, shadow.d, shadow.infinity_type)
    folder = root / key
    if not folder.is_dir():
        return None
    return key, {p.name: json.loads(p.read_text()) for p in folder.iterdir() if p.name.endswith(".json")}


def task_monodromy(cfg, cov, params, tol):
    shadow = cov if isinstance(cov, relhom.PermutationCovering) else cov.permutation_shadow()
    flavor = params.get("flavor", "appendixA" if relhom.clebsch_shape(shadow) else cfg.basis)
    basis = relhom.build_basis(shadow, flavor)
    tup = relhom.monodromy_tuple(shadow, basis)
    claims = []
    try:
        relhom.verify_tuple(tup, list(shadow.transpositions) if basis.top_size else None)
        _claim(claims, "monodromy_relations", "product, involution, det -1, block form", True, True, True)
    except relhom.TupleVerificationError as exc:
        _claim(claims, "monodromy_relations", str(exc), False, True, False)
    t = basis.top_size
    mi = np.asarray(tup.infinity)
    if t and flavor == "appendixA" and shadow.infinity_type == (1,) * shadow.d:
        n = shadow.d - 1
        ok = bool(np.array_equal(mi[t - n:t, t:], relhom.cartan_matrix(n)))
        _claim(claims, "minf_cartan_block", "lower block of S_inf is the A_{d-1} Cartan matrix",
               ok, True, ok)
    data = {"basis": list(basis.names), "flavor": flavor,
            "matrices": {f"M_{k}": _matrix(m) for k, m in enumerate(tup.finite, 1)},
            "M_inf": _matrix(mi)}
    if flavor == "appendixA" and params.get("goldens", True):
        found = _golden_tuple(shadow)
        if found is None:
            _claim(claims, "appendix_goldens", "golden files present", False, True, False)
        else:
            key, files = found
            mism = []
            for k, m in list(enumerate(tup.finite, 1)) + [("inf", mi)]:
                gold = files.get(f"M_{k}.json")
                if gold is None or gold["matrix"] != _matrix(m):
                    mism.append(str(k))
            _claim(claims, "appendix_goldens", f"exact match with goldens/{key}", mism or "all",
                   "all", not mism)
    if params.get("group_probe"):
        rep = relhom.group_probe(tup, int(params.get("word_length_cap", 12)))
        _claim(claims, "group_structure", "full-rank lattice spanned by the root lattice",
               rep.status, "ok", rep.full_rank and rep.spans_root_lattice and rep.symmetric_group)
        data["group"] = {k: (v if not isinstance(v, np.generic) else v.item())
                         for k, v in asdict(rep).items() if k != "root_rows"}
    return claims, data


def task_compare(cfg, cov, params, tol):
    from .fuchsian import compare_monodromy
    eng, system = _engine(cfg, cov, tol)
    flavor = params.get("flavor", cfg.basis)
    out = compare_monodromy(system, eng, flavor)
    bound = float(params.get("bound", 1e-4))
    claims = []
    worst = max(v["residual"] for v in out.values())
    _claim(claims, "numeric_monodromy", "max distance to integers", worst, bound, worst <= bound)
    bad = [str(k) for k, v in out.items() if not v["match"]]
    _claim(claims, "numeric_monodromy", "R^-1 M R equals exact matrices", bad or "all", "all", not bad)
    data = {"flavor": flavor,
            "matrices": {str(k): _matrix(v["numeric"]) for k, v in out.items()},
            "residuals": {str(k): v["residual"] for k, v in out.items()}}
    return claims, data


def task_schlesinger(cfg, cov, params, tol):
    from .fuchsian import schlesinger_check
    blocks = params.get("blocks", [[0, -1], [1, 0]])
    pts = _points(params, _grid(cov, 4))
    full = np.array(blocks, dtype=np.int64)
    g = full.shape[0] // 2
    if full.shape != (2 * g, 2 * g) or g != cov.genus:
        raise ConfigError("blocks must be a 2g x 2g integer matrix [[A, B], [C, D]]")
    parts = (full[:g, :g], full[:g, g:], full[g:, :g], full[g:, g:])
    rep = schlesinger_check(cov, parts, pts, tol=min(tol, 1e-12))
    bound = float(params.get("bound", 1e-8))
    claims = []
    _claim(claims, "schlesinger_transform", "max |Phi_hat - Y(1-T)Phi R|", rep.max_error, bound,
           rep.max_error <= bound)
    _claim(claims, "schlesinger_T", "max |T^2|", rep.T_sq, 1e-12, rep.T_sq <= 1e-12)
    _claim(claims, "schlesinger_T", "max |(1-T)(1+T) - I|", rep.inverse_error, 1e-12,
           rep.inverse_error <= 1e-12)
    _claim(claims, "schlesinger_monodromy", "monodromies unchanged", rep.monodromy_equal, True,
           rep.monodromy_equal)
    return claims, {"blocks": blocks}


def task_qladder(cfg, cov, params, tol):
    from .fuchsian import PhiEngine, q_ladder
    eng = PhiEngine(cov, tol=tol)
    basis = _basis(cfg, eng.shadow)
    pts = _points(params, _grid(cov, 3))
    bound = float(params.get("bound", 1e-6))
    claims, data = [], {}
    for level in params.get("levels", [-1.5, -2.5]):
        errs = [q_ladder(eng, z, float(level), basis).derivative_rel for z in pts]
        _claim(claims, "q_ladder", f"rel err of d/dlam at q={level}", max(errs), bound, max(errs) <= bound)
        data[str(level)] = errs
    return claims, data


def task_isomonodromy(cfg, cov, params, tol):
    from .fuchsian import isomonodromy_check
    pts = _points(params, _grid(cov, 2))
    bound = float(params.get("bound", 1e-4))
    step = float(params.get("step", 1e-5))
    claims, data = [], {"main": [], "unit": [], "euler": []}
    for z in pts:
        rep = isomonodromy_check(cov, z, params.get("k"), step, min(tol, 1e-13))
        data["main"].append(rep.maineq_rel)
        data["unit"].append(rep.uniteq_abs)
        data["euler"].append(rep.eulereq_rel)
    for key, anchor in (("main", "isomonodromy_main"), ("unit", "isomonodromy_unit"),
                        ("euler", "isomonodromy_euler")):
        _claim(claims, anchor, f"max finite-difference residual ({key})", max(data[key]), bound,
               max(data[key]) <= bound)
    return claims, data


def task_orbit(cfg, cov, params, tol):
    g, d = int(params["g"]), int(params["d"])
    prof = tuple(params.get("profile", [1] * d))
    t0 = time.perf_counter()
    n = relhom.braid_orbit_count(g, d, prof)
    claims = []
    if "expected" in params:
        _claim(claims, "hurwitz_number", "braid orbit class count", n, int(params["expected"]),
               n == int(params["expected"]))
    _claim(claims, "orbit_runtime", "seconds", time.perf_counter() - t0, 10.0,
           time.perf_counter() - t0 < 10.0)
    return claims, {"count": n}


def task_hurwitz(cfg, cov, params, tol):
    g, d = int(params["g"]), int(params["d"])
    prof = tuple(params.get("profile", [1] * d))
    brute = relhom.hurwitz_count(g, d, prof)
    orbit = relhom.braid_orbit_count(g, d, prof)
    claims = []
    _claim(claims, "hurwitz_number", "brute-force count equals braid orbit count", [brute, orbit],
           "equal", brute == orbit)
    if "expected" in params:
        _claim(claims, "hurwitz_number", "count", brute, int(params["expected"]),
               brute == int(params["expected"]))
    return claims, {"brute_force": brute, "orbits": orbit}


def task_braid_genus1(cfg, cov, params, tol):
    mats = relhom.genus1_braid_generators()
    claims = []
    s1, s3 = mats["sigma1"], mats["sigma3"]
    _claim(claims, "genus1_braid", "M_sigma1 M_sigma3 = M_sigma3 M_sigma1",
           bool(np.array_equal(s1 @ s3, s3 @ s1)), True, np.array_equal(s1 @ s3, s3 @ s1))
    inv = all(np.array_equal(m[:, 1], np.eye(4, dtype=np.int64)[:, 1]) for m in mats.values())
    _claim(claims, "genus1_braid", "l1 column invariant", inv, True, inv)
    for name, exp in params.get("expected", {}).items():
        ok = name in mats and _matrix(mats[name]) == exp
        _claim(claims, "genus1_braid", f"M_{name} equals expected", ok, True, ok)
    return claims, {"basis": list(relhom.GENUS1_WORDS), "matrices": {k: _matrix(v) for k, v in mats.items()}}


def task_degeneration(cfg, cov, params, tol):
    from .periods import degeneration_check
    lower = _clist(params["values_lower"], "values_lower")
    lam0 = _cplx(params["lam0"])
    seps = tuple(params.get("separations", [1e-1, 1e-2, 1e-3]))
    rep = degeneration_check(lower, lam0, seps, tol=min(tol, 1e-11))
    bound = float(params.get("bound", 0.05))
    mono = rep.monotone()
    claims = []
    for key, errs in rep.errors.items():
        _claim(claims, f"degeneration_{key}", "|ratio - 1| at smallest separation", errs[-1], bound,
               errs[-1] <= bound)
        _claim(claims, f"degeneration_{key}", "monotone improvement", mono[key], True, mono[key])
    data = {"separations": list(seps),
            "ratios": {k: [_pair(complex(r)) for r in v] for k, v in rep.ratios.items()}}
    return claims, data


HANDLERS = {
    "verify_phi": task_verify_phi, "det": task_det, "monodromy": task_monodromy,
    "compare": task_compare, "schlesinger": task_schlesinger, "qladder": task_qladder,
    "isomonodromy": task_isomonodromy, "orbit": task_orbit, "hurwitz": task_hurwitz,
    "braid_genus1": task_braid_genus1, "degeneration": task_degeneration,
}


def check_task_fits(cfg: RunConfig, task: TaskSpec):
    kind = cfg.covering["kind"]
    if task.name in ANALYTIC and kind not in ("hyperelliptic", "rational"):
        raise ConfigError(f"task {task.name} needs an analytic covering, not {kind!r}")
    if task.name in FAMILY and kind != "hyperelliptic":
        raise ConfigError(f"task {task.name} needs the hyperelliptic family")
    if task.name in EXACT and kind == "none":
        raise ConfigError(f"task {task.name} needs a covering")


def run_task(cfg: RunConfig, task: TaskSpec, tol: float) -> TaskResult:
    t0 = time.perf_counter()
    cov = build_covering(cfg.covering)
    np.random.seed(cfg.seed)
    try:
        claims, data = HANDLERS[task.name](cfg, cov, task.params, tol)
        status, failed = _close(claims)
        res = TaskResult(task.name, status, claims, data, failed)
    except Exception as exc:  # a crashing task is a failed task
        res = TaskResult(task.name, "inconclusive", [], {}, [f"{task.name}:exception"],
                         f"{type(exc).__name__}: {exc}")
    res.wall = time.perf_counter() - t0
    return res


# -- report ------------------------------------------------------------------------

def conventions(cfg: RunConfig) -> dict:
    cov = build_covering(cfg.covering)
    out = {"basis": cfg.basis, "covering_kind": cfg.covering["kind"]}
    if cov is None or isinstance(cov, relhom.PermutationCovering):
        if cov is not None:
            out["transpositions"] = [list(t) for t in cov.transpositions]
        return out
    geo = cov.geometry
    out.update({
        "branch_values": [_pair(complex(z)) for z in cov.branch_values],
        "sign_choices": [int(s) for s in cov.sign_choices],
        "base_point": _pair(complex(geo.base)),
        "loop_radius": float(geo.radius),
        "base_fiber": [_pair(p.value) for p in cov.base_fiber()],
        "transpositions": [list(t) for t in cov.permutation_shadow().transpositions],
    })
    return out


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return _pair(o)
    raise TypeError(type(o))


def write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def run(config_path: str, out: str | None = None, tol_scale: float = 1.0, jobs: int = 1,
        tasks: list[str] | None = None, stream=sys.stdout) -> int:
    t0 = time.perf_counter()
    try:
        cfg = load_config(config_path)
        todo = cfg.tasks
        if tasks:
            bad = [t for t in tasks if t not in TASKS]
            if bad:
                raise ConfigError(f"unknown task(s) {bad}")
            known = {t.name: t for t in cfg.tasks}
            todo = [known.get(t, TaskSpec(t)) for t in tasks]
        for t in todo:
            check_task_fits(cfg, t)
        conv = conventions(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    tol = cfg.tolerance * tol_scale
    if jobs > 1 and len(todo) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_task, [cfg] * len(todo), todo, [tol] * len(todo)))
    else:
        results = [run_task(cfg, t, tol) for t in todo]
    ok = all(r.status == "pass" for r in results)
    report = {
        "schema": REPORT_SCHEMA, "version": __version__, "config": cfg.name, "source": cfg.source,
        "tolerance": tol, "conventions": conv, "status": "pass" if ok else "fail",
        "tasks": [asdict(r) for r in results], "wall": time.perf_counter() - t0,
    }
    out_path = Path(out) if out else Path(f"{cfg.name}.report.json")
    write_atomic(out_path, json.dumps(report, indent=1, sort_keys=True, default=_json_default) + "\n")
    print_table(cfg.name, results, stream)
    return 0 if ok else 1


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3e}"
    s = json.dumps(v, default=_json_default)
    return s if len(s) <= 28 else s[:25] + "..."


def print_table(name: str, results: list[TaskResult], stream=sys.stdout):
    print(f"== {name}", file=stream)
    for r in results:
        print(f"{r.name:<14} {r.status:<12} {r.wall:8.2f}s", file=stream)
        for c in r.claims:
            mark = "ok " if c.ok else "BAD"
            print(f"    {mark} {c.anchor:<26} {c.quantity:<48} {_fmt(c.value):>28} (bound {_fmt(c.bound)})",
                  file=stream)
        if r.error:
            print(f"    error: {r.error}", file=stream)


# -- goldens -----------------------------------------------------------------------

def golden_key(g: int, d: int, profile) -> str:
    return f"{g}_{d}_{'-'.join(str(k) for k in profile)}"


def _golden_files(tup: relhom.MonodromyTuple, basis, g, d, profile) -> dict[str, str]:
    files = {}
    t = basis.top_size
    for k, m in list(enumerate(tup.finite, 1)) + [("inf", tup.infinity)]:
        m = np.asarray(m)
        body = {"g": g, "d": d, "profile": list(profile), "k": k, "basis": list(basis.names),
                "matrix": _matrix(m), "S": _matrix(m[:t, t:]), "Sigma": _matrix(m[t:, t:])}
        files[f"M_{k}.json"] = json.dumps(body, sort_keys=True) + "\n"
    return files


def emit_goldens(out_dir: str | os.PathLike) -> list[Path]:
    """Write the exact normal-form matrices for the supported (g, d) grid."""
    root = Path(out_dir)
    written = []
    jobs = [(g, d, (1,) * d, clebsch_transpositions(g, d)) for g, d in GOLDEN_GRID]
    jobs += [(0, d, (d,), polynomial_transpositions(d)) for d in GOLDEN_POLY]
    for g, d, prof, trans in jobs:
        cov = new_permutation(d, trans, prof)
        basis = relhom.build_basis(cov, "appendixA")
        tup = relhom.monodromy_tuple(cov, basis)
        relhom.verify_tuple(tup, trans)
        folder = root / golden_key(g, d, prof)
        folder.mkdir(parents=True, exist_ok=True)
        for name, text in _golden_files(tup, basis, g, d, prof).items():
            path = folder / name
            if not path.exists() or path.read_text() != text:
                write_atomic(path, text)
            written.append(path)
    return written


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hurwitz-fuchs",
                                description="Run verification tasks described by a JSON config.")
    p.add_argument("--config", help="config file, or the name of a bundled config")
    p.add_argument("--out", help="report path (default: <name>.report.json)")
    p.add_argument("--tol-scale", type=float, default=1.0, help="multiply the quadrature tolerance")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent tasks")
    p.add_argument("--task", action="append", choices=TASKS, help="run only these tasks (repeatable)")
    p.add_argument("--emit-goldens", metavar="DIR", help="write golden matrices to DIR and exit")
    p.add_argument("--list-configs", action="store_true", help="list bundled configs and exit")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_configs:
        print("\n".join(bundled_configs()))
        return 0
    if args.emit_goldens:
        paths = emit_goldens(args.emit_goldens)
        print(f"wrote {len(paths)} golden files under {args.emit_goldens}")
        return 0
    if not args.config:
        print("config error: --config is required", file=sys.stderr)
        return 2
    if args.tol_scale <= 0 or args.jobs < 1:
        print("config error: --tol-scale must be positive and --jobs at least 1", file=sys.stderr)
        return 2
    return run(args.config, args.out, args.tol_scale, args.jobs, args.task)


if __name__ == "__main__":
    sys.exit(main())
