"""Input files, cached tiling enumeration, the aggregate report and its figures."""

import hashlib
import json
import os
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import cover, degeneration, gf2core as gf, invariants, polytope, stability

SCHEMA = "arrangement/1"
CACHE_ENV = "PERSSON_MODULI_CACHE"
BUILTINS = {"persson-generic": "data/persson-generic.json"}


class InputError(ValueError):
    pass


# parsing ------------------------------------------------------------------


def _rational(x, where):
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"{where}: floating point value {x!r} (use an exact rational string)")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        raise InputError(f"{where}: expected a rational string")
    try:
        if any(c in x for c in ".eE"):
            raise ValueError
        return Fraction(x)
    except ValueError:
        raise InputError(f"{where}: {x!r} is not an exact rational") from None


def _weight(x, where):
    if isinstance(x, float):
        raise InputError(f"{where}: floating point value {x!r} (use an exact rational string)")
    try:
        if isinstance(x, str) and any(c in x.replace("eps", "") for c in ".eE"):
            raise ValueError
        return stability.parse_weight_value(x)
    except ValueError:
        raise InputError(f"{where}: {x!r} is not an exact rational weight") from None


def load_json(source):
    if source in BUILTINS:
        text = resources.files("persson_moduli").joinpath(BUILTINS[source]).read_text()
        return json.loads(text)
    try:
        with open(source) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"{source}: no such file") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON at line {exc.lineno} column {exc.colno}") from None


def parse_arrangement(source):
    """Arrangement and (if labels are given) branch data from a file or a
    builtin name.  Weights default to 1/2."""
    obj = load_json(source) if isinstance(source, str) else source
    if obj.get("schema") != SCHEMA:
        raise InputError(f"schema: expected {SCHEMA!r}, got {obj.get('schema')!r}")
    entries = obj.get("lines")
    if not isinstance(entries, list) or not entries:
        raise InputError("lines: expected a nonempty list")
    triples, labels = [], []
    for k, e in enumerate(entries):
        coeffs = e.get("coeffs")
        if coeffs is None or len(coeffs) != 3:
            raise InputError(f"lines[{k}].coeffs: expected three rational strings")
        t = [_rational(x, f"lines[{k}].coeffs[{j}]") for j, x in enumerate(coeffs)]
        if not any(t):
            raise InputError(f"lines[{k}].coeffs: zero triple")
        mult = e.get("mult", 1)
        if not isinstance(mult, int) or mult < 1:
            raise InputError(f"lines[{k}].mult: expected a positive integer")
        triples += [t] * mult
        if "label" in e:
            labels += [e["label"]] * mult
    if "labels" in obj:
        labels = list(obj["labels"])
    arr = stability.incidence_from_lines(triples)
    if obj.get("points") is not None:
        try:
            arr = stability.WeightedArrangement(
                arr.lines, [(p.get("id", k + 1), tuple(p["lines"])) for k, p in enumerate(obj["points"])],
                {}, arr.coords)
        except (KeyError, ValueError) as exc:
            raise InputError(f"points: {exc}") from None
    w = obj.get("weights", "1/2")
    n_lines = len(arr.lines)
    if isinstance(w, list):
        if len(w) != len(triples):
            raise InputError(f"weights: {len(w)} weights for {len(triples)} lines")
        ws = [_weight(x, f"weights[{k}]") for k, x in enumerate(w)]
        # proportional lines share one id; keep the weight of the first copy
        per_id = {}
        ids = _line_ids(triples)
        for i, x in zip(ids, ws):
            per_id.setdefault(i, x)
        weights = per_id
    else:
        x = _weight(w, "weights")
        weights = {i: x for i, _ in arr.lines}
    for k, x in weights.items():
        if not 0 < x <= 1:
            raise InputError(f"weights: {x} outside (0, 1]")
    arr = arr.with_weights(weights) if len(weights) == n_lines else arr
    branch = None
    if labels:
        if len(labels) != len(triples):
            raise InputError(f"labels: {len(labels)} labels for {len(triples)} lines")
        try:
            branch = cover.BranchData.from_labels(labels)
        except ValueError as exc:
            raise InputError(f"labels: {exc}") from None
    return arr, branch


def _line_ids(triples):
    seen, out = {}, []
    for t in triples:
        key = stability._normalize(t)
        seen.setdefault(key, len(seen) + 1)
        out.append(seen[key])
    return out


def building_data(source):
    _, branch = parse_arrangement(source)
    if branch is None:
        raise InputError("the input carries no labels")
    try:
        return cover.solve_line_bundles(branch)
    except cover.HalfIntegralDegree as exc:
        raise InputError(str(exc)) from None


# tiling cache -------------------------------------------------------------


def cache_dir():
    root = os.environ.get(CACHE_ENV)
    return Path(root) if root else Path.home() / ".cache" / "persson-moduli"


def _cache_key(d, n, b):
    text = f"{d}|{n}|{','.join(str(x) for x in b)}"
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def tiling_class_to_json(c):
    return {"tiling": c.tiling.to_json(), "orbitSize": c.orbit_size,
            "verified": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in c.verified.items()}}


def tiling_class_from_json(obj):
    verified = {}
    for k, v in obj["verified"].items():
        verified[k] = Fraction(v) if isinstance(v, str) else v
    return polytope.TilingClass(polytope.Tiling.from_json(obj["tiling"]), obj["orbitSize"], verified)


def tilings(d, n, b, use_cache=True):
    b = polytope.parse_weight(b, n)
    path = cache_dir() / f"tilings-{_cache_key(d, n, b)}.json"
    if use_cache and path.exists():
        obj = json.loads(path.read_text())
        return [tiling_class_from_json(c) for c in obj["classes"]]
    classes = polytope.enumerate_tilings(d, n, b)
    if use_cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            body = {"d": d, "n": n, "b": [str(x) for x in b],
                    "classes": [tiling_class_to_json(c) for c in classes]}
            path.write_text(json.dumps(body, sort_keys=True, indent=2))
        except OSError:
            pass
    return classes


# aggregate report ---------------------------------------------------------


def _is_persson_like(branch):
    labels = sorted(ln.label for ln in branch.lines)
    return branch.m == 4 and labels == sorted(gf.persson_labels())


def group_counts(labels):
    labels = sorted(gf.vec(g) for g in labels)
    group = gf.stabilizer_of_label_set(labels)
    facts = gf.verify_affine_structure(group, labels)
    parts = gf.partitions_into_parallel_pairs(labels)
    stab = gf.stabilizer_of_partition(parts[0], group)
    return {
        "stabilizerOrder": group.order,
        "affineStructure": facts["ok"],
        "pairPartitions": len(parts),
        "partitionStabilizerOrder": stab["order"],
        "partitionStabilizerStructure": stab["tag"],
        "orbitStabilizer": group.order == stab["order"] * len(parts),
        "liftCount": gf.label_lift_count(labels),
        "torelliIndex": gf.torelli_index(labels, group=group),
    }


def eigen_json(data):
    dec = invariants.eigen_decomposition(data)
    return {gf.bitstring(chi): t.as_list() for chi, t in sorted(dec.items())}


def run_report(source, with_tilings=False):
    arr, branch = parse_arrangement(source)
    out = {"schema": "report/1"}
    if branch is not None:
        data = cover.solve_line_bundles(branch)
        out["buildingData"] = data.to_json()
        out["invariants"] = invariants.cover_invariants(data).to_json()
        out["eigen"] = eigen_json(data)
        out["intermediates"] = cover.intermediate_census(data)
    lc = stability.is_log_canonical(arr)
    git = stability.is_git_semistable(arr)
    out["stability"] = {"logCanonical": lc.to_json(), "git": git.to_json()}
    if with_tilings:
        classes = tilings(3, 8, "1/2")
        out["tilings"] = []
        for c in classes:
            dt = degeneration.classify_tiling(c.tiling)
            out["tilings"].append({"orbitSize": c.orbit_size, "tiling": c.tiling.to_json(),
                                   "degeneration": dt.to_json(),
                                   "components": degeneration.component_cover_profile(dt)})
    if branch is not None and _is_persson_like(branch):
        out["groups"] = group_counts([ln.label for ln in branch.lines])
    return out


def stability_violated(report):
    st = report["stability"]
    return st["logCanonical"]["verdict"] != stability.LC or st["git"]["verdict"] == stability.UNSTABLE


# figures ------------------------------------------------------------------


def render_figures(report, prefix):
    """Bar charts of the eigenspace Hodge triples and the intermediate census.

    Returns the list of files written.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []
    if "eigen" in report:
        chars = list(report["eigen"])
        triples = [report["eigen"][c] for c in chars]
        fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(chars)), 3.5))
        xs = range(len(chars))
        width = 0.28
        for k, name in enumerate(["h20", "h11", "h02"]):
            ax.bar([x + (k - 1) * width for x in xs], [t[k] for t in triples], width, label=name)
        ax.set_xticks(list(xs))
        ax.set_xticklabels(chars, rotation=90, fontsize=7)
        ax.set_ylabel("dimension")
        ax.set_title("Hodge numbers per character eigenspace")
        ax.legend()
        fig.tight_layout()
        path = f"{prefix}-eigen.png"
        fig.savefig(path, dpi=120, metadata={"Software": None})
        plt.close(fig)
        written.append(path)
    if report.get("intermediates"):
        kinds = sorted(k for k in report["intermediates"] if ":" not in k)
        fig, ax = plt.subplots(figsize=(6, 3.5))
        ax.bar(kinds, [report["intermediates"][k] for k in kinds], color="tab:gray")
        ax.set_ylabel("count")
        ax.set_title("Intermediate quotient surfaces")
        ax.tick_params(axis="x", labelrotation=30, labelsize=8)
        fig.tight_layout()
        path = f"{prefix}-census.png"
        fig.savefig(path, dpi=120, metadata={"Software": None})
        plt.close(fig)
        written.append(path)
    return written
