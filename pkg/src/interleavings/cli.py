"""Command-line front end.

Exit codes: 0 ok, 1 parse error, 2 infinite distance (cap hit),
3 reproduction failure, 4 audit or stability violation.
"""
from __future__ import annotations

import argparse
import csv
import math
import random
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import InterleavingsError, ParseError
from .interleave import (FLOW, MULT, direction_family, distance_bisect,
                         interval_distance_closed_form, omega_interleaving_distance, rectangle_distance)
from .match import bottleneck
from .metricgh import FiniteMetricSpace, gh_all, integer_metric_corpus
from .pmod import EMPTY, FiniteModule, IntervalModule, RectangleModule
from .posets import omega_weight, translations

EXIT_OK, EXIT_PARSE, EXIT_INF, EXIT_REPRO, EXIT_AUDIT = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    family: str = "flow"
    params: dict = field(default_factory=dict)
    tol: float = 1e-6
    seed: int = 0
    caps: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tol > 0:
            raise ParseError("tolerance must be positive")
        if any(not v > 0 for v in self.caps.values()):
            raise ParseError("caps must be positive")


# ---------------------------------------------------------------- literals

def parse_module(text: str):
    """``interval:a,b``, ``rect:a1,a2;b1,b2``, ``empty`` or a finite-module file."""
    text = text.strip()
    try:
        if text == "empty":
            return None
        if text.startswith("interval:"):
            a, b = (float(x) for x in text[len("interval:"):].split(","))
            return IntervalModule(a, b)
        if text.startswith("rect:"):
            lo, hi = text[len("rect:"):].split(";")
            return RectangleModule([float(x) for x in lo.split(",")], [float(x) for x in hi.split(",")])
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad module literal {text!r}: {exc}") from exc
    try:
        with open(text) as fh:
            return FiniteModule.from_text(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read module {text!r}: {exc}") from exc


def _fill_empty(a, b):
    if a is None and b is None:
        return EMPTY, EMPTY
    if a is None:
        a = EMPTY if isinstance(b, IntervalModule) else RectangleModule(np.zeros(b.n), np.zeros(b.n))
    if b is None:
        b = EMPTY if isinstance(a, IntervalModule) else RectangleModule(np.zeros(a.n), np.zeros(a.n))
    return a, b


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path!r}: {exc}") from exc


# ---------------------------------------------------------------- commands

def cmd_interleave(cfg: RunConfig, out=sys.stdout) -> int:
    a, b = _fill_empty(parse_module(cfg.inputs["a"]), parse_module(cfg.inputs["b"]))
    fam = cfg.family
    if isinstance(a, FiniteModule):
        if not isinstance(b, FiniteModule) or a.poset != b.poset:
            raise ParseError("finite modules must share a poset")
        res = omega_interleaving_distance(a, b, translations(a.poset), omega_weight(a.poset))
    elif isinstance(a, RectangleModule) or isinstance(b, RectangleModule):
        if not (isinstance(a, RectangleModule) and isinstance(b, RectangleModule)):
            raise ParseError("cannot compare an interval with a rectangle")
        if fam == "flow":
            res = rectangle_distance(a, b, "flow", tol=cfg.tol)
        elif fam == "shift":
            res = rectangle_distance(a, b, "shift", p=cfg.params.get("p", 2.0), tol=min(cfg.tol, 1e-9))
        elif fam == "direction":
            res = distance_bisect(a, b, direction_family(cfg.params["direction"], cfg.params.get("p", 2.0)),
                                  tol=cfg.tol)
        else:
            raise ParseError(f"family {fam!r} does not apply to rectangles")
    else:
        if fam not in ("flow", "mult"):
            raise ParseError(f"family {fam!r} does not apply to intervals")
        res = distance_bisect(a, b, FLOW if fam == "flow" else MULT, tol=cfg.tol)
    out.write(res.to_json() + "\n")
    if math.isinf(res.value):
        return EXIT_INF
    return EXIT_OK


def cmd_gh(cfg: RunConfig, out=sys.stdout) -> int:
    X = FiniteMetricSpace.from_csv(_read(cfg.inputs["x"]))
    Y = FiniteMetricSpace.from_csv(_read(cfg.inputs["y"]))
    kw = {"cap": int(cfg.caps["pairs"])} if "pairs" in cfg.caps else {}
    g, a, m = gh_all(X, Y, **kw)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["gh", "altered_gh", "modified_gh"])
    w.writerow([repr(g), repr(a), repr(m)])
    return EXIT_OK


def _default_pseudometric_audits(seed: int):
    from .twocat import (build_action_groupoid_2cat, cyclic_action, distance_function, lpc_to_2cat,
                         random_lpc)
    from .weights import audit_pseudometric
    rng = random.Random(seed)
    reports = []
    ivs = [IntervalModule(*sorted(rng.uniform(0.5, 5) for _ in range(2))) for _ in range(6)] + [EMPTY]
    for kind in ("flow", "mult"):
        reports.append((f"interval-{kind}",
                        audit_pseudometric(lambda I, J: interval_distance_closed_form(I, J, kind), ivs)))
    G = cyclic_action(6)
    C, W = build_action_groupoid_2cat(G)
    reports.append(("action-groupoid Z/6", audit_pseudometric(distance_function(C, W), C.objects)))
    C, W = lpc_to_2cat(random_lpc(rng))
    reports.append(("lpc", audit_pseudometric(distance_function(C, W), C.objects)))
    corpus = integer_metric_corpus(2)
    reports.append(("gh", audit_pseudometric(lambda X, Y: gh_all(X, Y)[0], corpus)))
    bars = [[(0, 1)], [(0, 2)], [(1, 3), (0, 0.5)], []]
    reports.append(("bottleneck", audit_pseudometric(bottleneck, bars)))
    return reports


def _default_monoidal_audits(seed: int):
    from .weights import additive_weight, audit_monoidal_weight, log_weight, pnorm_weight
    rng = random.Random(seed)
    ts = [0.0] + [rng.uniform(0, 5) for _ in range(20)]
    cs = [1.0] + [math.exp(rng.uniform(-2, 2)) for _ in range(20)]
    vs = [(0.0, 0.0)] + [(rng.uniform(0, 3), rng.uniform(0, 3)) for _ in range(20)]
    return [
        ("flow", audit_monoidal_weight(additive_weight, ts, lambda a, b: a + b, 0.0)),
        ("mult", audit_monoidal_weight(log_weight, cs, lambda a, b: a * b, 1.0)),
        ("vector", audit_monoidal_weight(pnorm_weight(2), vs, lambda a, b: (a[0] + b[0], a[1] + b[1]), (0.0, 0.0))),
    ]


def _default_lawvere_audits(seed: int):
    from .posets import chain
    from .twocat import (action_groupoid_category, cyclic_action, delooping_of_translations, indiscrete,
                         random_lawvere_2_weight)
    from .weights import audit_lawvere_2_weight
    rng = random.Random(seed)
    o, m, i, c, _ = action_groupoid_category(cyclic_action(4, 2))
    C = indiscrete(o, m, i, c)
    D = delooping_of_translations(chain(3))
    return [
        ("indiscrete action groupoid", audit_lawvere_2_weight(random_lawvere_2_weight(C, rng), C)),
        ("delooping Trans_P", audit_lawvere_2_weight(random_lawvere_2_weight(D, rng), D)),
    ]


def cmd_audit(cfg: RunConfig, out=sys.stdout) -> int:
    suite = cfg.params.get("suite", "pseudometric")
    if cfg.inputs.get("instances", "default") != "default":
        raise ParseError("only the shipped 'default' instances are available")
    runners = {"pseudometric": _default_pseudometric_audits, "monoidal": _default_monoidal_audits,
               "lawvere": _default_lawvere_audits}
    if suite not in runners:
        raise ParseError(f"unknown suite {suite!r}")
    bad = 0
    for name, rep in runners[suite](cfg.seed):
        out.write(f"{name}\t{rep.checked} checks\t{len(rep)} violations\n")
        out.write(rep.to_text())
        bad += len(rep)
    return EXIT_AUDIT if bad else EXIT_OK


def cmd_stability(cfg: RunConfig, out=sys.stdout) -> int:
    from .pipeline import stability_experiment
    p = cfg.params
    rep = stability_experiment(trials=p.get("trials", 100), grid=p.get("grid", 10), noise=p.get("noise", 0.1),
                               action=cfg.family, seed=cfg.seed)
    if p.get("csv"):
        with open(p["csv"], "w") as fh:
            fh.write(rep.to_csv())
    out.write(f"{rep.satisfied_trials()}/{rep.trials} bound satisfied; max ratio {rep.max_ratio:.6f}; "
              f"union-find mismatches {rep.union_find_mismatches}\n")
    return EXIT_OK if rep.ok else EXIT_AUDIT


def _generate(kind: str, n: int, seed: int):
    from .posets import chain
    from .twocat import (action_groupoid_category, build_action_groupoid_2cat, cyclic_action, delooping,
                         delooping_of_translations, indiscrete, lpc_to_2cat, random_lawvere_2_weight, random_lpc)
    from .weights import Lawvere2Weight
    rng = random.Random(seed)
    G = cyclic_action(n)
    if kind == "delooping":
        C = delooping(G.elements, G.mul, G.identity)
        return C, Lawvere2Weight(lambda g: G.weight(g), lambda a: 0.0)
    if kind == "translations":
        C = delooping_of_translations(chain(n))
        return C, random_lawvere_2_weight(C, rng)
    if kind == "indiscrete":
        o, m, i, c, _ = action_groupoid_category(G)
        C = indiscrete(o, m, i, c)
        return C, random_lawvere_2_weight(C, rng)
    if kind in ("action", "cdelta"):
        return build_action_groupoid_2cat(G, "discrete" if kind == "action" else "groupoid")
    if kind == "lpc":
        return lpc_to_2cat(random_lpc(rng))
    raise ParseError(f"unknown construction {kind!r}")


def cmd_twocat(cfg: RunConfig, out=sys.stdout) -> int:
    from .twocat import Finite2Category, two_cat_interleaving, validate_2category
    if cfg.params.get("generate"):
        C, W = _generate(cfg.params["generate"], cfg.params.get("n", 4), cfg.seed)
        out.write(C.to_text(W))
        return EXIT_OK
    C, W = Finite2Category.from_text(_read(cfg.inputs["file"]))
    if cfg.params.get("validate"):
        rep = validate_2category(C)
        out.write(rep.to_text())
        return EXIT_AUDIT if rep else EXIT_OK
    a, b = cfg.inputs.get("a"), cfg.inputs.get("b")
    pairs = [(a, b)] if a and b else [(x, y) for x in C.objects for y in C.objects]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["a", "b", "distance"])
    any_inf = False
    for x, y in pairs:
        if x not in C.objects or y not in C.objects:
            raise ParseError(f"unknown object in {(x, y)!r}")
        v = two_cat_interleaving(C, W, x, y).value
        any_inf |= math.isinf(v)
        w.writerow([x, y, "inf" if math.isinf(v) else repr(v)])
    return EXIT_INF if (a and b and any_inf) else EXIT_OK


def reproduction_rows() -> list[tuple[str, float, float, float]]:
    """(example id, reference value, computed value, tolerance)."""
    rows = []
    e2 = math.exp(2)
    rows.append(("mult-interval a=1 b=e^2", 1.0, distance_bisect(IntervalModule(1, e2), EMPTY, MULT, tol=1e-8).value,
                 1e-6))
    rows.append(("flow-interval [0,2) vs empty", 1.0, distance_bisect(IntervalModule(0, 2), EMPTY, FLOW,
                                                                        tol=1e-8).value, 1e-6))
    for a in (1, 10, 100, 1000):
        rows.append((f"bottleneck [{a},{a + 1}) vs empty", 0.5, bottleneck([(a, a + 1)], []), 0.0))
    rows.append(("mult-interval a=1000 b=1001 (limit 0)", 0.0,
                 distance_bisect(IntervalModule(1000, 1001), EMPTY, MULT, tol=1e-9).value, 1e-2))
    M1 = RectangleModule((0, 0), (2, 2))
    M2 = RectangleModule((1, 0), (3, 2))
    M3 = RectangleModule((1, 1), (3, 3))
    rows.append(("rect M1-M2 flow", 1.0, rectangle_distance(M1, M2, "flow", tol=1e-9).value, 1e-4))
    rows.append(("rect M1-M3 flow", 1.0, rectangle_distance(M1, M3, "flow", tol=1e-9).value, 1e-4))
    rows.append(("rect M1-M2 shift p=2", 1.0, rectangle_distance(M1, M2, "shift", p=2).value, 1e-4))
    rows.append(("rect M1-M3 shift p=2", math.sqrt(2), rectangle_distance(M1, M3, "shift", p=2).value, 1e-4))
    corpus = integer_metric_corpus(3)
    bad = 0
    for X in corpus:
        for Y in corpus:
            g, a, _ = gh_all(X, Y)
            bad += not (a <= g <= 2 * a)
    rows.append(("GH bilipschitz violations (<=3 points, entries 1..3)", 0.0, float(bad), 0.0))
    return rows


def cmd_reproduce(cfg: RunConfig, out=sys.stdout) -> int:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["example", "reference_value", "computed_value", "abs_error", "tolerance", "status"])
    failed = 0
    for name, ref, val, tol in reproduction_rows():
        err = abs(val - ref)
        ok = err <= tol
        failed += not ok
        w.writerow([name, repr(ref), repr(val), repr(err), repr(tol), "ok" if ok else "FAIL"])
    return EXIT_REPRO if failed else EXIT_OK


# ---------------------------------------------------------------- argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="interleavings", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("interleave", help="distance between two persistence modules")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--family", default="flow", choices=["flow", "mult", "shift", "direction"])
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--direction", type=lambda t: [float(x) for x in t.split(",")])
    s.add_argument("--tol", type=float, default=1e-6)

    s = sub.add_parser("gh", help="GH, altered GH and modified GH of two metric CSVs")
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--cap", type=int)

    s = sub.add_parser("audit", help="metric-axiom audits on shipped instances")
    s.add_argument("--suite", default="pseudometric", choices=["pseudometric", "monoidal", "lawvere"])
    s.add_argument("--instances", default="default")

    s = sub.add_parser("stability", help="bottleneck stability experiment")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--grid", type=int, default=10)
    s.add_argument("--noise", type=float, default=0.1)
    s.add_argument("--action", default="flow", choices=["flow", "mult"])
    s.add_argument("--csv")

    s = sub.add_parser("twocat", help="finite 2-category distances, validation, generation")
    s.add_argument("--file")
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--validate", action="store_true")
    s.add_argument("--generate", choices=["delooping", "translations", "indiscrete", "action", "cdelta", "lpc"])
    s.add_argument("--n", type=int, default=4)

    sub.add_parser("reproduce", help="table of the worked examples")
    return p


def _config(ns) -> RunConfig:
    c = ns.command
    if c == "interleave":
        params = {"p": ns.p}
        if ns.direction is not None:
            params["direction"] = ns.direction
        elif ns.family == "direction":
            raise ParseError("--family direction needs --direction")
        return RunConfig(c, {"a": ns.a, "b": ns.b}, ns.family, params, ns.tol, ns.seed)
    if c == "gh":
        return RunConfig(c, {"x": ns.x, "y": ns.y}, seed=ns.seed, caps={"pairs": ns.cap} if ns.cap else {})
    if c == "audit":
        return RunConfig(c, {"instances": ns.instances}, params={"suite": ns.suite}, seed=ns.seed)
    if c == "stability":
        return RunConfig(c, family=ns.action, seed=ns.seed,
                         params={"trials": ns.trials, "grid": ns.grid, "noise": ns.noise, "csv": ns.csv})
    if c == "twocat":
        if not ns.generate and not ns.file:
            raise ParseError("twocat needs --file or --generate")
        return RunConfig(c, {"file": ns.file, "a": ns.a, "b": ns.b}, seed=ns.seed,
                         params={"validate": ns.validate, "generate": ns.generate, "n": ns.n})
    return RunConfig(c, seed=ns.seed)


COMMANDS = {"interleave": cmd_interleave, "gh": cmd_gh, "audit": cmd_audit, "stability": cmd_stability,
            "twocat": cmd_twocat, "reproduce": cmd_reproduce}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        cfg = _config(ns)
        return COMMANDS[cfg.command](cfg, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InterleavingsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
