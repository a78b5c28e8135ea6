"""Command-line front end: generate, describe, analyze, train, crossval,
predict, rules and report.

Exit status is 0 on success, 1 on data or domain errors and 2 on usage
errors. Output files are written to a temporary sibling and renamed into
place only once the command has succeeded.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
import tempfile
import time

from . import advisor, tables
from .classifiers import ALGORITHMS, DecisionTreeModel, make_learner, model_from_json
from .data_model import COHORT_COLUMNS, DIFF, GAIN, GPA, L_STATUS, REG, SID, Dataset, gpa_band, \
    parse_cohort_csv, student_records, to_csv
from .descriptive import summarize_by_group
from .errors import AdvisoryError, DataError
from .evaluation import cross_validate
from .synthetic import GeneratorParams, generate_cohort

SEED_ENV = "ADVISORY_MINER_SEED"
FORMATS = ("text", "csv", "json")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _folds(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if k < 2:
        raise argparse.ArgumentTypeError("folds must be >= 2")
    return k


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _algos(text: str) -> list[str]:
    names = list(ALGORITHMS) if text == "all" else [a.strip() for a in text.split(",") if a.strip()]
    bad = [a for a in names if a not in ALGORITHMS]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"invalid algorithm {', '.join(bad) or text!r}; choose from {', '.join(ALGORITHMS)} or all")
    return names


def _build_parser() -> _Parser:
    p = _Parser(prog="advisory-miner", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def data_arg(sp, required=True):
        sp.add_argument("--data", required=required, help="cohort CSV path, or - for stdin")

    def out_args(sp, formats=FORMATS, default="text"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", help="write here instead of stdout")

    def learner_args(sp):
        sp.add_argument("--k", type=_positive, default=5, help="neighbours for knn")
        sp.add_argument("--min-leaf", type=_positive, default=2, help="c45 minimum leaf size")
        sp.add_argument("--cf", type=float, default=0.25, help="c45 pruning confidence")
        sp.add_argument("--no-prune", action="store_true")
        sp.add_argument("--exclude", default="", help="comma-separated attributes to drop")

    sp = sub.add_parser("generate", help="write a synthetic cohort")
    sp.add_argument("--n", type=_positive)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--params", help="JSON file overriding generator parameters")
    out_args(sp, ("csv", "json"), "csv")

    sp = sub.add_parser("describe", help="per-group descriptive statistics")
    data_arg(sp)
    sp.add_argument("--group-by", default=L_STATUS)
    out_args(sp)

    sp = sub.add_parser("analyze", help="descriptive statistics, ANOVA and t-test battery")
    data_arg(sp)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--ttest-scope", default=advisor.EXPECTED,
                    help="L_STATUS value to restrict the GPA-band t-test to, or all")
    out_args(sp)

    sp = sub.add_parser("train", help="fit a classifier and save it as JSON")
    data_arg(sp)
    sp.add_argument("--algo", choices=ALGORITHMS, required=True)
    learner_args(sp)
    sp.add_argument("--out", required=True, help="model JSON path")

    sp = sub.add_parser("crossval", help="stratified k-fold cross-validation")
    data_arg(sp)
    sp.add_argument("--algo", type=_algos, default=list(ALGORITHMS), help="c45, nb, knn, a comma list or all")
    learner_args(sp)
    sp.add_argument("--folds", type=_folds, default=10)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--parallel", action="store_true", help="evaluate folds concurrently")
    out_args(sp)

    sp = sub.add_parser("predict", help="classify students with a saved model")
    sp.add_argument("--model", required=True)
    data_arg(sp)
    out_args(sp)

    sp = sub.add_parser("rules", help="decision rules from a C4.5 tree")
    sp.add_argument("--model", help="saved c45 model; otherwise a tree is fitted on --data")
    data_arg(sp, required=False)
    learner_args(sp)
    out_args(sp, ("text", "json"))

    sp = sub.add_parser("report", help="annual academic report for one student")
    sp.add_argument("--model", required=True)
    data_arg(sp)
    sp.add_argument("--sid", help="student id (default: first row)")
    sp.add_argument("--narrative", help="JSON list of three semester entries")
    sp.add_argument("--advisor", default="", help="advisor's name")
    sp.add_argument("--threshold", type=float, help="Diff_G_R_C_H flag threshold (default: mean + sd)")
    out_args(sp, ("text", "json"))
    return p


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command in ("generate", "crossval") and args.seed is None:
        env = os.environ.get(SEED_ENV)
        if env is None:
            raise UsageError(f"{args.command} needs --seed (or {SEED_ENV} in the environment)")
        try:
            args.seed = int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None
    if args.command == "rules" and not (args.model or args.data):
        raise UsageError("rules needs --model or --data")
    for name in ("data", "out", "model", "params", "narrative"):
        if getattr(args, name, None) == "":
            raise UsageError(f"--{name} must not be empty")
    return args


# ---------------------------------------------------------------------------
# helpers

def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def _load_data(path: str) -> Dataset:
    try:
        return parse_cohort_csv(_read_text(path))
    except DataError as exc:
        where = "<stdin>" if path == "-" else path
        raise type(exc)(f"{where}: {exc}") from None


def _load_json(path: str):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(out))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _jsonable(obj):
    if dataclasses.is_dataclass(obj):
        return dataclasses.asdict(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_jsonable) + "\n"


def _echo_seed(seed: int) -> None:
    print(f"seed: {seed}", file=sys.stderr)


def _learner_params(args, algo: str) -> dict:
    if algo == "c45":
        return {"min_leaf": args.min_leaf, "cf": args.cf, "prune": not args.no_prune}
    if algo == "knn":
        return {"k": args.k}
    return {}


def _exclude(ds: Dataset, spec: str) -> Dataset:
    names = [n.strip() for n in spec.split(",") if n.strip()]
    return ds.drop(names) if names else ds


def _named_rows(ds: Dataset):
    names = ds.names
    return [dict(zip(names, row)) for row in ds.instances]


# ---------------------------------------------------------------------------
# subcommands

def cmd_generate(args) -> str:
    p = GeneratorParams.load(args.params) if args.params else GeneratorParams()
    if args.n is not None:
        p.n = args.n
    p.seed = args.seed
    _echo_seed(args.seed)
    ds = generate_cohort(p)
    return ds.dumps() + "\n" if args.format == "json" else to_csv(ds)


def _describe(ds: Dataset, group_by: str) -> dict:
    return {attr: summarize_by_group(ds, attr, group_by) for attr in advisor.DESCRIBED}


def _describe_csv(by_attr) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    fields = [f.name for f in dataclasses.fields(next(iter(next(iter(by_attr.values())).values())))
              if f.name != "missing"]
    w.writerow(["attribute", "group", *fields])
    for attr, groups in by_attr.items():
        for g, s in groups.items():
            w.writerow([attr, g, *("" if getattr(s, f) is None else repr(getattr(s, f)) for f in fields)])
    return out.getvalue()


def cmd_describe(args) -> str:
    by_attr = _describe(_load_data(args.data), args.group_by)
    if args.format == "json":
        return _dumps(by_attr)
    if args.format == "csv":
        return _describe_csv(by_attr)
    return tables.render(tables.descriptive_rows(by_attr))


def _series_csv(ds: Dataset) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["index", SID, L_STATUS, REG, GAIN, DIFF, GPA, "band"])
    for i, row in enumerate(_named_rows(ds), start=1):
        w.writerow([i, row[SID], row[L_STATUS], row[REG], row[GAIN], row[DIFF], repr(row[GPA]),
                    gpa_band(row[GPA])])
    return out.getvalue()


def cmd_analyze(args) -> str:
    ds = _load_data(args.data)
    if args.format == "csv":
        return _series_csv(ds)
    res = advisor.cohort_analysis(ds, args.alpha, args.ttest_scope)
    if args.format == "json":
        return _dumps(res)
    parts = []

    def section(title, key, body):
        parts.append(title)
        sec = res[key]
        parts.append(body(sec["result"]) if sec["ok"] else f"unavailable: {sec['error']}: {sec['message']}\n")

    section("Descriptive statistics by L_STATUS", "describe",
            lambda r: tables.render(tables.descriptive_rows(r)))
    section(f"ANOVA: {DIFF} by GEN among expected graduates (alpha {args.alpha})", "anova",
            lambda r: tables.render(tables.anova_rows(r["table"])))
    section(f"t-test: {DIFF}, Good vs Poor GPA band (scope {args.ttest_scope}, alpha {args.alpha})", "ttest",
            lambda r: tables.render(tables.ttest_rows(r["table"])))
    section("Composition", "composition", lambda r: advisor.composition_line(r) + "\n")
    return "\n".join(parts)


def cmd_train(args) -> None:
    ds = _exclude(_load_data(args.data), args.exclude)
    model = make_learner(args.algo, **_learner_params(args, args.algo))(ds)
    _emit(_dumps(model.to_json()), args.out)
    print(f"trained {args.algo} on {ds.n} instances -> {args.out}", file=sys.stderr)


def cmd_crossval(args) -> str:
    ds = _exclude(_load_data(args.data), args.exclude)
    _echo_seed(args.seed)
    reports = {}
    for algo in args.algo:
        fit = make_learner(algo, **_learner_params(args, algo))
        reports[algo] = cross_validate(fit, ds, args.folds, args.seed, args.parallel, learner=algo)
    if args.format == "json":
        return _dumps({"seed": args.seed, "folds": args.folds,
                       "results": {a: r.as_dict() for a, r in reports.items()}})
    if args.format == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["algo", "class", "precision", "recall", "f_measure", "support",
                    "accuracy", "kappa", "mae", "rmse", "rae_percent", "rrse_percent"])
        for algo, r in reports.items():
            head = [repr(v) for v in (r.accuracy, r.kappa, r.mae, r.rmse, r.rae_percent, r.rrse_percent)]
            for s in [*r.per_class, r.weighted]:
                w.writerow([algo, s.label, repr(s.precision), repr(s.recall), repr(s.f_measure), s.support, *head])
        return out.getvalue()
    parts = [f"Stratified {args.folds}-fold cross-validation, seed {args.seed}, {ds.n} instances", "",
             tables.render(tables.metrics_rows(reports)), tables.render(tables.prf_rows(reports))]
    for algo, r in reports.items():
        parts += [f"Confusion matrix ({tables.ALGO_LABELS[algo]})", tables.render(tables.confusion_rows(r))]
    return "\n".join(parts)


def _load_model(path: str):
    try:
        return model_from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, AdvisoryError):
            raise
        raise DataError(f"{path}: not a saved model ({exc})") from None


def cmd_predict(args) -> str:
    model = _load_model(args.model)
    ds = _load_data(args.data)
    labels = model.class_values
    rows = []
    for named in _named_rows(ds):
        dist = model.predict_proba(named)
        rows.append((named[SID], model.predict(named), dist))
    if args.format == "json":
        return _dumps([{"sid": s, "class": c, "distribution": dict(zip(labels, map(float, d)))}
                       for s, c, d in rows])
    if args.format == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow([SID, "predicted", *labels])
        for s, c, d in rows:
            w.writerow([s, c, *(repr(float(p)) for p in d)])
        return out.getvalue()
    return "".join(f"{s}: {c} (" + ", ".join(f"{lab}={float(p):.4f}" for lab, p in zip(labels, d)) + ")\n"
                   for s, c, d in rows)


def cmd_rules(args) -> str:
    if args.model:
        model = _load_model(args.model)
        if not isinstance(model, DecisionTreeModel):
            raise DataError(f"{args.model}: rules need a c45 model, got {model.kind}")
    else:
        ds = _exclude(_load_data(args.data), args.exclude)
        model = make_learner("c45", **_learner_params(args, "c45"))(ds)
    rules = advisor.extract_rules(model)
    if args.format == "json":
        return _dumps([r.to_json() for r in rules])
    return "".join(f"{i}. {r}\n" for i, r in enumerate(rules, start=1))


def cmd_report(args) -> str:
    model = _load_model(args.model)
    ds = _load_data(args.data)
    students = student_records(ds)
    if args.sid is None:
        student = students[0]
    else:
        match = [s for s in students if s.sid == args.sid]
        if not match:
            raise DataError(f"no student with {SID} {args.sid!r}")
        student = match[0]
    threshold = args.threshold if args.threshold is not None else advisor.default_diff_threshold(ds)
    semesters = advisor.load_semesters(_load_json(args.narrative)) if args.narrative else None
    report = advisor.build_report(model, student, threshold, semesters, args.advisor)
    return advisor.render_report(report, args.format)


COMMANDS = {
    "generate": cmd_generate, "describe": cmd_describe, "analyze": cmd_analyze, "train": cmd_train,
    "crossval": cmd_crossval, "predict": cmd_predict, "rules": cmd_rules, "report": cmd_report,
}


def run(args) -> int:
    text = COMMANDS[args.command](args)
    if text is not None:
        _emit(text, getattr(args, "out", None))
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        status = run(args)
    except AdvisoryError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "), file=sys.stderr)
        return 1
    if os.environ.get("ADVISORY_MINER_TIMING"):
        print(f"elapsed: {time.perf_counter() - started:.3f}s", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
