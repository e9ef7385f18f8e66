"""Command-line entry point: ``seqhints <command> ...``.

Commands: ``synth``, ``train``, ``decode``, ``eval``, ``analyze`` and
``experiment``. Exit codes: 0 success, 1 usage error, 2 data error, 3 one or
more experiment cells failed (the run still completes the other cells).

Experiment settings come from built-in defaults, then an optional
``--config`` file of ``key = value`` lines, then explicit flags; a flag given
on the command line always wins over the config file.
"""

from __future__ import annotations

import argparse
import itertools
import os
import platform
import sys
import traceback
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    ToyInstance,
    check_weakly_useful,
    discrimination,
    sample_premise_instance,
    verify_theorem1_bound,
)
from .constraints import load_constraint
from .core import NER_ALPHABET, ConllError, Corpus, composite_alphabet, read_conll, save_conll
from .evaluation import WinTieLose, mcnemar, metrics_tsv, span_f1, token_accuracy
from .hmm import HmmLearner, dump_hmm, load_hmm
from .perceptron import PerceptronLearner, dump_perceptron, load_perceptron
from .synth import SynthConfig, generate, parse_key_values, split
from .training import TrainConfig, one_sided_hints, self_train, two_sided_hints

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CELLS = 0, 1, 2, 3
MODES = ("baseline", "pos-feature", "self-train", "one-sided-hints", "two-sided-hints")
LEARNERS = ("hmm", "perceptron")
CONSTRAINTS = ("full", "pos-only", "np-only", "constant")
SPLIT_FILES = ("d1", "d2", "unlab", "test", "dev")
SHORT = {
    "baseline": "Base",
    "pos-feature": "POS-F",
    "self-train": "Self-T",
    "one-sided-hints": "Hints",
    "two-sided-hints": "Hints2",
}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- shared helpers ------------------------------------------------------------


def _int_list(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(x) for x in str(text).replace(" ", "").split(",") if x]


def _read(path, **kw) -> Corpus:
    try:
        return read_conll(path, **kw)
    except FileNotFoundError as e:
        raise DataError(f"no such file: {e.filename}") from None
    except ConllError as e:
        raise DataError(f"{path}: {e}") from None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _task_alphabet(corpora, task: int):
    if task == 2:
        return NER_ALPHABET
    pairs = set()
    for c in corpora:
        for ex in c:
            if ex.y1 is not None:
                pairs.update(ex.y1.labels)
    if len(pairs) < 2:
        raise DataError("task-1 data has fewer than two distinct (POS, chunk) labels")
    return composite_alphabet(pairs)


def _learner(kind: str, task: int, alphabet, seed: int = 0, epochs: int = 5, extra_source=None):
    if kind == "hmm":
        if extra_source is not None:
            raise UsageError("pos-feature mode needs --learner perceptron")
        return HmmLearner(task, alphabet)
    if kind == "perceptron":
        return PerceptronLearner(task, alphabet, epochs=epochs, seed=seed, extra_source=extra_source)
    raise UsageError(f"unknown learner {kind!r}")


def _dump(model) -> str:
    return dump_hmm(model) if type(model).__name__ == "HmmModel" else dump_perceptron(model)


def _load_model(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"no such model file: {path}") from None
    try:
        if text.startswith("seqhints-hmm"):
            return load_hmm(text)
        if text.startswith("seqhints-perceptron"):
            return load_perceptron(text)
    except ValueError as e:
        raise DataError(f"{path}: {e}") from None
    raise DataError(f"{path}: not a saved model")


def _predict(model, corpus: Corpus) -> list:
    return [model.decode(ex.sentence)[0] for ex in corpus]


def _with_predictions(corpus: Corpus, task: int, preds) -> Corpus:
    return Corpus(tuple(ex.with_labels(task, p) for ex, p in zip(corpus, preds)))


# --- synth / train / decode / eval / analyze -----------------------------------------------


def cmd_synth(args) -> int:
    cfg = SynthConfig()
    if args.config:
        cfg = SynthConfig.from_text(Path(args.config).read_text(encoding="utf-8"))
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    sizes = {k: int(v) for k, v in parse_key_values(args.sizes.replace(",", "\n")).items()}
    corpus = generate(cfg, args.sentences)
    parts = split(corpus, sizes, seed=cfg.seed, mode=args.split_mode)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, part in zip(SPLIT_FILES, parts):
        if name in sizes:
            save_conll(part, out / f"{name}.conll", write_ids=True)
    _write(out / "synth.cfg", cfg.to_text())
    print(f"wrote {', '.join(n for n in SPLIT_FILES if n in sizes)} to {out}")
    return EXIT_OK


def cmd_train(args) -> int:
    data = _read(args.data)
    labeled = Corpus(tuple(ex for ex in data if ex.labeling(args.task) is not None))
    if len(labeled) == 0:
        raise DataError(f"{args.data} has no task-{args.task} labels")
    alphabet = _task_alphabet([labeled], args.task)
    model = _learner(args.learner, args.task, alphabet, args.seed, args.epochs).fit(list(labeled))
    _write(Path(args.out), _dump(model))
    print(f"trained {args.learner} task-{args.task} model on {len(labeled)} sentences -> {args.out}")
    return EXIT_OK


def cmd_decode(args) -> int:
    model = _load_model(args.model)
    data = _read(args.data)
    preds = _predict(model, data)
    out = _with_predictions(data, model.task, preds)
    save_conll(out, args.out, write_ids=True)
    print(f"decoded {len(data)} sentences -> {args.out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    gold = _read(args.gold)
    pred = _read(args.pred)
    if len(gold) != len(pred):
        raise DataError("gold and prediction files hold different numbers of sentences")
    task = args.task
    g, p = gold.labelings(task), pred.labelings(task)
    report = span_f1(g, p)
    row = report.as_row()
    row["accuracy"] = token_accuracy(g, p)
    rows = [dict(system=args.pred, **row)]
    text = metrics_tsv(rows)
    if args.against:
        other = _read(args.against)
        res = mcnemar(p, other.labelings(task), g, unit=args.unit)
        text += "\nb\tc\tstatistic\tp_value\tmethod\tverdict\n"
        text += f"{res.b}\t{res.c}\t{res.statistic:.6g}\t{res.p_value:.6g}\t{res.method}\t{res.verdict}\n"
    sys.stdout.write(text)
    return EXIT_OK


def cmd_analyze(args) -> int:
    if args.what == "discrimination":
        if not (args.model and args.data):
            raise UsageError("discrimination needs --model and --data")
        rep = discrimination(load_constraint(args.constraint), _read(args.data), _load_model(args.model))
        text = rep.to_tsv()
    elif args.what == "weak-usefulness":
        if not (args.model and args.data):
            raise UsageError("weak-usefulness needs --model and --data")
        model = _load_model(args.model)
        rep = check_weakly_useful(model, _read(args.data), args.epsilon, task=model.task,
                                  mode=args.unit, conditioning=args.conditioning)
        margin = "" if rep.indicative_margin is None else f"{float(rep.indicative_margin):.6g}"
        text = (
            "coverage_ok\tcoverage_margin\tindicative_ok\tindicative_margin\tvacuous_pairs\tchecked_pairs\n"
            f"{rep.coverage_ok}\t{float(rep.coverage_margin):.6g}\t{rep.indicative_ok}\t{margin}\t"
            f"{rep.vacuous_pairs}\t{rep.checked_pairs}\n"
        )
    else:
        if args.instance:
            instances = [ToyInstance.from_text(Path(args.instance).read_text(encoding="utf-8"))]
        else:
            instances = [sample_premise_instance(args.seed + i, conditioning=args.conditioning)
                         for i in range(args.random)]
        lines = ["instance\tstatus\tmax_left\tright\tviolations\tchi_correct"]
        for i, inst in enumerate(instances):
            r = verify_theorem1_bound(inst, args.conditioning)
            worst = max(r.left.values()) if r.left else 0
            lines.append(f"{i}\t{r.status}\t{worst}\t{r.right}\t{' '.join(r.violations)}\t{r.chi_correct}")
        text = "\n".join(lines) + "\n"
    if args.out:
        _write(Path(args.out), text)
    sys.stdout.write(text)
    return EXIT_OK


# --- experiment ------------------------------------------------------------------------


@dataclass
class ExperimentSpec:
    modes: tuple = ("baseline", "self-train", "one-sided-hints")
    learner: str = "hmm"
    constraint: str = "full"
    n: tuple = (100,)
    m: tuple = (2000,)
    iterations: int = 3
    top_r: int | None = None
    seeds: tuple = (0,)
    data_dir: str | None = None
    out: str = "results"
    self_train_top_r: int = 200
    unlabeled_weight: str = "fraction:1"
    epochs: int = 5
    synth: dict = field(default_factory=dict)
    sizes: dict = field(default_factory=lambda: {"d1": 1000, "d2": 1600, "unlab": 8936, "test": 1000})

    def validate(self):
        for mode in self.modes:
            if mode not in MODES:
                raise UsageError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
        if self.learner not in LEARNERS:
            raise UsageError(f"unknown learner {self.learner!r}")
        if "pos-feature" in self.modes and self.learner != "perceptron":
            raise UsageError("pos-feature mode needs --learner perceptron")
        if self.constraint not in CONSTRAINTS and not os.path.exists(self.constraint):
            raise UsageError(f"unknown constraint {self.constraint!r}")
        if self.iterations < 1 or any(v < 1 for v in self.n + self.m):
            raise UsageError("iterations, n and m must be positive")
        if not self.seeds:
            raise UsageError("need at least one seed")

    def rows(self) -> list[tuple[str, str]]:
        out = [
            ("modes", ",".join(self.modes)),
            ("learner", self.learner),
            ("constraint", self.constraint),
            ("n", ",".join(map(str, self.n))),
            ("m", ",".join(map(str, self.m))),
            ("iterations", str(self.iterations)),
            ("top_r", "" if self.top_r is None else str(self.top_r)),
            ("seeds", ",".join(map(str, self.seeds))),
            ("data_dir", self.data_dir or ""),
            ("self_train_top_r", str(self.self_train_top_r)),
            ("unlabeled_weight", self.unlabeled_weight),
            ("epochs", str(self.epochs)),
        ]
        out += [(f"sizes.{k}", str(v)) for k, v in sorted(self.sizes.items())]
        out += [(f"synth.{k}", str(v)) for k, v in sorted(self.synth.items())]
        return out


_SPEC_KEYS = {
    "mode": "modes", "modes": "modes", "learner": "learner", "constraint": "constraint", "n": "n", "m": "m",
    "iterations": "iterations", "top_r": "top_r", "seed": "seeds", "seeds": "seeds", "data_dir": "data_dir",
    "out": "out", "self_train_top_r": "self_train_top_r", "unlabeled_weight": "unlabeled_weight",
    "epochs": "epochs",
}


def _coerce_spec(key: str, value):
    if key == "modes":
        return tuple(str(value).replace(" ", "").split(",")) if isinstance(value, str) else tuple(value)
    if key in ("n", "m", "seeds"):
        return tuple(_int_list(value))
    if key in ("iterations", "self_train_top_r", "epochs"):
        return int(value)
    if key == "top_r":
        return None if value in ("", None, "none") else int(value)
    return value


def resolve_spec(args) -> ExperimentSpec:
    """Defaults, then config file values, then explicitly given flags."""
    spec = ExperimentSpec()
    updates: dict = {}
    if args.config:
        try:
            raw = parse_key_values(Path(args.config).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise UsageError(f"no such config file: {args.config}") from None
        except ValueError as e:
            raise UsageError(f"{args.config}: {e}") from None
        synth, sizes = dict(spec.synth), dict(spec.sizes)
        for key, value in raw.items():
            if key.startswith("synth."):
                synth[key[6:]] = value
            elif key.startswith("sizes."):
                sizes[key[6:]] = int(value)
            elif key in _SPEC_KEYS:
                updates[_SPEC_KEYS[key]] = _coerce_spec(_SPEC_KEYS[key], value)
            else:
                raise UsageError(f"{args.config}: unknown key {key!r}")
        updates["synth"], updates["sizes"] = synth, sizes
    for flag in ("mode", "learner", "constraint", "n", "m", "iterations", "top_r", "seed", "data_dir", "out"):
        value = getattr(args, flag)
        if value is not None:
            key = _SPEC_KEYS[flag]
            updates[key] = _coerce_spec(key, value)
    try:
        spec = replace(spec, **updates)
    except (TypeError, ValueError) as e:
        raise UsageError(str(e)) from None
    spec.validate()
    return spec


def _load_data(spec: ExperimentSpec, seed: int):
    """Splits for one seed: files from ``data_dir``, or a freshly generated synthetic corpus."""
    if spec.data_dir:
        d = Path(spec.data_dir)
        paths = {name: d / f"{name}.conll" for name in SPLIT_FILES if (d / f"{name}.conll").exists()}
        first = {name: _read(path) for name, path in paths.items()}
        # one shared task-1 alphabet across files, so every model sees every pair
        pairs = {lab for c in first.values() for ex in c if ex.y1 is not None for lab in ex.y1.labels}
        alpha = composite_alphabet(pairs) if len(pairs) >= 2 else None
        parts = {name: Corpus(()) for name in SPLIT_FILES}
        for name, path in paths.items():
            parts[name] = _read(path, syntax_alphabet=alpha) if alpha else first[name]
        if len(parts["test"]) == 0:
            raise DataError(f"{d} has no test.conll")
        return parts
    text = "\n".join(f"{k} = {v}" for k, v in spec.synth.items())
    try:
        cfg = replace(SynthConfig.from_text(text), seed=seed)
    except (TypeError, ValueError) as e:
        raise UsageError(f"synth config: {e}") from None
    sizes = dict(spec.sizes)
    corpus = generate(cfg, sum(sizes.values()))
    mode = "two-sided" if "two-sided-hints" in spec.modes and len(spec.modes) == 1 else "one-sided"
    parts = split(corpus, sizes, seed=seed, mode=mode)._asdict()
    # two-sided hints never looks at y1 of the pool; strip it so the role contract holds
    parts["unlab2"] = Corpus(tuple(ex.strip() for ex in parts["unlab"]), "unlabeled")
    return parts


def _run_cell(spec: ExperimentSpec, data: dict, mode: str, n: int, m: int, seed: int, cell_dir: Path,
              cache: dict) -> dict:
    chi = load_constraint(spec.constraint)
    d2 = Corpus(data["d2"].examples[:n], "labeled-2")
    if len(d2) < n:
        raise DataError(f"only {len(data['d2'])} task-2 labelled sentences for n={n}")
    test = data["test"]
    ner = NER_ALPHABET

    def first_m(name: str, role: str) -> Corpus:
        part = data[name]
        if len(part) < m:
            raise DataError(f"only {len(part)} sentences in {name} for m={m}")
        return Corpus(part.examples[:m], role)

    syn_alpha = _task_alphabet([data[k] for k in data if k != "unlab2"], 1)
    learner2 = _learner(spec.learner, 2, ner, seed, spec.epochs)
    row: dict = {}
    extra_files: dict = {}

    def base_model():
        key = ("base", n, seed)
        if key not in cache:
            cache[key] = learner2.fit(list(d2))
        return cache[key]

    if mode == "baseline":
        model = base_model()
    elif mode == "pos-feature":
        d1 = first_m("d1", "labeled-1")
        tagger = _learner(spec.learner, 1, syn_alpha, seed, spec.epochs).fit(list(d1))

        def extra(sentence, _t=tagger):
            return ["/".join(lab) for lab in _t.decode(sentence)[0].labels]

        model = _learner(spec.learner, 2, ner, seed, spec.epochs, extra_source=extra).fit(list(d2))
    elif mode in ("self-train", "one-sided-hints"):
        pool = first_m("unlab", "unlabeled")
        if mode == "self-train":
            cfg = TrainConfig(spec.iterations, top_r=spec.self_train_top_r, confidence_filter=True,
                              unlabeled_weight=spec.unlabeled_weight, seed=seed)
            pool = Corpus(tuple(ex.strip() for ex in pool), "unlabeled")
            result = self_train(learner2, d2, pool, cfg)
        else:
            cfg = TrainConfig(spec.iterations, top_r=spec.top_r, confidence_filter=spec.top_r is not None,
                              unlabeled_weight=spec.unlabeled_weight, seed=seed)
            result = one_sided_hints(learner2, d2, pool, chi, cfg)
            rep = discrimination(chi, pool, base_model())
            extra_files["discrimination.tsv"] = rep.to_tsv()
            row["discrimination"] = rep.discrimination
        model = result.model
        extra_files["trace.tsv"] = result.trace_tsv()
    elif mode == "two-sided-hints":
        d1 = first_m("d1", "labeled-1")
        pool = data.get("unlab2") or Corpus(tuple(ex.strip() for ex in data["unlab"]), "unlabeled")
        top_r = spec.top_r if spec.top_r is not None else 50
        cfg = TrainConfig.with_growth(top_r, iterations=spec.iterations, unlabeled_weight=spec.unlabeled_weight,
                                      seed=seed)
        learner1 = _learner(spec.learner, 1, syn_alpha, seed, spec.epochs)
        result = two_sided_hints(learner1, learner2, d1, d2, pool, chi, cfg)
        model = result.models[2]
        extra_files["trace.tsv"] = result.trace_tsv()
        t1 = result.models[1]
        row["task1_f1"] = span_f1(test.labelings(1), _predict(t1, test)).f1
        rep = discrimination(chi, test, base_model())
        extra_files["discrimination.tsv"] = rep.to_tsv()
        row["discrimination"] = rep.discrimination
    else:
        raise UsageError(f"unknown mode {mode!r}")

    preds = _predict(model, test)
    report = span_f1(test.labelings(2), preds)
    row.update(report.as_row())
    row["accuracy"] = token_accuracy(test.labelings(2), preds)
    cell_dir.mkdir(parents=True, exist_ok=True)
    _write(cell_dir / "metrics.tsv", metrics_tsv([row]))
    for name, text in extra_files.items():
        _write(cell_dir / name, text)
    save_conll(_with_predictions(test, 2, preds), cell_dir / "predictions.conll", write_ids=True)
    return {"row": row, "preds": preds}


def _manifest(spec: ExperimentSpec) -> str:
    rows = [("seqhints_version", __version__), ("python", platform.python_version()),
            ("numpy", np.__version__), ("rng", "numpy PCG64 via default_rng(seed)")]
    rows += spec.rows()
    return "key\tvalue\n" + "\n".join(f"{k}\t{v}" for k, v in rows) + "\n"


def cmd_experiment(args) -> int:
    spec = resolve_spec(args)
    out = Path(spec.out)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "manifest.tsv", _manifest(spec))
    index = ["cell\tmode\tn\tm\tseed\tstatus\tf1\ttask1_f1\tdiscrimination"]
    preds: dict = {}
    failed = 0
    for seed in spec.seeds:
        data = _load_data(spec, seed)
        cache: dict = {}
        for n, m, mode in itertools.product(spec.n, spec.m, spec.modes):
            cell = f"{mode}_n{n}_m{m}_s{seed}"
            try:
                res = _run_cell(spec, data, mode, n, m, seed, out / cell, cache)
            except UsageError:
                raise
            except Exception as e:  # a failed cell is recorded and the sweep goes on
                failed += 1
                msg = f"failed: {type(e).__name__}: {e}".replace("\t", " ").replace("\n", " ")
                index.append(f"{cell}\t{mode}\t{n}\t{m}\t{seed}\t{msg}\t\t\t")
                _write(out / cell / "error.txt", traceback.format_exc())
                continue
            r = res["row"]
            preds[(mode, n, m, seed)] = (res["preds"], data["test"])
            t1 = f"{r['task1_f1']:.6f}" if "task1_f1" in r else ""
            disc = f"{r['discrimination']:.6g}" if "discrimination" in r else ""
            index.append(f"{cell}\t{mode}\t{n}\t{m}\t{seed}\tok\t{r['f1']:.6f}\t{t1}\t{disc}")
            print(f"{cell}: F={r['f1']:.4f}", flush=True)
    _write(out / "index.tsv", "\n".join(index) + "\n")

    pairs = [(a, b) for a, b in itertools.combinations(spec.modes, 2)]
    if pairs:
        # hints columns read "Hints vs X", so the later (richer) mode is system A
        cols = [f"{SHORT[b]} vs {SHORT[a]}" for a, b in pairs]
        table = WinTieLose(cols)
        for (a, b), col in zip(pairs, cols):
            for n, m, seed in itertools.product(spec.n, spec.m, spec.seeds):
                if (a, n, m, seed) in preds and (b, n, m, seed) in preds:
                    pb, test = preds[(b, n, m, seed)]
                    pa, _ = preds[(a, n, m, seed)]
                    table.add(col, mcnemar(pb, pa, test.labelings(2)))
        _write(out / "win_tie_lose.tsv", table.to_tsv())
    if failed:
        print(f"{failed} cell(s) failed; see {out / 'index.tsv'}", file=sys.stderr)
        return EXIT_CELLS
    return EXIT_OK


# --- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="seqhints", description="Learning sequence taggers with hints from a related task.")
    p.add_argument("--version", action="version", version=f"seqhints {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="generate a synthetic corpus and split it into CoNLL files")
    s.add_argument("--config", help="synthetic generator config (key = value lines)")
    s.add_argument("--sentences", type=int, default=12000)
    s.add_argument("--sizes", default="d1=1000,d2=1600,unlab=8000,test=1000")
    s.add_argument("--split-mode", choices=("one-sided", "two-sided"), default="one-sided")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    t = sub.add_parser("train", help="train a supervised tagger")
    t.add_argument("--learner", choices=LEARNERS, default="hmm")
    t.add_argument("--task", type=int, choices=(1, 2), default=2)
    t.add_argument("--data", required=True)
    t.add_argument("--epochs", type=int, default=5)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_train)

    d = sub.add_parser("decode", help="label a CoNLL file with a saved model")
    d.add_argument("--model", required=True)
    d.add_argument("--data", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_decode)

    e = sub.add_parser("eval", help="score predictions against gold labels")
    e.add_argument("--gold", required=True)
    e.add_argument("--pred", required=True)
    e.add_argument("--task", type=int, choices=(1, 2), default=2)
    e.add_argument("--against", help="second prediction file for McNemar's test")
    e.add_argument("--unit", choices=("sentence", "token"), default="sentence")
    e.set_defaults(func=cmd_eval)

    a = sub.add_parser("analyze", help="discrimination, weak usefulness or the error bound")
    a.add_argument("what", choices=("discrimination", "weak-usefulness", "bound"))
    a.add_argument("--constraint", default="full")
    a.add_argument("--model")
    a.add_argument("--data")
    a.add_argument("--epsilon", default="0.01")
    a.add_argument("--unit", choices=("token", "sequence"), default="token")
    a.add_argument("--conditioning", choices=("literal", "errors"), default="literal")
    a.add_argument("--instance", help="toy instance file for 'bound'")
    a.add_argument("--random", type=int, default=100, help="random premise-satisfying instances for 'bound'")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    x = sub.add_parser("experiment", help="run a grid of semi-supervised experiments")
    x.add_argument("--config")
    x.add_argument("--mode", help=f"comma-separated subset of {', '.join(MODES)}")
    x.add_argument("--learner", choices=LEARNERS)
    x.add_argument("--constraint", help=f"{', '.join(CONSTRAINTS)} or a rules file")
    x.add_argument("--n", help="task-2 labelled sizes, e.g. 100,200,400")
    x.add_argument("--m", help="syntactic-labelled sizes, e.g. 500,1000")
    x.add_argument("--iterations", type=int)
    x.add_argument("--top-r", type=int)
    x.add_argument("--seed", help="seed or comma-separated seeds")
    x.add_argument("--data-dir")
    x.add_argument("--out")
    x.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"seqhints: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f"seqhints: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, OSError) as e:
        print(f"seqhints: error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
