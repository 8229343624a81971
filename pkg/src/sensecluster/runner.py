"""Config-driven experiment runner.

For every combination of word, feature set and algorithm the runner
executes a fixed number of independently seeded trials, maps each
trial's clusters to the gold senses, and writes per-trial results, a
mean-and-std table with per-category rollups, and confusion matrices
for a designated trial. Trial seeds are derived from the master seed
and the cell key, so every cell is reproducible in isolation and
results are identical at any parallelism level.
"""

import configparser
import hashlib
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import agglom, dissim, em
from .corpus import load_corpus
from .evaluate import (
    CATEGORY_ORDER,
    TrialReport,
    aggregate,
    best_mapping,
    category_rollup,
    confusion_from_labels,
    format_confusion,
    majority_classifier,
    not_significantly_below,
)
from .features import FEATURE_SETS, build_schema, extract, load_stopwords

ALGORITHMS = ("mcquitty", "ward", "em")


@dataclass
class ExperimentConfig:
    corpora: dict[str, str]
    feature_sets: tuple[str, ...] = ("A", "B", "C")
    algorithms: tuple[str, ...] = ALGORITHMS
    trials: int = 25
    seed: int = 0
    em_max_iter: int = 1000
    em_tol: float = 1e-6
    stopwords_path: str | None = None
    output_dir: str = "results"
    report_trial: int = 0
    dump_clusters: bool = False

    def __post_init__(self):
        self.feature_sets = tuple(s.upper() for s in self.feature_sets)
        self.algorithms = tuple(a.lower() for a in self.algorithms)
        if not self.corpora:
            raise ValueError("config names no corpora")
        if not self.feature_sets:
            raise ValueError("config names no feature sets")
        if not self.algorithms:
            raise ValueError("config names no algorithms")
        for s in self.feature_sets:
            if s not in FEATURE_SETS:
                raise ValueError(f"unknown feature set {s!r}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.report_trial < self.trials:
            raise ValueError("report_trial must name one of the trials")


def load_config(path) -> ExperimentConfig:
    """Read the declarative INI config; relative paths resolve against it."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    base = Path(path).resolve().parent

    if "corpora" not in parser:
        raise ValueError("config must have a [corpora] section")
    corpora = {w: str((base / p).resolve()) for w, p in parser["corpora"].items()}

    exp = parser["experiment"] if "experiment" in parser else {}
    kwargs = {"corpora": corpora}
    if "feature_sets" in exp:
        kwargs["feature_sets"] = tuple(exp["feature_sets"].split())
    if "algorithms" in exp:
        kwargs["algorithms"] = tuple(exp["algorithms"].split())
    if "trials" in exp:
        kwargs["trials"] = int(exp["trials"])
    if "seed" in exp:
        kwargs["seed"] = int(exp["seed"])
    if "output" in exp:
        kwargs["output_dir"] = str((base / exp["output"]).resolve())
    if "report_trial" in exp:
        kwargs["report_trial"] = int(exp["report_trial"])
    if "em" in parser:
        sec = parser["em"]
        if "max_iter" in sec:
            kwargs["em_max_iter"] = int(sec["max_iter"])
        if "tol" in sec:
            kwargs["em_tol"] = float(sec["tol"])
    if "stopwords" in parser and "path" in parser["stopwords"]:
        kwargs["stopwords_path"] = str((base / parser["stopwords"]["path"]).resolve())
    return ExperimentConfig(**kwargs)


def trial_seed(master: int, word: str, set_id: str, algorithm: str, trial: int) -> int:
    """Stable 64-bit seed for one trial, independent of all other trials."""
    key = f"{master}\x1f{word}\x1f{set_id}\x1f{algorithm}\x1f{trial}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


@dataclass
class _CellTask:
    word: str
    corpus_path: str
    set_id: str
    algorithm: str
    trials: int
    master_seed: int
    stopwords_path: str | None
    em_max_iter: int
    em_tol: float
    dump_clusters: bool


@dataclass
class CellResult:
    word: str
    set_id: str
    algorithm: str
    reports: list = field(default_factory=list)
    assignments: list = field(default_factory=list)
    n: int = 0
    k: int = 0
    error: str | None = None


def _run_cell(task: _CellTask) -> CellResult:
    result = CellResult(task.word, task.set_id, task.algorithm)
    try:
        sample = load_corpus(task.corpus_path)
        stop = load_stopwords(task.stopwords_path) if task.stopwords_path else None
        schema = build_schema(sample, task.set_id, stop)
        matrix = extract(sample, schema)
        result.n, result.k = sample.n, sample.k
        have_gold = all(inst.gold_sense is not None for inst in sample.instances)
        if not have_gold and not task.dump_clusters:
            raise ValueError(
                "corpus has untagged instances; evaluation needs gold senses "
                "(use --dump-clusters for the untagged workflow)"
            )

        if task.algorithm in ("mcquitty", "ward"):
            d = dissim.build(matrix)
            points = dissim.row_vectors(d) if task.algorithm == "ward" else None
        gold = [inst.gold_sense for inst in sample.instances]

        for t in range(task.trials):
            seed = trial_seed(task.master_seed, task.word, task.set_id, task.algorithm, t)
            if task.algorithm == "mcquitty":
                assignment = agglom.mcquitty(d, sample.k, seed).assignment
            elif task.algorithm == "ward":
                assignment = agglom.ward(points, sample.k, seed).assignment
            else:
                assignment = em.fit(
                    matrix, sample.k, seed, task.em_max_iter, task.em_tol
                ).assignment
            if task.dump_clusters:
                result.assignments.append(assignment)
            if have_gold:
                cm = confusion_from_labels(
                    gold, assignment, sample.sense_inventory, sample.k
                )
                mapping, agreement = best_mapping(cm)
                result.reports.append(
                    TrialReport(
                        task.word,
                        task.set_id,
                        task.algorithm,
                        t,
                        seed,
                        agreement / sample.n,
                        mapping,
                        cm,
                    )
                )
    except Exception as exc:  # reported per cell; other cells keep running
        result.error = f"{type(exc).__name__}: {exc}"
    return result


def _fmt3(x: float) -> str:
    return f"{x:.3f}".lstrip("0") or "0"


def _fmt2(x: float) -> str:
    return f"{x:.2f}".lstrip("0") or "0"


def _summary_table(config, samples, cells) -> str:
    columns = [(s, a) for s in config.feature_sets for a in config.algorithms]
    stats = {}
    trial_accuracies = {}
    for cell in cells:
        if cell.error is None and cell.reports:
            key = (cell.word, cell.set_id, cell.algorithm)
            stats[key] = aggregate(cell.reports)
            trial_accuracies[key] = [r.accuracy for r in cell.reports]

    maj = {}
    categories = {}
    for word, sample in samples.items():
        categories[word] = sample.category
        try:
            maj[word] = majority_classifier(sample)[1]
        except ValueError:
            pass

    # per word: the best experiment and those not significantly below it
    marked = set()
    for word in samples:
        per_word = {
            col: trial_accuracies[(word, col[0], col[1])]
            for col in columns
            if (word, col[0], col[1]) in trial_accuracies
        }
        for col in not_significantly_below(per_word):
            marked.add((word, col[0], col[1]))

    def cell_text(word, set_id, alg):
        agg = stats.get((word, set_id, alg))
        if agg is None:
            failed = any(
                c.word == word and c.set_id == set_id and c.algorithm == alg and c.error
                for c in cells
            )
            return "FAILED" if failed else "-"
        mark = "*" if (word, set_id, alg) in marked else ""
        return f"{_fmt3(agg.mean)}±{_fmt2(agg.std)}{mark}"

    header = ["word", "Maj"] + [f"{s}/{a}" for s, a in columns]
    rows = [header]
    by_cat = {cat: [w for w in config.corpora if categories.get(w) == cat] for cat in CATEGORY_ORDER}
    col_word_means: dict[tuple, dict[str, float]] = {col: {} for col in columns}
    for col in columns:
        for word in samples:
            agg = stats.get((word, col[0], col[1]))
            if agg is not None:
                col_word_means[col][word] = agg.mean

    for cat in CATEGORY_ORDER:
        words = by_cat.get(cat, [])
        if not words:
            continue
        for word in words:
            rows.append(
                [word, _fmt3(maj[word]) if word in maj else "-"]
                + [cell_text(word, s, a) for s, a in columns]
            )
        cat_row = [cat]
        cat_maj = {w: maj[w] for w in words if w in maj}
        cat_row.append(
            _fmt3(category_rollup(cat_maj, categories)[0][cat]) if cat_maj else "-"
        )
        for col in columns:
            vals = {w: col_word_means[col][w] for w in words if w in col_word_means[col]}
            cat_row.append(_fmt3(category_rollup(vals, categories)[0][cat]) if vals else "-")
        rows.append(cat_row)

    overall_row = ["overall"]
    overall_row.append(_fmt3(category_rollup(maj, categories)[1]) if maj else "-")
    for col in columns:
        vals = col_word_means[col]
        overall_row.append(_fmt3(category_rollup(vals, categories)[1]) if vals else "-")
    rows.append(overall_row)

    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for row in rows:
        line = row[0].ljust(widths[0])
        for i, cell in enumerate(row[1:], start=1):
            line += "  " + cell.rjust(widths[i])
        lines.append(line.rstrip())
    lines.append("")
    lines.append("* best experiment for the word, or not significantly below it (t test, p=.01)")
    return "\n".join(lines) + "\n"


def run(config: ExperimentConfig, jobs: int = 1) -> int:
    """Execute every cell of the experiment grid; returns the process exit code.

    Per-cell failures are reported on stderr and yield exit code 1, but
    never stop the other cells.
    """
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)

    samples = {}
    preload_errors = {}
    for word, path in config.corpora.items():
        try:
            samples[word] = load_corpus(path)
        except Exception as exc:
            preload_errors[word] = f"{type(exc).__name__}: {exc}"

    tasks = []
    for word in config.corpora:
        if word not in samples:
            continue
        for set_id in config.feature_sets:
            for alg in config.algorithms:
                tasks.append(
                    _CellTask(
                        word,
                        config.corpora[word],
                        set_id,
                        alg,
                        config.trials,
                        config.seed,
                        config.stopwords_path,
                        config.em_max_iter,
                        config.em_tol,
                        config.dump_clusters,
                    )
                )

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_run_cell, tasks))
    else:
        cells = [_run_cell(task) for task in tasks]

    failed = []
    for word, err in preload_errors.items():
        failed.append((word, "*", "*", err))
    for cell in cells:
        if cell.error is not None:
            failed.append((cell.word, cell.set_id, cell.algorithm, cell.error))

    results_lines = ["word,set,algorithm,trial,seed,accuracy,n,k"]
    agg_lines = ["word,set,algorithm,trials,mean,std"]
    for cell in cells:
        if cell.error is not None:
            continue
        for rep in cell.reports:
            results_lines.append(
                f"{rep.word},{rep.feature_set},{rep.algorithm},{rep.trial},"
                f"{rep.seed},{rep.accuracy!r},{cell.n},{cell.k}"
            )
        if cell.reports:
            agg = aggregate(cell.reports)
            agg_lines.append(
                f"{cell.word},{cell.set_id},{cell.algorithm},{agg.trials},"
                f"{agg.mean!r},{agg.std!r}"
            )
    (outdir / "results.csv").write_text("\n".join(results_lines) + "\n", encoding="utf-8")
    (outdir / "aggregates.csv").write_text("\n".join(agg_lines) + "\n", encoding="utf-8")

    confusion_dir = outdir / "confusion"
    for cell in cells:
        if cell.error is not None or not cell.reports:
            continue
        confusion_dir.mkdir(exist_ok=True)
        rep = cell.reports[config.report_trial]
        text = format_confusion(rep.confusion, rep.mapping, cell.algorithm)
        name = f"{cell.word}_{cell.set_id}_{cell.algorithm}.txt"
        (confusion_dir / name).write_text(text, encoding="utf-8")

    if config.dump_clusters:
        assign_dir = outdir / "assignments"
        assign_dir.mkdir(exist_ok=True)
        for cell in cells:
            if cell.error is not None:
                continue
            for t, assignment in enumerate(cell.assignments):
                name = f"{cell.word}_{cell.set_id}_{cell.algorithm}_t{t}.txt"
                text = " ".join(str(int(c)) for c in assignment) + "\n"
                (assign_dir / name).write_text(text, encoding="utf-8")

    (outdir / "summary.txt").write_text(
        _summary_table(config, samples, cells), encoding="utf-8"
    )

    for word, set_id, alg, err in failed:
        print(f"cell ({word}, {set_id}, {alg}) failed: {err}", file=sys.stderr)
    return 1 if failed else 0
