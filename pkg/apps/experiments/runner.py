import csv
import logging
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from apps.baselines.group_lasso import GroupLassoConfig, group_lasso_css
from apps.baselines.omp import block_omp_css
from apps.datagen.loaders import (
    load_dense_matrix,
    load_genotypes,
    load_grayscale,
    load_sign_matrix,
    split_windows,
)
from apps.datagen.synthetic import (
    SyntheticSpec,
    gen_coherent,
    gen_lowrank_noise,
    normalize_frobenius,
)
from apps.metrics.errors import error_report
from apps.oracle.oracle import MatrixOracle
from apps.samplers.iterative import iterative_norm_css
from apps.samplers.leverage import approx_leverage_css
from apps.samplers.norm import active_norm_css, uniform_css
from apps.samplers.structures import IterNormConfig
from utils.conf import css_setting
from utils.exceptions import ColumnSelectionError

logger = logging.getLogger(__name__)

CSV_FIELDS = [
    "algorithm",
    "alpha",
    "s",
    "k",
    "seed",
    "selection_error",
    "reconstruction_error",
    "oracle_error",
    "entries_observed",
    "status",
    "wall_time",
    "arm",
    "repeated",
]
SUMMARY_FIELDS = [
    "algorithm",
    "arm",
    "repeated",
    "alpha",
    "s",
    "k",
    "trials",
    "median_selection_error",
    "median_reconstruction_error",
    "median_oracle_error",
    "median_entries_observed",
]
SUMMARY_MARKER = "# summary"
FILE_LOADERS = {
    "dense": load_dense_matrix,
    "sign": load_sign_matrix,
    "genotype": load_genotypes,
    "image": load_grayscale,
}
TRIAL_ERRORS = (ColumnSelectionError, ValueError, np.linalg.LinAlgError)


@dataclass
class ResultRow:
    """
    Outcome of one (arm, α, trial) run.

    Numeric fields are ``None`` when the trial failed. ``arm`` is the label
    that tells apart two arms of the same algorithm; ``repeated`` is the
    number of repeated columns of a synthetic dataset.
    """

    algorithm: str
    alpha: float
    s: int
    k: int
    seed: int
    selection_error: float = None
    reconstruction_error: float = None
    oracle_error: float = None
    entries_observed: int = None
    status: str = "ok"
    wall_time: float = 0.0
    arm: str = None
    repeated: int = None

    def __post_init__(self):
        if self.arm is None:
            self.arm = self.algorithm

    @property
    def ok(self):
        return self.status == "ok"

    def as_csv(self):
        row = asdict(self)
        row["wall_time"] = f"{self.wall_time:.6f}"
        return {key: _format(value) for key, value in row.items()}


def _format(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


class DatasetFactory:
    """
    Produces the hidden matrix of each trial.

    File datasets are read once and shared by every trial; synthetic ones
    are drawn per (trial seed, rank), so all algorithms of a trial see the
    same matrix.
    """

    def __init__(self, dataset):
        self.dataset = dataset
        self._fixed = None
        if not dataset.is_synthetic:
            self._fixed = self._load()

    def _load(self):
        matrix = FILE_LOADERS[self.dataset.kind](self.dataset.path)
        if self.dataset.window_k is not None:
            windows = split_windows(
                matrix, self.dataset.window_k, self.dataset.window_eps
            )
            widest = max(windows, key=len)
            logger.info(
                f"Using window [{widest.start}, {widest.stop}) of {len(windows)}"
            )
            matrix = matrix[:, widest.start : widest.stop]
        return normalize_frobenius(matrix)

    def matrix(self, trial_seed, rank=None, repeated=None):
        if self._fixed is not None:
            return self._fixed
        dataset = self.dataset
        repeated = dataset.repeated if repeated is None else repeated
        spec = SyntheticSpec(
            n1=dataset.n1,
            n2=dataset.n2,
            k=dataset.k if rank is None else rank,
            sigma=dataset.sigma,
            repeated=repeated,
            scale=dataset.scale,
            seed=trial_seed if dataset.seed is None else dataset.seed,
        )
        if spec.repeated > 0:
            return gen_coherent(spec)
        return gen_lowrank_noise(spec)


def _expected(params, key, alpha, n1):
    value = params.get(key)
    return alpha * n1 if value is None else value


def run_algorithm(name, params, oracle, alpha):
    """
    Run one algorithm against an oracle.

    Active samplers get α·n1 as their default expected sample counts; the
    passive baselines see a Bernoulli(α) mask.

    Returns:
        tuple: (ColumnSelection, Reconstruction | None).
    """

    n1 = oracle.n1
    if name == "norm":
        return active_norm_css(
            oracle,
            params["s"],
            _expected(params, "m1", alpha, n1),
            _expected(params, "m2", alpha, n1),
            k=params.get("k"),
            with_replacement=params.get("with_replacement", False),
            index_mode=params.get("index_mode", "bernoulli"),
        )
    if name == "iter_norm":
        cfg = IterNormConfig(
            k=params["k"],
            m=_expected(params, "m", alpha, n1),
            epsilon=params.get("epsilon", 0.5),
            delta=params.get("delta", 0.5),
            final_delta=params.get("final_delta"),
            phase2=params.get("phase2", False),
            rounds=params.get("rounds"),
            batch_sizes=params.get("batch_sizes"),
            index_mode=params.get("index_mode", "bernoulli"),
        )
        picked, oversampled, reconstruction = iterative_norm_css(oracle, cfg)
        return (oversampled if cfg.phase2 else picked), reconstruction
    if name == "lev_score":
        selection = approx_leverage_css(
            oracle,
            params["k"],
            params["s"],
            _expected(params, "m", alpha, n1),
            with_replacement=params.get("with_replacement", False),
            index_mode=params.get("index_mode", "bernoulli"),
        )
        return selection, None
    if name in ("block_omp", "group_lasso"):
        mask = oracle.bernoulli_mask(alpha)
        masked = oracle.masked_view(mask)
        if name == "block_omp":
            return block_omp_css(masked, mask, params["s"]), None
        cfg = GroupLassoConfig(
            lambda_=params.get("lambda"),
            max_iters=params.get("max_iters", 5000),
            target_s=params["s"],
        )
        selection, _ = group_lasso_css(masked, mask, cfg)
        return selection, None
    if name == "uniform":
        return uniform_css(oracle, params["s"]), None
    raise ColumnSelectionError(f"unknown algorithm {name!r}")


def _row_rank(params, rank, selection_size):
    if params.get("k") is not None:
        return params["k"]
    if rank is not None:
        return rank
    return selection_size


def run_trial(config, factory, rank_index, rank, repeated_index, repeated, trial):
    """
    Run every (arm, α) pair of one trial on a shared matrix.

    Each arm gets its own oracle seeded from the trial seed and the arm's
    position, so results do not depend on which arms run alongside. The
    repeated-column axis reuses those streams, only the matrix changes.

    Returns:
        list[tuple]: ((rank_index, repeated_index, algorithm_index,
        alpha_index, trial), row) pairs.
    """

    trial_seed = config.seed_base + trial
    matrix = factory.matrix(trial_seed, rank, repeated)
    results = []
    for algorithm_index, arm in enumerate(config.algorithms):
        params = arm.resolve(rank)
        for alpha_index, alpha in enumerate(config.missing_rates):
            seed = np.random.SeedSequence(
                entropy=trial_seed,
                spawn_key=(rank_index, algorithm_index, alpha_index),
            )
            oracle = MatrixOracle(matrix, seed=seed)
            row = ResultRow(
                algorithm=arm.name,
                alpha=alpha,
                s=params.get("s", params.get("k")),
                k=params.get("k", rank),
                seed=trial_seed,
                arm=arm.label,
                repeated=repeated,
            )
            started = time.perf_counter()
            try:
                selection, reconstruction = run_algorithm(
                    arm.name, params, oracle, alpha
                )
                row.wall_time = time.perf_counter() - started
                row.s = len(selection)
                row.k = _row_rank(params, rank, len(selection))
                report = error_report(matrix, selection, row.k, reconstruction)
                row.selection_error = report.selection_error
                row.reconstruction_error = report.reconstruction_error
                row.oracle_error = report.oracle_error
                row.entries_observed = oracle.total_entries_observed
            except TRIAL_ERRORS as exc:
                row.wall_time = time.perf_counter() - started
                row.status = "failed"
                logger.error(
                    f"{arm.label} at alpha={alpha}, seed={trial_seed} failed: {exc}"
                )
            else:
                logger.info(
                    f"{arm.label} alpha={alpha} seed={trial_seed}: "
                    f"selection error {row.selection_error:.4e}, "
                    f"{row.entries_observed} entries observed"
                )
            key = (rank_index, repeated_index, algorithm_index, alpha_index, trial)
            results.append((key, row))
    return results


def run_experiment(config, jobs=None):
    """
    Execute the whole sweep of a configuration.

    Trials run concurrently on up to ``jobs`` threads. Rows come back in
    (rank, repeated, arm, α, trial) order regardless of completion order.

    Returns:
        list[ResultRow]: One row per (rank, repeated, arm, α, trial).
    """

    jobs = css_setting("DEFAULT_JOBS") if jobs is None else jobs
    factory = DatasetFactory(config.dataset)
    tasks = [
        (rank_index, rank, repeated_index, repeated, trial)
        for rank_index, rank in enumerate(config.rank_values)
        for repeated_index, repeated in enumerate(config.repeated_values)
        for trial in range(config.trials)
    ]
    logger.info(
        f"Running {len(tasks)} trials of {len(config.algorithms)} algorithms "
        f"over {len(config.missing_rates)} missing rates on {jobs} workers"
    )

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        batches = executor.map(
            lambda task: run_trial(config, factory, *task), tasks
        )
        keyed = [pair for batch in batches for pair in batch]
    keyed.sort(key=lambda pair: pair[0])
    rows = [row for _, row in keyed]

    failed = sum(1 for row in rows if not row.ok)
    if failed:
        logger.warning(f"{failed} of {len(rows)} runs failed")
    return rows


def compare_baseline_uniform(config, jobs=None):
    """Run the sweep with a uniform column sampling arm added for each s."""
    return run_experiment(config.with_uniform(), jobs=jobs)


def _median(values):
    return statistics.median(values) if values else None


def summarize(rows):
    """
    Per-(arm, repeated, α, k) medians over the successful trials.

    Groups keep the order in which they first appear. The reported s is the
    largest selection size among the successful trials.
    """

    groups = {}
    for row in rows:
        key = (row.arm, row.repeated, row.alpha, row.k)
        groups.setdefault(key, []).append(row)

    summary = []
    for (arm, repeated, alpha, k), group in groups.items():
        ok = [row for row in group if row.ok]
        reconstruction = [
            row.reconstruction_error
            for row in ok
            if row.reconstruction_error is not None
        ]
        summary.append(
            {
                "algorithm": group[0].algorithm,
                "arm": arm,
                "repeated": repeated,
                "alpha": alpha,
                "s": max((row.s for row in ok), default=None),
                "k": k,
                "trials": len(ok),
                "median_selection_error": _median(
                    [row.selection_error for row in ok]
                ),
                "median_reconstruction_error": _median(reconstruction),
                "median_oracle_error": _median([row.oracle_error for row in ok]),
                "median_entries_observed": _median(
                    [row.entries_observed for row in ok]
                ),
            }
        )
    return summary


def write_results(rows, stream=None):
    """
    Write trial rows, then a ``# summary`` line and the summary table.
    """

    stream = sys.stdout if stream is None else stream
    writer = csv.DictWriter(stream, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_csv())

    stream.write(SUMMARY_MARKER + "\n")
    writer = csv.DictWriter(stream, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
    writer.writeheader()
    for entry in summarize(rows):
        writer.writerow({key: _format(value) for key, value in entry.items()})
