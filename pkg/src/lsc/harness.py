"""Batch experiment drivers: simulate, verify, search-beyond, scenario.

CSV columns and the fixture dump layout are frozen in docs/formats.md.
Per-trial seeds are derived from (master seed, rho, t, trial index) only,
so output is byte-identical for a given config regardless of worker
count or scheduling, and scenario runs see the same channel outcomes as
plain simulation runs with the same seed.
"""

from __future__ import annotations

import multiprocessing
import sys
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence, TextIO

from .channel import ChannelSpec, apply_exact, apply_matrix
from .config import ExperimentConfig
from .errors import ConfigError, InvariantError
from .gabidulin import DecodeFailure
from .layered import STATUS_OK, LayerDecodeReport, LayeredCode
from .lifted import subspace_decode
from .linalg import Subspace, dump_subspace, subspace_distance
from .properties import (
    PROPERTY_MANIFEST,
    PropertyResult,
    SUITES,
    VerifyContext,
)
from .rng import SplitMix64, derive_seed

CSV_COLUMNS = (
    "trial",
    "seed",
    "algorithm",
    "rho_requested",
    "t_requested",
    "rho_realized",
    "t_realized",
    "dim_u",
    "ds_vu",
    "layer_ds",
    "layer_status",
    "success",
    "sweeps",
    "ds_chain",
)

SCENARIO_MULTICAST_COLUMNS = (
    "layer_count",
    "rate_symbols",
    "algorithm",
    "trials",
    "successes",
)

SCENARIO_UNICAST_COLUMNS = (
    "trial",
    "seed",
    "rho_requested",
    "t_requested",
    "layer",
    "success",
)


@dataclass(frozen=True)
class TrialRecord:
    """One CSV row: a single algorithm's outcome on a single trial."""

    trial: int
    seed: int
    algorithm: str
    rho_requested: int | None
    t_requested: int | None
    rho_realized: int
    t_realized: int
    dim_u: int
    ds_vu: int
    layer_ds: tuple[int, ...]
    layer_status: tuple[str, ...]
    success: bool
    sweeps: int
    ds_chain: tuple[int, ...]

    def csv_row(self) -> tuple[str, ...]:
        return (
            str(self.trial),
            str(self.seed),
            self.algorithm,
            "" if self.rho_requested is None else str(self.rho_requested),
            "" if self.t_requested is None else str(self.t_requested),
            str(self.rho_realized),
            str(self.t_realized),
            str(self.dim_u),
            str(self.ds_vu),
            "|".join(map(str, self.layer_ds)),
            "|".join(self.layer_status),
            "1" if self.success else "0",
            str(self.sweeps),
            "|".join(map(str, self.ds_chain)),
        )


def _decode_with(code: LayeredCode, algorithm: str, received: Subspace, max_sweeps: int) -> LayerDecodeReport:
    if algorithm == "alg1":
        return code.decode_alg1(received)
    if algorithm == "alg2":
        return code.decode_alg2(received)
    if algorithm == "alg2-iterative":
        return code.decode_alg2(received, iterative=True, max_sweeps=max_sweeps)
    raise InvariantError(f"unknown algorithm {algorithm!r}")


def _random_messages(code: LayeredCode, rng: SplitMix64):
    size = code.params.size
    return [
        [code.params.from_index(rng.randbelow(size)) for _ in range(layer.k)]
        for layer in code.layers
    ]


def run_trial(
    code: LayeredCode,
    master_seed: int,
    trial: int,
    rho: int | None,
    t: int | None,
    algorithms: Sequence[str],
    max_sweeps: int,
    channel_mode: str = "exact",
    collected: int | None = None,
    error_packets: int = 0,
) -> list[TrialRecord]:
    """One encode -> channel -> decode cycle, one record per algorithm."""
    if channel_mode == "exact":
        seed = derive_seed(master_seed, rho, t, trial)
    else:
        seed = derive_seed(master_seed, collected or 0, error_packets, trial)
    rng = SplitMix64(seed)
    word = code.encode(_random_messages(code, rng))
    if channel_mode == "exact":
        outcome = apply_exact(word.V, ChannelSpec(rho=rho, t=t), rng)
    else:
        outcome = apply_matrix(word.V, collected, error_packets, rng)
    ds = subspace_distance(word.V, outcome.U)
    layer_ds = tuple(
        subspace_distance(
            word.components[layer - 1],
            code.extract_component(outcome.U, layer, strip=False),
        )
        for layer in range(1, code.num_layers + 1)
    )
    records = []
    for algorithm in algorithms:
        report = _decode_with(code, algorithm, outcome.U, max_sweeps)
        chain: tuple[int, ...] = ()
        if report.accumulated:
            chain = tuple(
                subspace_distance(word.V, s) for s in report.accumulated
            ) + (subspace_distance(word.V, report.recombined),)
        records.append(
            TrialRecord(
                trial=trial,
                seed=seed,
                algorithm=algorithm,
                rho_requested=rho,
                t_requested=t,
                rho_realized=outcome.realized_rho,
                t_realized=outcome.realized_t,
                dim_u=outcome.U.dim,
                ds_vu=ds,
                layer_ds=layer_ds,
                layer_status=tuple(r.status for r in report.layers),
                success=report.recombined == word.V,
                sweeps=report.sweeps,
                ds_chain=chain,
            )
        )
    return records


# --- worker pool plumbing (per-trial seeds make scheduling irrelevant) ---

_WORKER_CODE: LayeredCode | None = None


def _worker_init(q: int, m: int, modulus: tuple[int, ...], shape: tuple[tuple[int, int], ...]) -> None:
    global _WORKER_CODE
    from .field import FieldParams

    _WORKER_CODE = LayeredCode.standard(FieldParams(q, m, modulus), shape)


def _worker_trial(args) -> list[TrialRecord]:
    (master_seed, trial, rho, t, algorithms, max_sweeps, mode, collected, errors) = args
    return run_trial(
        _WORKER_CODE, master_seed, trial, rho, t, algorithms, max_sweeps, mode, collected, errors
    )


def _run_grid(
    cfg: ExperimentConfig, code: LayeredCode, grid: Sequence[tuple[int | None, int | None]]
) -> list[TrialRecord]:
    algorithms = cfg.algorithms()
    jobs = [
        (cfg.seed, trial, rho, t, algorithms, cfg.max_sweeps, cfg.channel_mode,
         cfg.collected, cfg.error_packets)
        for rho, t in grid
        for trial in range(cfg.trials)
    ]
    if cfg.workers > 1 and len(jobs) > 1:
        params = code.params
        shape = tuple((layer.n, layer.k) for layer in code.layers)
        with multiprocessing.Pool(
            processes=cfg.workers,
            initializer=_worker_init,
            initargs=(params.q, params.m, params.modulus, shape),
        ) as pool:
            chunks = pool.map(_worker_trial, jobs, chunksize=max(1, len(jobs) // (cfg.workers * 8)))
    else:
        chunks = [
            run_trial(code, cfg.seed, trial, rho, t, algorithms, cfg.max_sweeps,
                      cfg.channel_mode, cfg.collected, cfg.error_packets)
            for (_, trial, rho, t, *_rest) in jobs
        ]
    return [record for chunk in chunks for record in chunk]


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


@dataclass
class SummaryRow:
    rho: int | None
    t: int | None
    algorithm: str
    trials: int
    successes: int
    guaranteed: bool

    @property
    def rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


@dataclass
class SimulateResult:
    records: list[TrialRecord]
    csv_text: str
    summary: list[SummaryRow]
    guaranteed_failures: int

    def summary_text(self) -> str:
        lines = ["rho  t    algorithm        trials  successes  rate      regime"]
        for row in self.summary:
            rho = "-" if row.rho is None else str(row.rho)
            t = "-" if row.t is None else str(row.t)
            regime = "guaranteed" if row.guaranteed else "beyond"
            lines.append(
                f"{rho:<4s} {t:<4s} {row.algorithm:<16s} {row.trials:<7d} "
                f"{row.successes:<10d} {row.rate:<9.6f} {regime}"
            )
        lines.append(f"guaranteed-regime failures: {self.guaranteed_failures}")
        return "\n".join(lines)


def summarize(records: Sequence[TrialRecord], min_distance: int, channel_mode: str) -> tuple[list[SummaryRow], int]:
    """Aggregate the emitted rows; this is the only accounting path."""
    buckets: dict[tuple, list[TrialRecord]] = {}
    for record in records:
        buckets.setdefault((record.rho_requested, record.t_requested, record.algorithm), []).append(record)
    summary = []
    guaranteed_failures = 0
    for (rho, t, algorithm) in sorted(
        buckets, key=lambda k: (k[0] is None, k[0], k[1] is None, k[1], k[2])
    ):
        rows = buckets[(rho, t, algorithm)]
        successes = sum(1 for r in rows if r.success)
        guaranteed = (
            channel_mode == "exact"
            and rho is not None
            and t is not None
            and 2 * (rho + t) < min_distance
        )
        if guaranteed:
            guaranteed_failures += len(rows) - successes
        summary.append(SummaryRow(rho, t, algorithm, len(rows), successes, guaranteed))
    return summary, guaranteed_failures


def run_simulate(cfg: ExperimentConfig) -> SimulateResult:
    """Monte Carlo decoding statistics over the configured channel grid."""
    code = cfg.build_code()
    if cfg.channel_mode == "exact":
        grid: Sequence[tuple[int | None, int | None]] = cfg.grid()
    else:
        grid = ((None, None),)
    records = _run_grid(cfg, code, grid)
    csv_text = render_csv(CSV_COLUMNS, (r.csv_row() for r in records))
    summary, failures = summarize(records, code.min_distance(), cfg.channel_mode)
    return SimulateResult(records, csv_text, summary, failures)


# --- verify ---


def _harness_suite(ctx: VerifyContext) -> list[PropertyResult]:
    """CSV determinism and summary/row consistency on a small config."""
    cfg = ExperimentConfig(source="<verify>")
    params = ctx.params
    cfg.q, cfg.m, cfg.modulus = params.q, params.m, params.modulus
    cfg.layers = tuple((layer.n, layer.k) for layer in ctx.code.layers)
    cfg.rho_values = (0, 1)
    cfg.t_values = (0, 1)
    cfg.trials = 5
    cfg.seed = ctx.seed
    first = run_simulate(cfg)
    second = run_simulate(cfg)
    det_viol = 0 if first.csv_text == second.csv_text else 1
    det = PropertyResult("harness.csv_deterministic", 1, det_viol)

    recount: dict[tuple, int] = {}
    for line in first.csv_text.strip().splitlines()[1:]:
        cells = line.split(",")
        key = (cells[3], cells[4], cells[2])
        recount[key] = recount.get(key, 0) + int(cells[11])
    cons_viol = 0
    for row in first.summary:
        key = (str(row.rho), str(row.t), row.algorithm)
        if recount.get(key, 0) != row.successes:
            cons_viol += 1
    cons = PropertyResult("harness.summary_consistency", len(first.summary), cons_viol)
    return [det, cons]


def run_verify(cfg: ExperimentConfig, out: TextIO = sys.stdout) -> bool:
    """Execute every property suite; print one line per property id."""
    ctx = VerifyContext(
        params=cfg.field_params(),
        code=cfg.build_code(),
        seed=cfg.seed,
        counts=dict(cfg.verify_counts),
    )
    results: list[PropertyResult] = []
    for suite in SUITES:
        results.extend(suite(ctx))
    results.extend(_harness_suite(ctx))
    by_name = {r.name: r for r in results}
    manifest_names = [name for name, _ in PROPERTY_MANIFEST]
    missing = [name for name in manifest_names if name not in by_name]
    extra = [r.name for r in results if r.name not in set(manifest_names)]
    if missing or extra:
        raise InvariantError(
            f"property manifest drift: missing={missing}, unexpected={extra}"
        )
    passed = True
    for name in manifest_names:
        result = by_name[name]
        print(result.line(), file=out)
        passed = passed and result.passed
    print(("all properties hold" if passed else "property violations found"), file=out)
    return passed


# --- search for beyond-capability instances ---


@dataclass
class SearchInstance:
    target: str
    trial: int
    seed: int
    rho: int
    t: int
    ds_vu: int
    layer_ds: tuple[int, ...]
    alg1_status: tuple[str, ...]
    alg2_status: tuple[str, ...]
    retry_ds: tuple[tuple[int, int], ...]
    V: Subspace
    U: Subspace

    def dump(self) -> str:
        retry = "|".join(f"{layer}:{d}" for layer, d in self.retry_ds) or "-"
        lines = [
            f"# instance {self.target}",
            f"# trial {self.trial} seed {self.seed} rho {self.rho} t {self.t}",
            (
                f"# ds_vu {self.ds_vu} layer_ds {'|'.join(map(str, self.layer_ds))} "
                f"alg1 {'|'.join(self.alg1_status)} alg2 {'|'.join(self.alg2_status)} "
                f"retry_ds {retry}"
            ),
            "V",
            dump_subspace(self.V).rstrip("\n"),
            "U",
            dump_subspace(self.U).rstrip("\n"),
        ]
        return "\n".join(lines) + "\n"


@dataclass
class SearchResult:
    found: dict[str, SearchInstance]
    missing: tuple[str, ...]
    trials_used: int


def _retry_distances(code: LayeredCode, word, alg1_report, alg2_report) -> tuple[tuple[int, int], ...]:
    """d_S(V_l, extracted) at the successful SIC attempt, for layers alg1 missed."""
    out = []
    for layer_result in alg2_report.layers:
        layer = layer_result.layer
        if layer_result.status != STATUS_OK:
            continue
        if alg1_report.layers[layer - 1].status == STATUS_OK:
            continue
        last_attempt = max(
            i for i, l in enumerate(alg2_report.attempt_layers) if l == layer
        )
        before = alg2_report.accumulated[last_attempt]
        extracted = code.extract_component(before, layer, strip=False)
        out.append((layer, subspace_distance(word.components[layer - 1], extracted)))
    return tuple(out)


def _matches_profile(profile, ds, layer_ds, retry_ds) -> bool:
    if profile is None:
        return True
    if profile.ds is not None and ds != profile.ds:
        return False
    if profile.layer_ds is not None and layer_ds != profile.layer_ds:
        return False
    if profile.retry_ds is not None:
        if not retry_ds or any(d != profile.retry_ds for _, d in retry_ds):
            return False
    return True


def run_search_beyond(cfg: ExperimentConfig, progress: TextIO | None = None) -> SearchResult:
    """Randomized search for instructive beyond-capability instances.

    Targets: ``alg1-beyond`` (overall distance beyond half the minimum yet
    parallel decoding fully succeeds), ``alg2-rescues`` (parallel decoding
    fails a layer but SIC recovers everything), ``alg1-only`` (parallel
    decoding succeeds while SIC loses a layer).
    """
    code = cfg.build_code()
    min_distance = code.min_distance()
    grid = [
        (rho, t)
        for rho, t in cfg.grid()
        if 2 * (rho + t) >= min_distance
    ]
    if not grid:
        raise ConfigError(
            f"{cfg.where('channel', 'rho')}: search needs grid points with "
            f"2(rho+t) >= {min_distance}; none configured"
        )
    wanted = list(cfg.search_targets)
    found: dict[str, SearchInstance] = {}
    trial = 0
    while trial < cfg.search_budget and len(found) < len(wanted):
        rho, t = grid[trial % len(grid)]
        seed = derive_seed(cfg.seed, rho, t, trial)
        rng = SplitMix64(seed)
        word = code.encode(_random_messages(code, rng))
        outcome = apply_exact(word.V, ChannelSpec(rho=rho, t=t), rng)
        ds = subspace_distance(word.V, outcome.U)
        r1 = code.decode_alg1(outcome.U)
        r2 = code.decode_alg2(outcome.U, max_sweeps=cfg.max_sweeps)
        alg1_full = r1.all_ok and r1.recombined == word.V
        alg2_full = r2.all_ok and r2.recombined == word.V
        classification = {
            "alg1-beyond": 2 * ds >= min_distance and alg1_full,
            "alg2-rescues": (not r1.all_ok) and alg2_full,
            "alg1-only": alg1_full and not r2.all_ok,
        }
        if any(classification[t_] for t_ in wanted if t_ not in found):
            layer_ds = tuple(
                subspace_distance(
                    word.components[layer - 1],
                    code.extract_component(outcome.U, layer, strip=False),
                )
                for layer in range(1, code.num_layers + 1)
            )
            retry = _retry_distances(code, word, r1, r2)
            for target in wanted:
                if target in found or not classification[target]:
                    continue
                if not _matches_profile(
                    cfg.search_profiles.get(target), ds, layer_ds, retry
                ):
                    continue
                found[target] = SearchInstance(
                    target=target,
                    trial=trial,
                    seed=seed,
                    rho=rho,
                    t=t,
                    ds_vu=ds,
                    layer_ds=layer_ds,
                    alg1_status=tuple(r.status for r in r1.layers),
                    alg2_status=tuple(r.status for r in r2.layers),
                    retry_ds=retry,
                    V=word.V,
                    U=outcome.U,
                )
        trial += 1
        if progress is not None and trial % cfg.search_report_every == 0:
            print(
                f"searched {trial} trials; found {sorted(found)}",
                file=progress,
            )
    missing = tuple(t_ for t_ in wanted if t_ not in found)
    return SearchResult(found=found, missing=missing, trials_used=trial)


# --- scenario modes ---


@dataclass
class ScenarioResult:
    csv_text: str
    summary_lines: list[str]
    records: list[TrialRecord] = dc_field(default_factory=list)


def _single_grid_point(cfg: ExperimentConfig) -> tuple[int, int]:
    grid = cfg.grid()
    if len(grid) != 1:
        raise ConfigError(
            f"{cfg.where('channel', 'rho')}: scenario modes use a fixed channel; "
            f"configure exactly one rho and one t value"
        )
    return grid[0]


def run_scenario(cfg: ExperimentConfig) -> ScenarioResult:
    if cfg.scenario_mode == "multicast":
        return _scenario_multicast(cfg)
    if cfg.scenario_mode == "multi-source":
        return _scenario_multi_source(cfg)
    return _scenario_unicast(cfg)


def _scenario_multicast(cfg: ExperimentConfig) -> ScenarioResult:
    """Adaptive layer count: rate vs. success under a fixed channel."""
    rho, t = _single_grid_point(cfg)
    params = cfg.field_params()
    rows = []
    summary = ["multicast sweep (adaptive layer count)"]
    for count in range(1, len(cfg.layers) + 1):
        shape = cfg.layers[:count]
        code = LayeredCode.standard(params, shape)
        if rho > code.total_length or t > params.m:
            summary.append(f"layers={count}: skipped (channel outside bounds)")
            continue
        rate = sum(k for _, k in shape) * params.m
        for algorithm in cfg.algorithms():
            successes = 0
            for trial in range(cfg.trials):
                seed = derive_seed(cfg.seed, count, rho, t, trial)
                rng = SplitMix64(seed)
                word = code.encode(_random_messages(code, rng))
                outcome = apply_exact(word.V, ChannelSpec(rho=rho, t=t), rng)
                report = _decode_with(code, algorithm, outcome.U, cfg.max_sweeps)
                if report.recombined == word.V:
                    successes += 1
            rows.append(
                (str(count), str(rate), algorithm, str(cfg.trials), str(successes))
            )
            summary.append(
                f"layers={count} rate={rate} {algorithm}: {successes}/{cfg.trials}"
            )
    return ScenarioResult(render_csv(SCENARIO_MULTICAST_COLUMNS, rows), summary)


def _scenario_multi_source(cfg: ExperimentConfig) -> ScenarioResult:
    """Independent per-layer sources; report all-layer recovery statistics."""
    rho, t = _single_grid_point(cfg)
    code = cfg.build_code()
    records = _run_grid(cfg, code, [(rho, t)])
    csv_text = render_csv(CSV_COLUMNS, (r.csv_row() for r in records))
    summary = ["multi-source multicast"]
    for algorithm in cfg.algorithms():
        rows = [r for r in records if r.algorithm == algorithm]
        all_ok = sum(1 for r in rows if r.success)
        summary.append(f"{algorithm}: all layers recovered {all_ok}/{len(rows)}")
        for layer in range(1, code.num_layers + 1):
            ok = sum(1 for r in rows if r.layer_status[layer - 1] == STATUS_OK)
            summary.append(f"  layer {layer}: {ok}/{len(rows)}")
    return ScenarioResult(csv_text, summary, records)


def _scenario_unicast(cfg: ExperimentConfig) -> ScenarioResult:
    """Receiver wants one layer: extract it and run only that decoder."""
    rho, t = _single_grid_point(cfg)
    code = cfg.build_code()
    layer = cfg.unicast_layer
    lifted = code.component_lifted(layer)
    rows = []
    successes = 0
    for trial in range(cfg.trials):
        seed = derive_seed(cfg.seed, rho, t, trial)
        rng = SplitMix64(seed)
        word = code.encode(_random_messages(code, rng))
        outcome = apply_exact(word.V, ChannelSpec(rho=rho, t=t), rng)
        extracted = code.extract_component(outcome.U, layer)
        result = subspace_decode(lifted, extracted)
        ok = (
            not isinstance(result, DecodeFailure)
            and result.matrix == word.component_matrices[layer - 1]
        )
        successes += ok
        rows.append(
            (str(trial), str(seed), str(rho), str(t), str(layer), "1" if ok else "0")
        )
    summary = [
        f"unicast layer {layer}: {successes}/{cfg.trials} recovered",
    ]
    return ScenarioResult(render_csv(SCENARIO_UNICAST_COLUMNS, rows), summary)
