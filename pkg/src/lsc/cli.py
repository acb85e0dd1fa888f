"""Command-line harness.

Verbs: simulate, verify, search-beyond, scenario, dump-code.
Exit codes: 0 success, 1 property violation, 2 config error,
3 search target not found.
"""

from __future__ import annotations

import argparse
import sys

from .config import ExperimentConfig, load_config
from .errors import CapacityError, ConfigError
from .harness import run_scenario, run_search_beyond, run_simulate, run_verify
from .linalg import dump_subspace
from .channel import ChannelSpec, apply_exact
from .rng import SplitMix64

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_NOT_FOUND = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsc",
        description="Layered subspace codes: simulation and verification harness",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in ("simulate", "verify", "search-beyond", "scenario", "dump-code"):
        p = sub.add_parser(verb)
        p.add_argument("--config", required=True, help="experiment config path")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--trials", type=int, default=None, help="override trial count")
        p.add_argument("--workers", type=int, default=None, help="override worker count")
        p.add_argument("--out", default=None, help="write CSV / fixture dumps here")
        p.add_argument("--dump", action="store_true", help="emit fixture dumps")
    return parser


def _apply_overrides(cfg: ExperimentConfig, args) -> None:
    if args.seed is not None:
        cfg.seed = args.seed
    if args.trials is not None:
        if args.trials < 0:
            raise ConfigError("--trials: must be non-negative")
        cfg.trials = args.trials
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError("--workers: must be at least 1")
        cfg.workers = args.workers


def _write_out(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _cmd_simulate(cfg: ExperimentConfig, args) -> int:
    result = run_simulate(cfg)
    _write_out(args.out, result.csv_text)
    print(result.summary_text(), file=sys.stderr if args.out is None else sys.stdout)
    if args.dump and result.guaranteed_failures:
        _dump_guaranteed_failures(cfg, result)
    return EXIT_VIOLATION if result.guaranteed_failures else EXIT_OK


def _dump_guaranteed_failures(cfg: ExperimentConfig, result) -> None:
    """Re-derive and dump failed guaranteed-regime trials for diagnosis."""
    code = cfg.build_code()
    seen = set()
    for record in result.records:
        if record.success or record.rho_requested is None:
            continue
        if 2 * (record.rho_requested + record.t_requested) >= code.min_distance():
            continue
        key = (record.trial, record.rho_requested, record.t_requested)
        if key in seen:
            continue
        seen.add(key)
        rng = SplitMix64(record.seed)
        word = code.encode(
            [
                [code.params.from_index(rng.randbelow(code.params.size)) for _ in range(layer.k)]
                for layer in code.layers
            ]
        )
        outcome = apply_exact(
            word.V, ChannelSpec(rho=record.rho_requested, t=record.t_requested), rng
        )
        print(f"# failed trial {record.trial} rho {record.rho_requested} t {record.t_requested}")
        print("V")
        print(dump_subspace(word.V), end="")
        print("U")
        print(dump_subspace(outcome.U), end="")


def _cmd_verify(cfg: ExperimentConfig, args) -> int:
    passed = run_verify(cfg)
    return EXIT_OK if passed else EXIT_VIOLATION


def _cmd_search(cfg: ExperimentConfig, args) -> int:
    result = run_search_beyond(cfg, progress=sys.stderr)
    text = "".join(
        result.found[target].dump() + "\n"
        for target in cfg.search_targets
        if target in result.found
    )
    _write_out(args.out, text)
    for target in cfg.search_targets:
        if target in result.found:
            inst = result.found[target]
            print(
                f"found {target}: trial {inst.trial} ds_vu {inst.ds_vu} "
                f"layer_ds {'|'.join(map(str, inst.layer_ds))}",
                file=sys.stderr,
            )
        else:
            print(
                f"not found {target} within {result.trials_used} trials",
                file=sys.stderr,
            )
    return EXIT_NOT_FOUND if result.missing else EXIT_OK


def _cmd_scenario(cfg: ExperimentConfig, args) -> int:
    result = run_scenario(cfg)
    _write_out(args.out, result.csv_text)
    stream = sys.stderr if args.out is None else sys.stdout
    for line in result.summary_lines:
        print(line, file=stream)
    return EXIT_OK


def _cmd_dump_code(cfg: ExperimentConfig, args) -> int:
    code = cfg.build_code()
    params = code.params
    print(f"field: q={params.q} m={params.m} modulus={','.join(map(str, params.modulus))}")
    print(f"layers: {len(code.layers)}  N={code.total_length}  ambient={code.ambient_dim}")
    for idx, layer in enumerate(code.layers, start=1):
        print(
            f"  layer {idx}: n={layer.n} k={layer.k} "
            f"d_R={layer.min_rank_distance} d_S={2 * layer.min_rank_distance} "
            f"offset={code.offsets[idx - 1]}"
        )
    print(f"overall minimum subspace distance: {code.min_distance()}")
    if args.dump:
        zero_messages = [[params.zero()] * layer.k for layer in code.layers]
        word = code.encode(zero_messages)
        print("zero-message codeword")
        print(dump_subspace(word.V), end="")
        for idx in range(1, code.num_layers + 1):
            print(f"component {idx} (zero message)")
            print(dump_subspace(word.components[idx - 1]), end="")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        _apply_overrides(cfg, args)
        handler = {
            "simulate": _cmd_simulate,
            "verify": _cmd_verify,
            "search-beyond": _cmd_search,
            "scenario": _cmd_scenario,
            "dump-code": _cmd_dump_code,
        }[args.verb]
        return handler(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
