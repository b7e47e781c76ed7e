"""Command-line workbench: generate datasets, solve them, evaluate answers, run benchmarks.

Exit codes: 0 ok, 2 I/O failure, 3 malformed input, 4 answer count mismatch.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path

from .domain import (CONSTELLATION_ORDER, CONSTELLATIONS, MODES, DatasetParseError, RpmTest,
                     generate_test, get_constellation, parse_jsonl)

EXIT_IO, EXIT_PARSE, EXIT_SHAPE = 2, 3, 4
TRACE_VERSION = 1
log = logging.getLogger("vsarpm")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# helpers

def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def _constellations(names) -> list[str]:
    if not names:
        return list(CONSTELLATION_ORDER)
    try:
        return [get_constellation(n).kind for n in names]
    except (KeyError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"unknown constellation: {exc}") from None


def _read_lines(path: str) -> list[str]:
    try:
        if path == "-":
            return sys.stdin.read().splitlines()
        return Path(path).read_text().splitlines()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from None


def load_dataset(path: str) -> list[RpmTest]:
    try:
        return parse_jsonl(_read_lines(path))
    except DatasetParseError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None


def load_answers(path: str) -> list[int]:
    answers = []
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        try:
            value = int(line)
        except ValueError:
            raise CliError(EXIT_PARSE, f"{path}: line {lineno}: not an integer: {line.strip()!r}") from None
        if not 1 <= value <= 8:
            raise CliError(EXIT_PARSE, f"{path}: line {lineno}: answer {value} outside 1..8")
        answers.append(value)
    return answers


def workers() -> int:
    raw = os.environ.get("NVSA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise CliError(EXIT_PARSE, f"NVSA_THREADS must be an integer, got {raw!r}") from None


def ordered_map(fn, items, n_workers: int):
    """``map`` that may run in a process pool but always returns results in input order."""
    if n_workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * n_workers))))


# --------------------------------------------------------------------------
# generate

def cmd_generate(args) -> int:
    lines = [generate_test(args.seed + i, c, args.mode).dumps()
             for c in _constellations(args.constellation) for i in range(args.n)]
    _write(args.out, "".join(line + "\n" for line in lines))
    log.info("wrote %d tests", len(lines))
    return 0


# --------------------------------------------------------------------------
# solve

@lru_cache(maxsize=4)
def _engine(name: str, dim: int, seed: int):
    if name == "exact":
        from .oracle import ExactEngine
        return ExactEngine()
    from .backend import VsaEngine
    return VsaEngine(dim, seed)


@lru_cache(maxsize=2)
def _dictionary(seed: int):
    from .codec import build_dictionary
    return build_dictionary(seed)


def perceive(test: RpmTest, perception: str, tau: float, seed: int):
    from .pmf import rpm_pmfs
    if perception == "oracle":
        return rpm_pmfs(test)
    from .codec import decode_to_scene, encode_scene
    dictionary = _dictionary(seed)
    scenes = [decode_to_scene(encode_scene(s, dictionary, test.constellation), dictionary, test.constellation, tau)
              for s in (*test.context, *test.candidates)]
    return rpm_pmfs(test, scenes=scenes)


def _solve_one(job) -> dict:
    from .backend import solve
    index, line, engine, dim, seed, perception, tau = job
    test = RpmTest.from_json(json.loads(line))
    ctx, cands = perceive(test, perception, tau, seed)
    result = solve(ctx, cands, test.constellation, _engine(engine, dim, seed))
    return {"index": index, "constellation": test.constellation.kind, "expected": test.answer_index,
            **result.to_json()}


def cmd_solve(args) -> int:
    tests = load_dataset(args.dataset)
    lines = [t.dumps() for t in tests]
    jobs = [(i + 1, line, args.engine, args.dim, args.seed, args.perception, args.tau)
            for i, line in enumerate(lines)]
    results = ordered_map(_solve_one, jobs, workers())
    _write(args.out, "".join(f"{r['answer']}\n" for r in results))
    if args.trace:
        trace = {"v": TRACE_VERSION, "engine": args.engine, "perception": args.perception, "tests": results}
        _write(args.trace, json.dumps(trace, sort_keys=True) + "\n")
    table = accuracy_table(tests, [r["answer"] for r in results])
    print(format_table([(args.engine, table)]), file=sys.stderr)
    return 0


# --------------------------------------------------------------------------
# eval

def accuracy_table(tests: list[RpmTest], answers: list[int]) -> dict:
    """Percent correct per constellation and the unweighted average over constellations present."""
    if len(tests) != len(answers):
        raise CliError(EXIT_SHAPE, f"{len(answers)} answers for {len(tests)} tests")
    hits: dict[str, list[int]] = {}
    for test, answer in zip(tests, answers):
        hits.setdefault(test.constellation.kind, []).append(int(answer == test.answer_index))
    per = {c: 100.0 * sum(h) / len(h) for c, h in hits.items()}
    ordered = {c: per[c] for c in CONSTELLATION_ORDER if c in per}
    avg = sum(ordered.values()) / len(ordered) if ordered else 0.0
    return {"avg": avg, "per_constellation": ordered, "counts": {c: len(hits[c]) for c in ordered}}


def format_table(rows: list[tuple[str, dict]]) -> str:
    labels = [CONSTELLATIONS[c].label for c in CONSTELLATION_ORDER]
    width = max([len("answers")] + [len(name) for name, _ in rows])
    head = f"{'answers':<{width}}  {'Avg':>6}" + "".join(f"  {lab:>6}" for lab in labels)
    out = [head]
    for name, table in rows:
        cells = [table["per_constellation"].get(c) for c in CONSTELLATION_ORDER]
        out.append(f"{name:<{width}}  {table['avg']:6.2f}"
                   + "".join(f"  {'-':>6}" if v is None else f"  {v:6.2f}" for v in cells))
    return "\n".join(out)


def agreement_matrix(answer_sets: list[list[int]]) -> list[list[float]]:
    n = len(answer_sets)
    return [[100.0 * sum(a == b for a, b in zip(answer_sets[i], answer_sets[j])) / max(1, len(answer_sets[i]))
             for j in range(n)] for i in range(n)]


def cmd_eval(args) -> int:
    tests = load_dataset(args.dataset)
    sets = [load_answers(p) for p in args.answers]
    tables = [(p, accuracy_table(tests, a)) for p, a in zip(args.answers, sets)]
    text = format_table(tables)
    report = {"v": TRACE_VERSION, "tests": len(tests),
              "results": [{"answers": p, **t} for p, t in tables]}
    if len(sets) > 1:
        matrix = agreement_matrix(sets)
        report["agreement"] = {"files": args.answers, "percent": matrix}
        text += "\n\nagreement (%)\n" + "\n".join(
            f"{p}: " + " ".join(f"{v:6.2f}" for v in row) for p, row in zip(args.answers, matrix))
    print(text)
    if args.out:
        _write(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


# --------------------------------------------------------------------------
# bench

def cmd_bench(args) -> int:
    from . import bench
    if args.suite == "codec":
        report = bench.codec_suite(args.reps, args.n, args.seed, args.tau)
        text = (f"encode {report['encode_median_s'] * 1e6:.1f} us, decode {report['decode_median_s'] * 1e3:.2f} ms\n"
                + "\n".join(f"k={r['k']}: recovery {r['recovery_rate']:.3f}, ghosts {r['ghost_rate']:.3f}"
                            for r in report["recovery"]))
    else:
        report = bench.backend_suite(args.reps, args.instances, args.n, args.dim, args.seed)
        d3 = report["position_distribute_three"]
        text = (f"3x3 position distribute-three (n={d3['n']}): vsa {d3['vsa_median_s'] * 1e3:.2f} ms, "
                f"exact {d3['exact_median_s'] * 1e3:.1f} ms, speedup {d3['speedup']:.0f}x\n"
                + "\n".join(f"{t['constellation']} {t['engine']}: {t['tests_per_s']:.1f} tests/s"
                            for t in report["throughput"]))
    print(text)
    if args.out:
        _write(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vsarpm", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a JSONL dataset of synthetic tests")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--constellation", action="append", help="repeatable; default is all seven")
    gen.add_argument("--n", type=_positive(int), default=10, help="tests per constellation")
    gen.add_argument("--mode", choices=MODES, default="raven")
    gen.add_argument("--out", help="output path (default stdout)")
    gen.set_defaults(func=cmd_generate)

    sol = sub.add_parser("solve", help="answer every test of a dataset")
    sol.add_argument("dataset")
    sol.add_argument("--engine", choices=("vsa", "exact"), default="vsa")
    sol.add_argument("--dim", type=_positive(int), default=1024, help="FHRR dimension of the vsa engine")
    sol.add_argument("--seed", type=int, default=0, help="codebook seed")
    sol.add_argument("--perception", choices=("oracle", "codec"), default="oracle")
    sol.add_argument("--tau", type=_positive(float), default=0.23, help="codec detection threshold")
    sol.add_argument("--trace", help="write a solve-trace JSON here")
    sol.add_argument("--out", help="answers file, one 1-based index per line (default stdout)")
    sol.set_defaults(func=cmd_solve)

    ev = sub.add_parser("eval", help="accuracy table for one or more answer files")
    ev.add_argument("dataset")
    ev.add_argument("--answers", action="append", required=True, help="repeatable; two or more add agreement")
    ev.add_argument("--out", help="write the JSON report here")
    ev.set_defaults(func=cmd_eval)

    be = sub.add_parser("bench", help="timing report")
    be.add_argument("--suite", choices=("backend", "codec"), default="backend")
    be.add_argument("--reps", type=_positive(int), default=5)
    be.add_argument("--n", type=_positive(int), default=20, help="tests (backend) or trials per k (codec)")
    be.add_argument("--instances", type=_positive(int), default=3, help="position instances timed")
    be.add_argument("--dim", type=_positive(int), default=1024)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--tau", type=_positive(float), default=0.23)
    be.add_argument("--out", help="write the JSON report here")
    be.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
