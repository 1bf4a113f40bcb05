"""Command-line interface.

Subcommands:

- ``compute``: evaluate an experiment file (threshold probability, full
  click distribution, or photon-number probability).
- ``validate``: schema and physicality checks for an experiment file.
- ``suite``: run the built-in golden checks with pass/fail reporting.
- ``tvd``: exact-versus-approximate threshold statistics experiment,
  emitting per-sample total variation distances as CSV.
- ``matfn``: evaluate one matrix function on a JSON payload from stdin
  (the surface consumed by foreign-language bindings).

Exit codes: 0 success, 1 suite-check failure, 2 malformed input file or
payload, 3 invalid physics (bad channel, unphysical state, pattern
mismatch), 4 size cap exceeded.

JSON conventions: complex numbers are two-element arrays [re, im];
matrices are row-major nested arrays; plain numbers are accepted
wherever a real value is meant.  CSV output is UTF-8 with a header row
and 17-significant-digit floats.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

import multiprocessing

import numpy as np

from . import __version__, fock, gaussian, linalg, matfunc, oracles
from .errors import (
    CapExceeded,
    ClickStatsError,
    InvalidChannel,
    InvalidInput,
    SpecFormatError,
)

TVD_MAX_MODES = 10
TVD_MAX_PHOTONS = 4
DEFAULT_SEED = 2024


# ---------------------------------------------------------------------------
# JSON value parsing and formatting


def parse_complex(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        return complex(value[0], value[1])
    raise SpecFormatError(f"{where}: expected a number or [re, im] pair, got {value!r}")


def parse_matrix(value: Any, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise SpecFormatError(f"{where}: expected a nested array of rows")
    width = len(value[0])
    if width == 0 or any(len(r) != width for r in value):
        raise SpecFormatError(f"{where}: rows must be nonempty and equal length")
    out = np.empty((len(value), width), dtype=np.complex128)
    for i, row in enumerate(value):
        for j, entry in enumerate(row):
            out[i, j] = parse_complex(entry, f"{where}[{i}][{j}]")
    return out


def parse_vector(value: Any, where: str) -> np.ndarray:
    if not isinstance(value, list):
        raise SpecFormatError(f"{where}: expected an array")
    return np.array([parse_complex(v, f"{where}[{i}]") for i, v in enumerate(value)],
                    dtype=np.complex128)


def parse_int_list(value: Any, where: str) -> list[int]:
    if not isinstance(value, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in value
    ):
        raise SpecFormatError(f"{where}: expected an array of integers")
    return list(value)


def format_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# Experiment files


@dataclass(frozen=True)
class ExperimentSpec:
    """Parsed form of an experiment JSON file."""

    kind: str
    modes: int
    channel: Any
    input: Any
    outcome: tuple[int, ...] | None
    query: str


_QUERIES = ("probability", "distribution", "photon_number")


def parse_experiment(doc: Any) -> ExperimentSpec:
    if not isinstance(doc, dict):
        raise SpecFormatError("experiment file must hold a JSON object")
    unknown = set(doc) - {"kind", "modes", "channel", "input", "outcome", "query"}
    if unknown:
        raise SpecFormatError(f"unknown fields: {sorted(unknown)}")
    kind = doc.get("kind")
    if kind not in ("fock", "gaussian"):
        raise SpecFormatError(f"kind must be 'fock' or 'gaussian', got {kind!r}")
    modes = doc.get("modes")
    if not isinstance(modes, int) or isinstance(modes, bool) or modes < 1:
        raise SpecFormatError(f"modes must be a positive integer, got {modes!r}")
    query = doc.get("query", "probability")
    if query not in _QUERIES:
        raise SpecFormatError(f"query must be one of {_QUERIES}, got {query!r}")
    outcome = doc.get("outcome")
    if outcome is not None:
        outcome = tuple(parse_int_list(outcome, "outcome"))
    if query in ("probability", "photon_number") and outcome is None:
        raise SpecFormatError(f"query '{query}' requires an outcome")
    if "input" not in doc:
        raise SpecFormatError("missing field: input")
    if kind == "fock" and "channel" not in doc:
        raise SpecFormatError("fock experiments require a channel")
    return ExperimentSpec(
        kind=kind,
        modes=modes,
        channel=doc.get("channel"),
        input=doc["input"],
        outcome=outcome,
        query=query,
    )


def _fourier_matrix(M: int) -> np.ndarray:
    j = np.arange(M)
    return np.exp(2j * np.pi * np.outer(j, j) / M) / math.sqrt(M)


def _channel_op_matrix(op: Mapping[str, Any], modes: int, where: str) -> np.ndarray:
    if not isinstance(op, dict) or "op" not in op:
        raise SpecFormatError(f"{where}: each channel op needs an 'op' field")
    name = op["op"]
    if name == "unitary":
        U = parse_matrix(op.get("matrix"), f"{where}.matrix")
        if U.shape != (modes, modes):
            raise SpecFormatError(f"{where}: unitary must be {modes}x{modes}")
        return U
    if name == "fourier":
        return _fourier_matrix(modes)
    if name == "beamsplitter":
        pair = parse_int_list(op.get("modes"), f"{where}.modes")
        if len(pair) != 2 or not all(0 <= k < modes for k in pair) or pair[0] == pair[1]:
            raise SpecFormatError(f"{where}: beamsplitter needs two distinct modes in range")
        T = np.eye(modes, dtype=np.complex128)
        a, b = pair
        s = 1.0 / math.sqrt(2.0)
        T[a, a], T[a, b], T[b, a], T[b, b] = s, s, s, -s
        return T
    if name == "loss":
        eta = op.get("eta")
        if not isinstance(eta, (int, float)) or isinstance(eta, bool):
            raise SpecFormatError(f"{where}: loss needs a numeric eta")
        if not 0.0 <= eta <= 1.0:
            raise InvalidChannel(f"loss transmission must lie in [0, 1], got {eta}")
        root = math.sqrt(eta)
        if "mode" in op:
            mode = op["mode"]
            if not isinstance(mode, int) or not 0 <= mode < modes:
                raise SpecFormatError(f"{where}: loss mode out of range")
            T = np.eye(modes, dtype=np.complex128)
            T[mode, mode] = root
            return T
        return root * np.eye(modes, dtype=np.complex128)
    raise SpecFormatError(f"{where}: unknown channel op {name!r}")


def resolve_channel(channel: Any, modes: int) -> np.ndarray:
    """Build the transmission matrix from a matrix or op-list channel spec.

    Ops are listed in application order, so the total matrix is the
    reversed product of the individual op matrices.
    """
    if not isinstance(channel, dict):
        raise SpecFormatError("channel must be an object with 'matrix' or 'ops'")
    if ("matrix" in channel) == ("ops" in channel):
        raise SpecFormatError("channel needs exactly one of 'matrix' or 'ops'")
    if "matrix" in channel:
        T = parse_matrix(channel["matrix"], "channel.matrix")
        if T.shape[1] != modes:
            raise SpecFormatError(
                f"channel.matrix has {T.shape[1]} input columns, expected {modes}")
        return T
    ops = channel["ops"]
    if not isinstance(ops, list) or not ops:
        raise SpecFormatError("channel.ops must be a nonempty array")
    T = np.eye(modes, dtype=np.complex128)
    for k, op in enumerate(ops):
        T = _channel_op_matrix(op, modes, f"channel.ops[{k}]") @ T
    return T


def build_fock_experiment(spec: ExperimentSpec) -> fock.FockExperiment:
    if not isinstance(spec.input, dict) or "occupation" not in spec.input:
        raise SpecFormatError("fock input must be {'occupation': [...]}")
    n = parse_int_list(spec.input["occupation"], "input.occupation")
    if len(n) != spec.modes:
        raise SpecFormatError(f"input.occupation has length {len(n)}, expected {spec.modes}")
    T = resolve_channel(spec.channel, spec.modes)
    return fock.FockExperiment(T, tuple(n))


def build_gaussian_state(spec: ExperimentSpec) -> gaussian.GaussianState:
    if not isinstance(spec.input, dict) or "ops" not in spec.input:
        raise SpecFormatError("gaussian input must be {'ops': [...]}")
    ops = spec.input["ops"]
    if not isinstance(ops, list):
        raise SpecFormatError("input.ops must be an array")
    state = gaussian.vacuum_state(spec.modes)
    for k, op in enumerate(ops):
        where = f"input.ops[{k}]"
        if not isinstance(op, dict) or "op" not in op:
            raise SpecFormatError(f"{where}: each input op needs an 'op' field")
        name = op["op"]
        if name == "tmsv":
            pair = parse_int_list(op.get("modes"), f"{where}.modes")
            if len(pair) != 2:
                raise SpecFormatError(f"{where}: tmsv needs two modes")
            t = op.get("t")
            if not isinstance(t, (int, float)) or isinstance(t, bool):
                raise SpecFormatError(f"{where}: tmsv needs a numeric t")
            state = gaussian.two_mode_squeezed(state, pair[0], pair[1], float(t))
        elif name == "squeeze":
            mode, r = op.get("mode"), op.get("r")
            if not isinstance(mode, int) or not isinstance(r, (int, float)) or isinstance(r, bool):
                raise SpecFormatError(f"{where}: squeeze needs integer mode and numeric r")
            state = gaussian.single_mode_squeezed(state, mode, float(r))
        elif name == "displace":
            mode = op.get("mode")
            if not isinstance(mode, int):
                raise SpecFormatError(f"{where}: displace needs an integer mode")
            beta = parse_complex(op.get("beta"), f"{where}.beta")
            state = gaussian.displace(state, mode, beta)
        else:
            raise SpecFormatError(f"{where}: unknown input op {name!r}")
    if spec.channel is not None:
        state = gaussian.apply_channel(state, resolve_channel(spec.channel, spec.modes))
    return state


# ---------------------------------------------------------------------------
# Output helpers


def _write_text(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_text(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)


def _csv_text(fieldnames: Sequence[str], rows: Sequence[Mapping[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        formatted = {}
        for key in fieldnames:
            value = row.get(key, "")
            if isinstance(value, float):
                value = _fmt17(value)
            formatted[key] = value
        writer.writerow(formatted)
    return buf.getvalue()


def _bits_key(pattern: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in pattern)


# ---------------------------------------------------------------------------
# compute / validate


def _compute_result(spec: ExperimentSpec, threads: int) -> dict[str, Any]:
    result: dict[str, Any] = {"kind": spec.kind, "query": spec.query}
    if spec.kind == "fock":
        exp = build_fock_experiment(spec)
        if spec.query == "probability":
            res = fock.threshold_prob_fock_detailed(exp, spec.outcome)
            result["outcome"] = list(spec.outcome)
            result["value"] = res.value
            result["diagnostics"] = {"max_term": res.max_term, "terms": res.terms}
        elif spec.query == "distribution":
            dist = fock.fock_distribution(exp)
            result["values"] = {_bits_key(d): p for d, p in dist.items()}
        else:
            if not exp.unitary:
                raise InvalidChannel(
                    "photon_number queries on fock experiments need a unitary channel; "
                    "use kind 'gaussian' or a threshold query for lossy channels")
            amp = fock.fock_amplitude(exp.T, spec.outcome, exp.n)
            result["outcome"] = list(spec.outcome)
            result["value"] = abs(amp) ** 2
            result["diagnostics"] = {"amplitude": format_complex(amp)}
    else:
        state = build_gaussian_state(spec)
        if spec.query == "probability":
            res = gaussian.threshold_prob_gaussian_detailed(
                state, spec.outcome, thread_hint=max(1, threads))
            clicked = [i for i, bit in enumerate(spec.outcome) if bit]
            result["outcome"] = list(spec.outcome)
            result["value"] = res.value
            result["diagnostics"] = {
                "max_term": res.max_term,
                "terms": res.terms,
                "index_set": linalg.mode_pair_indices(clicked, state.M),
            }
        elif spec.query == "distribution":
            dist = gaussian.gaussian_distribution(state)
            result["values"] = {_bits_key(d): p for d, p in dist.items()}
        else:
            result["outcome"] = list(spec.outcome)
            result["value"] = gaussian.photon_number_prob(state, spec.outcome)
            result["diagnostics"] = {}
    return result


def _load_experiment(path: str) -> ExperimentSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path} is not valid JSON: {exc}") from exc
    return parse_experiment(doc)


def cmd_compute(args: argparse.Namespace) -> int:
    spec = _load_experiment(args.spec)
    result = _compute_result(spec, args.threads)
    result["seed"] = args.seed
    if args.format == "json":
        _write_text(_json_text(result), args.output)
    else:
        if "values" in result:
            rows = [{"outcome": key, "probability": p} for key, p in result["values"].items()]
            _write_text(_csv_text(("outcome", "probability"), rows), args.output)
        else:
            diag = result.get("diagnostics", {})
            row = {
                "query": result["query"],
                "outcome": ",".join(str(x) for x in result["outcome"]),
                "value": result["value"],
                "max_term": diag.get("max_term", ""),
                "terms": diag.get("terms", ""),
            }
            _write_text(_csv_text(("query", "outcome", "value", "max_term", "terms"), [row]),
                        args.output)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    spec = _load_experiment(args.spec)
    tol = args.tolerance
    if spec.kind == "fock":
        exp = build_fock_experiment(spec)
        if tol is not None:
            linalg.check_channel(exp.T, tol_sv=tol)
    else:
        state = build_gaussian_state(spec)
        if tol is not None:
            linalg.check_hermitian(state.sigma, tol=tol, name="sigma")
    if spec.outcome is not None and len(spec.outcome) != spec.modes:
        raise SpecFormatError(
            f"outcome has length {len(spec.outcome)}, expected {spec.modes}")
    print("ok")
    return 0


# ---------------------------------------------------------------------------
# golden suite


@dataclass
class CheckResult:
    name: str
    passed: bool
    deviation: float
    detail: str


Injection = Mapping[str, Callable[[float], float]]


def _apply_inject(inject: Injection | None, name: str, value: float) -> float:
    if inject and name in inject:
        return inject[name](value)
    return value


_HOM = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


def run_golden_suite(*, inject: Injection | None = None) -> list[CheckResult]:
    """Run the eight built-in checks and report deviations.

    `inject` maps check names to a transform applied to every computed
    probability of that check before comparison; the test suite uses it
    to prove the harness notices broken values.
    """
    checks: list[CheckResult] = []

    def run(name: str, tol: float, pairs: list[tuple[float, float]], detail: str) -> None:
        dev = 0.0
        for got, want in pairs:
            got = _apply_inject(inject, name, got)
            scale = max(1.0, abs(want))
            dev = max(dev, abs(got - want) / scale)
        checks.append(CheckResult(name, dev < tol, dev, detail))

    # two photons meeting at a balanced beamsplitter never come out separately
    exp_hom = fock.FockExperiment(_HOM, (1, 1))
    run("hom_probabilities", 1e-12, [
        (fock.threshold_prob_fock(exp_hom, (1, 1)), 0.0),
        (fock.threshold_prob_fock(exp_hom, (1, 0)), 0.5),
        (fock.threshold_prob_fock(exp_hom, (0, 1)), 0.5),
        (fock.threshold_prob_fock(exp_hom, (0, 0)), 0.0),
    ], "balanced beamsplitter, one photon per input")

    run("hom_marginals", 1e-12, [
        (fock.marginal_threshold_prob_fock(exp_hom, [0], []), 0.5),
        (fock.marginal_threshold_prob_fock(exp_hom, [], [0]), 0.5),
        (fock.marginal_threshold_prob_fock(exp_hom, [1], []), 0.5),
        (fock.marginal_threshold_prob_fock(exp_hom, [], [1]), 0.5),
    ], "single-detector marginals with the partner mode ignored")

    F3 = _fourier_matrix(3)
    exp_ztl = fock.FockExperiment(F3, (1, 1, 1))
    run("fourier_ztl", 1e-12, [
        (fock.threshold_prob_fock(exp_ztl, (1, 1, 0)), 0.0),
        (fock.threshold_prob_fock(exp_ztl, (1, 1, 1)), 1.0 / 3.0),
    ], "three-mode Fourier suppression and all-click probability")

    run("fourier_ubrs", 1e-12, [
        (matfunc.ubrs(F3).real, 1.0 / 3.0),
        (abs(linalg.permanent(F3)) ** 2, 1.0 / 3.0),
    ], "square-matrix identity ubrs(A) = |per(A)|^2 on the Fourier matrix")

    hom_grid = []
    for k in range(1, 11):
        eta = k / 10.0
        exp_eta = fock.FockExperiment(math.sqrt(eta) * _HOM, (1, 1))
        hom_grid.append((fock.threshold_prob_fock(exp_eta, (1, 1)), 0.0))
    run("lossy_hom_grid", 1e-12, hom_grid,
        "coincidence suppression survives uniform loss, eta = 0.1 .. 1.0")

    ztl_pairs = []
    for eta in (0.1, 0.3, 0.5, 0.7, 0.9):
        exp_eta = fock.FockExperiment(math.sqrt(eta) * F3, (1, 1, 1))
        ztl_pairs.append((fock.threshold_prob_fock(exp_eta, (1, 1, 0)),
                          eta * eta * (1 - eta) / 3.0))
    run("lossy_ztl", 1e-10, ztl_pairs,
        "suppressed pattern reappears under loss as eta^2(1-eta)/3")

    # closed form from summing photon-loss branches of the (1,2,0) input
    tp_pairs = []
    for eta in (1.0, 0.9, 0.5):
        exp_eta = fock.FockExperiment(math.sqrt(eta) * F3, (1, 2, 0))
        want = (2.0 / 9.0) * eta**3 + (4.0 / 9.0) * eta**2 * (1 - eta)
        tp_pairs.append((fock.threshold_prob_fock(exp_eta, (0, 1, 1)), want))
    run("two_photon_lossy", 1e-10, tp_pairs,
        "repeated-column pattern vs loss-branch closed form (2/9)eta^3 + (4/9)eta^2(1-eta)")

    got = linalg.mode_pair_indices([0, 2], 5)
    dev = 0.0 if got == [0, 2, 5, 7] else 1.0
    dev = _apply_inject(inject, "index_conventions", dev)
    checks.append(CheckResult(
        "index_conventions", dev < 1e-12, dev,
        "clicked modes [0, 2] of 5 select covariance rows [0, 2, 5, 7]"))

    return checks


def cmd_suite(args: argparse.Namespace) -> int:
    checks = run_golden_suite()
    passed = sum(c.passed for c in checks)
    if args.format == "json":
        payload = {
            "checks": [
                {"name": c.name, "passed": c.passed, "deviation": c.deviation,
                 "detail": c.detail}
                for c in checks
            ],
            "passed": passed,
            "total": len(checks),
            "max_deviation": max(c.deviation for c in checks),
        }
        _write_text(_json_text(payload), args.output)
    else:
        rows = [
            {"name": c.name, "passed": str(c.passed).lower(), "deviation": c.deviation,
             "detail": c.detail}
            for c in checks
        ]
        _write_text(_csv_text(("name", "passed", "deviation", "detail"), rows), args.output)
    return 0 if passed == len(checks) else 1


# ---------------------------------------------------------------------------
# TVD experiment


def _parse_modes_range(text: str) -> list[int]:
    try:
        if "-" in text:
            lo, hi = text.split("-", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise SpecFormatError(f"modes range must be 'N' or 'LO-HI', got {text!r}") from exc
    if lo < 1 or hi < lo:
        raise SpecFormatError(f"bad modes range {text!r}")
    return list(range(lo, hi + 1))


def _tvd_sample(task: tuple[int, int, int, float, int, bool]) -> dict[str, Any]:
    M, sample, sample_seed, eta, photons, timing = task
    start = time.perf_counter()
    rng = np.random.default_rng(sample_seed)
    U = linalg.haar_random_unitary(M, rng)
    exp = fock.FockExperiment(math.sqrt(eta) * U, (1,) * photons + (0,) * (M - photons))
    exact = fock.fock_distribution(exp)
    approx = oracles.approx_model_distribution(exp)
    mass = sum(approx.values())
    tvd_raw = 0.5 * sum(abs(exact[d] - approx[d]) for d in exact)
    if mass > 0.0:
        tvd_norm = 0.5 * sum(abs(exact[d] - approx[d] / mass) for d in exact)
    else:
        tvd_norm = tvd_raw
    row: dict[str, Any] = {
        "M": M,
        "sample": sample,
        "seed": sample_seed,
        "tvd": tvd_raw,
        "tvd_normalized": tvd_norm,
        "runtime_ms": "",
    }
    if timing:
        row["runtime_ms"] = f"{(time.perf_counter() - start) * 1e3:.3f}"
    return row


_TVD_FIELDS = ("M", "sample", "seed", "tvd", "tvd_normalized", "runtime_ms")


def run_tvd_experiment(
    modes: Sequence[int],
    samples: int,
    eta: float,
    photons: int,
    seed: int,
    *,
    threads: int = 1,
    timing: bool = False,
) -> tuple[list[dict[str, Any]], dict[int, dict[str, dict[str, float]]]]:
    """Per-sample rows plus per-M min/median/max summaries."""
    if max(modes) > TVD_MAX_MODES:
        raise CapExceeded(f"modes cap for the experiment is {TVD_MAX_MODES}, got {max(modes)}")
    if photons > TVD_MAX_PHOTONS:
        raise CapExceeded(f"photon cap for the experiment is {TVD_MAX_PHOTONS}, got {photons}")
    if photons < 1 or samples < 1:
        raise InvalidInput("photons and samples must be positive")
    if photons > min(modes):
        raise InvalidInput(f"photons = {photons} exceeds the smallest mode count {min(modes)}")
    if not 0.0 < eta <= 1.0:
        raise InvalidInput(f"eta must lie in (0, 1], got {eta}")
    tasks = []
    index = 0
    for M in modes:
        for sample in range(samples):
            tasks.append((M, sample, seed ^ index, eta, photons, timing))
            index += 1
    if threads > 1:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as pool:
            rows = list(pool.map(_tvd_sample, tasks))
    else:
        rows = [_tvd_sample(task) for task in tasks]
    summary: dict[int, dict[str, dict[str, float]]] = {}
    for M in modes:
        per_m = [row for row in rows if row["M"] == M]
        summary[M] = {
            key: {
                "min": min(row[key] for row in per_m),
                "median": statistics.median(row[key] for row in per_m),
                "max": max(row[key] for row in per_m),
            }
            for key in ("tvd", "tvd_normalized")
        }
    return rows, summary


def cmd_tvd(args: argparse.Namespace) -> int:
    modes = _parse_modes_range(args.modes)
    rows, summary = run_tvd_experiment(
        modes, args.samples, args.eta, args.photons, args.seed,
        threads=args.threads, timing=args.timing)
    if args.format == "json":
        payload = {
            "eta": args.eta,
            "photons": args.photons,
            "samples": args.samples,
            "seed": args.seed,
            "rows": rows,
            "summary": {str(M): stats for M, stats in summary.items()},
        }
        _write_text(_json_text(payload), args.output)
        return 0
    out_rows: list[Mapping[str, Any]] = list(rows)
    for M in modes:
        for stat in ("min", "median", "max"):
            out_rows.append({
                "M": M,
                "sample": stat,
                "seed": "",
                "tvd": summary[M]["tvd"][stat],
                "tvd_normalized": summary[M]["tvd_normalized"][stat],
                "runtime_ms": "",
            })
    _write_text(_csv_text(_TVD_FIELDS, out_rows), args.output)
    return 0


# ---------------------------------------------------------------------------
# matfn (bindings surface)


def _payload_matrix(payload: Mapping[str, Any], key: str) -> np.ndarray:
    if key not in payload:
        raise SpecFormatError(f"payload missing field: {key}")
    return parse_matrix(payload[key], key)


def _payload_vector(payload: Mapping[str, Any], key: str) -> np.ndarray:
    if key not in payload:
        raise SpecFormatError(f"payload missing field: {key}")
    return parse_vector(payload[key], key)


def _payload_ints(payload: Mapping[str, Any], key: str) -> list[int]:
    if key not in payload:
        raise SpecFormatError(f"payload missing field: {key}")
    return parse_int_list(payload[key], key)


def _matfn_permanent(payload: Mapping[str, Any]) -> dict[str, Any]:
    value = linalg.permanent(_payload_matrix(payload, "A"))
    return {"value": format_complex(value), "diagnostics": {}}


def _matfn_brs(payload: Mapping[str, Any]) -> dict[str, Any]:
    A = _payload_matrix(payload, "A")
    E = _payload_matrix(payload, "E")
    value = matfunc.brs(A, E)
    res = matfunc.brs_detailed(A, E)
    return {"value": format_complex(value),
            "diagnostics": {"max_term": res.max_term, "terms": res.terms}}


def _matfn_ubrs(payload: Mapping[str, Any]) -> dict[str, Any]:
    A = _payload_matrix(payload, "A")
    value = matfunc.ubrs(A)
    res = matfunc.ubrs_detailed(A)
    return {"value": format_complex(value),
            "diagnostics": {"max_term": res.max_term, "terms": res.terms}}


def _matfn_tor(payload: Mapping[str, Any]) -> dict[str, Any]:
    O = _payload_matrix(payload, "O")
    value = matfunc.tor(O)
    res = matfunc.ltor_detailed(O, np.zeros(O.shape[0], dtype=np.complex128))
    return {"value": value, "diagnostics": {"max_term": res.max_term, "terms": res.terms}}


def _matfn_ltor(payload: Mapping[str, Any]) -> dict[str, Any]:
    O = _payload_matrix(payload, "O")
    gamma = _payload_vector(payload, "gamma")
    value = matfunc.ltor(O, gamma)
    res = matfunc.ltor_detailed(O, gamma)
    return {"value": value, "diagnostics": {"max_term": res.max_term, "terms": res.terms}}


def _matfn_lhaf(payload: Mapping[str, Any]) -> dict[str, Any]:
    A = _payload_matrix(payload, "A")
    gamma = _payload_vector(payload, "gamma") if payload.get("gamma") is not None else None
    value = matfunc.lhaf(A, gamma)
    return {"value": format_complex(value), "diagnostics": {}}


def _matfn_threshold_fock(payload: Mapping[str, Any]) -> dict[str, Any]:
    exp = fock.FockExperiment(
        _payload_matrix(payload, "T"), tuple(_payload_ints(payload, "n")))
    res = fock.threshold_prob_fock_detailed(exp, _payload_ints(payload, "d"))
    return {"value": res.value,
            "diagnostics": {"max_term": res.max_term, "terms": res.terms}}


def _matfn_threshold_gaussian(payload: Mapping[str, Any]) -> dict[str, Any]:
    state = gaussian.GaussianState(
        _payload_matrix(payload, "sigma"), _payload_vector(payload, "alpha"))
    res = gaussian.threshold_prob_gaussian_detailed(state, _payload_ints(payload, "d"))
    return {"value": res.value,
            "diagnostics": {"max_term": res.max_term, "terms": res.terms}}


MATFN_TABLE: dict[str, Callable[[Mapping[str, Any]], dict[str, Any]]] = {
    "permanent": _matfn_permanent,
    "brs": _matfn_brs,
    "ubrs": _matfn_ubrs,
    "tor": _matfn_tor,
    "ltor": _matfn_ltor,
    "lhaf": _matfn_lhaf,
    "threshold_prob_fock": _matfn_threshold_fock,
    "threshold_prob_gaussian": _matfn_threshold_gaussian,
}


def cmd_matfn(args: argparse.Namespace) -> int:
    handler = MATFN_TABLE[args.function]
    raw = sys.stdin.read()
    try:
        payload = json.loads(raw) if raw.strip() else {}
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"stdin is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise SpecFormatError("payload must be a JSON object")
    result = handler(payload)
    result["function"] = args.function
    _write_text(_json_text(result), args.output)
    return 0


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default="json",
                     help="output format (default json)")
    sub.add_argument("--output", metavar="PATH", default=None,
                     help="write output to a file instead of stdout")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED,
                     help=f"base random seed (default {DEFAULT_SEED})")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker count for parallel paths (default 1)")
    sub.add_argument("--tolerance", type=float, default=None,
                     help="override validation tolerance where applicable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clickstats",
        description="Exact threshold-detector and photon-number statistics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_compute = subs.add_parser("compute", help="evaluate an experiment file")
    p_compute.add_argument("spec", help="path to an experiment JSON file")
    _add_common_flags(p_compute)
    p_compute.set_defaults(func=cmd_compute)

    p_validate = subs.add_parser("validate", help="check an experiment file")
    p_validate.add_argument("spec", help="path to an experiment JSON file")
    _add_common_flags(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_suite = subs.add_parser("suite", help="run the built-in golden checks")
    _add_common_flags(p_suite)
    p_suite.set_defaults(func=cmd_suite)

    p_tvd = subs.add_parser(
        "tvd", help="exact vs approximate threshold statistics experiment")
    p_tvd.add_argument("--modes", default="4-8",
                       help="mode count or range LO-HI (default 4-8)")
    p_tvd.add_argument("--samples", type=int, default=20,
                       help="random interferometers per mode count (default 20)")
    p_tvd.add_argument("--eta", type=float, default=0.6,
                       help="per-mode transmission (default 0.6)")
    p_tvd.add_argument("--photons", type=int, default=4,
                       help="input photons, one per leading mode (default 4)")
    p_tvd.add_argument("--timing", action="store_true",
                       help="fill the runtime_ms column (makes output nondeterministic)")
    _add_common_flags(p_tvd)
    p_tvd.set_defaults(func=cmd_tvd)

    p_matfn = subs.add_parser(
        "matfn", help="evaluate one matrix function on a JSON payload from stdin")
    p_matfn.add_argument("function", choices=sorted(MATFN_TABLE))
    _add_common_flags(p_matfn)
    p_matfn.set_defaults(func=cmd_matfn)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ClickStatsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
