"""Batch experiment orchestration: sweeps, seed averaging, CSV output.

An Experiment is a base configuration plus an ordered list of sweep
points, each point overriding a few config fields.  Every point runs
n_runs times with seeds base_seed .. base_seed + n_runs - 1 and the
per-seed summaries are averaged into an ExperimentResult.  Runs are
independent, so they may execute in worker processes, but collection
follows task order and aggregation is single threaded: the same
invocation produces the same bytes no matter how many jobs it used.

Output per experiment: an aggregated CSV (one row per point, mean and
sample standard deviation per metric), a per-run CSV (one row per
seed, raw counters included), and gnuplot scripts consuming the
aggregated CSV.  Plot scripts are conveniences; the CSVs are the
interface.  Absent statistics (a run with no deliveries has no mean
delay) serialize as empty cells, never as fake zeros.
"""

import csv
import json
import math
import statistics
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .config import ScenarioConfig
from .metrics import summary
from .radio import RadioParams
from .simulation import VERSION, Simulation, run_simulation

MALICIOUS_GRID = (0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75)
PAUSE_GRID = (0.0, 400.0, 1000.0)
# (faulty_threshold, second_chance_timeout, reentry_rating) rows; the
# reentry rating always sits ten above the threshold.
THRESHOLD_ROWS = (
    (0.0, 10.0, 10.0),
    (-40.0, 30.0, -30.0),
    (-80.0, 80.0, -70.0),
    (-120.0, 120.0, -110.0),
    (-160.0, 160.0, -150.0),
    (-200.0, 200.0, -190.0),
)
COMPARE_FRACTIONS = (0.0, 0.125, 0.25, 0.375)

# Column order for every CSV; also the aggregation set.
METRIC_COLUMNS = (
    "throughput_pct",
    "throughput_pct_2hop",
    "routing_packets",
    "normalized_overhead",
    "avg_delay",
    "mean_hops",
    "final_energy_avg",
)
RAW_COLUMNS = (
    "data_sent",
    "data_delivered",
    "total_drops",
    "route_faulty_violations",
    "energy_ledger_max_err",
)


class ExperimentError(RuntimeError):
    """A run inside an experiment aborted; message names (point, seed)."""


@dataclass(frozen=True)
class Experiment:
    name: str
    base: ScenarioConfig
    swept: tuple            # field names overridden per point
    points: tuple           # value tuples aligned with swept

    def config_at(self, point):
        return replace(self.base, **dict(zip(self.swept, point)))


@dataclass
class PointResult:
    values: dict            # swept field -> value
    runs: list              # per-seed dicts, seed order
    stats: dict             # metric -> (mean, std), either may be None


@dataclass
class ExperimentResult:
    experiment: Experiment
    base_seed: int
    n_runs: int
    points: list            # PointResult, experiment order

    def stat(self, metric, **where):
        """Mean of `metric` at the unique point matching `where`."""
        hits = [p for p in self.points
                if all(p.values.get(k) == v for k, v in where.items())]
        if len(hits) != 1:
            raise KeyError(f"{where} matches {len(hits)} points")
        return hits[0].stats[metric][0]


# ---- experiment builders ----

def build_sweep_malicious(base=None):
    """Misleading-node fraction x pause time grid, cooperation layer on."""
    base = base or ScenarioConfig()
    points = tuple((f, p) for f in MALICIOUS_GRID for p in PAUSE_GRID)
    return Experiment("sweep-malicious", base,
                      ("malicious_fraction", "pause_time"), points)


def build_sweep_threshold(base=None):
    """Faulty-threshold rows under 25% and 50% misleading nodes.

    Three extra zero-malicious points at the default threshold row give
    the clean baseline the relative-throughput comparisons need.
    """
    base = base or ScenarioConfig()
    points = [(-40.0, 30.0, -30.0, 0.0, p) for p in PAUSE_GRID]
    for row in THRESHOLD_ROWS:
        for frac in (0.25, 0.5):
            for pause in PAUSE_GRID:
                points.append(row + (frac, pause))
    return Experiment(
        "sweep-threshold", base,
        ("faulty_threshold", "second_chance_timeout", "reentry_rating",
         "malicious_fraction", "pause_time"),
        tuple(points))


def build_compare_dsr(base=None):
    """Cooperation layer on vs off, side by side, moderate mobility."""
    base = replace(base or ScenarioConfig(), pause_time=400.0)
    points = tuple((f, on) for f in COMPARE_FRACTIONS for on in (True, False))
    return Experiment("compare-dsr", base,
                      ("malicious_fraction", "ocean_enabled"), points)


BUILDERS = {
    "sweep-malicious": build_sweep_malicious,
    "sweep-threshold": build_sweep_threshold,
    "compare-dsr": build_compare_dsr,
}


# ---- execution ----

def _run_row(metrics):
    row = dict(summary(metrics))
    row["data_sent"] = metrics.data_sent
    row["data_delivered"] = metrics.data_delivered
    row["total_drops"] = sum(metrics.drops.values())
    row["route_faulty_violations"] = metrics.route_faulty_violations
    row["energy_ledger_max_err"] = metrics.energy_ledger_max_err
    return row


def _run_task(task):
    cfg, seed = task
    try:
        metrics, _ = run_simulation(cfg, seed)
        return True, _run_row(metrics)
    except Exception as exc:
        return False, f"{type(exc).__name__}: {exc}"


def _aggregate(rows):
    stats = {}
    for metric in METRIC_COLUMNS:
        values = [r[metric] for r in rows if r[metric] is not None]
        mean = statistics.fmean(values) if values else None
        std = statistics.stdev(values) if len(values) > 1 else None
        stats[metric] = (mean, std)
    return stats


def run_experiment(exp, base_seed=None, n_runs=None, jobs=1, progress=None):
    """Run every (point, seed) pair and aggregate per point.

    Results are keyed and ordered by the experiment's point list; seeds
    run base_seed .. base_seed + n_runs - 1.  With jobs > 1 the runs
    execute in a process pool, collected in task order so the result is
    identical to a serial run.  Any failing run aborts the experiment.
    """
    base_seed = exp.base.base_seed if base_seed is None else base_seed
    n_runs = exp.base.n_runs if n_runs is None else n_runs
    tasks = [(exp.config_at(point), base_seed + i)
             for point in exp.points for i in range(n_runs)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_task, tasks, chunksize=1))
    else:
        outcomes = []
        for task in tasks:
            outcomes.append(_run_task(task))
            if progress:
                progress(len(outcomes), len(tasks))

    points = []
    cursor = iter(outcomes)
    for point in exp.points:
        rows = []
        for i in range(n_runs):
            ok, payload = next(cursor)
            if not ok:
                raise ExperimentError(
                    f"{exp.name} point {dict(zip(exp.swept, point))} "
                    f"seed {base_seed + i}: {payload}")
            payload["seed"] = base_seed + i
            rows.append(payload)
        points.append(PointResult(dict(zip(exp.swept, point)), rows,
                                  _aggregate(rows)))
    return ExperimentResult(exp, base_seed, n_runs, points)


# ---- CSV / plot emission ----

def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _header_lines(result):
    cfg = json.dumps(result.experiment.base.to_dict(), sort_keys=True,
                     separators=(",", ":"))
    return [f"# generator: oceansim {VERSION}",
            f"# experiment: {result.experiment.name}",
            f"# base_seed: {result.base_seed}  n_runs: {result.n_runs}",
            f"# config: {cfg}"]


def _write_csv(path, result, columns, rows):
    with open(path, "w", newline="") as fh:
        for line in _header_lines(result):
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_aggregate_csv(path, result):
    """One row per sweep point: swept values, then mean/std per metric."""
    swept = result.experiment.swept
    columns = list(swept) + ["n_runs"]
    for metric in METRIC_COLUMNS:
        columns += [f"{metric}_mean", f"{metric}_std"]
    rows = []
    for point in result.points:
        row = [point.values[k] for k in swept] + [result.n_runs]
        for metric in METRIC_COLUMNS:
            row += list(point.stats[metric])
        rows.append(row)
    _write_csv(path, result, columns, rows)


def write_runs_csv(path, result):
    """One row per individual run, raw counters included."""
    swept = result.experiment.swept
    columns = list(swept) + ["seed"] + list(RAW_COLUMNS) + list(METRIC_COLUMNS)
    rows = []
    for point in result.points:
        lead = [point.values[k] for k in swept]
        for run in point.runs:
            rows.append(lead + [run["seed"]] + [run[c] for c in RAW_COLUMNS]
                        + [run[c] for c in METRIC_COLUMNS])
    _write_csv(path, result, columns, rows)


_YLABELS = {
    "throughput_pct": "delivered data packets (%)",
    "routing_packets": "routing packets transmitted",
    "avg_delay": "mean end-to-end delay (s)",
    "final_energy_avg": "mean remaining energy (J)",
}


def _metric_column(metric, n_swept):
    # 1-based gnuplot index of the metric's mean column in the
    # aggregated CSV: swept columns, n_runs, then mean/std pairs.
    return n_swept + 2 * METRIC_COLUMNS.index(metric) + 2


def _plot_script(csv_name, png_name, xlabel, xcol, metric, series, n_swept):
    """One gnuplot script: `series` is a list of (title, filter column,
    filter value) selecting rows of the aggregated CSV."""
    ycol = _metric_column(metric, n_swept)
    plots = ", \\\n     ".join(
        f"'{csv_name}' using {xcol}:(${fcol}=={fval} ? ${ycol} : 1/0) "
        f"with linespoints title '{title}'"
        for title, fcol, fval in series)
    return "\n".join([
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key outside",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{_YLABELS[metric]}'",
        "set term pngcairo size 900,600",
        f"set output '{png_name}'",
        f"plot {plots}",
        ""])


def _experiment_plots(name):
    pause_series = [(f"pause {int(p)} s", 2, _cell(p)) for p in PAUSE_GRID]
    if name == "sweep-malicious":
        # columns: malicious_fraction, pause_time, n_runs, metrics...
        return [("malicious fraction", 1, 2, metric, pause_series)
                for metric in ("throughput_pct", "routing_packets",
                               "final_energy_avg")]
    if name == "sweep-threshold":
        # columns: threshold, timeout, reentry, fraction, pause, n_runs, ...
        series = [("25% misleading", 4, "0.25"), ("50% misleading", 4, "0.5")]
        return [("faulty threshold", 1, 5, metric, series)
                for metric in ("throughput_pct", "routing_packets")]
    if name == "compare-dsr":
        # columns: malicious_fraction, ocean_enabled, n_runs, metrics...
        series = [("cooperation layer on", 2, "1"), ("plain source routing", 2, "0")]
        return [("malicious fraction", 1, 2, metric, series)
                for metric in ("throughput_pct", "routing_packets",
                               "avg_delay", "final_energy_avg")]
    raise ValueError(f"unknown experiment: {name}")


def write_outputs(result, out_dir):
    """Aggregated CSV, per-run CSV, and plot scripts under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = result.experiment.name.replace("-", "_")
    write_aggregate_csv(out / f"{stem}.csv", result)
    write_runs_csv(out / f"{stem}_runs.csv", result)
    written = [out / f"{stem}.csv", out / f"{stem}_runs.csv"]
    for xlabel, xcol, n_swept, metric, series in _experiment_plots(
            result.experiment.name):
        script = _plot_script(f"{stem}.csv", f"{stem}_{metric}.png",
                              xlabel, xcol, metric, series, n_swept)
        path = out / f"{stem}_{metric}.gp"
        path.write_text(script)
        written.append(path)
    return written


# ---- canned invariant suite ----

def _bfs_hops(adjacency, src, dst):
    seen = {src: 0}
    queue = deque([src])
    while queue:
        here = queue.popleft()
        if here == dst:
            return seen[here]
        for nxt in adjacency[here]:
            if nxt not in seen:
                seen[nxt] = seen[here] + 1
                queue.append(nxt)
    return None


def _static_graph(sim, t):
    radio = sim.radio_params
    nodes = sim.nodes
    adj = {n.nid: [] for n in nodes}
    for a in nodes:
        for b in nodes:
            if a.nid < b.nid and radio.in_range(
                    math.dist(a.motion.position_at(t),
                              b.motion.position_at(t))):
                adj[a.nid].append(b.nid)
                adj[b.nid].append(a.nid)
    return adj


def _check_shortest_discovery():
    # Single flow per topology: a quiet network keeps the flood race
    # free of data-frame queueing, so hop counts must match BFS exactly.
    cfg = ScenarioConfig(sim_duration=6.0, n_nodes=25, n_connections=1,
                         start_window=1.0, pause_time=1e9,
                         malicious_fraction=0.0, ocean_enabled=False)
    checked = 0
    for seed in (101, 102, 103, 104, 105):
        sim = Simulation(cfg, seed=seed)
        sim.run()
        adj = _static_graph(sim, 0.0)
        for flow in sim.flows:
            log = sim.nodes[flow.src].dsr.cache.log
            first = next((r for r in log if r[-1] == flow.dst), None)
            if first is None:
                continue
            want = _bfs_hops(adj, flow.src, flow.dst)
            got = len(first) - 1
            if got != want:
                raise AssertionError(
                    f"route {flow.src}->{flow.dst}: {got} hops, shortest {want}")
            checked += 1
    if not checked:
        raise AssertionError("no routes were installed to compare")


def _check_accounting():
    cfg = ScenarioConfig(sim_duration=60.0, n_nodes=20, n_connections=8,
                         malicious_fraction=0.25)
    metrics, _ = run_simulation(cfg, seed=3)
    if not metrics.conserved():
        raise AssertionError("sent != delivered + drops")
    if metrics.energy_ledger_max_err > 1e-6:
        raise AssertionError(
            f"energy ledger off by {metrics.energy_ledger_max_err}")
    if metrics.route_faulty_violations:
        raise AssertionError(
            f"{metrics.route_faulty_violations} routes crossed a faulty node")


def _check_determinism():
    cfg = ScenarioConfig(sim_duration=40.0, n_nodes=20, n_connections=8,
                         malicious_fraction=0.125)
    first, _ = run_simulation(cfg, seed=11)
    second, _ = run_simulation(cfg, seed=11)
    if first.to_dict() != second.to_dict():
        raise AssertionError("same seed produced different results")


def _check_propagation():
    radio = RadioParams()
    dc = radio.crossover
    lam, pt = radio.wavelength, radio.tx_power
    ht, hr = radio.height_tx, radio.height_rx
    for d in (10.0, dc * 0.5, dc * 2, 250.0):
        if d < dc:
            want = pt * lam * lam / (16.0 * 3.141592653589793 ** 2 * d * d)
        else:
            want = pt * (ht * hr) ** 2 / d ** 4
        got = radio.received_power(d)
        if abs(got - want) > 1e-12 * want:
            raise AssertionError(f"received_power({d}) = {got}, want {want}")
    below, above = radio.received_power(dc * (1 - 1e-12)), radio.received_power(dc)
    if abs(below - above) > 1e-6 * above:
        raise AssertionError("discontinuity at the crossover distance")


def _check_threshold_rows():
    for threshold, timeout, reentry in THRESHOLD_ROWS:
        if reentry != threshold + 10:
            raise AssertionError(f"row {threshold}: reentry {reentry}")
        if timeout <= 0:
            raise AssertionError(f"row {threshold}: timeout {timeout}")


VALIDATION_CHECKS = (
    ("discovery finds shortest routes", _check_shortest_discovery),
    ("packet and energy accounting", _check_accounting),
    ("seeded rerun is identical", _check_determinism),
    ("two-ray propagation formula", _check_propagation),
    ("threshold parameter rows", _check_threshold_rows),
)


def validate(write=print):
    """Run the canned invariant suite; 0 when everything holds."""
    failures = 0
    for name, check in VALIDATION_CHECKS:
        try:
            check()
        except Exception as exc:
            failures += 1
            write(f"FAIL  {name}: {exc}")
        else:
            write(f"ok    {name}")
    write(f"{len(VALIDATION_CHECKS) - failures}/{len(VALIDATION_CHECKS)} checks passed")
    return 0 if failures == 0 else 1
