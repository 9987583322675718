"""Instance generators and the batch benchmark harness."""

from __future__ import annotations

import configparser
import csv
import io
import math
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .graph import ColoredGraph, format_instance, parse_instance
from .pipeline import RunOptions, run

SIZE_WINDOW = (10, 210)


@dataclass(frozen=True)
class GenSpec:
    n: int
    p: float
    num_colors: int
    distribution: str = "uniform"  # uniform | skewed
    seed: int = 0

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0 <= self.p <= 1:
            raise ValueError("edge probability must lie in [0, 1]")
        if not 1 <= self.num_colors <= self.n:
            raise ValueError("need 1 <= |C| <= n")
        if self.distribution not in ("uniform", "skewed"):
            raise ValueError(f"unknown color distribution {self.distribution!r}")


def _color_names(k: int) -> list[str]:
    return [f"c{i + 1}" for i in range(k)]


def generate(spec: GenSpec) -> ColoredGraph:
    """Erdos-Renyi graph with every color class nonempty."""
    spec.validate()
    rng = random.Random(spec.seed)
    n, k = spec.n, spec.num_colors
    order = list(range(n))
    rng.shuffle(order)
    colors = [0] * n
    if spec.distribution == "uniform":
        weights = [1.0] * k
    else:
        weights = [1.0 / (c + 1) for c in range(k)]
    for pos, v in enumerate(order):
        colors[v] = pos if pos < k else rng.choices(range(k), weights)[0]
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < spec.p]
    names = _color_names(k)
    return ColoredGraph.build(n, edges, [names[c] for c in colors])


def planted_blocks(
    seed: int,
    core: int = 6,
    blocks: int = 2,
    block_size: tuple[int, int] = (3, 4),
    palette: int = 5,
    core_p: float = 0.4,
) -> ColoredGraph:
    """Connected core with colorful cliques hung off it.

    Each clique of size s is attached by at most s - 1 edges to core nodes
    whose colors all occur in the clique, so it can be cut off as a block.
    """
    rng = random.Random(seed)
    colors = [rng.randrange(palette) for _ in range(core)]
    edges = set()
    for v in range(1, core):
        edges.add((rng.randrange(v), v))
    for u in range(core):
        for v in range(u + 1, core):
            if rng.random() < core_p:
                edges.add((u, v))
    n = core
    for _ in range(blocks):
        s = rng.randint(*block_size)
        t = rng.randint(1, s - 1)
        anchors = rng.sample(range(core), min(t, core))
        need = sorted({colors[a] for a in anchors})
        while len(need) > s:
            anchors.pop()
            need = sorted({colors[a] for a in anchors})
        extra = [c for c in range(palette) if c not in need]
        rng.shuffle(extra)
        block_colors = need + extra[: s - len(need)]
        rng.shuffle(block_colors)
        ids = list(range(n, n + s))
        colors += block_colors
        edges.update((u, v) for i, u in enumerate(ids) for v in ids[i + 1 :])
        for a in anchors:
            edges.add((a, rng.choice(ids)))
        n += s
    return ColoredGraph.build(n, sorted(edges), [f"c{c + 1}" for c in colors])


def filter_corpus(corpus, window: tuple[int, int] = SIZE_WINDOW):
    lo, hi = window
    return [(name, g) for name, g in corpus if lo <= g.n <= hi]


def load_corpus(directory: str | Path, window: tuple[int, int] | None = None) -> list[tuple[str, ColoredGraph | Exception]]:
    """Instances ``*.ccp`` in name order; unparsable files are kept as errors."""
    out: list[tuple[str, ColoredGraph | Exception]] = []
    for path in sorted(Path(directory).glob("*.ccp")):
        try:
            g = parse_instance(path.read_text())
        except Exception as exc:  # recorded as a failed row later
            out.append((path.stem, exc))
            continue
        if window is None or window[0] <= g.n <= window[1]:
            out.append((path.stem, g))
    return out


def convert_edge_list(edges: TextIO, colors: TextIO) -> ColoredGraph:
    """Convert a raw ``u v`` edge list plus ``node color`` lines.

    The column mapping is assumed (1-based nodes, one token per color)
    and has not been checked against any external corpus files.
    """
    color_of: dict[int, str] = {}
    for line in colors:
        parts = line.split()
        if parts and not parts[0].startswith("#"):
            color_of[int(parts[0])] = parts[1]
    pairs = set()
    for line in edges:
        parts = line.split()
        if len(parts) >= 2 and not parts[0].startswith("#"):
            u, v = sorted((int(parts[0]), int(parts[1])))
            if u != v:
                pairs.add((u - 1, v - 1))
    n = max(color_of) if color_of else 0
    return ColoredGraph.build(n, sorted(pairs), [color_of[v] for v in range(1, n + 1)])


# ------------------------------------------------------------------ configs


def parse_configs(text: str) -> dict[str, RunOptions]:
    """Named run configurations from INI text, one section per config."""
    cp = configparser.ConfigParser()
    cp.read_string(text)
    out = {}
    for name in cp.sections():
        sec = cp[name]
        limit = sec.get("time_limit")
        out[name] = RunOptions(
            problem=sec.get("problem", "mop"),
            prep=sec.getboolean("prep", False),
            warmstart=sec.getboolean("warmstart", True),
            qbar=sec.get("qbar", "auto"),
            symmetry=sec.get("symmetry", "index"),
            edge_cut=sec.getboolean("edge_cut", False),
            time_limit=float(limit) if limit else None,
        )
    return out


# -------------------------------------------------------------------- bench


@dataclass
class BenchRow:
    instance: str
    n: int
    m: int
    colors: int
    problem: str
    config: str
    status: str
    lb: float | None
    ub: float | None
    gap: float | None
    time_s: float
    nodes: int
    error: str = ""


@dataclass
class Summary:
    config: str
    rows: int
    opt: int
    feas: int
    mean_lb: float | None
    mean_ub: float | None
    mean_gap: float | None
    mean_time: float
    mean_nodes: float


def _solve_row(task) -> BenchRow:
    name, g, label, opts = task
    problem = opts.problem.value
    if isinstance(g, Exception):
        return BenchRow(name, 0, 0, 0, problem, label, "error", None, None, None, 0.0, 0, str(g))
    try:
        res = run(g, opts)
    except Exception as exc:
        return BenchRow(name, g.n, g.m, g.num_colors, problem, label, "error", None, None, None, 0.0, 0, repr(exc))
    return BenchRow(
        name, g.n, g.m, g.num_colors, problem, label, res.status, res.lb, res.ub, res.gap, res.wall_time, res.nodes_explored
    )


def run_bench(
    corpus: Sequence[tuple[str, ColoredGraph | Exception]],
    configs: dict[str, RunOptions],
    time_limit: float | None = None,
    workers: int = 1,
    no_time: bool = False,
) -> tuple[list[BenchRow], list[Summary]]:
    """Solve every instance under every config; rows come back in corpus order."""
    tasks = []
    for name, g in corpus:
        for label, opts in configs.items():
            if time_limit is not None:
                opts = RunOptions(**{**opts.__dict__, "time_limit": time_limit})
            tasks.append((name, g, label, opts))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_solve_row, tasks))
    else:
        rows = [_solve_row(t) for t in tasks]
    if no_time:
        for r in rows:
            r.time_s = 0.0
    return rows, summarize(rows, list(configs))


def _mean(xs: Iterable[float | None]) -> float | None:
    vals = [x for x in xs if x is not None and not math.isinf(x)]
    return statistics.fmean(vals) if vals else None


def summarize(rows: Sequence[BenchRow], labels: Sequence[str]) -> list[Summary]:
    out = []
    for label in labels:
        mine = [r for r in rows if r.config == label]
        feasible = [r for r in mine if r.status in ("optimal", "timeout") and r.lb is not None and r.ub is not None]
        out.append(
            Summary(
                label,
                len(mine),
                sum(r.status == "optimal" for r in mine),
                len(feasible),
                _mean(r.lb for r in feasible),
                _mean(r.ub for r in feasible),
                _mean(r.gap for r in feasible),
                statistics.fmean(r.time_s for r in mine) if mine else 0.0,
                statistics.fmean(r.nodes for r in mine) if mine else 0.0,
            )
        )
    return out


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "inf" if math.isinf(x) else f"{x:.6g}"
    return str(x)


def write_csv(rows: Sequence[BenchRow], summaries: Sequence[Summary], sink: TextIO) -> None:
    """Rows as CSV, then one ``#summary`` comment line per config."""
    w = csv.writer(sink, lineterminator="\n")
    w.writerow([f.name for f in fields(BenchRow)])
    for r in rows:
        w.writerow([_cell(x) for x in astuple(r)])
    for s in summaries:
        parts = [f"{f.name}={_cell(v)}" for f, v in zip(fields(Summary), astuple(s))]
        sink.write("#summary " + " ".join(parts) + "\n")


def csv_text(rows, summaries) -> str:
    buf = io.StringIO()
    write_csv(rows, summaries, buf)
    return buf.getvalue()


def read_csv(text: str) -> tuple[list[dict[str, str]], list[dict[str, str]]]:
    """Row dicts and summary dicts from :func:`write_csv` output."""
    body = [line for line in text.splitlines() if not line.startswith("#summary ")]
    rows = list(csv.DictReader(body))
    summaries = []
    for line in text.splitlines():
        if line.startswith("#summary "):
            summaries.append(dict(kv.split("=", 1) for kv in line[len("#summary ") :].split()))
    return rows, summaries


def write_corpus(graphs: Iterable[tuple[str, ColoredGraph]], directory: str | Path) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, g in graphs:
        path = d / f"{name}.ccp"
        path.write_text(format_instance(g))
        paths.append(path)
    return paths
