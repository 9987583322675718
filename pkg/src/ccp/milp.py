"""Explicit linearized MILP models, LP-format export and point validation.

Variables follow the scheme ``x_i_k``, ``y_i_j`` (i<j), ``z_i_j_k`` (i<j) and
``w_k`` with 1-based node and slot indices. Connectivity and path rows are
exponential families; the model only records them as descriptors and
``validate_point`` enumerates them exhaustively for small graphs.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence, TextIO

from .graph import ColoredGraph, Edge, mask_of, nodes_of, popcount
from .solution import Partition, Problem

EXHAUSTIVE_LIMIT = 14
CONNECTIVITY_MODES = ("none", "aggregated", "disaggregated")
SYMMETRY_MODES = ("none", "cardinality", "index")


def xname(i: int, k: int) -> str:
    return f"x_{i + 1}_{k + 1}"


def yname(i: int, j: int) -> str:
    i, j = min(i, j), max(i, j)
    return f"y_{i + 1}_{j + 1}"


def zname(i: int, j: int, k: int) -> str:
    i, j = min(i, j), max(i, j)
    return f"z_{i + 1}_{j + 1}_{k + 1}"


def wname(k: int) -> str:
    return f"w_{k + 1}"


@dataclass(frozen=True)
class ModelConfig:
    problem: Problem
    q: int
    connectivity: str = "none"
    edge_vs_path: str = "edge"
    symmetry: str = "none"
    keep_edge_cuts: bool = False
    edge_count_cut_rhs: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "problem", Problem.parse(self.problem))
        if self.q < 1:
            raise ValueError("Q must be at least 1")
        if self.connectivity not in CONNECTIVITY_MODES:
            raise ValueError(f"connectivity must be one of {CONNECTIVITY_MODES}")
        if self.edge_vs_path not in ("edge", "path"):
            raise ValueError("edge_vs_path must be 'edge' or 'path'")
        if self.symmetry not in SYMMETRY_MODES:
            raise ValueError(f"symmetry must be one of {SYMMETRY_MODES}")
        if self.connectivity == "none" and self.problem.needs_connectivity:
            raise ValueError(f"{self.problem.name} requires connectivity constraints")


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, float], ...]
    sense: str  # "<=", ">=" or "="
    rhs: float

    def lhs(self, values: dict[str, float]) -> float:
        return sum(c * values.get(v, 0.0) for v, c in self.terms)

    def violated(self, values: dict[str, float], tol: float = 1e-9) -> bool:
        lhs = self.lhs(values)
        if self.sense == "<=":
            return lhs > self.rhs + tol
        if self.sense == ">=":
            return lhs < self.rhs - tol
        return abs(lhs - self.rhs) > tol


@dataclass(frozen=True)
class LazyFamily:
    name: str
    description: str


@dataclass
class MilpModel:
    config: ModelConfig
    variables: list[tuple[str, str]]  # (name, "binary" | "unit")
    sense: str  # "max" | "min"
    objective: dict[str, float]
    constraints: list[Constraint]
    lazy_families: list[LazyFamily]
    row_counts: dict[str, int] = field(default_factory=dict)

    @property
    def num_rows(self) -> int:
        return len(self.constraints)

    def variable_names(self) -> set[str]:
        return {v for v, _ in self.variables}


def expected_row_counts(n: int, m: int, num_colors: int, cfg: ModelConfig) -> dict[str, int]:
    """Closed-form static row counts for a model built with ``cfg``."""
    q = cfg.q
    counts = {
        "assignment": n,
        "color": num_colors * q,
        "fortet": 3 * (n * (n - 1) // 2) * q,
        "edge": m if cfg.edge_vs_path == "edge" else 0,
        "symmetry": {"none": 0, "cardinality": q - 1, "index": n}[cfg.symmetry],
        "keep_edge": m * q if cfg.keep_edge_cuts else 0,
        "edge_count": 1 if cfg.edge_count_cut_rhs is not None else 0,
        "mcc_w": q if cfg.problem is Problem.MCC else 0,
    }
    counts["total"] = sum(counts.values())
    return counts


def build_model(g: ColoredGraph, cfg: ModelConfig) -> MilpModel:
    n, q = g.n, cfg.q
    V = range(n)
    K = range(q)
    pairs = list(combinations(V, 2))

    variables = [(xname(i, k), "binary") for i in V for k in K]
    variables += [(yname(i, j), "binary") for i, j in g.edges]
    variables += [(zname(i, j, k), "unit") for i, j in pairs for k in K]
    if cfg.problem is Problem.MCC:
        variables += [(wname(k), "binary") for k in K]

    if cfg.problem is Problem.MOP:
        sense, objective = "max", {yname(i, j): 1.0 for i, j in g.edges}
    elif cfg.problem is Problem.MEC:
        sense, objective = "max", {zname(i, j, k): 1.0 for i, j in pairs for k in K}
    else:
        sense, objective = "min", {wname(k): 1.0 for k in K}

    rows: list[Constraint] = []
    counts: dict[str, int] = {}

    def add(group: str, new: Iterable[Constraint]) -> None:
        before = len(rows)
        rows.extend(new)
        counts[group] = len(rows) - before

    add("assignment", (Constraint(f"assign_{i + 1}", tuple((xname(i, k), 1.0) for k in K), "=", 1) for i in V))
    add(
        "color",
        (
            Constraint(f"color_{c + 1}_{k + 1}", tuple((xname(i, k), 1.0) for i in nodes_of(cm)), "<=", 1)
            for c, cm in enumerate(g.color_masks)
            for k in K
        ),
    )

    def fortet():
        for i, j in pairs:
            for k in K:
                z, xi, xj = zname(i, j, k), xname(i, k), xname(j, k)
                tag = f"{i + 1}_{j + 1}_{k + 1}"
                yield Constraint(f"fortet_lo_{tag}", ((z, 1.0), (xi, -1.0), (xj, -1.0)), ">=", -1)
                yield Constraint(f"fortet_ui_{tag}", ((z, 1.0), (xi, -1.0)), "<=", 0)
                yield Constraint(f"fortet_uj_{tag}", ((z, 1.0), (xj, -1.0)), "<=", 0)

    add("fortet", fortet())
    add(
        "edge",
        (
            Constraint(
                f"edge_{i + 1}_{j + 1}",
                ((yname(i, j), 1.0),) + tuple((zname(i, j, k), -1.0) for k in K),
                "<=",
                0,
            )
            for i, j in g.edges
        )
        if cfg.edge_vs_path == "edge"
        else (),
    )
    if cfg.symmetry == "cardinality":
        sym = (
            Constraint(
                f"symcard_{k + 1}",
                tuple((xname(i, k), 1.0) for i in V) + tuple((xname(i, k + 1), -1.0) for i in V),
                ">=",
                0,
            )
            for k in range(q - 1)
        )
    elif cfg.symmetry == "index":
        # node i (1-based) may only use slots 1..i
        sym = (
            Constraint(f"symidx_{i + 1}", tuple((xname(i, k), 1.0) for k in range(min(i + 1, q))), "=", 1)
            for i in V
        )
    else:
        sym = ()
    add("symmetry", sym)
    add(
        "keep_edge",
        (
            Constraint(f"keep_{i + 1}_{j + 1}_{k + 1}", ((yname(i, j), 1.0), (zname(i, j, k), -1.0)), ">=", 0)
            for i, j in g.edges
            for k in K
        )
        if cfg.keep_edge_cuts
        else (),
    )
    add(
        "edge_count",
        (Constraint("edgecount", tuple((yname(i, j), 1.0) for i, j in g.edges), ">=", cfg.edge_count_cut_rhs),)
        if cfg.edge_count_cut_rhs is not None
        else (),
    )
    add(
        "mcc_w",
        (
            Constraint(f"wlink_{k + 1}", ((wname(k), float(n)),) + tuple((xname(i, k), -1.0) for i in V), ">=", 0)
            for k in K
        )
        if cfg.problem is Problem.MCC
        else (),
    )
    counts["total"] = len(rows)

    lazy = []
    if cfg.connectivity == "aggregated":
        lazy.append(
            LazyFamily(
                "connectivity_aggregated",
                "for all U: |U||V\\U| * sum_{uv in delta(U)} y_uv >= sum_{i in U, j not in U, k} z_i_j_k",
            )
        )
    elif cfg.connectivity == "disaggregated":
        lazy.append(
            LazyFamily(
                "connectivity_disaggregated",
                "for all U, i in U, j not in U, k: sum_{uv in delta(U)} y_uv >= z_i_j_k",
            )
        )
    if cfg.edge_vs_path == "path":
        lazy.append(
            LazyFamily(
                "path",
                "for all elementary paths P_ij: sum_{uv in P} y_uv <= |P| - 1 + sum_k z_i_j_k",
            )
        )
    return MilpModel(cfg, variables, sense, objective, rows, lazy, counts)


# ---------------------------------------------------------------- lazy rows


def connectivity_row(g: ColoredGraph, u: Iterable[int], q: int, pair: tuple[int, int, int] | None = None) -> Constraint:
    """Aggregated row for cut side ``u``, or the disaggregated row for ``(i, j, k)``."""
    um = mask_of(u)
    inside = nodes_of(um)
    outside = nodes_of(~um & g.full_mask)
    cut = [(a, b) for a, b in g.edges if (um >> a & 1) != (um >> b & 1)]
    label = "_".join(str(v + 1) for v in inside)
    if pair is None:
        coef = float(len(inside) * len(outside))
        terms = tuple((yname(a, b), coef) for a, b in cut)
        terms += tuple((zname(i, j, k), -1.0) for i in inside for j in outside for k in range(q))
        return Constraint(f"conn_U_{label}", terms, ">=", 0)
    i, j, k = pair
    terms = tuple((yname(a, b), 1.0) for a, b in cut) + ((zname(i, j, k), -1.0),)
    return Constraint(f"conn_U_{label}_{i + 1}_{j + 1}_{k + 1}", terms, ">=", 0)


def path_row(path: Sequence[int], q: int) -> Constraint:
    i, j = path[0], path[-1]
    terms = tuple((yname(a, b), 1.0) for a, b in zip(path, path[1:]))
    terms += tuple((zname(i, j, k), -1.0) for k in range(q))
    return Constraint("path_" + "_".join(str(v + 1) for v in path), terms, "<=", len(path) - 2)


def point_values(
    g: ColoredGraph, p: Partition, q: int, kept: Iterable[Edge] | None = None, with_w: bool = True
) -> dict[str, float]:
    """Variable values of the integer point induced by ``p``.

    ``kept`` overrides the derived y (intra-slot edges) when given.
    """
    a = p.assignment
    vals: dict[str, float] = {}
    for i in range(g.n):
        for k in range(q):
            vals[xname(i, k)] = 1.0 if a[i] == k else 0.0
    kept_set = {(min(e), max(e)) for e in kept} if kept is not None else None
    for i, j in g.edges:
        on = (a[i] == a[j]) if kept_set is None else ((i, j) in kept_set)
        vals[yname(i, j)] = 1.0 if on else 0.0
    for i, j in combinations(range(g.n), 2):
        if a[i] == a[j]:
            vals[zname(i, j, a[i])] = 1.0
    if with_w:
        used = set(a)
        for k in range(q):
            vals[wname(k)] = 1.0 if k in used else 0.0
    return vals


@dataclass(frozen=True)
class Violation:
    row: str
    lhs: float
    sense: str
    rhs: float
    family: str


class ViolationList(list):
    """Violated rows; ``partial`` is set when lazy families were not enumerated."""

    partial: bool = False


def validate_point(
    m: MilpModel,
    g: ColoredGraph,
    p: Partition,
    cfg: ModelConfig | None = None,
    kept: Iterable[Edge] | None = None,
    limit: int = EXHAUSTIVE_LIMIT,
) -> ViolationList:
    """Evaluate every static row and, for ``n <= limit``, every lazy row at ``p``."""
    cfg = cfg or m.config
    if p.n != g.n:
        raise ValueError("partition does not cover the graph")
    if p.q > cfg.q or max(p.assignment) >= cfg.q:
        raise ValueError(f"partition uses more than Q={cfg.q} slots")
    q = cfg.q
    vals = point_values(g, p, q, kept)
    out = ViolationList()
    for row in m.constraints:
        if row.violated(vals):
            out.append(Violation(row.name, row.lhs(vals), row.sense, row.rhs, "static"))
    if g.n > limit:
        out.partial = True
        return out

    ymask = [0] * g.n
    for a, b in g.edges:
        if vals[yname(a, b)] > 0.5:
            ymask[a] |= 1 << b
            ymask[b] |= 1 << a
    slot_masks = [mask_of(s) for s in p.slots()]
    full = g.full_mask
    if cfg.connectivity != "none":
        # U and V\U give identical rows; enumerate sides containing node 0
        for um in range(1, full, 2):
            out_m = full & ~um
            cut_kept = 0
            cut_total = 0
            for v in nodes_of(um):
                cut_kept += popcount(ymask[v] & out_m)
                cut_total += popcount(g.adj[v] & out_m)
            if cfg.connectivity == "aggregated":
                coef = popcount(um) * popcount(out_m)
                rhs_pairs = sum(popcount(sm & um) * popcount(sm & out_m) for sm in slot_masks)
                if coef * cut_kept < rhs_pairs:
                    label = "_".join(str(v + 1) for v in nodes_of(um))
                    out.append(Violation(f"conn_U_{label}", coef * cut_kept - rhs_pairs, ">=", 0, "aggregated"))
            else:
                for k, sm in enumerate(slot_masks):
                    ins, outs = nodes_of(sm & um), nodes_of(sm & out_m)
                    for i in ins:
                        for j in outs:
                            if cut_kept < 1:
                                label = "_".join(str(v + 1) for v in nodes_of(um))
                                out.append(
                                    Violation(
                                        f"conn_U_{label}_{i + 1}_{j + 1}_{k + 1}",
                                        cut_kept - 1,
                                        ">=",
                                        0,
                                        "disaggregated",
                                    )
                                )
    if cfg.edge_vs_path == "path":
        # A path row can only be violated if all its edges are kept, so the
        # search runs on the support graph; every other path row holds.
        a = p.assignment
        for path in support_paths(g.n, ymask):
            if a[path[0]] != a[path[-1]]:
                length = len(path) - 1
                out.append(
                    Violation(
                        "path_" + "_".join(str(v + 1) for v in path),
                        float(length),
                        "<=",
                        float(length - 1),
                        "path",
                    )
                )
    return out


def support_paths(n: int, ymask: Sequence[int]):
    """All elementary paths with at least one edge in the support graph, once per direction pair."""
    for s in range(n):
        stack = [(s, 1 << s, (s,))]
        while stack:
            v, seen, path = stack.pop()
            if len(path) > 1 and path[-1] > s:
                yield path
            nxt = ymask[v] & ~seen
            while nxt:
                low = nxt & -nxt
                nxt ^= low
                u = low.bit_length() - 1
                stack.append((u, seen | low, path + (u,)))


# ----------------------------------------------------------------- LP text


def _fmt_coef(c: float) -> str:
    return str(int(c)) if float(c).is_integer() else repr(c)


def _expr(terms: Iterable[tuple[str, float]]) -> list[str]:
    out = []
    for v, c in terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        out.append(f"{sign} {v}" if mag == 1 else f"{sign} {_fmt_coef(mag)} {v}")
    return out


def _wrap(head: str, pieces: list[str], tail: str = "", width: int = 200) -> list[str]:
    lines = []
    cur = head
    for piece in pieces + ([tail] if tail else []):
        if len(cur) + 1 + len(piece) > width and cur.strip():
            lines.append(cur)
            cur = "   " + piece
        else:
            cur = f"{cur} {piece}" if cur else piece
    lines.append(cur)
    return lines


def export_lp(m: MilpModel, sink: TextIO) -> None:
    cfg = m.config
    lines = [
        "\\ colorful components model",
        f"\\ problem={cfg.problem.value} Q={cfg.q} connectivity={cfg.connectivity} "
        f"edge_vs_path={cfg.edge_vs_path} symmetry={cfg.symmetry} "
        f"keep_edge_cuts={cfg.keep_edge_cuts} edge_count_cut_rhs={cfg.edge_count_cut_rhs}",
        "\\ rows: " + " ".join(f"{k}={v}" for k, v in m.row_counts.items()),
    ]
    for fam in m.lazy_families:
        lines.append(f"\\ lazy {fam.name} (separated at integer points): {fam.description}")
    lines.append("Maximize" if m.sense == "max" else "Minimize")
    # an empty objective still needs one term to stay valid LP
    pieces = _expr(m.objective.items()) if m.objective else [f"0 {m.variables[0][0]}"]
    lines += _wrap(" obj:", pieces)
    lines.append("Subject To")
    for row in m.constraints:
        lines += _wrap(f" {row.name}:", _expr(row.terms), f"{row.sense} {_fmt_coef(row.rhs)}")
    lines.append("Bounds")
    lines += [f" 0 <= {v} <= 1" for v, kind in m.variables if kind == "unit"]
    lines.append("Binaries")
    binaries = [v for v, kind in m.variables if kind == "binary"]
    for start in range(0, len(binaries), 10):
        lines.append(" " + " ".join(binaries[start : start + 10]))
    lines.append("End")
    sink.write("\n".join(lines) + "\n")


def lp_text(m: MilpModel) -> str:
    buf = io.StringIO()
    export_lp(m, buf)
    return buf.getvalue()


_TERM = re.compile(r"([+-])\s*(?:(\d+(?:\.\d*)?(?:e[+-]?\d+)?)\s+)?([A-Za-z_][\w.]*)")


@dataclass
class ParsedLP:
    sense: str
    objective: dict[str, float]
    constraints: list[Constraint]
    bounded: list[str]
    binaries: list[str]


def parse_lp(stream: TextIO | str) -> ParsedLP:
    """Read back the subset of LP syntax that ``export_lp`` writes."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    section = None
    logical: list[tuple[str, str]] = []
    for raw in stream:
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("\\"):
            continue
        key = line.strip().lower()
        if key in ("maximize", "minimize", "subject to", "bounds", "binaries", "end"):
            section = key
            continue
        if line.startswith("   ") and logical:
            sec, text = logical[-1]
            logical[-1] = (sec, text + " " + line.strip())
        else:
            logical.append((section, line.strip()))
    sense = "max"
    objective: dict[str, float] = {}
    rows: list[Constraint] = []
    bounded: list[str] = []
    binaries: list[str] = []
    for sec, text in logical:
        if sec in ("maximize", "minimize"):
            sense = "max" if sec == "maximize" else "min"
            body = text.split(":", 1)[1]
            if not body.strip().startswith("0 "):
                objective = {v: c for v, c in _terms(body)}
        elif sec == "subject to":
            name, body = text.split(":", 1)
            match = re.search(r"(<=|>=|=)\s*(-?[\d.]+)\s*$", body)
            if match is None:
                raise ValueError(f"row {name} has no relation")
            rows.append(
                Constraint(name.strip(), tuple(_terms(body[: match.start()])), match.group(1), float(match.group(2)))
            )
        elif sec == "bounds":
            bounded.append(text.split("<=")[1].strip())
        elif sec == "binaries":
            binaries.extend(text.split())
    return ParsedLP(sense, objective, rows, bounded, binaries)


def _terms(body: str) -> list[tuple[str, float]]:
    out = []
    for sign, coef, var in _TERM.findall(body):
        c = float(coef) if coef else 1.0
        out.append((var, -c if sign == "-" else c))
    return out
