"""End-to-end flows: stream in, solve, report.

Each pipeline consumes a stream (single-pass or replayable), keeps only
its sketch state, finalizes with an exact desk-scale solve, and returns a
PipelineReport.  An infeasible instance is an answer, not a crash: the
report comes back with feasible = False and whatever partial output
exists.  Violated preconditions (wrong base connectivity, malformed
input) raise instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cactus import CactusGraph, cactus_build, cactus_unfold
from .certificate_stream import ForestStack
from .cycle_aug_stream import WeightedAugState
from .errors import Infeasible
from .graph_core import (
    UnionFind,
    WeightedEdge,
    cut_size_table,
    edge_connectivity_at_least,
    is_connected,
)
from .oracles import AugmentationInstance, exact_kcap, exact_sndp
from .sndp_coreset import Requirements
from .spanner_stream import SpannerState
from .weightbands import as_fraction

_EVENT_KINDS = ("E", "L")


@dataclass(frozen=True)
class StreamEvent:
    """One stream record: a base edge (E) or a candidate link (L)."""

    kind: str
    edge: WeightedEdge

    def __post_init__(self):
        if self.kind not in _EVENT_KINDS:
            raise ValueError(f"unknown stream record kind {self.kind!r}")


class ReplayableStream:
    """Wraps a recorded stream and counts how often it is replayed."""

    def __init__(self, items):
        self._items = list(items)
        self.passes = 0

    def replay(self):
        self.passes += 1
        return iter(list(self._items))

    def items(self):
        return list(self._items)

    def __len__(self):
        return len(self._items)


@dataclass
class PipelineReport:
    output: list[WeightedEdge]
    total_weight: int
    peak_stored: dict[str, int]
    feasible: bool
    oracle_weight: int | None = None
    details: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float | None:
        return ratio_of(self.total_weight, self.oracle_weight)


def ratio_of(total: int, oracle: int | None) -> float | None:
    if oracle is None:
        return None
    if oracle == 0:
        return 1.0 if total == 0 else None
    return total / oracle


def _min_cut_value(edges, n: int) -> int:
    sizes = cut_size_table(edges, n)
    return int(sizes[1:].min())


def kcap_link_arrival(
    links,
    *,
    k: int | None = None,
    base_edges=None,
    n: int | None = None,
    cactus: CactusGraph | None = None,
    epsilon,
    with_oracle: bool = False,
) -> PipelineReport:
    """Augment a (k-1)-edge-connected base to k using streamed links.

    Either a base graph (with n and k; its min cut must be exactly k-1) or
    a prebuilt cactus of the relevant cuts is accepted.  The cactus is
    unfolded onto a cycle, links are mapped through phi onto positions,
    and the weighted cycle store plus exact cycle cover give the answer.
    """
    links = list(links)
    if cactus is None:
        if base_edges is None or n is None or k is None:
            raise ValueError("graph mode needs base_edges, n and k")
        base_edges = list(base_edges)
        if not is_connected(base_edges, n):
            raise ValueError("base graph must be connected")
        mc = _min_cut_value(base_edges, n)
        if mc != k - 1:
            raise ValueError(
                f"base min cut is {mc}, augmentation to {k} needs exactly {k - 1}"
            )
        cactus = cactus_build(base_edges, n)
    unf = cactus_unfold(cactus)
    state = WeightedAugState(unf.length, epsilon)
    for zl in unf.links:
        state.insert(zl)
    next_arrival = len(unf.links)
    back: dict[int, WeightedEdge] = {}
    dropped = 0
    for link in links:
        cu, cv = cactus.phi[link.u], cactus.phi[link.v]
        if cu == cv:
            dropped += 1
            continue
        mapped = WeightedEdge(
            unf.position_of(cu), unf.position_of(cv), link.w, next_arrival
        )
        back[next_arrival] = link
        next_arrival += 1
        state.insert(mapped)
    details = {
        "cycle_length": unf.length,
        "dropped_links": dropped,
        "junction_links": len(unf.links),
    }
    try:
        cycle_links, cycle_weight = state.finalize()
    except Infeasible as exc:
        details["reason"] = str(exc)
        return PipelineReport(
            output=[],
            total_weight=0,
            peak_stored={"aug_store": state.peak_stored},
            feasible=False,
            details=details,
        )
    chosen = [back[cl.arrival] for cl in cycle_links if cl.arrival in back]
    details["cycle_weight"] = cycle_weight
    oracle_weight = None
    if with_oracle:
        if base_edges is not None and len(links) <= 22:
            try:
                _, oracle_weight = exact_kcap(
                    AugmentationInstance(n=n, k=k, base=base_edges, links=links)
                )
            except Infeasible:
                oracle_weight = None
        else:
            oracle_weight = _cycle_oracle(unf, cactus, links)
    return PipelineReport(
        output=chosen,
        total_weight=sum(e.w for e in chosen),
        peak_stored={"aug_store": state.peak_stored},
        feasible=True,
        oracle_weight=oracle_weight,
        details=details,
    )


def _cycle_oracle(unf, cactus: CactusGraph, links) -> int | None:
    """Exact optimum over the unfolded cycle with every link available."""
    from .graph_core import Arc
    from .oracles import exact_directed_cycle_cover

    arcs = []
    for zl in unf.links:
        arcs.append(Arc(zl.u, zl.v, 0, zl))
        arcs.append(Arc(zl.v, zl.u, 0, zl))
    for link in links:
        cu, cv = cactus.phi[link.u], cactus.phi[link.v]
        if cu == cv:
            continue
        pu, pv = unf.position_of(cu), unf.position_of(cv)
        arcs.append(Arc(pu, pv, link.w, link))
        arcs.append(Arc(pv, pu, link.w, link))
    try:
        chosen, _ = exact_directed_cycle_cover(unf.length, arcs)
    except Infeasible:
        return None
    seen = set()
    total = 0
    for a in chosen:
        if a.origin is not None and a.origin.arrival not in seen:
            seen.add(a.origin.arrival)
            total += a.origin.w
    return total


def kcap_fully_streaming(
    events,
    n: int,
    k: int,
    *,
    t: int,
    epsilon,
    with_oracle: bool = False,
) -> PipelineReport:
    """One pass over mixed base edges and links, then an exact finalize.

    Base edges feed a k-forest certificate, links feed a spanner whose
    stretch parameter is tightened to eps/(2t-1); the finalizer solves the
    augmentation exactly on certificate + stored links.
    """
    cert = ForestStack(n, k)
    spanner = SpannerState(n, t, as_fraction(epsilon) / (2 * t - 1))
    base_all: list[WeightedEdge] = []
    links_all: list[WeightedEdge] = []
    for ev in events:
        if ev.kind == "E":
            base_all.append(ev.edge)
            cert.insert(ev.edge)
        else:
            links_all.append(ev.edge)
            spanner.insert(ev.edge)
    peaks = {"certificate": len(cert), "spanner": spanner.peak_stored}
    details = {"kept_links": spanner.stored_count}
    try:
        instance = AugmentationInstance(
            n=n, k=k, base=cert.edges(), links=spanner.edges()
        )
        chosen, weight = exact_kcap(instance)
    except ValueError as exc:
        details["reason"] = str(exc)
        return PipelineReport([], 0, peaks, False, details=details)
    except Infeasible as exc:
        details["reason"] = str(exc)
        return PipelineReport([], 0, peaks, False, details=details)
    oracle_weight = None
    if with_oracle:
        try:
            _, oracle_weight = exact_kcap(
                AugmentationInstance(n=n, k=k, base=base_all, links=links_all)
            )
        except Infeasible:
            oracle_weight = None
    return PipelineReport(
        output=chosen,
        total_weight=weight,
        peak_stored=peaks,
        feasible=True,
        oracle_weight=oracle_weight,
        details=details,
    )


def stap_fully_streaming(
    events,
    n: int,
    terminals,
    *,
    t: int,
    epsilon,
    with_oracle: bool = False,
) -> PipelineReport:
    """Augment a base tree so every terminal pair gets two disjoint paths.

    Base edges must arrive acyclically (they form a tree or forest); links
    are sketched by a spanner.  Finalize solves a two-connectivity design
    over free copies of the base plus stored links.
    """
    terminals = sorted(set(terminals))
    if len(terminals) < 2:
        raise ValueError("need at least two terminals")
    for r in terminals:
        if not (0 <= r < n):
            raise ValueError(f"terminal {r} out of range")
    base_uf = UnionFind(n)
    base_edges: list[WeightedEdge] = []
    links_all: list[WeightedEdge] = []
    spanner = SpannerState(n, t, as_fraction(epsilon) / (2 * t - 1))
    for ev in events:
        if ev.kind == "E":
            if not base_uf.union(ev.edge.u, ev.edge.v):
                raise ValueError(f"base edge closes a cycle: {ev.edge}")
            base_edges.append(ev.edge)
        else:
            links_all.append(ev.edge)
            spanner.insert(ev.edge)
    root = terminals[0]
    if any(not base_uf.same(root, r) for r in terminals[1:]):
        raise ValueError("base edges do not span the terminals")
    reqs = Requirements(
        {(a, b): 2 for i, a in enumerate(terminals) for b in terminals[i + 1 :]},
        n,
    )
    peaks = {"spanner": spanner.peak_stored}

    def design(link_pool):
        combined = []
        origin = {}
        for i, e in enumerate(base_edges):
            copy = WeightedEdge(e.u, e.v, 0, i)
            combined.append(copy)
            origin[i] = ("base", e)
        for j, e in enumerate(link_pool):
            copy = WeightedEdge(e.u, e.v, e.w, len(base_edges) + j)
            combined.append(copy)
            origin[copy.arrival] = ("link", e)
        chosen, weight = exact_sndp(n, combined, reqs)
        picked = [origin[c.arrival][1] for c in chosen if origin[c.arrival][0] == "link"]
        return picked, weight

    details = {"kept_links": spanner.stored_count, "terminals": terminals}
    try:
        picked, weight = design(spanner.edges())
    except Infeasible as exc:
        details["reason"] = str(exc)
        return PipelineReport([], 0, peaks, False, details=details)
    oracle_weight = None
    if with_oracle:
        try:
            _, oracle_weight = design(links_all)
        except Infeasible:
            oracle_weight = None
    return PipelineReport(
        output=picked,
        total_weight=weight,
        peak_stored=peaks,
        feasible=True,
        oracle_weight=oracle_weight,
        details=details,
    )


def _forest_path(forest: list[WeightedEdge], n: int, s: int, g: int):
    """Edges of the s-g path in the forest, or None."""
    adj: dict[int, list[tuple[int, WeightedEdge]]] = {}
    for e in forest:
        adj.setdefault(e.u, []).append((e.v, e))
        adj.setdefault(e.v, []).append((e.u, e))
    via: dict[int, tuple[int, WeightedEdge] | None] = {s: None}
    queue = [s]
    while queue:
        x = queue.pop()
        if x == g:
            break
        for y, e in adj.get(x, ()):
            if y not in via:
                via[y] = (x, e)
                queue.append(y)
    if g not in via:
        return None
    path = []
    x = g
    while via[x] is not None:
        prev, e = via[x]
        path.append(e)
        x = prev
    return path


def kecss(
    stream,
    n: int,
    k: int,
    *,
    epsilon,
    with_oracle: bool = False,
) -> PipelineReport:
    """k-pass cheap k-edge-connected subgraph via repeated augmentation.

    Pass 1 streams a minimum spanning forest by the cycle rule.  Pass l
    rebuilds the cactus of the current (l-1)-connected subgraph, unfolds
    it, and runs the weighted cycle store over all not-yet-chosen edges.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if not isinstance(stream, ReplayableStream):
        stream = ReplayableStream(stream)
    forest: list[WeightedEdge] = []
    for e in stream.replay():
        path = _forest_path(forest, n, e.u, e.v)
        if path is None:
            forest.append(e)
            continue
        worst = max(path, key=lambda x: (x.w, x.arrival))
        if worst.w > e.w:
            forest.remove(worst)
            forest.append(e)
    chosen: list[WeightedEdge] = list(forest)
    chosen_arrivals = {e.arrival for e in chosen}
    peaks = {"pass_1": len(forest)}
    details: dict = {"pass_oracles": {}, "pass_weights": {}}
    details["pass_weights"]["pass_1"] = sum(e.w for e in forest)
    if with_oracle:
        details["pass_oracles"]["pass_1"] = _msf_weight(stream.items(), n)
    if not is_connected(forest, n):
        details["reason"] = "stream does not connect the graph"
        return PipelineReport(chosen, sum(e.w for e in chosen), peaks, False, details=details)
    for level in range(2, k + 1):
        if edge_connectivity_at_least(chosen, n, level):
            peaks[f"pass_{level}"] = 0
            details["pass_weights"][f"pass_{level}"] = 0
            stream.replay()
            continue
        base = list(chosen)
        cac = cactus_build(base, n)
        unf = cactus_unfold(cac)
        state = WeightedAugState(unf.length, epsilon)
        for zl in unf.links:
            state.insert(zl)
        next_arrival = len(unf.links)
        back: dict[int, WeightedEdge] = {}
        remaining: list[WeightedEdge] = []
        for e in stream.replay():
            if e.arrival in chosen_arrivals:
                continue
            remaining.append(e)
            cu, cv = cac.phi[e.u], cac.phi[e.v]
            if cu == cv:
                continue
            mapped = WeightedEdge(
                unf.position_of(cu), unf.position_of(cv), e.w, next_arrival
            )
            back[next_arrival] = e
            next_arrival += 1
            state.insert(mapped)
        peaks[f"pass_{level}"] = state.peak_stored
        try:
            cycle_links, _ = state.finalize()
        except Infeasible as exc:
            details["reason"] = f"pass {level}: {exc}"
            return PipelineReport(
                chosen, sum(e.w for e in chosen), peaks, False, details=details
            )
        picked = [back[cl.arrival] for cl in cycle_links if cl.arrival in back]
        details["pass_weights"][f"pass_{level}"] = sum(e.w for e in picked)
        if with_oracle and len(remaining) <= 22:
            try:
                _, ow = exact_kcap(
                    AugmentationInstance(n=n, k=level, base=base, links=remaining)
                )
                details["pass_oracles"][f"pass_{level}"] = ow
            except Infeasible:
                pass
        chosen.extend(picked)
        chosen_arrivals.update(e.arrival for e in picked)
    feasible = edge_connectivity_at_least(chosen, n, k)
    return PipelineReport(
        output=chosen,
        total_weight=sum(e.w for e in chosen),
        peak_stored=peaks,
        feasible=feasible,
        details=details,
    )


def _msf_weight(edges, n: int) -> int:
    uf = UnionFind(n)
    total = 0
    for e in sorted(edges, key=lambda x: (x.w, x.arrival)):
        if uf.union(e.u, e.v):
            total += e.w
    return total
