"""Shared generators and independent brute-force oracles for the test suite.

Everything here is deliberately written from scratch, without reusing the
solver internals under test, so the two routes can disagree when one of
them is wrong.
"""

from __future__ import annotations

import heapq
import itertools
import random

import networkx as nx


# ---------------------------------------------------------------------------
# instance generators


def random_multigraph(rng: random.Random, n: int, m: int) -> list[tuple[int, int]]:
    """m edges drawn uniformly with repetition; parallel edges allowed."""
    edges = []
    while len(edges) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            edges.append((u, v))
    return edges


def random_connected_graph(
    rng: random.Random, n: int, extra: int
) -> list[tuple[int, int]]:
    """Random spanning tree plus extra random non-loop edges."""
    order = list(range(n))
    rng.shuffle(order)
    edges = []
    for i in range(1, n):
        edges.append((order[i], order[rng.randrange(i)]))
    edges.extend(random_multigraph(rng, n, extra))
    rng.shuffle(edges)
    return edges


def random_two_connected_graph(
    rng: random.Random, n: int, extra: int
) -> list[tuple[int, int]]:
    """A random cycle through all vertices plus extra chords."""
    order = list(range(n))
    rng.shuffle(order)
    edges = [(order[i], order[(i + 1) % n]) for i in range(n)]
    edges.extend(random_multigraph(rng, n, extra))
    rng.shuffle(edges)
    return edges


def random_cactus_edges(
    rng: random.Random, max_nodes: int
) -> tuple[int, list[tuple[int, int]]]:
    """Grow a cactus by attaching doubled edges and rings to random anchors."""
    size = 1
    edges: list[tuple[int, int]] = []
    while size < max_nodes:
        anchor = rng.randrange(size)
        room = max_nodes - size
        if rng.random() < 0.5 or room == 1:
            edges += [(anchor, size), (anchor, size)]
            size += 1
        else:
            q = rng.randint(2, min(room, 4))
            prev = anchor
            for x in range(size, size + q):
                edges.append((prev, x))
                prev = x
            edges.append((prev, anchor))
            size += q
        if size >= 3 and rng.random() < 0.3:
            break
    return size, edges


# ---------------------------------------------------------------------------
# connectivity oracles via networkx


def nx_multigraph(edges, n: int) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(range(n))
    for e in edges:
        u, v = (e.u, e.v) if hasattr(e, "u") else (e[0], e[1])
        g.add_edge(u, v)
    return g


def nx_edge_connectivity(edges, n: int) -> int:
    g = nx_multigraph(edges, n)
    if n <= 1:
        return 0
    if not nx.is_connected(g):
        return 0
    return _multi_edge_connectivity(g)


def _with_capacity(g: nx.MultiGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.nodes)
    for u, v in g.edges():
        if h.has_edge(u, v):
            h[u][v]["capacity"] += 1
        else:
            h.add_edge(u, v, capacity=1)
    return h


def _multi_edge_connectivity(g: nx.MultiGraph) -> int:
    h = _with_capacity(g)
    nodes = sorted(g.nodes)
    s = nodes[0]
    best = None
    for t in nodes[1:]:
        f = nx.maximum_flow_value(h, s, t)
        if best is None or f < best:
            best = f
    # global min cut separates s from some other vertex
    return int(best) if best is not None else 0


def nx_pair_flow(edges, n: int, s: int, t: int) -> int:
    h = _with_capacity(nx_multigraph(edges, n))
    if s not in h or t not in h:
        return 0
    return int(nx.maximum_flow_value(h, s, t))


# ---------------------------------------------------------------------------
# shortest paths (independent of the spanner's internal distances)


def dijkstra(n: int, edges, src: int) -> list[float]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for e in edges:
        adj[e.u].append((e.v, e.w))
        adj[e.v].append((e.u, e.w))
    dist = [float("inf")] * n
    dist[src] = 0
    heap = [(0, src)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for w, cost in adj[v]:
            nd = d + cost
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def all_dists(n: int, edges) -> list[list[float]]:
    return [dijkstra(n, edges, s) for s in range(n)]


# ---------------------------------------------------------------------------
# exact set cover / multicover by branch and bound (element-driven search,
# structurally unlike the index-driven search in the package)


def exact_cover(masks: list[int], weights: list[int], universe: int):
    """Minimum-weight subset of masks whose union is the universe.

    Returns (weight, chosen index tuple) or None.  Branches on the
    uncovered element with the fewest candidate sets.
    """
    if universe == 0:
        return 0, ()
    covers_elem: dict[int, list[int]] = {}
    bit = 1
    elem = 0
    while bit <= universe:
        if universe & bit:
            cand = [i for i, m in enumerate(masks) if m & bit]
            if not cand:
                return None
            covers_elem[elem] = cand
        bit <<= 1
        elem += 1
    best: list = [None]

    def walk(covered: int, weight: int, chosen: tuple) -> None:
        if best[0] is not None and weight >= best[0][0]:
            return
        if covered & universe == universe:
            best[0] = (weight, chosen)
            return
        pick = None
        for e, cand in covers_elem.items():
            if covered & (1 << e):
                continue
            if pick is None or len(cand) < len(pick):
                pick = cand
        for i in pick:
            if i in chosen:
                continue
            walk(covered | masks[i], weight + weights[i], chosen + (i,))

    walk(0, 0, ())
    return best[0]


# ---------------------------------------------------------------------------
# cycle augmentation oracles


def interval_cuts(n: int) -> list[tuple[int, int]]:
    return [(l, r) for l in range(1, n) for r in range(l, n)]


def chord_splits(u: int, v: int, l: int, r: int) -> bool:
    return (l <= u <= r) != (l <= v <= r)


def undirected_cycle_opt(n: int, chords: list[tuple[int, int, int]]):
    """Minimum-weight chord subset splitting every interval cut of the
    rooted n-cycle; None when infeasible."""
    ivs = interval_cuts(n)
    masks = []
    for u, v, _w in chords:
        m = 0
        for idx, (l, r) in enumerate(ivs):
            if chord_splits(u, v, l, r):
                m |= 1 << idx
        masks.append(m)
    got = exact_cover(masks, [w for _u, _v, w in chords], (1 << len(ivs)) - 1)
    if got is None:
        return None
    return got[0], got[1]


def brute_directed_cover(n: int, arcs: list[tuple[int, int, int]]):
    """Subset enumeration for the directed interval-cover problem with the
    (weight, cardinality, index tuple) tie rule.  |arcs| <= 14 or so."""
    ivs = interval_cuts(n)
    full = (1 << len(ivs)) - 1
    masks = []
    for x, y, _w in arcs:
        m = 0
        for idx, (l, r) in enumerate(ivs):
            if l <= y <= r and not (l <= x <= r):
                m |= 1 << idx
        masks.append(m)
    best = None
    for combo_bits in range(1 << len(arcs)):
        covered = 0
        weight = 0
        bits = combo_bits
        while bits:
            low = (bits & -bits).bit_length() - 1
            covered |= masks[low]
            weight += arcs[low][2]
            bits &= bits - 1
        if covered == full:
            idxs = tuple(i for i in range(len(arcs)) if combo_bits >> i & 1)
            cand = (weight, len(idxs), idxs)
            if best is None or cand < best:
                best = cand
    return best


# ---------------------------------------------------------------------------
# canonical forms for comparing outputs across runs


def link_key(e) -> tuple[int, int, int]:
    return (min(e.u, e.v), max(e.u, e.v), e.w)


def link_multiset(edges) -> list[tuple[int, int, int]]:
    return sorted(link_key(e) for e in edges)
