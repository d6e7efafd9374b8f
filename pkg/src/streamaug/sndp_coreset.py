"""Eviction cascade coreset and reverse-phase solver for network design.

A cascade of k independent spanner stores turns one pass over an edge
stream into k nested layers: every arriving edge enters layer 1, and
whatever a layer evicts (including edges it refuses outright) is fed to
the next layer in arrival order.  Layer i therefore holds a spanner of
"what the first i-1 layers threw away", and the union of the first i
layers approximates distances among all edges rejected earlier, which is
exactly what phase i of the reverse augmentation scheme shops from.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Infeasible, SizeGuardError, StreamFormatError
from .graph_core import WeightedEdge
from .oracles import SNDP_MAX_N, _cover_branch_and_bound
from .spanner_stream import SpannerState
from .weightbands import as_fraction


class Requirements:
    """Symmetric pairwise connectivity demands between terminals."""

    def __init__(self, pairs, n: int):
        if n < 1:
            raise ValueError(f"need n >= 1, got {n}")
        self.n = n
        canon: dict[tuple[int, int], int] = {}
        for (s, t), r in dict(pairs).items():
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"requirement endpoint out of range: ({s}, {t})")
            if s == t:
                raise ValueError(f"requirement on a single vertex: ({s}, {t})")
            if not isinstance(r, int) or r < 0:
                raise ValueError(f"requirement must be a non-negative integer, got {r!r}")
            key = (min(s, t), max(s, t))
            if key in canon and canon[key] != r:
                raise ValueError(f"conflicting requirements for pair {key}")
            canon[key] = r
        self._pairs = canon

    @classmethod
    def parse(cls, text: str, n: int) -> "Requirements":
        """Read 'R s t r' lines; blank lines and # comments are skipped."""
        pairs: dict[tuple[int, int], int] = {}
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if fields[0] != "R" or len(fields) != 4:
                raise StreamFormatError(line_no, f"expected 'R s t r', got {raw!r}")
            try:
                s, t, r = int(fields[1]), int(fields[2]), int(fields[3])
            except ValueError as exc:
                raise StreamFormatError(line_no, f"bad requirement values: {raw!r}") from exc
            key = (min(s, t), max(s, t))
            if key in pairs:
                raise StreamFormatError(line_no, f"duplicate requirement for pair {key}")
            pairs[key] = r
        return cls(pairs, n)

    @property
    def max_requirement(self) -> int:
        return max(self._pairs.values(), default=0)

    def value(self, s: int, t: int) -> int:
        return self._pairs.get((min(s, t), max(s, t)), 0)

    def items(self):
        return sorted(self._pairs.items())

    def cut_demand(self, members) -> int:
        """Largest requirement separated by the side ``members``."""
        inside = set(members)
        demand = 0
        for (s, t), r in self._pairs.items():
            if ((s in inside) != (t in inside)) and r > demand:
                demand = r
        return demand

    def __len__(self):
        return len(self._pairs)


class Cascade:
    """k chained spanner stores; evictions from one feed the next.

    The stretch parameter of each layer is tightened to eps/(2t-1) so that
    a layer's path guarantee is a clean (2t-1) + eps factor in weight.
    """

    def __init__(self, n: int, k: int, t: int, epsilon):
        if k < 1:
            raise ValueError(f"need k >= 1, got {k}")
        eps = as_fraction(epsilon)
        if not 0 < eps <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
        self.n = n
        self.k = k
        self.t = t
        self.epsilon = epsilon
        inner = eps / (2 * t - 1)
        self._layers = [SpannerState(n, t, inner) for _ in range(k)]

    def insert(self, e: WeightedEdge) -> None:
        batch = [e]
        for layer in self._layers:
            if not batch:
                return
            passed_down: list[WeightedEdge] = []
            for edge in sorted(batch, key=lambda x: x.arrival):
                _, evicted = layer.insert(edge)
                passed_down.extend(evicted)
            batch = passed_down
        # whatever the last layer rejects is gone for good

    def layer_edges(self, i: int) -> list[WeightedEdge]:
        """Stored edges of layer i (1-based), in arrival order."""
        return self._layers[i - 1].edges()

    def layer_state(self, i: int) -> SpannerState:
        return self._layers[i - 1]

    def layers(self) -> list[list[WeightedEdge]]:
        return [st.edges() for st in self._layers]

    @property
    def stored_count(self) -> int:
        return sum(st.stored_count for st in self._layers)

    @property
    def peak_stored(self) -> int:
        return sum(st.peak_stored for st in self._layers)


@dataclass(frozen=True)
class SndpSolution:
    edges: tuple[WeightedEdge, ...]
    weight: int
    phases: tuple[tuple[WeightedEdge, ...], ...]


def solve_sndp(coreset, requirements: Requirements) -> SndpSolution:
    """Reverse augmentation over cascade layers.

    Phase i must raise every cut U to max(0, f(U) - (k - i)) crossings.
    Since the previous phase already reached one less, each phase faces
    deficits of at most one and reduces to a plain set cover, solved over
    the layers unlocked so far minus everything already chosen.
    """
    layers = coreset.layers() if hasattr(coreset, "layers") else [list(l) for l in coreset]
    n = requirements.n
    if n > SNDP_MAX_N:
        raise SizeGuardError(f"reverse augmentation handles at most n = {SNDP_MAX_N}, got {n}")
    k = len(layers)
    if requirements.max_requirement > k:
        raise ValueError(
            f"largest requirement {requirements.max_requirement} exceeds the "
            f"{k}-layer coreset"
        )
    sides = []
    need = []
    for mask in range(1, 1 << (n - 1)):
        members = [v for v in range(1, n) if (mask >> (v - 1)) & 1]
        demand = requirements.cut_demand(members)
        if demand > 0:
            sides.append(mask)
            need.append(demand)
    chosen: list[WeightedEdge] = []
    chosen_arrivals: set[int] = set()
    crossings = [0] * len(sides)
    phases: list[tuple[WeightedEdge, ...]] = []
    pool: list[WeightedEdge] = []

    def crosses(e: WeightedEdge, mask: int) -> bool:
        in_u = e.u > 0 and (mask >> (e.u - 1)) & 1
        in_v = e.v > 0 and (mask >> (e.v - 1)) & 1
        return bool(in_u) != bool(in_v)

    for phase in range(1, k + 1):
        pool.extend(layers[phase - 1])
        targets = []
        for idx, mask in enumerate(sides):
            deficit = max(0, need[idx] - (k - phase)) - crossings[idx]
            if deficit > 1:
                raise RuntimeError(
                    "phase deficit exceeded 1; augmentation invariant broken"
                )
            if deficit == 1:
                targets.append(idx)
        if not targets:
            phases.append(())
            continue
        avail = [e for e in pool if e.arrival not in chosen_arrivals]
        masks = []
        for e in avail:
            m = 0
            for pos, idx in enumerate(targets):
                if crosses(e, sides[idx]):
                    m |= 1 << pos
            masks.append(m)
        full = (1 << len(targets)) - 1
        hit = _cover_branch_and_bound(masks, [e.w for e in avail], full)
        if hit is None:
            raise Infeasible(f"phase {phase} cannot cover all deficient cuts")
        _, picked = hit
        grabbed = tuple(avail[i] for i in picked)
        phases.append(grabbed)
        for e in grabbed:
            chosen.append(e)
            chosen_arrivals.add(e.arrival)
            for idx in range(len(sides)):
                if crosses(e, sides[idx]):
                    crossings[idx] += 1
    return SndpSolution(
        edges=tuple(chosen),
        weight=sum(e.w for e in chosen),
        phases=tuple(phases),
    )
