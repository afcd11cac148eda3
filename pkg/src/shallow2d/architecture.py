"""Circuit layouts, concrete gate instances, and lightcone computation.

A layout fixes gate locations in space and time; an instance adds concrete
unitaries, regenerated deterministically from a 64-bit seed so that instances
are reproducible and individual gates re-derivable without replaying a global
stream.

Three layout families are provided.

Brickwork (depth 3, two vertical layers then one horizontal layer)::

    col:    0   1   2   3   4   5
    row 0   |   .   |   .   |   .      |  layer-1 vertical (rows 2a,2a+1)
    row 1   |   :   |   :   |   :      :  layer-2 vertical (rows 2a+1,2a+2)
    row 2   |   :   |   :   |   :
    row 3   |   .   |   .   |   .
    horizontal layer-3 dominoes, staggered by two-row course:
    rows 0,1:  (0,1) (2,3) (4,5) ...
    rows 2,3:      (1,2) (3,4) ...
    rows 4,5:  (0,1) (2,3) (4,5) ...

The extended variant spaces the vertical layers out along the columns:
layer-1 verticals sit at columns ``c % 2r == 0`` and layer-2 verticals at
``c % 2r == r``, so consecutive vertical gates on any pair of adjacent rows
are ``2r`` columns apart and the lattice is ``L x 2rv`` for ``v`` repetitions.
``r = 1`` reproduces the brickwork exactly.  Horizontal dominoes fill every
row throughout.  Sites the pattern leaves untouched at open boundaries (odd
side lengths, stretch edges) are covered by deterministic patch gates placed
in the first layer with free support.

The cluster-with-random-bases layout prepares ``|+>`` everywhere, applies CZ
on every lattice edge, and ends with one single-site Haar gate per site.  CZ
layers are ordered column by column so that the causal cone of a column
extends exactly one column to the right.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .tensors import haar_unitary

__all__ = [
    "Site",
    "GateEvent",
    "CircuitLayout",
    "CircuitInstance",
    "brickwork_layout",
    "extended_brickwork_layout",
    "chr_layout",
    "lightcone",
    "lightcone_of_sites",
    "layout_to_json",
    "layout_from_json",
    "instance_to_json",
    "instance_from_json",
]

Site = tuple[int, int]

GATE_KINDS = ("haar_two_site", "haar_one_site", "cz", "hadamard_like_fixed")

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
_CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(np.complex128)


@dataclass(frozen=True)
class GateEvent:
    """One gate location: time layer, lattice support, and gate kind."""

    layer: int
    sites: tuple[Site, ...]
    kind: str

    def __post_init__(self) -> None:
        if self.layer < 1:
            raise ValueError("layer must be >= 1")
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.sites) == 2:
            (r1, c1), (r2, c2) = self.sites
            if abs(r1 - r2) + abs(c1 - c2) != 1:
                raise ValueError(f"two-site event is not lattice-adjacent: {self.sites}")
        elif len(self.sites) != 1:
            raise ValueError("events act on one or two sites")


@dataclass
class CircuitLayout:
    """Gate locations on a ``rows x cols`` grid of dimension-``q`` qudits.

    Events are stored sorted by layer (stable within a layer); their position
    in this list is the canonical gate index used for seed derivation.
    """

    rows: int
    cols: int
    q: int
    events: list[GateEvent] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.events = sorted(self.events, key=lambda e: e.layer)
        self.validate()

    @property
    def depth(self) -> int:
        return max((e.layer for e in self.events), default=0)

    @property
    def n_sites(self) -> int:
        return self.rows * self.cols

    def sites(self) -> list[Site]:
        return [(r, c) for r in range(self.rows) for c in range(self.cols)]

    def validate(self) -> None:
        occupied: dict[int, set[Site]] = {}
        for e in self.events:
            for r, c in e.sites:
                if not (0 <= r < self.rows and 0 <= c < self.cols):
                    raise ValueError(f"site {(r, c)} outside {self.rows}x{self.cols} grid")
            layer_sites = occupied.setdefault(e.layer, set())
            if layer_sites & set(e.sites):
                raise ValueError(f"overlapping supports in layer {e.layer}: {e.sites}")
            layer_sites.update(e.sites)


def _gate_rng(seed: int, event_index: int) -> np.random.Generator:
    # Independent per-gate stream: SeedSequence hashes (seed, tag, index)
    # splitmix-style, so any gate is re-derivable in isolation.
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 1, event_index))))


@dataclass
class CircuitInstance:
    """A layout plus concrete gates, regenerated from ``(layout, seed)``.

    Haar gates are drawn from independent streams keyed by gate index;
    regeneration is bit-identical.  ``overrides`` pins specific gate matrices
    (used for worst-case controls in experiments); overridden instances are
    not seed-serializable.
    """

    layout: CircuitLayout
    seed: int
    overrides: dict[int, np.ndarray] = field(default_factory=dict)
    _cache: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    def gate(self, index: int) -> np.ndarray:
        if index in self.overrides:
            return self.overrides[index]
        cached = self._cache.get(index)
        if cached is not None:
            return cached
        event = self.layout.events[index]
        q = self.layout.q
        if event.kind == "cz":
            if q != 2:
                raise ValueError("cz events require q = 2")
            g = _CZ
        elif event.kind == "hadamard_like_fixed":
            if q != 2:
                raise ValueError("hadamard_like_fixed events require q = 2")
            g = _HADAMARD
        else:
            dim = q ** len(event.sites)
            g = haar_unitary(dim, _gate_rng(self.seed, index))
        self._cache[index] = g
        return g

    def gates(self) -> list[np.ndarray]:
        return [self.gate(i) for i in range(len(self.layout.events))]


def _place_patch_gates(
    rows: int, cols: int, events: list[GateEvent], depth: int
) -> list[GateEvent]:
    """Cover pattern-untouched boundary sites with deterministic extra gates.

    Scans untouched sites in row-major order and pairs each with a neighbor
    in the earliest layer where both sites are free.  Open-boundary parity is
    the only source of such sites, so patches stay at lattice edges.
    """
    touched: set[Site] = set()
    occupied: dict[int, set[Site]] = {layer: set() for layer in range(1, depth + 1)}
    for e in events:
        touched.update(e.sites)
        occupied[e.layer].update(e.sites)

    patched = list(events)
    for r in range(rows):
        for c in range(cols):
            if (r, c) in touched:
                continue
            neighbors = [(r, c + 1), (r, c - 1), (r + 1, c), (r - 1, c)]
            placed = False
            for nr, nc in neighbors:
                if placed or not (0 <= nr < rows and 0 <= nc < cols):
                    continue
                for layer in range(1, depth + 1):
                    if {(r, c), (nr, nc)} & occupied[layer]:
                        continue
                    pair = tuple(sorted([(r, c), (nr, nc)]))
                    patched.append(GateEvent(layer, pair, "haar_two_site"))
                    occupied[layer].update(pair)
                    touched.update(pair)
                    placed = True
                    break
            if not placed:
                raise ValueError(f"cannot cover site {(r, c)} with a patch gate")
    return patched


def _brickwork_events(rows: int, cols: int, r: int) -> list[GateEvent]:
    events: list[GateEvent] = []
    period = 2 * r
    for c in range(0, cols, period):
        for a in range(0, rows - 1, 2):
            events.append(GateEvent(1, ((a, c), (a + 1, c)), "haar_two_site"))
    for c in range(r, cols, period):
        for a in range(1, rows - 1, 2):
            events.append(GateEvent(2, ((a, c), (a + 1, c)), "haar_two_site"))
    for i in range(rows):
        parity = (i // 2) % 2
        for c in range(parity, cols - 1, 2):
            events.append(GateEvent(3, ((i, c), (i, c + 1)), "haar_two_site"))
    return _place_patch_gates(rows, cols, events, depth=3)


def brickwork_layout(rows: int, cols: int, q: int = 2) -> CircuitLayout:
    """Depth-3 brickwork: two vertical Haar layers then one horizontal layer."""
    if rows < 2 or cols < 2:
        raise ValueError("brickwork needs rows, cols >= 2")
    return CircuitLayout(rows, cols, q, _brickwork_events(rows, cols, r=1))


def extended_brickwork_layout(rows: int, r: int, v: int, q: int = 2) -> CircuitLayout:
    """Brickwork stretched by 1-local runs of length ``2r`` between verticals.

    The lattice is ``rows x (2 r v)`` with ``v`` repetitions of the
    vertical-gate column pair; ``r = 1`` reproduces :func:`brickwork_layout`.
    """
    if rows < 2 or r < 1 or v < 1:
        raise ValueError("extended brickwork needs rows >= 2, r >= 1, v >= 1")
    cols = 2 * r * v
    if cols < 2:
        raise ValueError("degenerate lattice")
    return CircuitLayout(rows, cols, q, _brickwork_events(rows, cols, r=r))


def chr_layout(rows: int) -> CircuitLayout:
    """Cluster state on an ``rows x rows`` qubit grid, Haar-measured.

    Layer 1 prepares ``|+>`` everywhere; CZ gates follow column by column
    (two vertical sub-layers per column, then the horizontal links to the
    next column); a final layer of single-site Haar gates rotates each site
    into a Haar-random measurement basis.
    """
    if rows < 2:
        raise ValueError("cluster layout needs side length >= 2")
    cols = rows
    events: list[GateEvent] = []
    for rr in range(rows):
        for cc in range(cols):
            events.append(GateEvent(1, ((rr, cc),), "hadamard_like_fixed"))
    for c in range(cols):
        base = 2 + 3 * c
        for i in range(0, rows - 1, 2):
            events.append(GateEvent(base, ((i, c), (i + 1, c)), "cz"))
        for i in range(1, rows - 1, 2):
            events.append(GateEvent(base + 1, ((i, c), (i + 1, c)), "cz"))
        if c + 1 < cols:
            for i in range(rows):
                events.append(GateEvent(base + 2, ((i, c), (i, c + 1)), "cz"))
    final = 2 + 3 * (cols - 1) + 2
    for rr in range(rows):
        for cc in range(cols):
            events.append(GateEvent(final, ((rr, cc),), "haar_one_site"))
    return CircuitLayout(rows, cols, 2, events)


def lightcone_of_sites(
    layout: CircuitLayout, measured: Iterable[Site]
) -> tuple[list[int], list[Site]]:
    """Causal cone of measuring ``measured`` at the end of the circuit.

    Returns the gate indices whose effect can reach the measured sites
    (sorted by application order) and all sites those gates touch plus the
    measured sites themselves.
    """
    active: set[Site] = set(measured)
    cone: list[int] = []
    for idx in range(len(layout.events) - 1, -1, -1):
        event = layout.events[idx]
        if active & set(event.sites):
            cone.append(idx)
            active.update(event.sites)
    cone.reverse()
    return cone, sorted(active)


def lightcone(layout: CircuitLayout, columns_processed: int) -> tuple[list[int], list[Site]]:
    """Causal cone of the measurements of columns ``1..columns_processed``."""
    if not 1 <= columns_processed <= layout.cols:
        raise ValueError("columns_processed out of range")
    measured = [(r, c) for r in range(layout.rows) for c in range(columns_processed)]
    return lightcone_of_sites(layout, measured)


def layout_to_json(layout: CircuitLayout) -> str:
    doc = {
        "rows": layout.rows,
        "cols": layout.cols,
        "q": layout.q,
        "events": [
            {"layer": e.layer, "sites": [list(s) for s in e.sites], "kind": e.kind}
            for e in layout.events
        ],
    }
    return json.dumps(doc)


def layout_from_json(text: str) -> CircuitLayout:
    doc = json.loads(text)
    events = [
        GateEvent(e["layer"], tuple(tuple(s) for s in e["sites"]), e["kind"])
        for e in doc["events"]
    ]
    return CircuitLayout(doc["rows"], doc["cols"], doc["q"], events)


def instance_to_json(instance: CircuitInstance) -> str:
    """Serialize layout plus seed; gates are regenerated, never stored."""
    if instance.overrides:
        raise ValueError("instances with gate overrides are not seed-serializable")
    doc = json.loads(layout_to_json(instance.layout))
    doc["seed"] = instance.seed
    return json.dumps(doc)


def instance_from_json(text: str) -> CircuitInstance:
    doc = json.loads(text)
    layout = layout_from_json(json.dumps({k: doc[k] for k in ("rows", "cols", "q", "events")}))
    return CircuitInstance(layout, doc["seed"])


LayoutFamily = Callable[[int], CircuitLayout]


def family(name: str, **params) -> LayoutFamily:
    """Size-indexed layout constructors for experiment scans."""
    if name == "brickwork":
        q = params.get("q", 2)
        return lambda size: brickwork_layout(size, size, q=q)
    if name == "extended-brickwork":
        q = params.get("q", 2)
        r = params["r"]
        v = params["v"]
        return lambda size: extended_brickwork_layout(size, r, v, q=q)
    if name == "chr":
        return lambda size: chr_layout(size)
    raise ValueError(f"unknown architecture family {name!r}")
