"""Layering of a gate list into qudit-disjoint rounds by greedy selection.

Gates are scanned in ascending index order (which is ascending alpha place
order from the synthesizer), and each layer takes every gate whose qudits are
still free in that layer.  On a conflict graph of maximum degree d this
terminates within d+1 layers: a gate left after layer i conflicts with a
chosen gate in every earlier layer.  For intra-block lists each qudit meets
at most 3 gates, so d <= 6 and the depth is at most 7; three-block lists are
qudit-disjoint outright (depth 1); two-block conflicts form disjoint cycles
(d <= 2, depth at most 3).
"""

from __future__ import annotations

from dataclasses import dataclass

from .synth import CczGate, GateList


@dataclass
class Schedule:
    layers: list[list[int]]

    @property
    def depth(self) -> int:
        return len(self.layers)


@dataclass
class ScheduleReport:
    disjoint_ok: bool
    partition_ok: bool
    errors: list[str]

    @property
    def passed(self) -> bool:
        return self.disjoint_ok and self.partition_ok


def gate_qudits(gate: CczGate) -> frozenset:
    """Distinct (block, place) pairs; repeated legs occupy one qudit."""
    return frozenset(gate.legs)


def greedy_schedule(gl: GateList) -> Schedule:
    remaining = list(range(len(gl.gates)))
    layers = []
    while remaining:
        used: set = set()
        layer = []
        leftover = []
        for idx in remaining:
            quds = gate_qudits(gl.gates[idx])
            if used.isdisjoint(quds):
                layer.append(idx)
                used |= quds
            else:
                leftover.append(idx)
        layers.append(layer)
        remaining = leftover
    sched = Schedule(layers)
    assert sched.depth <= conflict_stats(gl)["max_degree"] + 1
    return sched


def conflict_stats(gl: GateList) -> dict:
    """Per-qudit gate counts and the conflict-graph degree bound."""
    per_qudit: dict = {}
    for idx, gate in enumerate(gl.gates):
        for qud in gate_qudits(gate):
            per_qudit.setdefault(qud, []).append(idx)
    max_per_qudit = max((len(v) for v in per_qudit.values()), default=0)
    degrees = []
    for idx, gate in enumerate(gl.gates):
        neigh = set()
        for qud in gate_qudits(gate):
            neigh.update(per_qudit[qud])
        neigh.discard(idx)
        degrees.append(len(neigh))
    return {
        "per_qudit": per_qudit,
        "max_per_qudit": max_per_qudit,
        "max_degree": max(degrees, default=0),
    }


def validate_schedule(gl: GateList, sched: Schedule) -> ScheduleReport:
    """Independent re-check of layer disjointness and gate partition."""
    errors = []
    disjoint_ok = True
    for li, layer in enumerate(sched.layers):
        used: set = set()
        for idx in layer:
            quds = gate_qudits(gl.gates[idx])
            if not used.isdisjoint(quds):
                disjoint_ok = False
                errors.append(f"layer {li}: gate {idx} shares a qudit")
            used |= quds
    scheduled = sorted(idx for layer in sched.layers for idx in layer)
    partition_ok = scheduled == list(range(len(gl.gates)))
    if not partition_ok:
        errors.append("layers do not partition the gate list")
    return ScheduleReport(disjoint_ok, partition_ok, errors)
