"""Shared builders for protocol-level tests.

Tests that need exact topologies build a real Simulation with zero
configured connections, then pin every node to a fixed position and
hand-pick adversary profiles.  All the production wiring (medium,
energy, cooperation layer, metrics) stays in place; only placement and
traffic are under test control.
"""

from oceansim.adversary import MISLEADING, SELFISH, Profile
from oceansim.config import ScenarioConfig
from oceansim.simulation import Simulation


class Still:
    """Motion stub: a node parked at one spot forever."""

    __slots__ = ("_pos",)

    def __init__(self, pos):
        self._pos = (float(pos[0]), float(pos[1]))

    def position_at(self, t):
        return self._pos


def make_net(positions, *, seed=5, adversaries=(), kind=MISLEADING, **overrides):
    """Simulation with pinned node positions and no scheduled traffic."""
    settings = dict(n_nodes=len(positions), n_connections=0,
                    malicious_fraction=0.0, pause_time=0.0,
                    sim_duration=100.0)
    settings.update(overrides)
    sim = Simulation(ScenarioConfig(**settings), seed)
    for node, pos in zip(sim.nodes, positions):
        node.motion = Still(pos)
    for nid in adversaries:
        sim.nodes[nid].profile = Profile(kind)
    return sim


def chain(n, gap=200.0):
    """n collinear positions; neighbours in range, second neighbours not."""
    return [(i * gap, 0.0) for i in range(n)]


def send(sim, src, dst, size=512, at=0.0):
    """Schedule one data packet origination."""
    sim.engine.schedule(at, "test-send",
                        lambda: sim.nodes[src].dsr.send_data(dst, size))


def record_tx(sim):
    """Tap the radio port; returns a list of (time, kind, origin, pkt)."""
    log = []
    original = sim.on_tx

    def tap(node, pkt):
        log.append((sim.engine.now, pkt.kind, node.nid, pkt))
        original(node, pkt)

    sim.on_tx = tap
    return log
