"""Watching one route get discovered, used, broken, and repaired.

Five stationary nodes form a chain with a spare relay hanging off the
middle.  A single packet forces a discovery flood; the trace shows the
request spreading hop by hop, the target answering along the reversed
path, and the data following the installed route.  Then the middle
relay is yanked out of range and the next send demonstrates failure
detection and the error report that prunes the stale route.

Run:  python demos/route_discovery.py
"""

from oceansim.config import ScenarioConfig
from oceansim.simulation import Simulation


class Anchored:
    __slots__ = ("spot",)

    def __init__(self, spot):
        self.spot = spot

    def position_at(self, t):
        return self.spot


POSITIONS = {
    0: (0.0, 0.0),
    1: (200.0, 0.0),
    2: (400.0, 0.0),      # the relay that will wander off
    3: (600.0, 0.0),
    4: (400.0, 150.0),    # spare path around node 2
}


def build():
    cfg = ScenarioConfig(n_nodes=len(POSITIONS), n_connections=0,
                         sim_duration=30.0, ocean_enabled=False,
                         malicious_fraction=0.0).validate()
    sim = Simulation(cfg, seed=1)
    for nid, spot in POSITIONS.items():
        sim.nodes[nid].motion = Anchored(spot)
    return sim


def narrate(sim):
    inner = sim.on_tx

    def on_tx(src, pkt):
        route = "->".join(str(n) for n in pkt.route)
        print(f"  t={sim.engine.now * 1e3:8.3f} ms  node {src.nid} sends "
              f"{pkt.kind:4s}  route [{route}]")
        inner(src, pkt)

    sim.on_tx = on_tx


def main():
    sim = build()
    narrate(sim)
    send = sim.nodes[0].dsr.send_data

    print("one packet from node 0 to node 3, empty route cache:")
    sim.engine.schedule(0.0, "traffic-send", lambda: send(3, 512))
    sim.engine.run(1.0)
    print(f"  installed: {sim.nodes[0].dsr.cache.routes(3)}")
    print()

    print("node 2 wanders out of range; the next send trips on the stale "
          "route:")
    sim.nodes[2].motion = Anchored((400.0, 1200.0))
    sim.engine.schedule(1.5, "traffic-send", lambda: send(3, 512))
    sim.engine.run(3.0)
    print(f"  cache now: {sim.nodes[0].dsr.cache.routes(3)}")
    print()

    m = sim.run()
    print(f"delivered {m.data_delivered} of {m.data_sent}; "
          f"drops: {dict(sorted(m.drops.items()))}")


if __name__ == "__main__":
    main()
