"""A black hole gets caught by its own neighbour.

Four stationary nodes form a diamond: two disjoint two-hop routes from
node 0 to node 3.  The preferred relay silently drops every data packet
it is handed.  Node 0 overhears nothing after each handover, charges
the relay two rating points a packet, and once the rating crosses the
faulty threshold it reroutes through the clean relay and embeds the
culprit in its next route request so discovery cannot resurrect it.

Run:  python demos/cooperation_enforcement.py
"""

from oceansim.adversary import MISLEADING, Profile
from oceansim.config import ScenarioConfig
from oceansim.dsr import RREQ
from oceansim.simulation import Simulation


class Anchored:
    __slots__ = ("spot",)

    def __init__(self, spot):
        self.spot = spot

    def position_at(self, t):
        return self.spot


POSITIONS = {0: (0.0, 0.0), 1: (200.0, 60.0),
             2: (200.0, -60.0), 3: (400.0, 0.0)}


def build():
    cfg = ScenarioConfig(n_nodes=4, n_connections=0, sim_duration=20.0,
                         malicious_fraction=0.0).validate()
    sim = Simulation(cfg, seed=1)
    for nid, spot in POSITIONS.items():
        sim.nodes[nid].motion = Anchored(spot)
    sim.nodes[1].profile = Profile(MISLEADING)
    return sim


def main():
    sim = build()
    watcher = None          # ocean state of node 0, once it exists
    send = sim.nodes[0].dsr.send_data

    inner = sim.on_tx

    def on_tx(src, pkt):
        if pkt.kind is RREQ and src.nid == 0 and pkt.avoid:
            print(f"  t={sim.engine.now:6.2f} s  new discovery avoids "
                  f"{sorted(pkt.avoid)}")
        inner(src, pkt)

    sim.on_tx = on_tx

    last = {}

    def probe():
        state = sim.nodes[0].ocean
        for nbr in (1, 2):
            rec = state.records.get(nbr)
            if rec is None:
                continue
            snap = (rec.rating, rec.faulty)
            if last.get(nbr) != snap:
                last[nbr] = snap
                tag = "FAULTY" if rec.faulty else "ok"
                print(f"  t={sim.engine.now:6.2f} s  node 0 rates "
                      f"relay {nbr}: {rec.rating:+6.1f}  [{tag}]")
        sim.engine.schedule(sim.engine.now + 1.0, "traffic-send", probe)

    for k in range(60):
        sim.engine.schedule(0.2 * k, "traffic-send", lambda: send(3, 512))
    sim.engine.schedule(1.0, "traffic-send", probe)

    print("node 1 drops data but answers discovery; node 2 is honest")
    print("sixty packets, node 0 -> node 3, one every 200 ms:")
    m = sim.run()
    print()
    print(f"delivered {m.data_delivered} of {m.data_sent}; "
          f"drops: {dict(sorted(m.drops.items()))}")
    print(f"avoid list at node 0 at end of run: "
          f"{sorted(sim.nodes[0].ocean.faulty_set)}")


if __name__ == "__main__":
    main()
