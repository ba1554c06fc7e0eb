"""One simulated run: node assembly, traffic, and accounting glue.

The Simulation object is both the radio's port (it routes carrier,
delivery and failure callbacks to protocol instances and the watch
machinery) and the protocol's report sink (it settles every data packet
exactly once).  All randomness flows through named streams derived from
the single run seed, so a (config, seed) pair fixes the whole run.
"""

from . import adversary as adversary_mod
from . import dsr, metrics as metrics_mod, workload
from .config import ScenarioConfig
from .engine import Engine, RngStreams, RNG_ALGORITHM, RNG_SEEDING
from .mobility import Arena, NodeMotion
from .ocean import OceanParams, OceanState
from .radio import EnergyMeter, EnergyParams, Medium, RadioParams

VERSION = "0.1.0"


class Node:
    __slots__ = ("nid", "motion", "energy", "busy_until", "profile", "ocean", "dsr")

    def __init__(self, nid, motion, energy, profile):
        self.nid = nid
        self.motion = motion
        self.energy = energy
        self.busy_until = 0.0
        self.profile = profile
        self.ocean = None
        self.dsr = None


def radio_params_from(cfg):
    return RadioParams(
        tx_power=cfg.tx_power, gain_tx=cfg.gain_tx, gain_rx=cfg.gain_rx,
        height_tx=cfg.height_tx, height_rx=cfg.height_rx,
        wavelength=cfg.wavelength, rx_threshold=cfg.rx_threshold,
        link_rate=cfg.link_rate)


def energy_params_from(cfg):
    return EnergyParams(initial=cfg.initial_energy, p_tx=cfg.p_tx, p_rx=cfg.p_rx,
                        p_idle=cfg.p_idle, p_sleep=cfg.p_sleep)


def dsr_params_from(cfg):
    return dsr.DsrParams(
        buffer_capacity=cfg.buffer_capacity, buffer_timeout=cfg.buffer_timeout,
        retry_base=cfg.rreq_retry_base, retry_factor=cfg.rreq_retry_factor,
        max_retries=cfg.rreq_max_retries, hop_limit=cfg.rreq_hop_limit,
        control_size=cfg.control_size, holdoff_base=cfg.discovery_holdoff,
        holdoff_cap=cfg.discovery_holdoff_cap)


def ocean_params_from(cfg):
    return OceanParams(
        faulty_threshold=cfg.faulty_threshold,
        second_chance_timeout=cfg.second_chance_timeout,
        reentry_rating=cfg.reentry_rating, rating_positive=cfg.rating_positive,
        rating_negative=cfg.rating_negative, watch_timeout=cfg.watch_timeout,
        chip_scheme=cfg.chip_scheme, chip_initial=cfg.chip_initial,
        chip_debit=cfg.chip_debit, chip_credit=cfg.chip_credit,
        chip_accrual_rate=cfg.chip_accrual_rate, chip_cap=cfg.chip_cap,
        chip_tick_interval=cfg.chip_tick_interval)


class Simulation:
    def __init__(self, cfg: ScenarioConfig, seed):
        cfg.validate()
        self.cfg = cfg
        self.seed = seed
        self.engine = Engine()
        self.rngs = RngStreams(seed)
        self.metrics = metrics_mod.RunMetrics()
        self.radio_params = radio_params_from(cfg)
        self.energy_params = energy_params_from(cfg)
        self.dsr_params = dsr_params_from(cfg)
        self.ocean_params = ocean_params_from(cfg) if cfg.ocean_enabled else None
        self._watch_gap = cfg.watch_timeout
        arena = Arena(cfg.arena_width, cfg.arena_height)

        profiles = adversary_mod.assign_profiles(
            cfg.n_nodes, cfg.malicious_fraction, cfg.adversary_kind,
            self.rngs.get("adversary-selection"), drop_prob=cfg.drop_prob,
            rngs=self.rngs)
        self.nodes = []
        for nid in range(cfg.n_nodes):
            motion = NodeMotion(arena, cfg.pause_time, cfg.max_speed,
                                self.rngs.get("placement", nid),
                                self.rngs.get("mobility", nid),
                                min_speed=cfg.min_speed)
            node = Node(nid, motion, EnergyMeter(self.energy_params), profiles[nid])
            self.nodes.append(node)
        self.medium = Medium(self.engine, self.nodes, self.radio_params,
                             self.energy_params, self)
        for node in self.nodes:
            if cfg.ocean_enabled:
                node.ocean = OceanState(node.nid, self.ocean_params, self.engine)
            node.dsr = dsr.DsrNode(node, self.dsr_params, self.engine,
                                   self.medium, self)

        pool = list(range(cfg.n_nodes))
        if cfg.protect_endpoints:
            pool = workload.endpoint_pool(profiles, cfg.n_connections)
        self.flows = workload.build_flows(
            cfg.n_connections, cfg.send_rate, cfg.data_size, cfg.start_window,
            self.rngs.get("workload"), pool)
        for flow in self.flows:
            self._schedule_flow(flow)
        if cfg.ocean_enabled and cfg.chip_tick_interval <= cfg.sim_duration:
            self.engine.schedule(cfg.chip_tick_interval, "chip-accrual-tick",
                                 self._chip_tick)

    # ---- workload ----

    def _schedule_flow(self, flow):
        interval = 1.0 / flow.rate
        duration = self.cfg.sim_duration
        sender = self.nodes[flow.src].dsr
        engine = self.engine

        def emit():
            sender.send_data(flow.dst, flow.size_bytes)
            nxt = engine.now + interval
            if nxt + interval <= duration:
                engine.schedule(nxt, "traffic-send", emit)

        if flow.start + interval <= duration:
            engine.schedule(flow.start, "traffic-send", emit)

    def _chip_tick(self):
        dt = self.ocean_params.chip_tick_interval
        for node in self.nodes:
            node.ocean.accrue(dt)
        nxt = self.engine.now + dt
        if nxt <= self.cfg.sim_duration:
            self.engine.schedule(nxt, "chip-accrual-tick", self._chip_tick)

    # ---- radio port ----

    def on_tx(self, src, pkt):
        if pkt.kind is not dsr.DATA:
            self.metrics.routing_tx += 1
            return
        ocean = src.ocean
        route = pkt.route
        hop = pkt.hop_index
        if ocean is not None and hop < len(route) - 1:
            deadline = (self.engine.now
                        + self.radio_params.tx_duration(pkt.size_bytes)
                        + self._watch_gap)
            fp = (pkt.origin, pkt.target, pkt.seq, hop + 1)
            ocean.register_watch(route[hop], fp, deadline)

    def carrier(self, node, pkt, frm):
        if pkt.kind is dsr.DATA and node.ocean is not None:
            node.ocean.on_overhear(
                (pkt.origin, pkt.target, pkt.seq, pkt.hop_index), frm)

    def deliver(self, node, pkt, frm):
        if not node.energy.alive:
            if pkt.kind is dsr.DATA:
                self.dropped(pkt, dsr.DROP_DEAD_NODE)
            return
        kind = pkt.kind
        if kind is dsr.DATA:
            node.dsr.handle_data(pkt, frm)
        elif kind is dsr.RREQ:
            node.dsr.handle_rreq(pkt, frm)
        elif kind is dsr.RREP:
            node.dsr.handle_rrep(pkt, frm)
        else:
            node.dsr.handle_rerr(pkt, frm)

    def handover_ok(self, src, pkt, peer):
        if pkt.kind is dsr.DATA and src.ocean is not None:
            src.ocean.accept_credit(peer.nid)

    def unicast_lost(self, src, pkt, intended, why):
        if pkt.kind is not dsr.DATA:
            return
        if why == "out-of-range":
            src.dsr.next_hop_unreachable(pkt)
        else:
            self.dropped(pkt, dsr.DROP_DEAD_NODE)

    # ---- protocol report ----

    def originated(self, pkt):
        self.metrics.note_origin()

    def sent_on_route(self, pkt):
        m = self.metrics
        m.note_sent_hops(pkt.hops_at_send)
        ocean = self.nodes[pkt.origin].ocean
        if ocean is not None:
            faulty = ocean.faulty_set
            if faulty and not faulty.isdisjoint(pkt.route):
                m.route_faulty_violations += 1

    def delivered(self, pkt):
        if pkt.resolved:
            raise RuntimeError(f"packet settled twice: {pkt.origin}/{pkt.seq}")
        pkt.resolved = True
        self.metrics.note_delivery(self.engine.now - pkt.sent_at, pkt.hops_at_send)

    def dropped(self, pkt, category):
        if pkt.resolved:
            raise RuntimeError(f"packet settled twice: {pkt.origin}/{pkt.seq}")
        pkt.resolved = True
        self.metrics.note_drop(category)

    # ---- execution ----

    def run(self):
        duration = self.cfg.sim_duration
        self.engine.run(duration)
        m = self.metrics
        worst = 0.0
        for node in self.nodes:
            node.energy.finalize(duration)
            m.final_energy.append(node.energy.remaining)
            err = node.energy.ledger_error()
            if err > worst:
                worst = err
        m.energy_ledger_max_err = worst
        m.close(dsr.DROP_SIM_END)
        if not m.conserved():
            raise RuntimeError("data packet accounting does not balance")
        return m

    def metadata(self):
        return {
            "config": self.cfg.to_dict(),
            "seed": self.seed,
            "rng_algorithm": RNG_ALGORITHM,
            "rng_seeding": RNG_SEEDING,
            "version": VERSION,
            "assumptions": {
                "send_rate_unit": "packets per second per connection",
                "mac": "no collisions, per-node FIFO serialization, promiscuous receive",
                "watch_trigger": "relay transmission start, not completion",
                "chip_accrual": "granted at whole tick boundaries only",
            },
        }


def run_simulation(cfg, seed):
    sim = Simulation(cfg, seed)
    result = sim.run()
    return result, sim.metadata()
