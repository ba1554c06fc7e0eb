"""Radio layer: two-ray ground propagation, energy ledger, shared medium.

The medium is idealized on purpose.  There are no collisions and no
contention; the only MAC behaviour modelled is that a single radio
transmits one frame at a time, so back-to-back sends from one node are
serialized FIFO.  Every alive node inside radio range overhears every
transmission and pays reception energy for it, which is what makes
neighbour watching (and its energy bill) possible at all.
"""

import math
from dataclasses import dataclass

LIGHT_SPEED = 3.0e8


@dataclass(frozen=True)
class RadioParams:
    """Transceiver and propagation constants.

    Defaults give a 250 m radio range: the two-ray model at exactly
    250 m yields 3.6526e-10 W, just above the reception threshold.
    """

    tx_power: float = 0.281838          # W
    gain_tx: float = 1.0
    gain_rx: float = 1.0
    height_tx: float = 1.5              # m
    height_rx: float = 1.5
    wavelength: float = 0.328           # m
    rx_threshold: float = 3.652e-10     # W
    link_rate: float = 2.0e6            # bit/s

    @property
    def crossover(self):
        """Distance where the d^-2 and d^-4 branches meet (about 86.14 m)."""
        return 4.0 * math.pi * self.height_tx * self.height_rx / self.wavelength

    def received_power(self, distance):
        """Received power in watts at the given distance in metres.

        Friis free-space attenuation below the crossover distance, the
        two-ray ground-reflection d^-4 law beyond it.  The two branches
        agree at the crossover by construction.
        """
        if distance < 0:
            raise ValueError(f"negative distance: {distance!r}")
        if distance == 0:
            return math.inf
        p = self.tx_power * self.gain_tx * self.gain_rx
        if distance < self.crossover:
            return p * self.wavelength ** 2 / ((4.0 * math.pi * distance) ** 2)
        return p * (self.height_tx * self.height_rx) ** 2 / distance ** 4

    def in_range(self, distance):
        return self.received_power(distance) >= self.rx_threshold

    def range_limit(self):
        """Largest distance still inside radio range.

        Solves received_power(d) = rx_threshold analytically; power is
        strictly decreasing so the in-range set is exactly [0, limit].
        """
        p = self.tx_power * self.gain_tx * self.gain_rx
        d4 = (p * (self.height_tx * self.height_rx) ** 2 / self.rx_threshold) ** 0.25
        if d4 >= self.crossover:
            return d4
        return (p * self.wavelength ** 2 / (16.0 * math.pi ** 2 * self.rx_threshold)) ** 0.5

    def tx_duration(self, size_bytes):
        if size_bytes <= 0:
            raise ValueError(f"packet size must be positive: {size_bytes!r}")
        return size_bytes * 8.0 / self.link_rate


@dataclass(frozen=True)
class EnergyParams:
    initial: float = 5.0                # J
    p_tx: float = 31.32e-3              # W
    p_rx: float = 35.28e-3
    p_idle: float = 712e-6
    p_sleep: float = 144e-9             # modelled but never scheduled by default


class EnergyMeter:
    """Battery ledger for one node.

    Idle drain is applied lazily up to the moment of each activity;
    during a transmit or receive burst the node pays the burst power
    instead of idle.  When a debit would cross zero the time actually
    paid for is pro-rated, so consumed energy always equals the sum of
    power times mode time exactly, and the node dies with 0 J left.
    Death is permanent.
    """

    __slots__ = ("params", "remaining", "alive", "death_time",
                 "tx_time", "rx_time", "idle_time", "_idle_mark")

    def __init__(self, params):
        self.params = params
        self.remaining = params.initial
        self.alive = params.initial > 0
        self.death_time = None
        self.tx_time = 0.0
        self.rx_time = 0.0
        self.idle_time = 0.0
        self._idle_mark = 0.0

    def _drain_idle(self, now):
        mark = self._idle_mark
        if now <= mark or not self.alive:
            return
        p = self.params.p_idle
        dt = now - mark
        cost = p * dt
        if p > 0 and cost >= self.remaining:
            dt = self.remaining / p
            self.idle_time += dt
            self.remaining = 0.0
            self.alive = False
            self.death_time = mark + dt
            self._idle_mark = mark + dt
            return
        self.remaining -= cost
        self.idle_time += dt
        self._idle_mark = now

    def _consume(self, power, duration, now):
        """Pay for one burst.  Returns the fraction of it the node survived."""
        if not self.alive:
            return 0.0
        self._drain_idle(now)
        if not self.alive:
            return 0.0
        cost = power * duration
        if cost >= self.remaining:
            frac = self.remaining / cost if cost > 0 else 0.0
            self.remaining = 0.0
            self.alive = False
            self.death_time = now + duration * frac
            self._idle_mark = self.death_time
            return frac
        self.remaining -= cost
        if now + duration > self._idle_mark:
            self._idle_mark = now + duration
        return 1.0

    def consume_tx(self, duration, now):
        frac = self._consume(self.params.p_tx, duration, now)
        self.tx_time += duration * frac
        return frac == 1.0

    def consume_rx(self, duration, now):
        frac = self._consume(self.params.p_rx, duration, now)
        self.rx_time += duration * frac
        return frac == 1.0

    def poll(self, now):
        """Apply idle drain through now; True while the node still lives.

        The lazy ledger only notices an idle starvation when something
        touches it, so liveness checks must drain first or a long-idle
        corpse still looks alive.
        """
        self._drain_idle(now)
        return self.alive

    def finalize(self, end):
        """Apply trailing idle drain through the end of the run."""
        self._drain_idle(end)

    def ledger_error(self):
        """|consumed - sum(power * mode time)|; should sit at float noise."""
        p = self.params
        booked = p.p_tx * self.tx_time + p.p_rx * self.rx_time + p.p_idle * self.idle_time
        return abs((p.initial - self.remaining) - booked)


class Medium:
    """Shared broadcast channel tying nodes, radio and energy together.

    The port object receives the traffic callbacks:

      on_tx(node, pkt)                 a frame actually went on the air
      carrier(node, pkt, frm)          alive neighbour hears a frame begin
      deliver(node, pkt, frm)          frame fully received at a node
      handover_ok(node, pkt, peer)     unicast frame reached its next hop
      unicast_lost(node, pkt, to, why) next hop out of range or dead

    carrier fires at transmit start, deliver at start + duration +
    distance/c.  Watches key off carrier: a 1 ms watch timeout is
    shorter than one 512-byte frame time (2.048 ms), so waiting for the
    neighbour's relay to finish would time out on every honest forward.
    Hearing the relay begin is enough evidence of cooperation.
    """

    def __init__(self, engine, nodes, radio_params, energy_params, port):
        self.engine = engine
        self.nodes = nodes
        self.params = radio_params
        self.energy_params = energy_params
        self.port = port
        self._range2 = radio_params.range_limit() ** 2

    def node_distance(self, a, b):
        t = self.engine.now
        ax, ay = a.motion.position_at(t)
        bx, by = b.motion.position_at(t)
        return math.hypot(ax - bx, ay - by)

    def reachable(self, a, b):
        t = self.engine.now
        ax, ay = a.motion.position_at(t)
        bx, by = b.motion.position_at(t)
        return (ax - bx) ** 2 + (ay - by) ** 2 <= self._range2

    def transmit(self, src, pkt, intended=None):
        """Queue a frame from src; intended None means true broadcast.

        The frame starts as soon as the node's radio is free.  Range,
        liveness and energy are all judged at that start instant, not
        at queue time.
        """
        dur = self.params.tx_duration(pkt.size_bytes)
        now = self.engine.now
        start = max(now, src.busy_until)
        src.busy_until = start + dur
        if start > now:
            self.engine.schedule(start, "tx-start",
                                 lambda: self._begin(src, pkt, intended, dur))
        else:
            self._begin(src, pkt, intended, dur)

    def _begin(self, src, pkt, intended, dur):
        t = self.engine.now
        energy = src.energy
        if not energy.alive or not energy.consume_tx(dur, t):
            # Dead (or dying mid-burst) source: nothing goes on the air.
            self.port.unicast_lost(src, pkt, intended, "source-dead")
            return
        port = self.port
        port.on_tx(src, pkt)
        sx, sy = src.motion.position_at(t)
        range2 = self._range2
        schedule = self.engine.schedule
        prop_base = t + dur
        intended_seen = intended is None
        for n in self.nodes:
            if n is src or not n.energy.alive:
                continue
            nx, ny = n.motion.position_at(t)
            d2 = (nx - sx) ** 2 + (ny - sy) ** 2
            if d2 > range2:
                continue
            if not n.energy.consume_rx(dur, t):
                # Battery emptied mid-reception: paid, nothing delivered.
                if n.nid == intended:
                    intended_seen = True
                    port.unicast_lost(src, pkt, intended, "receiver-dead")
                continue
            port.carrier(n, pkt, src.nid)
            if intended is None:
                schedule(prop_base + math.sqrt(d2) / LIGHT_SPEED, "delivery",
                         lambda n=n: port.deliver(n, pkt, src.nid))
            elif n.nid == intended:
                intended_seen = True
                port.handover_ok(src, pkt, n)
                schedule(prop_base + math.sqrt(d2) / LIGHT_SPEED, "delivery",
                         lambda n=n: port.deliver(n, pkt, src.nid))
        if not intended_seen:
            target = self.nodes[intended]
            why = "receiver-dead" if not target.energy.alive else "out-of-range"
            port.unicast_lost(src, pkt, intended, why)
