"""Observation-based cooperation enforcement layered over source routing.

Each node keeps first-hand ratings for its neighbours.  After handing a
data packet to a neighbour that is not the final destination, the node
watches the channel: hearing the neighbour begin to relay the same hop
cancels the watch and earns the neighbour a positive rating step, a
silent timeout costs it a larger negative one.  Neighbours whose rating
sinks below the faulty threshold land on the node's faulty list, are
cut out of route selection and discovery, and get readmitted after a
fixed second-chance interval at a rating just under the bar.

Ratings never reset on good behaviour and have no upper bound; only the
second chance rewrites them.

The chip economy is the selfishness throttle: each forwarding request
from a neighbour debits that neighbour's balance, forwarding on a
neighbour's behalf (observed, or accepted on handover under the
optimistic scheme) credits it, and a slow periodic accrual tops every
balance up so a drained neighbour is throttled rather than starved
forever.  With the default debit of zero the bookkeeping runs but never
rejects anything; one-way constant-bit-rate traffic drains a requester
at the full send rate with nothing flowing back, so any positive debit
ends up throttling honest origins within seconds.
"""

from dataclasses import dataclass

from .engine import Engine

OPTIMISTIC = "optimistic"
PESSIMISTIC = "pessimistic"


@dataclass(frozen=True)
class OceanParams:
    faulty_threshold: float = -40.0
    second_chance_timeout: float = 30.0
    reentry_rating: float = -30.0
    rating_positive: float = 1.0
    rating_negative: float = -2.0
    watch_timeout: float = 1e-3         # s from handover completion
    chip_scheme: str = PESSIMISTIC
    chip_initial: float = 50.0
    chip_debit: float = 0.0             # per forwarding request
    chip_credit: float = 1.0            # per observed or accepted forward
    chip_accrual_rate: float = 0.1      # chips per second
    chip_cap: float = 100.0
    chip_tick_interval: float = 10.0


class NeighborRecord:
    """First-hand state one node holds about one neighbour."""

    __slots__ = ("rating", "faulty", "faulty_since", "chips", "watches")

    def __init__(self, chips):
        self.rating = 0.0
        self.faulty = False
        self.faulty_since = None
        self.chips = chips
        self.watches = {}


class OceanState:
    """Cooperation monitor for one node."""

    def __init__(self, nid, params, engine):
        self.nid = nid
        self.params = params
        self.engine = engine
        self.records = {}
        self.faulty_set = set()

    def record(self, nbr):
        rec = self.records.get(nbr)
        if rec is None:
            rec = NeighborRecord(self.params.chip_initial)
            self.records[nbr] = rec
        return rec

    # ---- neighbour watch ----

    def register_watch(self, nbr, fingerprint, deadline):
        """Arm a watch for the relay of one hop; duplicate arms are no-ops."""
        rec = self.record(nbr)
        if fingerprint in rec.watches:
            return
        handle = self.engine.schedule(
            deadline, "watch-expiry", lambda: self._expire(nbr, fingerprint))
        rec.watches[fingerprint] = handle

    def on_overhear(self, fingerprint, frm):
        """A neighbour's transmission began; settle any matching watch."""
        rec = self.records.get(frm)
        if rec is None:
            return
        handle = rec.watches.pop(fingerprint, None)
        if handle is None:
            return
        Engine.cancel(handle)
        rec.rating += self.params.rating_positive
        if self.params.chip_scheme == PESSIMISTIC:
            rec.chips = min(self.params.chip_cap, rec.chips + self.params.chip_credit)

    def _expire(self, nbr, fingerprint):
        rec = self.records[nbr]
        rec.watches.pop(fingerprint, None)
        rec.rating += self.params.rating_negative
        # "Below" is strict: a rating sitting exactly on the threshold
        # keeps the neighbour in good standing.
        if not rec.faulty and rec.rating < self.params.faulty_threshold:
            rec.faulty = True
            rec.faulty_since = self.engine.now
            self.faulty_set.add(nbr)
            self.engine.schedule_in(self.params.second_chance_timeout,
                                    "second-chance", lambda: self._second_chance(nbr))

    def _second_chance(self, nbr):
        rec = self.records[nbr]
        rec.faulty = False
        rec.faulty_since = None
        rec.rating = self.params.reentry_rating
        self.faulty_set.discard(nbr)

    # ---- routing hooks ----

    def is_faulty(self, nbr):
        return nbr in self.faulty_set

    def build_avoid_list(self):
        return frozenset(self.faulty_set)

    def select_route(self, cache, dst):
        """Shortest cached route that touches no faulty node, if any."""
        faulty = self.faulty_set
        best = None
        for route in cache.routes(dst):
            if faulty and not faulty.isdisjoint(route):
                continue
            key = (len(route), route)
            if best is None or key < best:
                best = key
        return None if best is None else best[1]

    # ---- traffic admission and chips ----

    def admit_traffic(self, pkt, frm):
        """Gate a forwarding request arriving from neighbour frm."""
        if pkt.origin in self.faulty_set:
            return False
        debit = self.params.chip_debit
        if debit > 0:
            rec = self.record(frm)
            if rec.chips < debit:
                return False
            rec.chips -= debit
        return True

    def accept_credit(self, nbr):
        """Optimistic scheme: handing a packet over is taken as service."""
        if self.params.chip_scheme == OPTIMISTIC:
            rec = self.record(nbr)
            rec.chips = min(self.params.chip_cap, rec.chips + self.params.chip_credit)

    def accrue(self, dt):
        cap = self.params.chip_cap
        gain = self.params.chip_accrual_rate * dt
        for rec in self.records.values():
            if rec.chips < cap:
                rec.chips = min(cap, rec.chips + gain)
