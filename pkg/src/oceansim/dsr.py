"""Dynamic source routing: discovery floods, route caches, data forwarding.

Every data packet carries its full route and an index of the hop it is
currently crossing.  Intermediate nodes never reply from their own
caches and never salvage a broken packet onto another route; the origin
owns the route for the packet's whole life.  That keeps the protocol
surface small and makes route membership auditable after the fact.
"""

from collections import deque
from dataclasses import dataclass

from .engine import Engine

DATA = "data"
RREQ = "rreq"
RREP = "rrep"
RERR = "rerr"

# Outcome categories for dropped data packets.
DROP_NO_ROUTE = "no-route"
DROP_BROKEN_LINK = "broken-link"
DROP_ADVERSARY = "adversary-drop"
DROP_REJECTED = "ocean-rejection"
DROP_DEAD_NODE = "dead-node"
DROP_SIM_END = "sim-end"


class Packet:
    """One frame in flight.  Unicast kinds mutate hop_index as they travel."""

    __slots__ = ("kind", "origin", "target", "seq", "size_bytes", "sent_at",
                 "route", "hop_index", "request_id", "avoid", "broken",
                 "hops_at_send", "resolved")

    def __init__(self, kind, origin, target, size_bytes, seq=0, sent_at=0.0,
                 route=(), hop_index=0, request_id=0, avoid=frozenset(),
                 broken=None):
        self.kind = kind
        self.origin = origin
        self.target = target
        self.seq = seq
        self.size_bytes = size_bytes
        self.sent_at = sent_at
        self.route = route
        self.hop_index = hop_index
        self.request_id = request_id
        self.avoid = avoid
        self.broken = broken
        self.hops_at_send = None
        self.resolved = False

    def fingerprint(self):
        """Identity of one hop crossing, what a forwarding watch matches on."""
        return (self.origin, self.target, self.seq, self.hop_index)


@dataclass(frozen=True)
class DsrParams:
    buffer_capacity: int = 64
    buffer_timeout: float = 30.0        # s a packet may wait for a route
    retry_base: float = 0.5             # discovery retry k fires at base * factor**k
    retry_factor: float = 2.0
    max_retries: int = 3
    hop_limit: int = 16                 # max accumulated RREQ route length
    control_size: int = 64              # bytes for RREQ/RREP/RERR
    holdoff_base: float = 1.0           # wait after a failed discovery cycle
    holdoff_cap: float = 2.0


class RouteCache:
    """Source routes known to one node, keyed by destination.

    Routes are node-id tuples beginning at the owner and ending at the
    destination, with no repeated nodes.  The insertion log keeps the
    order routes were learned in, mostly so a test can ask what a
    discovery produced first.
    """

    def __init__(self, owner):
        self.owner = owner
        self._routes = {}
        self.log = []

    def add(self, route):
        route = tuple(route)
        if len(route) < 2 or route[0] != self.owner:
            raise ValueError(f"route must start at node {self.owner}: {route}")
        if len(set(route)) != len(route):
            raise ValueError(f"route repeats a node: {route}")
        bucket = self._routes.setdefault(route[-1], [])
        if route not in bucket:
            bucket.append(route)
            self.log.append(route)

    def routes(self, dst):
        return self._routes.get(dst, [])

    def has_route(self, dst):
        return bool(self._routes.get(dst))

    def remove_link(self, a, b):
        """Evict every route where a and b are adjacent, either order."""
        evicted = 0
        for dst, bucket in self._routes.items():
            keep = []
            for route in bucket:
                if _contains_link(route, a, b):
                    evicted += 1
                else:
                    keep.append(route)
            self._routes[dst] = keep
        return evicted


def _contains_link(route, a, b):
    for i in range(len(route) - 1):
        x, y = route[i], route[i + 1]
        if (x == a and y == b) or (x == b and y == a):
            return True
    return False


def min_hop_route(routes):
    """Shortest route; equal lengths break on the smaller id sequence."""
    best = None
    for route in routes:
        key = (len(route), route)
        if best is None or key < best:
            best = key
    return None if best is None else best[1]


class _Discovery:
    __slots__ = ("attempt", "started", "handle")

    def __init__(self):
        self.attempt = 0
        self.started = 0.0
        self.handle = None


class DsrNode:
    """Protocol instance for one node.

    Collaborates through a report object (delivery and drop accounting),
    the shared medium, and optionally the node's cooperation monitor,
    which vetoes routes and inbound traffic but never initiates sends.
    """

    def __init__(self, node, params, engine, medium, report):
        self.node = node
        self.nid = node.nid
        self.params = params
        self.engine = engine
        self.medium = medium
        self.report = report
        self.cache = RouteCache(node.nid)
        self.seen = set()
        self.buffer = deque()
        self.pending = {}
        self.fail_streak = {}
        self.next_allowed = {}
        self._request_id = 0
        self._data_seq = 0

    # ---- originating traffic ----

    def send_data(self, dst, size):
        now = self.engine.now
        self._data_seq += 1
        pkt = Packet(DATA, self.nid, dst, size, seq=self._data_seq, sent_at=now)
        self.report.originated(pkt)
        if not self.node.energy.poll(now):
            self.report.dropped(pkt, DROP_DEAD_NODE)
            return
        route = self.pick_route(dst)
        if route is not None:
            self._transmit_data(pkt, route)
        elif self.request_route(dst):
            self._buffer_packet(pkt)
        else:
            # Discovery for dst is in its failure holdoff; queueing more
            # traffic behind it would only age into outsized delays.
            self.report.dropped(pkt, DROP_NO_ROUTE)

    def pick_route(self, dst):
        ocean = self.node.ocean
        if ocean is not None:
            return ocean.select_route(self.cache, dst)
        return min_hop_route(self.cache.routes(dst))

    def _transmit_data(self, pkt, route):
        pkt.route = route
        pkt.hop_index = 1
        pkt.hops_at_send = len(route) - 1
        self.report.sent_on_route(pkt)
        self.medium.transmit(self.node, pkt, intended=route[1])

    # ---- send buffer ----

    def _buffer_packet(self, pkt):
        if len(self.buffer) >= self.params.buffer_capacity:
            oldest = self.buffer.popleft()
            Engine.cancel(oldest[1])
            self.report.dropped(oldest[0], DROP_NO_ROUTE)
        handle = self.engine.schedule_in(
            self.params.buffer_timeout, "buffer-timeout",
            lambda: self._buffer_expired(pkt))
        self.buffer.append((pkt, handle))

    def _buffer_expired(self, pkt):
        for entry in self.buffer:
            if entry[0] is pkt:
                self.buffer.remove(entry)
                break
        self.report.dropped(pkt, DROP_NO_ROUTE)

    def _flush_buffer(self, dst):
        ready = [e for e in self.buffer if e[0].target == dst]
        for entry in ready:
            route = self.pick_route(dst)
            if route is None:
                if not self.request_route(dst):
                    self._drop_buffered(dst, DROP_NO_ROUTE)
                return
            self.buffer.remove(entry)
            Engine.cancel(entry[1])
            self._transmit_data(entry[0], route)

    def _drop_buffered(self, dst, category):
        stale = [e for e in self.buffer if e[0].target == dst]
        for entry in stale:
            self.buffer.remove(entry)
            Engine.cancel(entry[1])
            self.report.dropped(entry[0], category)

    def _rescue_buffered(self):
        """Restart discovery for buffered destinations left without routes."""
        for dst in {e[0].target for e in self.buffer}:
            if not self.cache.has_route(dst) and not self.request_route(dst):
                self._drop_buffered(dst, DROP_NO_ROUTE)

    # ---- route discovery ----

    def request_route(self, dst):
        """Start or join a discovery for dst.

        Returns False while the destination sits in the holdoff that
        follows a fully failed discovery cycle; callers should settle
        their traffic instead of queueing behind a cold trail.
        """
        if dst in self.pending:
            return True
        if self.next_allowed.get(dst, 0.0) > self.engine.now:
            return False
        self.pending[dst] = _Discovery()
        self._flood(dst)
        return True

    def _flood(self, dst):
        state = self.pending.get(dst)
        if state is None:
            return
        now = self.engine.now
        if state.attempt == 0:
            state.started = now
        self._request_id += 1
        rid = self._request_id
        self.seen.add((self.nid, rid))
        ocean = self.node.ocean
        avoid = ocean.build_avoid_list() if ocean is not None else frozenset()
        rreq = Packet(RREQ, self.nid, dst, self.params.control_size,
                      route=(self.nid,), request_id=rid, avoid=avoid)
        self.medium.transmit(self.node, rreq)
        delay = self.params.retry_base * self.params.retry_factor ** state.attempt
        state.attempt += 1
        if state.attempt > self.params.max_retries:
            action = lambda: self._discovery_failed(dst)
            kind = "rreq-exhaust"
        else:
            action = lambda: self._flood(dst)
            kind = "rreq-retry"
        state.handle = self.engine.schedule(state.started + delay, kind, action)

    def _discovery_failed(self, dst):
        self.pending.pop(dst, None)
        self._drop_buffered(dst, DROP_NO_ROUTE)
        streak = self.fail_streak.get(dst, 0) + 1
        self.fail_streak[dst] = streak
        holdoff = min(self.params.holdoff_base * 2.0 ** (streak - 1),
                      self.params.holdoff_cap)
        self.next_allowed[dst] = self.engine.now + holdoff

    def _discovery_succeeded(self, dst):
        state = self.pending.pop(dst, None)
        if state is not None and state.handle is not None:
            Engine.cancel(state.handle)
        self.fail_streak[dst] = 0
        self.next_allowed.pop(dst, None)

    # ---- inbound frames ----

    def handle_rreq(self, rreq, frm):
        if self.node.profile.selfish and self.nid != rreq.target:
            return
        ocean = self.node.ocean
        if ocean is not None:
            if self.nid in rreq.avoid:
                return
            if ocean.is_faulty(frm):
                return
        key = (rreq.origin, rreq.request_id)
        if key in self.seen:
            return
        self.seen.add(key)
        if self.nid == rreq.target:
            full = rreq.route + (self.nid,)
            rrep = Packet(RREP, self.nid, rreq.origin, self.params.control_size,
                          route=tuple(reversed(full)), hop_index=1)
            self.medium.transmit(self.node, rrep, intended=rrep.route[1])
            return
        if len(rreq.route) >= self.params.hop_limit:
            return
        relay = Packet(RREQ, rreq.origin, rreq.target, rreq.size_bytes,
                       route=rreq.route + (self.nid,),
                       request_id=rreq.request_id, avoid=rreq.avoid)
        self.medium.transmit(self.node, relay)

    def handle_rrep(self, rrep, frm):
        if self.nid == rrep.route[-1]:
            discovered = tuple(reversed(rrep.route))
            dst = discovered[-1]
            self.cache.add(discovered)
            self._discovery_succeeded(dst)
            self._flush_buffer(dst)
            return
        rrep.hop_index += 1
        self.medium.transmit(self.node, rrep, intended=rrep.route[rrep.hop_index])

    def handle_rerr(self, rerr, frm):
        if self.nid == rerr.target:
            a, b = rerr.broken
            self.cache.remove_link(a, b)
            self._rescue_buffered()
            return
        rerr.hop_index += 1
        self.medium.transmit(self.node, rerr, intended=rerr.route[rerr.hop_index])

    def handle_data(self, pkt, frm):
        if self.nid == pkt.target:
            self.report.delivered(pkt)
            return
        profile = self.node.profile
        if profile.misleading and profile.decide_drop():
            self.report.dropped(pkt, DROP_ADVERSARY)
            return
        ocean = self.node.ocean
        if ocean is not None and not ocean.admit_traffic(pkt, frm):
            self.report.dropped(pkt, DROP_REJECTED)
            return
        pkt.hop_index += 1
        self.medium.transmit(self.node, pkt, intended=pkt.route[pkt.hop_index])

    # ---- failures observed by the radio ----

    def next_hop_unreachable(self, pkt):
        """Unicast data could not start its next hop: broken link handling."""
        broken = (self.nid, pkt.route[pkt.hop_index])
        self.cache.remove_link(*broken)
        self.report.dropped(pkt, DROP_BROKEN_LINK)
        if self.nid == pkt.origin:
            self._rescue_buffered()
            return
        back = tuple(reversed(pkt.route[:pkt.hop_index]))
        rerr = Packet(RERR, self.nid, pkt.origin, self.params.control_size,
                      route=back, hop_index=1, broken=broken)
        self.medium.transmit(self.node, rerr, intended=back[1])

