"""Run accounting and the statistics derived from it.

A RunMetrics instance is the complete quantitative record of one run.
Every originated data packet is resolved exactly once, as a delivery or
as a drop in a named category; whatever is still buffered or in flight
when the clock stops is swept into the sim-end category so the books
always balance.  Derived statistics are pure functions of the record
and return None when their denominator is empty, which serializes to
an absent value rather than a fake zero.
"""

from collections import Counter


class RunMetrics:
    def __init__(self):
        self.data_sent = 0
        self.data_delivered = 0
        self.drops = Counter()
        self.routing_tx = 0
        self.delay_samples = []
        self.per_delivery_hops = []
        self.sent_by_hops = Counter()
        self.final_energy = []
        self.energy_ledger_max_err = 0.0
        self.route_faulty_violations = 0

    # ---- recording ----

    def note_origin(self):
        self.data_sent += 1

    def note_sent_hops(self, hops):
        self.sent_by_hops[hops] += 1

    def note_delivery(self, delay, hops):
        self.data_delivered += 1
        self.delay_samples.append(delay)
        self.per_delivery_hops.append(hops)

    def note_drop(self, category):
        self.drops[category] += 1

    def close(self, sim_end_category="sim-end"):
        """Sweep unresolved packets into the truncation category."""
        resolved = self.data_delivered + sum(self.drops.values())
        leftover = self.data_sent - resolved
        if leftover < 0:
            raise RuntimeError(f"packet resolved twice somewhere: {leftover}")
        if leftover:
            self.drops[sim_end_category] += leftover
        # Packets that never made it onto a route count as zero-hop sends.
        routed = sum(self.sent_by_hops.values())
        if self.data_sent - routed:
            self.sent_by_hops[0] += self.data_sent - routed

    def conserved(self):
        return self.data_sent == self.data_delivered + sum(self.drops.values())

    # ---- serialization ----

    def to_dict(self):
        delays = self.delay_samples
        return {
            "data_sent": self.data_sent,
            "data_delivered": self.data_delivered,
            "drops": {k: self.drops[k] for k in sorted(self.drops)},
            "routing_tx": self.routing_tx,
            "delay_count": len(delays),
            "delay_sum": sum(delays),
            "delay_max": max(delays) if delays else None,
            "sent_by_hops": {str(k): v for k, v in sorted(self.sent_by_hops.items())},
            "delivered_by_hops": {str(k): v
                                  for k, v in sorted(Counter(self.per_delivery_hops).items())},
            "final_energy": self.final_energy,
            "energy_ledger_max_err": self.energy_ledger_max_err,
            "route_faulty_violations": self.route_faulty_violations,
        }


# ---- derived statistics ----

def throughput_pct(m):
    """Delivered share of originated data packets, in percent."""
    if m.data_sent == 0:
        return None
    return 100.0 * m.data_delivered / m.data_sent

def throughput_pct_min_hops(m, h_min):
    """Delivery percentage over packets routed across at least h_min hops.

    h_min 0 includes everything (also packets that never got a route)
    and equals plain throughput_pct.
    """
    sent = sum(c for h, c in m.sent_by_hops.items() if h >= h_min)
    if sent == 0:
        return None
    delivered = sum(1 for h in m.per_delivery_hops if h >= h_min)
    return 100.0 * delivered / sent

def avg_delay(m):
    if not m.delay_samples:
        return None
    return sum(m.delay_samples) / len(m.delay_samples)

def routing_packets(m):
    return m.routing_tx

def normalized_overhead(m):
    """Control transmissions spent per delivered data packet."""
    if m.data_delivered == 0:
        return None
    return m.routing_tx / m.data_delivered

def mean_delivery_hops(m):
    if not m.per_delivery_hops:
        return None
    return sum(m.per_delivery_hops) / len(m.per_delivery_hops)

def final_energy_avg(m):
    if not m.final_energy:
        return None
    return sum(m.final_energy) / len(m.final_energy)

def summary(m):
    """The scalar panel reported for every run."""
    return {
        "throughput_pct": throughput_pct(m),
        "throughput_pct_2hop": throughput_pct_min_hops(m, 2),
        "routing_packets": routing_packets(m),
        "normalized_overhead": normalized_overhead(m),
        "avg_delay": avg_delay(m),
        "mean_hops": mean_delivery_hops(m),
        "final_energy_avg": final_energy_avg(m),
    }
