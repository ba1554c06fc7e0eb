"""Constant-bit-rate traffic generation.

A workload is a fixed set of distinct ordered (src, dst) connections,
each emitting fixed-size data packets at a constant rate from a start
time staggered over a small window.  Adversaries are kept out of the
endpoint pool whenever enough well-behaved nodes exist, because the
studies measure how misbehaviour affects other people's traffic.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class CbrFlow:
    src: int
    dst: int
    start: float
    rate: float          # packets per second
    size_bytes: int


def build_flows(n_connections, rate, size_bytes, start_window, rng, eligible):
    """Sample distinct ordered endpoint pairs and staggered start times."""
    pool = list(eligible)
    if n_connections < 0:
        raise ValueError(f"negative connection count: {n_connections!r}")
    if n_connections == 0:
        return []
    limit = len(pool) * (len(pool) - 1)
    if n_connections > limit:
        raise ValueError(
            f"cannot build {n_connections} distinct pairs from {len(pool)} endpoints")
    pairs = []
    taken = set()
    while len(pairs) < n_connections:
        src = pool[rng.randrange(len(pool))]
        dst = pool[rng.randrange(len(pool))]
        if src == dst or (src, dst) in taken:
            continue
        taken.add((src, dst))
        pairs.append((src, dst))
    return [CbrFlow(src, dst, rng.uniform(0.0, start_window), rate, size_bytes)
            for src, dst in pairs]


def endpoint_pool(profiles, n_connections):
    """Cooperative ids, falling back to everyone when too few exist."""
    cooperative = [nid for nid, p in enumerate(profiles) if p.cooperative]
    if len(cooperative) * (len(cooperative) - 1) >= n_connections:
        return cooperative
    return list(range(len(profiles)))
