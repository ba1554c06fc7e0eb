"""Behaviour profiles and their assignment to nodes.

Misbehaviour only touches transit traffic.  A misleading node joins
discovery like anyone else and then drops the data it was trusted with;
a selfish node simply pretends not to hear route requests.  Packets a
malicious node originates or terminates itself are handled normally.
"""

from dataclasses import dataclass

COOPERATIVE = "cooperative"
MISLEADING = "misleading"
SELFISH = "selfish"

KINDS = (COOPERATIVE, MISLEADING, SELFISH)


@dataclass(frozen=True)
class Profile:
    kind: str = COOPERATIVE
    drop_prob: float = 1.0
    # Drawn per decision only when the probability is fractional; the
    # common 0/1 cases must not consume randomness.
    rng: object = None

    @property
    def cooperative(self):
        return self.kind == COOPERATIVE

    @property
    def misleading(self):
        return self.kind == MISLEADING

    @property
    def selfish(self):
        return self.kind == SELFISH

    def decide_drop(self):
        if self.drop_prob >= 1.0:
            return True
        if self.drop_prob <= 0.0:
            return False
        return self.rng.random() < self.drop_prob


def assign_profiles(n_nodes, fraction, kind, rng, drop_prob=1.0, rngs=None):
    """Profile per node id with round(fraction * n) adversaries.

    Selection is uniform without replacement from the given stream, so
    the same seed marks the same nodes at every fraction sweep point
    only if the stream is fresh per assignment (it is; each run builds
    its own).
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"malicious fraction out of range: {fraction!r}")
    if kind not in KINDS:
        raise ValueError(f"unknown adversary kind: {kind!r}")
    count = round(fraction * n_nodes)
    chosen = set(rng.sample(range(n_nodes), count)) if count else set()
    profiles = []
    for nid in range(n_nodes):
        if nid in chosen and kind != COOPERATIVE:
            node_rng = rngs.get("adversary-draw", nid) if rngs is not None else None
            profiles.append(Profile(kind, drop_prob, node_rng))
        else:
            profiles.append(Profile())
    return profiles
