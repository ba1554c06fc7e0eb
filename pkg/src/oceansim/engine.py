"""Discrete-event core: virtual clock, event queue, seeded random streams.

Events are kept in a binary heap ordered by (fire_at, seq).  The seq
counter makes scheduling order the tie-break, so two events scheduled
for the same instant run in FIFO order and every run of the same
scenario replays the exact same event sequence.
"""

import hashlib
import heapq
import random

# Recorded in run metadata so output files state how randomness was produced.
RNG_ALGORITHM = "mersenne-twister-19937"
RNG_SEEDING = "int(sha256('<seed>/<stream-id>')[:8]) seeds one random.Random per stream"


class SchedulingError(RuntimeError):
    """Raised when an event is scheduled before the current clock."""


class Engine:
    """Virtual-time event loop.

    A scheduled event is a 4-slot list [fire_at, seq, kind, callback].
    The list doubles as the cancellation handle: cancelling just nulls
    the callback and the dead entry is skipped when it surfaces.  That
    keeps cancellation O(1), which matters because forwarding watches
    are cancelled far more often than they expire.
    """

    def __init__(self):
        self.now = 0.0
        self._heap = []
        self._seq = 0

    def schedule(self, fire_at, kind, callback):
        """Queue callback at time fire_at, returning a cancellable handle."""
        if fire_at < self.now:
            raise SchedulingError(
                f"cannot schedule {kind!r} at {fire_at!r}: clock already at {self.now!r}"
            )
        entry = [fire_at, self._seq, kind, callback]
        self._seq += 1
        heapq.heappush(self._heap, entry)
        return entry

    def schedule_in(self, delay, kind, callback):
        return self.schedule(self.now + delay, kind, callback)

    @staticmethod
    def cancel(entry):
        entry[3] = None

    def run(self, until):
        """Dispatch every event with fire_at <= until, then set clock to until."""
        heap = self._heap
        while heap and heap[0][0] <= until:
            fire_at, _, _, callback = heapq.heappop(heap)
            if callback is None:
                continue
            self.now = fire_at
            callback()
        self.now = until

    def pending(self):
        """Number of live (not yet cancelled) events still queued."""
        return sum(1 for e in self._heap if e[3] is not None)


def stream_rng(seed, stream_id):
    """One independent random.Random for a (seed, stream id) pair.

    The id string is hashed so unrelated streams never share state and
    the mapping survives any reordering of stream creation.
    """
    digest = hashlib.sha256(f"{seed}/{stream_id}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


class RngStreams:
    """Lazily built registry of named random streams for one run."""

    def __init__(self, seed):
        self.seed = seed
        self._streams = {}

    def get(self, *parts):
        key = "/".join(str(p) for p in parts)
        rng = self._streams.get(key)
        if rng is None:
            rng = stream_rng(self.seed, key)
            self._streams[key] = rng
        return rng
