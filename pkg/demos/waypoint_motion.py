"""How pause time turns the same walk into different networks.

Every node picks a random waypoint, walks there at a uniformly drawn
speed, waits, and repeats.  The pause knob alone spans the whole study
range: 0 s means perpetual motion, 1000 s means the first waypoint is
where the node spends the entire run.  This script walks one node
through both regimes with the same underlying randomness so the effect
of the knob is isolated.

Run:  python demos/waypoint_motion.py
"""

import random

from oceansim.mobility import Arena, NodeMotion


def track(pause, seed=4):
    arena = Arena(1500.0, 300.0)
    motion = NodeMotion(arena, pause, 20.0,
                        random.Random(seed), random.Random(seed + 1),
                        min_speed=0.1)
    return [motion.position_at(float(t)) for t in range(0, 1001, 100)]


def main():
    runs = {pause: track(pause) for pause in (0.0, 300.0, 1000.0)}
    print("position every 100 s, same placement draw, three pause settings")
    print()
    header = "   t(s)" + "".join(f"   pause {int(p):4d} s      " for p in runs)
    print(header)
    for i, t in enumerate(range(0, 1001, 100)):
        row = f"  {t:5d}"
        for pause in runs:
            x, y = runs[pause][i]
            row += f"   ({x:7.1f},{y:6.1f})"
        print(row)
    print()
    print("intervals spent waiting at a waypoint:")
    for pause, samples in runs.items():
        idle = sum(a == b for a, b in zip(samples, samples[1:]))
        print(f"  pause {int(pause):4d} s: {idle:2d} of {len(samples) - 1}")
    print()
    print("The initial dwell is drawn from U[0, pause], so even the "
          "pause-1000 node takes at most one walk before settling for "
          "the rest of the run.")


if __name__ == "__main__":
    main()
