"""A desk-scale version of the malicious-fraction study.

The full experiments run 40 nodes for 1000 simulated seconds per point
and average five seeds; this script shrinks everything (30 nodes, 300
seconds, three seeds) so the shape of the result shows up in a minute
or two: delivery falls as misleading nodes multiply, and the
cooperation layer claws a good part of it back by routing around the
nodes it catches.

The real thing:  oceansim sweep-malicious --out results
                 oceansim compare-dsr    --out results

Run:  python demos/mini_sweep.py
"""

from oceansim.config import ScenarioConfig
from oceansim.harness import build_compare_dsr, run_experiment

BASE = ScenarioConfig(sim_duration=300.0, n_nodes=30, n_connections=10,
                      start_window=5.0)


def main():
    exp = build_compare_dsr(BASE)
    print(f"{len(exp.points)} sweep points x 3 seeds, 30 nodes, 300 s each")
    result = run_experiment(exp, base_seed=1, n_runs=3)
    print()
    print("  misleading   delivery % (enforcement on)   delivery % (plain)")
    print("  ----------   --------------------------   ------------------")
    for frac in (0.0, 0.125, 0.25, 0.375):
        on = result.stat("throughput_pct", malicious_fraction=frac,
                         ocean_enabled=True)
        off = result.stat("throughput_pct", malicious_fraction=frac,
                          ocean_enabled=False)
        print(f"  {frac:10.3f}   {on:26.1f}   {off:18.1f}")
    print()
    print("Full-scale studies write CSVs and gnuplot scripts; see the "
          "commands in the module docstring.")


if __name__ == "__main__":
    main()
