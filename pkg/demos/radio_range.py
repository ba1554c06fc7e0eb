"""Where the radio horizon sits, and why it is a cliff.

The propagation model keeps free-space decay (1/d^2) out to a crossover
distance and fourth-power decay beyond it.  With the default antenna
heights and wavelength the crossover lands near 86 m, and the receive
threshold cuts the fourth-power tail at exactly 250 m: a receiver at
250.0 m decodes the frame, one at 250.001 m hears nothing.  Everything
else in the simulator (route lengths, neighbourhood sizes, overhearing
costs) follows from this one number.

Run:  python demos/radio_range.py
"""

from oceansim.radio import RadioParams


def main():
    radio = RadioParams()
    print(f"crossover distance : {radio.crossover:8.2f} m")
    print(f"receive threshold  : {radio.rx_threshold:.3e} W")
    print(f"usable range       : {radio.range_limit():8.2f} m")
    print()
    print("  distance      received power   decodable")
    print("  --------      --------------   ---------")
    for d in (10, 50, radio.crossover, 100, 150, 200, 249, 250, 251, 300):
        p = radio.received_power(float(d))
        mark = "yes" if radio.in_range(float(d)) else "no"
        print(f"  {d:8.2f} m    {p:.6e} W   {mark}")
    print()
    print("A 512-byte data frame occupies the sender for "
          f"{radio.tx_duration(512) * 1e3:.3f} ms at "
          f"{radio.link_rate / 1e6:.0f} Mbit/s; a 64-byte control frame "
          f"for {radio.tx_duration(64) * 1e3:.3f} ms.")


if __name__ == "__main__":
    main()
