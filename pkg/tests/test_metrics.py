import pytest

from oceansim.metrics import (RunMetrics, avg_delay, final_energy_avg,
                              mean_delivery_hops, normalized_overhead, summary,
                              throughput_pct, throughput_pct_min_hops)


def loaded():
    m = RunMetrics()
    for hops in (1, 1, 1, 1, 2, 2, 2, 2, 3, 3):
        m.note_origin()
        m.note_sent_hops(hops)
    for delay, hops in ((0.002, 1), (0.002, 1), (0.004, 2), (0.006, 3)):
        m.note_delivery(delay, hops)
    m.note_drop("adversary-drop")
    m.note_drop("adversary-drop")
    m.routing_tx = 30
    m.final_energy = [4.0, 3.0, 5.0]
    return m


def test_close_sweeps_leftovers_into_the_truncation_bucket():
    m = loaded()
    assert not m.conserved()
    m.close()
    assert m.conserved()
    assert m.drops["sim-end"] == 4


def test_close_flags_double_resolution():
    m = RunMetrics()
    m.note_origin()
    m.note_delivery(0.001, 1)
    m.note_drop("broken-link")
    with pytest.raises(RuntimeError):
        m.close()


def test_unrouted_sends_count_as_zero_hop():
    m = RunMetrics()
    m.note_origin()
    m.note_origin()
    m.note_sent_hops(2)
    m.close()
    assert m.sent_by_hops[0] == 1
    assert m.drops["sim-end"] == 2


def test_throughput_is_a_percentage_of_originated_packets():
    m = loaded()
    assert throughput_pct(m) == 40.0


def test_min_hop_throughput_filters_both_sides_of_the_ratio():
    m = loaded()
    # sent with >=2 hops: 6; delivered across >=2 hops: 2
    assert throughput_pct_min_hops(m, 2) == pytest.approx(100.0 * 2 / 6)
    assert throughput_pct_min_hops(m, 0) == throughput_pct(m)
    assert throughput_pct_min_hops(m, 4) is None


def test_scalar_panel_values():
    m = loaded()
    assert avg_delay(m) == pytest.approx(0.0035)
    assert mean_delivery_hops(m) == pytest.approx(7 / 4)
    assert normalized_overhead(m) == pytest.approx(30 / 4)
    assert final_energy_avg(m) == pytest.approx(4.0)


def test_empty_denominators_serialize_as_absent_not_zero():
    m = RunMetrics()
    assert throughput_pct(m) is None
    assert avg_delay(m) is None
    assert normalized_overhead(m) is None
    assert mean_delivery_hops(m) is None
    assert final_energy_avg(m) is None
    assert m.to_dict()["delay_max"] is None


def test_summary_has_the_full_panel():
    panel = summary(loaded())
    assert set(panel) == {"throughput_pct", "throughput_pct_2hop",
                          "routing_packets", "normalized_overhead",
                          "avg_delay", "mean_hops", "final_energy_avg"}
    assert panel["routing_packets"] == 30


def test_to_dict_is_json_ready_and_sorted():
    m = loaded()
    m.close()
    d = m.to_dict()
    assert list(d["drops"]) == sorted(d["drops"])
    assert d["sent_by_hops"] == {"1": 4, "2": 4, "3": 2}
    assert d["delivered_by_hops"] == {"1": 2, "2": 1, "3": 1}
    assert d["delay_count"] == 4
    assert d["delay_sum"] == pytest.approx(0.014)
