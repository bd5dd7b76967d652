"""Config parsing, result serialization, reproducibility hashes."""

import math
import textwrap

import numpy as np
import pytest

from surfmimo.channel import build_mimo
from surfmimo.errors import ConfigError, ResultIOError
from surfmimo.experiments import (
    LinkResult,
    RadiationSample,
    ShareResult,
    scenario2_plan,
)
from surfmimo.geometry import ANTENNA, CONTACT
from surfmimo.io import (
    DEFAULT_SEED,
    ResultSet,
    aggregate_result_set,
    analyze_result_set,
    channel_result_set,
    config_hash,
    load_config,
    parameter_hash,
    parse_config,
    pulse_result_set,
    read_results,
    radiation_result_set,
    separation_result_set,
    share_result_set,
    sweep_result_set,
    write_plot_script,
    write_results,
)

GOOD = textwrap.dedent("""\
    name: unit
    surface:
      material: spraypaint
      width_m: 3.0
      height_m: 1.0
    nodes:
      - id: tx
        role: transmitter
        contacts: [[0.5, 0.5]]
      - id: rx
        role: receiver
        contacts: [[1.5, 0.5]]
""")


def test_parse_minimal_config_defaults():
    cfg = parse_config(GOOD)
    assert cfg.name == "unit"
    assert cfg.band.center_hz == 2.437e9
    assert cfg.band.bandwidth_hz == 40e6
    assert cfg.band.band_id == "2.4GHz"
    assert cfg.seed == DEFAULT_SEED == 1905
    assert cfg.analysis["grid"] == 32
    assert cfg.analysis["mac_efficiency"] == 0.65
    assert cfg.scene.surface.material.name == "spraypaint"
    assert len(cfg.scene.nodes) == 2
    # template anchors the sweep at the first transmitter port
    tpl = cfg.template()
    assert tpl.anchor() == (0.5, 0.5)


def test_parse_config_units_and_overrides():
    cfg = parse_config(GOOD + textwrap.dedent("""\
        band:
          center_ghz: 5.19
          bandwidth_mhz: 20
        analysis:
          grid: 16
          snr_db: 25
        seed: 7
    """))
    assert cfg.band.center_hz == 5.19e9
    assert cfg.band.band_id == "5GHz"
    assert cfg.band.bandwidth_hz == 20e6
    assert cfg.seed == 7
    s = cfg.settings()
    assert s.grid == 16 and s.snr_db == 25.0
    assert s.band.bandwidth_hz == 20e6
    assert cfg.channel_params().coupling.near_field_coupling == 0.95


def test_parse_config_collects_every_problem_with_lines():
    bad = textwrap.dedent("""\
        name: broken
        turbo: on
        surface:
          material: spraypaint
          width_m: wide
          height_m: 1.0
          gloss: 1
        nodes:
          - id: tx
            role: transmitter
            contacts: [[0.5, 0.5, 9]]
          - role: receiver
            contacts: [[1.5, 0.5]]
        analysis:
          grid: 3.7
        seed: -4
    """)
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    problems = err.value.problems
    joined = "\n".join(problems)
    assert "unknown key 'turbo'" in joined
    assert "unknown key 'gloss'" in joined
    assert "'width_m' must be a number" in joined
    assert "contacts[0] must be 2 numbers" in joined
    assert "needs a string 'id'" in joined
    assert "'grid' must be an integer" in joined
    assert "seed must be a non-negative integer" in joined
    assert len(problems) >= 7
    # positions come from the YAML node tree
    assert any(p.startswith("line 2:") for p in problems)   # turbo
    assert any(p.startswith("line 5:") for p in problems)   # width_m


def test_parse_config_rejects_degenerate_documents():
    with pytest.raises(ConfigError, match="config is empty"):
        parse_config("")
    with pytest.raises(ConfigError, match="must be a mapping"):
        parse_config("- 1\n- 2\n")
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("name: x\n  bad_indent: [\n")


def test_parse_config_rejects_ambiguous_units():
    with pytest.raises(ConfigError, match="not both"):
        parse_config(GOOD + "band: {center_hz: 2.4e9, center_ghz: 2.4}\n")
    with pytest.raises(ConfigError, match="not both"):
        parse_config(GOOD + "band: {bandwidth_hz: 2.0e7, bandwidth_mhz: 20}\n")


def test_parse_config_surfaces_scene_violations():
    with pytest.raises(ConfigError, match="outside"):
        parse_config(GOOD.replace("[[1.5, 0.5]]", "[[9.0, 0.5]]"))
    with pytest.raises(ConfigError, match="transmitter"):
        parse_config(GOOD.replace("role: transmitter", "role: receiver"))


def test_parse_config_obstacles():
    cfg = parse_config(GOOD + textwrap.dedent("""\
        obstacles:
          - {x_min: 0.9, y_min: 0.2, x_max: 1.1, y_max: 0.8, perturbation_db: 5}
    """))
    ob = cfg.scene.obstacles[0]
    assert (ob.x_min, ob.y_max) == (0.9, 0.8)
    assert ob.perturbation_db == 5.0
    assert ob.kind == "metal"


def test_load_config_prefixes_path(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text(GOOD + "turbo: on\n")
    with pytest.raises(ConfigError) as err:
        load_config(p)
    assert all(str(p) in problem for problem in err.value.problems)
    with pytest.raises(ConfigError, match="cannot read config"):
        load_config(tmp_path / "missing.yaml")


def test_config_consumers_agree_with_direct_calls():
    cfg = parse_config(GOOD + "analysis: {grid: 8, subcarriers: 2}\n")
    m = build_mimo(cfg.scene, cfg.band, grid=8, params=cfg.channel_params())
    assert m.entries.shape == (1, 1)
    assert m.rx_port_kinds == (CONTACT,)


# --- hashes -------------------------------------------------------------------


def test_config_hash_stable_and_sensitive():
    a = config_hash(parse_config(GOOD))
    b = config_hash(parse_config(GOOD))
    c = config_hash(parse_config(GOOD.replace("width_m: 3.0", "width_m: 3.5")))
    assert a == b
    assert a != c
    assert len(a) == 16


def test_parameter_hash_order_insensitive():
    a = parameter_hash({"x": 1, "y": 2.0})
    b = parameter_hash({"y": 2.0, "x": 1})
    c = parameter_hash({"x": 1, "y": 2.5})
    assert a == b != c


# --- result sets ---------------------------------------------------------------


def test_result_set_round_trip(tmp_path):
    rs = ResultSet(
        ("a", "b", "c", "d"),
        ((math.pi, -3, True, None), (1.0000000000000002, 0, False, "text")),
        {"seed": 1905, "zeta": "last", "alpha": "first"},
    )
    p = tmp_path / "out.csv"
    write_results(rs, p)
    back = read_results(p)
    assert back == rs
    assert back.rows[0][0] == math.pi               # repr round-trips floats
    assert back.rows[1][0] == 1.0000000000000002
    text = p.read_text()
    lines = text.splitlines()
    assert lines[0] == "# surfmimo-results v1"
    assert lines[1:4] == ["# alpha: first", "# seed: 1905", "# zeta: last"]


def test_result_set_written_bytes_deterministic(tmp_path):
    rs = ResultSet(("x",), ((0.1,), (2,)), {"b": "2", "a": "1"})
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_results(rs, p1)
    write_results(rs, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_result_set_validation_and_read_errors(tmp_path):
    with pytest.raises(ResultIOError, match="row width"):
        ResultSet(("a", "b"), ((1,),), {})
    plain = tmp_path / "plain.csv"
    plain.write_text("a,b\n1,2\n")
    with pytest.raises(ResultIOError, match="not a surfmimo results file"):
        read_results(plain)
    headerless = tmp_path / "h.csv"
    headerless.write_text("# surfmimo-results v1\n# k: v\n")
    with pytest.raises(ResultIOError, match="no column header"):
        read_results(headerless)
    with pytest.raises(ResultIOError, match="cannot read"):
        read_results(tmp_path / "nope.csv")
    with pytest.raises(ResultIOError, match="cannot write"):
        write_results(ResultSet(("a",), (), {}), tmp_path / "no" / "dir.csv")


# --- builders -------------------------------------------------------------------


def _fake_matrix():
    from surfmimo.channel import ChannelMatrix
    from surfmimo.propagation import FrequencyBand

    entries = np.array([[1e-3 + 0j, 0j], [1j * 1e-4, 2e-3 + 0j]])
    return ChannelMatrix(entries, FrequencyBand(2.437e9, 40e6),
                         (CONTACT, ANTENNA), (CONTACT, CONTACT))


def test_channel_result_set_labels_and_zero_magnitude():
    rs = channel_result_set([_fake_matrix()])
    assert rs.columns[:3] == ("subcarrier_index", "rx_port", "tx_port")
    by_ports = {(r[1], r[2]): r for r in rs.rows}
    assert set(by_ports) == {("contact0", "contact0"), ("contact0", "contact1"),
                             ("antenna0", "contact0"), ("antenna0", "contact1")}
    assert by_ports[("contact0", "contact1")][5] == float("-inf")
    assert by_ports[("contact0", "contact0")][5] == pytest.approx(-60.0)


def test_analyze_result_set_columns():
    rs = analyze_result_set([_fake_matrix()], snr_linear=1e4)
    assert rs.columns == ("subcarrier_index", "frequency_hz", "capacity_bps_hz",
                          "condition_number")
    assert rs.rows[0][2] > 0


def _link_result(rate=120e6):
    return LinkResult(capacity_bps=3e8, condition_number=12.5,
                      stream_snrs_db=(21.0, 18.0), phy_rate_bps=rate,
                      mode="MIMO-2x2")


def test_sweep_result_set_applies_mac_efficiency():
    rs = sweep_result_set({"surface-2x2": [(0.3048, _link_result())]},
                          mac_efficiency=0.65)
    row = rs.rows[0]
    assert row[0] == "surface-2x2"
    assert row[2] == 1.0                     # distance in feet
    assert row[6] == 120.0                   # PHY stays un-scaled
    assert row[7] == pytest.approx(78.0)     # throughput = phy * mac
    assert row[5] == "21.0;18.0"


def test_separation_result_set_columns():
    rs = separation_result_set({"surface-2x2": [(0.01, _link_result())]}, 0.65)
    assert rs.rows[0][2] == 1.0  # separation in cm
    assert rs.rows[0][7] == pytest.approx(78.0)


def test_aggregate_result_set_has_total_rows():
    plan = scenario2_plan()
    rows = aggregate_result_set([(0.3048, 500e6, [])], plan)
    assert rows.rows[-1][1] == "total"
    assert rows.rows[-1][3] == plan.total_bandwidth_hz
    assert rows.rows[-1][-1] == 500.0


def test_radiation_and_share_result_sets():
    samples = [RadiationSample((0.0, 0.0, 1.0), -40.0, -53.0, 13.0),
               RadiationSample((0.0, 0.0, -1.0), -40.0, -65.0, 25.0)]
    rs = radiation_result_set(samples)
    assert rs.rows[0][3] == "front" and rs.rows[1][3] == "back"
    assert rs.rows[0][5] == -53.0

    share = share_result_set([ShareResult(0, 6, 100e6, 0.5, 50e6)])
    assert share.rows[0] == (0, 6, 100.0, 0.5, 50.0)


def test_pulse_result_set_carries_spread_metadata():
    from surfmimo.experiments import pulse_profile
    from surfmimo import presets
    from surfmimo.io import load_config

    cfg = load_config(presets.scene_path("cloth_10ft"))
    tx = cfg.scene.transmitters()[0].ports[0]
    rx = cfg.scene.receivers()[0].ports[0]
    prof = pulse_profile(cfg.scene, tx, rx, band=cfg.band, grid=8)
    rs = pulse_result_set(prof, {"seed": "1"})
    assert rs.columns == ("time_ns", "re", "im", "magnitude")
    assert "rms_delay_spread_s" in rs.metadata
    assert float(rs.metadata["rms_delay_spread_s"]) > 0
    assert rs.metadata["sample_rate_hz"] == repr(4e9)


def test_write_plot_script(tmp_path):
    script = tmp_path / "plot.py"
    write_plot_script("sweep", tmp_path / "sweep.csv", script)
    text = script.read_text()
    compile(text, str(script), "exec")  # emitted code must at least parse
    assert "sweep.csv" in text
    with pytest.raises(ConfigError, match="no plot layout"):
        write_plot_script("mystery", tmp_path / "x.csv", script)
