"""Scenario configuration parsing and result serialization.

Configs are YAML with a fixed schema (surface, band, nodes, obstacles,
analysis, seed).  Parsing collects *all* problems — unknown keys, bad types,
scene violations — with line positions before raising, so a config can be
fixed in one pass.  Results are CSV with a sorted metadata comment block;
formatting round-trips floats exactly (repr) and is deterministic, so equal
inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import re
from dataclasses import dataclass

import numpy as np
import yaml

from .channel import ChannelParams, NoiseModel
from .errors import ConfigError, ResultIOError, SurfMimoError
from .experiments import FOOT_M, LinkSettings, SceneTemplate
from .geometry import CONTACT, Node, Obstacle, Scene, SurfaceSpec, validate_scene
from .propagation import FrequencyBand, band_for_frequency

DEFAULT_SEED = 1905

_TOP_KEYS = {"name", "surface", "band", "nodes", "obstacles", "analysis", "seed"}
_SURFACE_KEYS = {"material", "width_m", "height_m"}
_BAND_KEYS = {"center_hz", "center_ghz", "bandwidth_hz", "bandwidth_mhz", "band_id"}
_NODE_KEYS = {"id", "role", "contacts", "antennas"}
_OBSTACLE_KEYS = {"x_min", "y_min", "x_max", "y_max", "kind", "perturbation_db"}

ANALYSIS_DEFAULTS = {
    "grid": 32,
    "subcarriers": None,
    "snr_db": None,
    "tx_power_dbm": -10.0,
    "noise_figure_db": 6.0,
    "noise_floor_dbm_per_hz": -174.0,
    "mac_efficiency": 0.65,
    "esm_beta": 1.0,
    "max_image_order": 3,
    "air_exponent": 2.0,
    "near_field_radius_m": 0.1,
    "air_ref_m": 0.1,
    "antenna_height_m": 0.02,
    "contact_spacing_m": 0.025,
    "air_antenna_spacing_m": 0.0625,
    "mcs_table": None,
}


def _position_index(text: str) -> dict:
    """Map (key, path, tuples) -> 1-based line numbers, via the YAML node tree."""
    try:
        root = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    idx: dict = {}

    def walk(node, path):
        idx.setdefault(path, node.start_mark.line + 1)
        if isinstance(node, yaml.MappingNode):
            for key, value in node.value:
                if isinstance(key, yaml.ScalarNode):
                    sub = path + (key.value,)
                    idx[sub] = key.start_mark.line + 1
                    walk(value, sub)
        elif isinstance(node, yaml.SequenceNode):
            for i, value in enumerate(node.value):
                walk(value, path + (i,))

    if root is not None:
        walk(root, ())
    return idx


class _Collector:
    def __init__(self, text: str):
        self.positions = _position_index(text)
        self.problems: list = []

    def add(self, path, message: str):
        line = self.positions.get(tuple(path))
        where = f"line {line}: " if line else ""
        self.problems.append(f"{where}{message}")

    def number(self, data, path, default=None, required=False, integer=False):
        key = path[-1]
        if key not in data or data[key] is None:
            if required:
                self.add(path[:-1], f"missing required key {key!r}")
            return default
        v = data[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.add(path, f"{key!r} must be a number, got {v!r}")
            return default
        if integer and int(v) != v:
            self.add(path, f"{key!r} must be an integer, got {v!r}")
            return default
        return int(v) if integer else float(v)

    def unknown_keys(self, data, allowed, path):
        for key in data:
            if key not in allowed:
                self.add(path + (key,), f"unknown key {key!r}")


def _parse_points(raw, dim, what, path, col: _Collector):
    if raw is None:
        return ()
    if not isinstance(raw, list):
        col.add(path, f"{what} must be a list of points")
        return ()
    pts = []
    for i, p in enumerate(raw):
        if (not isinstance(p, list) or len(p) != dim
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in p)):
            col.add(path + (i,), f"{what}[{i}] must be {dim} numbers")
            continue
        pts.append(tuple(float(v) for v in p))
    return tuple(pts)


def parse_config(text) -> "ScenarioConfig":
    """Parse and validate a scenario config; raises ConfigError listing every
    problem found (with line positions where available)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}: " if mark else ""
        detail = getattr(exc, "problem", None) or "invalid syntax"
        raise ConfigError([f"{where}{detail}"]) from exc
    if data is None:
        raise ConfigError(["config is empty"])
    if not isinstance(data, dict):
        raise ConfigError([f"config must be a mapping, got {type(data).__name__}"])

    col = _Collector(text)
    col.unknown_keys(data, _TOP_KEYS, ())
    name = data.get("name", "")
    if not isinstance(name, str):
        col.add(("name",), "name must be a string")
        name = ""

    # surface -------------------------------------------------------------
    surface = None
    raw_surface = data.get("surface")
    material_ref = ""
    if not isinstance(raw_surface, dict):
        col.add(("surface",), "missing or invalid 'surface' section")
    else:
        col.unknown_keys(raw_surface, _SURFACE_KEYS, ("surface",))
        material_ref = raw_surface.get("material", "")
        width = col.number(raw_surface, ("surface", "width_m"), required=True)
        height = col.number(raw_surface, ("surface", "height_m"), required=True)
        if not isinstance(material_ref, str) or not material_ref:
            col.add(("surface", "material"), "surface needs a material preset name or path")
        elif width is not None and height is not None:
            from . import presets

            try:
                material = presets.load_material(material_ref)
                surface = SurfaceSpec(width, height, material)
            except SurfMimoError as exc:
                col.add(("surface", "material"), str(exc))
            except OSError as exc:
                col.add(("surface", "material"), f"cannot read material file: {exc}")

    # band ------------------------------------------------------------------
    band = None
    raw_band = data.get("band") or {}
    if not isinstance(raw_band, dict):
        col.add(("band",), "'band' must be a mapping")
        raw_band = {}
    col.unknown_keys(raw_band, _BAND_KEYS, ("band",))
    if "center_hz" in raw_band and "center_ghz" in raw_band:
        col.add(("band",), "give either center_hz or center_ghz, not both")
    center = col.number(raw_band, ("band", "center_hz"))
    if center is None:
        ghz = col.number(raw_band, ("band", "center_ghz"))
        center = ghz * 1e9 if ghz is not None else 2.437e9
    if "bandwidth_hz" in raw_band and "bandwidth_mhz" in raw_band:
        col.add(("band",), "give either bandwidth_hz or bandwidth_mhz, not both")
    bw = col.number(raw_band, ("band", "bandwidth_hz"))
    if bw is None:
        mhz = col.number(raw_band, ("band", "bandwidth_mhz"))
        bw = mhz * 1e6 if mhz is not None else 40e6
    band_id = raw_band.get("band_id")
    try:
        band = (FrequencyBand(center, bw, band_id) if band_id
                else band_for_frequency(center, bw))
    except SurfMimoError as exc:
        col.add(("band",), str(exc))

    # nodes -------------------------------------------------------------------
    nodes = []
    raw_nodes = data.get("nodes")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        col.add(("nodes",), "missing or empty 'nodes' list")
    else:
        for i, raw_node in enumerate(raw_nodes):
            path = ("nodes", i)
            if not isinstance(raw_node, dict):
                col.add(path, f"node {i} must be a mapping")
                continue
            col.unknown_keys(raw_node, _NODE_KEYS, path)
            node_id = raw_node.get("id")
            if not isinstance(node_id, str) or not node_id:
                col.add(path, f"node {i} needs a string 'id'")
                node_id = f"node{i}"
            role = raw_node.get("role", "")
            contacts = _parse_points(raw_node.get("contacts"), 2, "contacts",
                                     path + ("contacts",), col)
            antennas = _parse_points(raw_node.get("antennas"), 3, "antennas",
                                     path + ("antennas",), col)
            nodes.append(Node(node_id, role, contacts=contacts, antennas=antennas))

    # obstacles -----------------------------------------------------------------
    obstacles = []
    raw_obstacles = data.get("obstacles") or []
    if not isinstance(raw_obstacles, list):
        col.add(("obstacles",), "'obstacles' must be a list")
        raw_obstacles = []
    for i, raw_ob in enumerate(raw_obstacles):
        path = ("obstacles", i)
        if not isinstance(raw_ob, dict):
            col.add(path, f"obstacle {i} must be a mapping")
            continue
        col.unknown_keys(raw_ob, _OBSTACLE_KEYS, path)
        vals = [col.number(raw_ob, path + (k,), required=True)
                for k in ("x_min", "y_min", "x_max", "y_max")]
        if any(v is None for v in vals):
            continue
        obstacles.append(Obstacle(
            *vals,
            kind=raw_ob.get("kind", "metal"),
            perturbation_db=col.number(raw_ob, path + ("perturbation_db",), default=3.0),
        ))

    # analysis ---------------------------------------------------------------
    analysis = dict(ANALYSIS_DEFAULTS)
    raw_analysis = data.get("analysis") or {}
    if not isinstance(raw_analysis, dict):
        col.add(("analysis",), "'analysis' must be a mapping")
        raw_analysis = {}
    col.unknown_keys(raw_analysis, set(ANALYSIS_DEFAULTS), ("analysis",))
    for key in raw_analysis:
        if key not in ANALYSIS_DEFAULTS:
            continue
        if key == "mcs_table":
            value = raw_analysis[key]
            if value is not None and not isinstance(value, str):
                col.add(("analysis", key), "mcs_table must be a file path")
                value = None
        elif key in ("grid", "subcarriers", "max_image_order"):
            value = col.number(raw_analysis, ("analysis", key), integer=True,
                               default=ANALYSIS_DEFAULTS[key])
        else:
            value = col.number(raw_analysis, ("analysis", key),
                               default=ANALYSIS_DEFAULTS[key])
        analysis[key] = value

    seed = col.number(data, ("seed",), default=DEFAULT_SEED, integer=True)
    if seed is None or seed < 0:
        col.add(("seed",), "seed must be a non-negative integer")
        seed = DEFAULT_SEED

    scene = None
    if surface is not None and nodes:
        scene = Scene(surface, nodes=tuple(nodes), obstacles=tuple(obstacles))
        for problem in validate_scene(scene):
            col.add(("nodes",), problem)

    if col.problems:
        raise ConfigError(col.problems)

    normalized = {
        "name": name,
        "surface": {"material": material_ref, "width_m": surface.width_m,
                    "height_m": surface.height_m},
        "band": {"center_hz": band.center_hz, "bandwidth_hz": band.bandwidth_hz,
                 "band_id": band.band_id},
        "nodes": [
            {"id": n.id, "role": n.role, "contacts": [list(c) for c in n.contacts],
             "antennas": [list(a) for a in n.antennas]}
            for n in nodes
        ],
        "obstacles": [
            {"x_min": o.x_min, "y_min": o.y_min, "x_max": o.x_max, "y_max": o.y_max,
             "kind": o.kind, "perturbation_db": o.perturbation_db}
            for o in obstacles
        ],
        "analysis": analysis,
        "seed": seed,
    }
    return ScenarioConfig(name=name, scene=scene, band=band, seed=seed,
                          analysis=analysis, normalized=normalized)


def load_config(path) -> "ScenarioConfig":
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError([f"cannot read config {path}: {exc}"]) from exc
    try:
        return parse_config(text)
    except ConfigError as exc:
        raise ConfigError([f"{path}: {p}" for p in exc.problems]) from exc


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully validated scenario: scene, band, analysis knobs, seed."""

    name: str
    scene: Scene
    band: FrequencyBand
    seed: int
    analysis: dict
    normalized: dict

    def channel_params(self) -> ChannelParams:
        from . import presets

        a = self.analysis
        return ChannelParams(
            coupling=presets.load_coupling(),
            air_ref_m=a["air_ref_m"],
            air_exponent=a["air_exponent"],
            near_field_radius_m=a["near_field_radius_m"],
            max_image_order=int(a["max_image_order"]),
        )

    def settings(self) -> LinkSettings:
        from . import presets

        a = self.analysis
        table = None
        if a["mcs_table"]:
            table = presets.load_mcs_table(
                a["mcs_table"], bandwidth_mhz=self.band.bandwidth_hz / 1e6
            )
        return LinkSettings(
            band=self.band,
            grid=int(a["grid"]),
            n_subcarriers=None if a["subcarriers"] is None else int(a["subcarriers"]),
            tx_power_dbm=a["tx_power_dbm"],
            noise=NoiseModel(a["noise_floor_dbm_per_hz"], a["noise_figure_db"]),
            snr_db=a["snr_db"],
            esm_beta=a["esm_beta"],
            mac_efficiency=a["mac_efficiency"],
            antenna_height_m=a["antenna_height_m"],
            contact_spacing_m=a["contact_spacing_m"],
            air_antenna_spacing_m=a["air_antenna_spacing_m"],
            params=self.channel_params(),
            mcs_table=table,
        )

    def template(self) -> SceneTemplate:
        """Sweep template anchored at the first transmitter port."""
        tx = self.scene.transmitters()[0]
        kind, pos = tx.ports[0]
        return SceneTemplate(self.scene.surface, tx_x_m=pos[0], link_y_m=pos[1])


def config_hash(config: ScenarioConfig) -> str:
    """Hash of everything that shapes the output: the normalized config, the
    preset files it pulls in, and the tool version."""
    from . import __version__, presets

    h = hashlib.sha256()
    h.update(json.dumps(config.normalized, sort_keys=True,
                        separators=(",", ":")).encode())
    h.update(presets.materials_bytes(config.normalized["surface"]["material"]))
    h.update(presets.mcs_bytes(config.analysis.get("mcs_table")))
    h.update(__version__.encode())
    return h.hexdigest()[:16]


def parameter_hash(params: dict) -> str:
    """config_hash equivalent for runs driven by flags instead of a config file."""
    from . import __version__, presets

    h = hashlib.sha256()
    h.update(json.dumps(params, sort_keys=True, separators=(",", ":"),
                        default=str).encode())
    h.update(presets.materials_bytes(None))
    h.update(presets.mcs_bytes(None))
    h.update(__version__.encode())
    return h.hexdigest()[:16]


# --- result sets ------------------------------------------------------------------

_MAGIC = "# surfmimo-results v1"
_INT_RE = re.compile(r"^-?\d+$")


def _format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _parse_value(s: str):
    if s == "":
        return None
    if s == "true":
        return True
    if s == "false":
        return False
    if _INT_RE.match(s):
        return int(s)
    try:
        return float(s)
    except ValueError:
        return s


@dataclass(frozen=True, eq=False)
class ResultSet:
    """Tabular experiment output plus reproducibility metadata."""

    columns: tuple
    rows: tuple
    metadata: dict

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        object.__setattr__(
            self, "metadata", {str(k): str(v) for k, v in self.metadata.items()}
        )
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ResultIOError(
                    f"row width {len(row)} does not match {len(self.columns)} columns"
                )

    def __eq__(self, other):
        return (isinstance(other, ResultSet)
                and self.columns == other.columns
                and self.rows == other.rows
                and self.metadata == other.metadata)


def write_results(rs: ResultSet, path) -> None:
    """CSV with a '#' metadata header; deterministic byte-for-byte."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(_MAGIC + "\n")
            for key in sorted(rs.metadata):
                fh.write(f"# {key}: {rs.metadata[key]}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(rs.columns)
            for row in rs.rows:
                writer.writerow([_format_value(v) for v in row])
    except OSError as exc:
        raise ResultIOError(f"cannot write results to {path}: {exc}") from exc


def read_results(path) -> ResultSet:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ResultIOError(f"cannot read results from {path}: {exc}") from exc
    if not lines or lines[0] != _MAGIC:
        raise ResultIOError(f"{path} is not a surfmimo results file")
    metadata = {}
    body_start = 1
    for i, line in enumerate(lines[1:], start=1):
        if not line.startswith("#"):
            body_start = i
            break
        key, _, value = line[1:].partition(":")
        metadata[key.strip()] = value.strip()
    else:
        body_start = len(lines)
    body = list(csv.reader(lines[body_start:]))
    if not body:
        raise ResultIOError(f"{path} has no column header")
    columns = tuple(body[0])
    rows = tuple(tuple(_parse_value(v) for v in row) for row in body[1:])
    return ResultSet(columns, rows, metadata)


# --- experiment-specific result builders ----------------------------------------


def _port_labels(kinds) -> list:
    labels, counts = [], {}
    for kind in kinds:
        short = "contact" if kind == CONTACT else "antenna"
        counts[short] = counts.get(short, 0)
        labels.append(f"{short}{counts[short]}")
        counts[short] += 1
    return labels


def channel_result_set(matrices, metadata=None) -> ResultSet:
    """Per-subcarrier complex channel entries."""
    columns = ("subcarrier_index", "rx_port", "tx_port", "re", "im",
               "mag_db", "phase_rad")
    rows = []
    for s, m in enumerate(matrices):
        rx = _port_labels(m.rx_port_kinds)
        tx = _port_labels(m.tx_port_kinds)
        for i in range(m.entries.shape[0]):
            for j in range(m.entries.shape[1]):
                h = m.entries[i, j]
                mag = abs(h)
                mag_db = 20.0 * math.log10(mag) if mag > 0 else float("-inf")
                rows.append((s, rx[i], tx[j], h.real, h.imag, mag_db,
                             float(np.angle(h))))
    return ResultSet(columns, rows, metadata or {})


def analyze_result_set(matrices, snr_linear, metadata=None) -> ResultSet:
    from .mimo import capacity, condition_number

    columns = ("subcarrier_index", "frequency_hz", "capacity_bps_hz",
               "condition_number")
    rows = [
        (s, m.frequency.center_hz, capacity(m, snr_linear), condition_number(m))
        for s, m in enumerate(matrices)
    ]
    return ResultSet(columns, rows, metadata or {})


def sweep_result_set(rows_by_mode: dict, mac_efficiency: float,
                     metadata=None) -> ResultSet:
    """rows_by_mode: {mode_name: [(distance_m, LinkResult), ...]}."""
    columns = ("mode", "distance_m", "distance_ft", "capacity_mbps",
               "condition_number", "stream_snrs_db", "phy_rate_mbps",
               "throughput_mbps")
    rows = []
    for mode in rows_by_mode:
        for d, r in rows_by_mode[mode]:
            rows.append((
                mode, d, d / FOOT_M, r.capacity_bps / 1e6, r.condition_number,
                ";".join(repr(float(s)) for s in r.stream_snrs_db),
                r.phy_rate_bps / 1e6,
                r.phy_rate_bps * mac_efficiency / 1e6,
            ))
    return ResultSet(columns, rows, metadata or {})


def separation_result_set(rows_by_mode: dict, mac_efficiency: float,
                          metadata=None) -> ResultSet:
    columns = ("mode", "separation_m", "separation_cm", "mean_capacity_mbps",
               "max_condition_number", "mean_snr_db", "mean_phy_rate_mbps",
               "mean_throughput_mbps")
    rows = []
    for mode in rows_by_mode:
        for sep, r in rows_by_mode[mode]:
            rows.append((
                mode, sep, sep * 100.0, r.capacity_bps / 1e6, r.condition_number,
                float(r.stream_snrs_db[0]), r.phy_rate_bps / 1e6,
                r.phy_rate_bps * mac_efficiency / 1e6,
            ))
    return ResultSet(columns, rows, metadata or {})


def aggregate_result_set(sweep_rows, plan, metadata=None) -> ResultSet:
    """sweep_rows: [(distance_m, total_bps, [ChainResult, ...]), ...]."""
    columns = ("distance_m", "label", "center_hz", "bandwidth_hz", "dfs",
               "conversion_loss_db", "esnr_db", "phy_rate_mbps")
    rows = []
    for d, total, chains in sweep_rows:
        for c in chains:
            rows.append((d, c.label, c.center_hz, c.bandwidth_hz, c.dfs,
                         c.conversion_loss_db, c.esnr_db, c.phy_rate_bps / 1e6))
        rows.append((d, "total", None, plan.total_bandwidth_hz, False, 0.0,
                     None, total / 1e6))
    return ResultSet(columns, rows, metadata or {})


def radiation_result_set(samples, metadata=None) -> ResultSet:
    columns = ("x_m", "y_m", "z_m", "hemisphere", "reference_dbm",
               "surface_fed_dbm", "offset_db")
    rows = [
        (s.position[0], s.position[1], s.position[2],
         "front" if s.position[2] >= 0 else "back",
         s.reference_dbm, s.surface_fed_dbm, s.offset_db)
        for s in samples
    ]
    return ResultSet(columns, rows, metadata or {})


def share_result_set(results, metadata=None) -> ResultSet:
    columns = ("pair_index", "channel", "solo_rate_mbps", "win_fraction",
               "throughput_mbps")
    rows = [
        (r.pair_index, r.channel, r.solo_rate_bps / 1e6, r.win_fraction,
         r.throughput_bps / 1e6)
        for r in results
    ]
    return ResultSet(columns, rows, metadata or {})


def pulse_result_set(profile, metadata=None) -> ResultSet:
    columns = ("time_ns", "re", "im", "magnitude")
    rows = [
        (float(t * 1e9), float(y.real), float(y.imag), float(abs(y)))
        for t, y in zip(profile.time_s, profile.samples)
    ]
    meta = dict(metadata or {})
    meta.setdefault("sample_rate_hz", repr(profile.sample_rate_hz))
    meta.setdefault("rms_delay_spread_s", repr(profile.response.rms_delay_spread()))
    return ResultSet(columns, rows, meta)


# --- plot script emission ---------------------------------------------------------

_PLOT_SPECS = {
    "sweep": ("distance_ft", ("throughput_mbps",), "mode"),
    "separation": ("separation_cm", ("mean_throughput_mbps",), "mode"),
    "pulse": ("time_ns", ("magnitude",), None),
    "aggregate": ("distance_m", ("phy_rate_mbps",), "label"),
    "radiation": ("z_m", ("surface_fed_dbm", "reference_dbm"), None),
    "share": ("pair_index", ("throughput_mbps",), None),
    "analyze": ("subcarrier_index", ("capacity_bps_hz", "condition_number"), None),
    "channel": ("subcarrier_index", ("mag_db",), None),
}

_PLOT_TEMPLATE = '''"""Auto-generated plot script for {csv_path!r}."""
import csv

import matplotlib.pyplot as plt

with open({csv_path!r}) as fh:
    lines = [l for l in fh.read().splitlines() if not l.startswith("#")]
rows = list(csv.DictReader(lines))

group_col = {group!r}
groups = sorted({{r[group_col] for r in rows}}) if group_col else [None]
for g in groups:
    sel = [r for r in rows if group_col is None or r[group_col] == g]
    xs = [float(r[{x!r}]) for r in sel]
    for y_col in {ys!r}:
        ys = [float(r[y_col]) for r in sel]
        label = y_col if g is None else f"{{g}}: {{y_col}}"
        plt.plot(xs, ys, marker="o", label=label)
plt.xlabel({x!r})
plt.legend()
plt.grid(True)
plt.savefig({png_path!r}, dpi=150)
print("wrote", {png_path!r})
'''


def write_plot_script(kind: str, csv_path, script_path) -> None:
    """Emit a small matplotlib script that renders the given results CSV."""
    if kind not in _PLOT_SPECS:
        raise ConfigError([f"no plot layout for result kind {kind!r}"])
    x, ys, group = _PLOT_SPECS[kind]
    text = _PLOT_TEMPLATE.format(
        csv_path=str(csv_path), x=x, ys=tuple(ys), group=group,
        png_path=str(csv_path) + ".png",
    )
    try:
        with open(script_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ResultIOError(f"cannot write plot script to {script_path}: {exc}") from exc
