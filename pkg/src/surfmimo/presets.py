"""Loading of shipped preset files: materials, coupling constants, MCS tables."""

from __future__ import annotations

import csv
from importlib import resources
from pathlib import Path

import yaml

from .channel import CouplingConstants
from .errors import PresetError
from .mimo import McsRow, McsTable
from .propagation import MaterialParams


def data_dir():
    return resources.files("surfmimo") / "presets"


def _read_text(path) -> str:
    if path is None:
        raise PresetError("no preset path given")
    return Path(path).read_text() if not hasattr(path, "read_text") else path.read_text()


def _load_materials_doc(path=None) -> dict:
    src = path if path is not None else data_dir() / "materials.yaml"
    try:
        doc = yaml.safe_load(_read_text(src))
    except yaml.YAMLError as exc:
        raise PresetError(f"cannot parse material preset file {src}: {exc}") from exc
    if not isinstance(doc, dict) or "materials" not in doc:
        raise PresetError(f"material preset file {src} has no 'materials' section")
    return doc


def preset_version(path=None) -> str:
    return str(_load_materials_doc(path).get("version", "unversioned"))


def load_materials(path=None) -> dict:
    """All material presets from a file (default: the shipped presets)."""
    doc = _load_materials_doc(path)
    out = {}
    for name, spec in doc["materials"].items():
        try:
            bands = sorted(spec["bands"], key=lambda b: float(b["frequency_hz"]))
            out[name] = MaterialParams(
                name=name,
                d0_m=float(spec["d0_m"]),
                refl_coeff=float(spec["refl_coeff"]),
                freqs_hz=tuple(float(b["frequency_hz"]) for b in bands),
                alphas_np_per_m=tuple(float(b["alpha_np_per_m"]) for b in bands),
                betas_rad_per_m=tuple(float(b["beta_rad_per_m"]) for b in bands),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise PresetError(f"material {name!r}: malformed preset entry ({exc})") from exc
    if not out:
        raise PresetError("material preset file defines no materials")
    return out


def load_material(name_or_path: str, path=None) -> MaterialParams:
    """A material by preset name, or every material from a custom file path."""
    materials = load_materials(path)
    if name_or_path in materials:
        return materials[name_or_path]
    p = Path(name_or_path)
    if p.suffix in (".yaml", ".yml") and p.exists():
        custom = load_materials(p)
        if len(custom) == 1:
            return next(iter(custom.values()))
        raise PresetError(
            f"{name_or_path} defines {len(custom)} materials; pass the material name"
        )
    raise PresetError(
        f"unknown material {name_or_path!r}; available: {sorted(materials)}"
    )


def load_coupling(path=None) -> CouplingConstants:
    doc = _load_materials_doc(path)
    c = doc.get("coupling", {})
    try:
        return CouplingConstants(
            c1=float(c.get("c1", 0.0)),
            c2=float(c.get("c2", 0.0)),
            c3=float(c.get("c3", 0.0)),
            near_field_coupling=float(c.get("near_field_coupling", 0.0)),
        )
    except (TypeError, ValueError) as exc:
        raise PresetError(f"malformed coupling section: {exc}") from exc


def load_mcs_table(path=None, bandwidth_mhz: float | None = None) -> McsTable:
    """MCS table from a CSV file (default: the shipped 802.11 table)."""
    src = path if path is not None else data_dir() / "mcs_80211.csv"
    rows = []
    try:
        reader = csv.DictReader(_read_text(src).splitlines())
        for rec in reader:
            rows.append(
                McsRow(
                    mcs_index=int(rec["mcs_index"]),
                    modulation=rec["modulation"],
                    coding_rate=rec["coding_rate"],
                    bandwidth_mhz=float(rec["bandwidth_mhz"]),
                    guard_interval_ns=float(rec["guard_interval_ns"]),
                    phy_rate_bps=float(rec["phy_rate_mbps"]) * 1e6,
                    min_snr_db=float(rec["min_snr_db"]),
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise PresetError(f"malformed MCS table {src}: {exc}") from exc
    if not rows:
        raise PresetError(f"MCS table {src} is empty")
    table = McsTable(tuple(rows))
    if bandwidth_mhz is not None:
        table = table.for_bandwidth(bandwidth_mhz)
    return table


def scene_path(name: str):
    """Resolve a scene preset name to its shipped file."""
    p = data_dir() / "scenes" / f"{name}.yaml"
    if not p.is_file():
        available = sorted(f.name[:-5] for f in (data_dir() / "scenes").iterdir()
                           if f.name.endswith(".yaml"))
        raise PresetError(f"unknown scene preset {name!r}; available: {available}")
    return p


def materials_bytes(ref=None) -> bytes:
    """Raw bytes of the material preset source backing a material reference
    (a custom file path, or the shipped file for preset names); used for
    config hashing."""
    if ref:
        p = Path(str(ref))
        if p.suffix in (".yaml", ".yml") and p.exists():
            return p.read_bytes()
    return (data_dir() / "materials.yaml").read_bytes()


def mcs_bytes(path=None) -> bytes:
    """Raw bytes of the MCS table file (shipped one by default); for hashing."""
    if path:
        return Path(str(path)).read_bytes()
    return (data_dir() / "mcs_80211.csv").read_bytes()
