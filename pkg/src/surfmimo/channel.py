"""Synthesis of hybrid surface/air channel gains and MIMO matrices.

Every (TX port, RX port) pair maps to one of four channel kinds:

* contact -> contact: direct surface path, boundary-reflection images, and a
  surface->air->surface composite term (double surface integral).
* contact -> antenna (and the mirror): a surface->air composite term (single
  surface integral) plus a local coupling term when the antenna sits within
  the near-field radius of the surface: the signal runs along the surface to
  the point under the antenna and hops up.
* antenna -> antenna: direct line-of-sight air path (no surface re-radiation:
  surface<->air transformations are modeled at most once per path), with an
  optional scatterer-ring multipath model, off by default.

Composite integrals are midpoint-rule Riemann sums on a fixed grid, summed
in a fixed order, so results are deterministic for a given scene and grid.
Distances inside integral kernels that fall below the model reference
distances are clamped (the gain laws diverge at zero); direct paths that
would be clamped emit a RuntimeWarning instead of extrapolating.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, NearFieldError, PresetError
from .geometry import ANTENNA, CONTACT, Scene, image_sources, segment_crosses_rect
from .propagation import SPEED_OF_LIGHT, FrequencyBand, phase_velocity

DEFAULT_SUBCARRIERS = {20e6: 56, 40e6: 114}


@dataclass(frozen=True)
class CouplingConstants:
    """Calibration scalars for the composite channel terms."""

    c1: float = 0.02
    c2: float = 0.02
    c3: float = 0.02
    near_field_coupling: float = 0.7

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "near_field_coupling"):
            if getattr(self, name) < 0:
                raise DomainError(f"coupling constant {name} must be >= 0")


@dataclass(frozen=True)
class NoiseModel:
    noise_floor_dbm_per_hz: float = -174.0
    noise_figure_db: float = 6.0

    def noise_power_dbm(self, bandwidth_hz: float) -> float:
        return (
            self.noise_floor_dbm_per_hz
            + 10.0 * math.log10(bandwidth_hz)
            + self.noise_figure_db
        )


@dataclass(frozen=True)
class AirMultipathModel:
    """Optional scatterer-ring multipath for antenna-antenna links.

    Scatterers sit on a far ring with fixed random phases (seeded,
    deterministic); scattered power relative to the line-of-sight path is set
    by relative_gain_db.  With center_m unset the ring follows each link's
    midpoint.  Pinning center_m places the scatterers at fixed points in
    space, shared by every antenna pair, so closely spaced antennas see
    correlated fading while spacing near half a wavelength decorrelates them.
    """

    n_scatterers: int = 64
    radius_m: float = 3.0
    relative_gain_db: float = -6.0
    seed: int = 7
    center_m: tuple | None = None

    def __post_init__(self):
        if self.n_scatterers < 1:
            raise DomainError(f"n_scatterers must be >= 1, got {self.n_scatterers}")
        if not (self.radius_m > 0):
            raise DomainError(f"scatterer ring radius must be positive, got {self.radius_m}")
        if self.center_m is not None:
            c = tuple(float(x) for x in self.center_m)
            if len(c) not in (2, 3):
                raise DomainError("center_m must be (x, y) or (x, y, z)")
            object.__setattr__(self, "center_m", c)


@dataclass(frozen=True)
class ChannelParams:
    """Everything besides the scene that shapes channel synthesis."""

    coupling: CouplingConstants = CouplingConstants()
    air_ref_m: float = 0.1
    air_exponent: float = 2.0
    near_field_radius_m: float = 0.1
    max_image_order: int = 3
    air_multipath: AirMultipathModel | None = None


@dataclass(frozen=True)
class ChannelMatrix:
    """Complex port-to-port gains at one frequency: entries[rx, tx]."""

    entries: np.ndarray
    frequency: FrequencyBand
    rx_port_kinds: tuple
    tx_port_kinds: tuple

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", e)
        if e.ndim != 2 or e.shape[0] < 1 or e.shape[1] < 1:
            raise DomainError(f"channel matrix must be 2-D and non-empty, got shape {e.shape}")
        if e.shape != (len(self.rx_port_kinds), len(self.tx_port_kinds)):
            raise DomainError("port label counts do not match matrix dimensions")
        if not (np.all(np.isfinite(e.real)) and np.all(np.isfinite(e.imag))):
            raise DomainError("channel matrix contains non-finite entries")


@dataclass(frozen=True)
class ImpulseResponse:
    """Sorted (delay, complex amplitude) taps for one link."""

    taps: tuple
    bandwidth_hz: float

    def __post_init__(self):
        if len(self.taps) < 1:
            raise DomainError("impulse response needs at least one tap")
        delays = [t[0] for t in self.taps]
        if delays[0] <= 0:
            raise DomainError("first tap delay must be positive")
        if any(b <= a for a, b in zip(delays, delays[1:])):
            raise DomainError("tap delays must be strictly increasing")

    def delays(self) -> np.ndarray:
        return np.array([t[0] for t in self.taps])

    def amplitudes(self) -> np.ndarray:
        return np.array([t[1] for t in self.taps], dtype=complex)

    def rms_delay_spread(self) -> float:
        """Power-weighted RMS spread of the tap delays, in seconds."""
        tau = self.delays()
        p = np.abs(self.amplitudes()) ** 2
        mean = np.sum(p * tau) / np.sum(p)
        return float(np.sqrt(np.sum(p * (tau - mean) ** 2) / np.sum(p)))


def default_params() -> ChannelParams:
    """Channel parameters with the preset coupling constants."""
    from . import presets

    return ChannelParams(coupling=presets.load_coupling())


# --- integration grid and path caches ----------------------------------------

_GRID_CACHE: dict = {}
_KERNEL_CACHE: dict = {}
_PATH_CACHE: dict = {}
_KERNEL_CACHE_MAX = 256
_PATH_CACHE_MAX = 4096
_KERNEL_POINTS_MAX = 150  # only cache kernels for modest grids


def _grid_points(width: float, height: float, n: int):
    """Midpoint-rule grid over the surface: n cells across the width, a
    proportional (>= 2) count across the height.  Returns (points, pairwise
    distances, cell area)."""
    if n < 2:
        raise ConfigError(f"integration grid must have at least 2 points per dimension, got {n}")
    ny = max(2, int(round(n * height / width)))
    key = (width, height, n, ny)
    hit = _GRID_CACHE.get(key)
    if hit is not None:
        return hit
    xs = (np.arange(n) + 0.5) * (width / n)
    ys = (np.arange(ny) + 0.5) * (height / ny)
    px, py = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([px.ravel(), py.ravel()])
    diff = pts[:, None, :] - pts[None, :, :]
    dpp = np.sqrt(np.sum(diff * diff, axis=2))
    da = (width / n) * (height / ny)
    _GRID_CACHE[key] = (pts, dpp, da)
    return pts, dpp, da


def _air_amp_arr(d, d0: float, p: float):
    r = d0 / d
    if p == 1:
        return r
    if p == 2:
        return r * r
    return r**p


def _air_gain_arr(d, f_hz: float, d0: float, p: float):
    """Vectorized air gain with silent near-field clamping (kernel use only)."""
    d = np.maximum(d, d0)
    k = 2.0 * math.pi * f_hz / SPEED_OF_LIGHT
    return _air_amp_arr(d, d0, p) * np.exp(-1j * k * d)


def _surface_gain_arr(d, f_hz: float, material):
    """Vectorized surface gain with silent near-field clamping (kernel use only)."""
    d = np.maximum(d, material.d0_m)
    alpha = material.alpha_at(f_hz)
    beta = material.beta_at(f_hz)
    return np.exp(-(alpha + 1j * beta) * d) * (material.d0_m / d)


def _air_kernel(width, height, n, f_hz, d0, p):
    pts, dpp, da = _grid_points(width, height, n)
    key = (width, height, n, f_hz, d0, p)
    hit = _KERNEL_CACHE.get(key)
    if hit is not None:
        return pts, hit, da
    kern = _air_gain_arr(dpp, f_hz, d0, p)
    if pts.shape[0] <= _KERNEL_POINTS_MAX:
        if len(_KERNEL_CACHE) >= _KERNEL_CACHE_MAX:
            _KERNEL_CACHE.pop(next(iter(_KERNEL_CACHE)))
        _KERNEL_CACHE[key] = kern
    return pts, kern, da


def _obstacle_factor(p0, p1, scene: Scene) -> float:
    """Linear amplitude factor for obstacles crossed by a straight surface path."""
    factor = 1.0
    for ob in scene.obstacles:
        if segment_crosses_rect(p0, p1, ob):
            factor *= 10.0 ** (-ob.perturbation_db / 20.0)
    return factor


def _surface_path_geometry(tx, rx, scene: Scene, order: int):
    """Frequency-independent path data: lengths, reflection counts, obstacle
    factors.  Index 0 is the direct path; the rest are boundary images of the
    receiver position (straight segments to the mirrored point, the standard
    image-method approximation, also used for obstacle shadowing)."""
    key = (tuple(tx), tuple(rx), scene.surface, scene.obstacles, order)
    hit = _PATH_CACHE.get(key)
    if hit is not None:
        return hit
    lengths = [math.hypot(tx[0] - rx[0], tx[1] - rx[1])]
    counts = [0.0]
    factors = [_obstacle_factor(tx, rx, scene)]
    if order >= 1:
        for pos, count in image_sources(rx, order, scene.surface):
            if count == 0:
                continue
            lengths.append(math.hypot(tx[0] - pos[0], tx[1] - pos[1]))
            counts.append(float(count))
            factors.append(_obstacle_factor(tx, pos, scene))
    hit = (np.array(lengths), np.array(counts), np.array(factors))
    if len(_PATH_CACHE) >= _PATH_CACHE_MAX:
        _PATH_CACHE.pop(next(iter(_PATH_CACHE)))
    _PATH_CACHE[key] = hit
    return hit


def _surface_paths(tx, rx, scene: Scene, f_hz: float, params: ChannelParams):
    """(lengths, complex amplitudes) of the direct surface path plus boundary
    images, with per-bounce refl_coeff and obstacle losses applied."""
    m = scene.surface.material
    order = params.max_image_order if m.refl_coeff > 0 else 0
    lengths, counts, factors = _surface_path_geometry(tx, rx, scene, order)
    if lengths[0] < m.d0_m:
        warnings.warn(
            f"direct surface path of {lengths[0]:.4g} m is below the reference "
            f"distance {m.d0_m:.4g} m; clamping to the reference distance",
            RuntimeWarning,
            stacklevel=3,
        )
    clamped = np.maximum(lengths, m.d0_m)
    alpha = m.alpha_at(f_hz)
    beta = m.beta_at(f_hz)
    amps = (
        (m.refl_coeff**counts)
        * factors
        * np.exp(-(alpha + 1j * beta) * clamped)
        * (m.d0_m / clamped)
    )
    return clamped, amps


def _antenna_foot(antenna, scene: Scene):
    """Point on the surface under (nearest to) an antenna, and the hop distance."""
    ax, ay, az = antenna
    fx = min(max(ax, 0.0), scene.surface.width_m)
    fy = min(max(ay, 0.0), scene.surface.height_m)
    hop = math.sqrt((ax - fx) ** 2 + (ay - fy) ** 2 + az * az)
    return (fx, fy), hop


def _hop_gain(hop: float, f_hz: float, params: ChannelParams) -> complex:
    """Air gain of the local surface->antenna hop (clamped by design)."""
    hop_c = max(hop, params.air_ref_m)
    k = 2.0 * math.pi * f_hz / SPEED_OF_LIGHT
    amp = _air_amp_arr(hop_c, params.air_ref_m, params.air_exponent)
    return amp * complex(math.cos(k * hop_c), -math.sin(k * hop_c))


def _center_hz(f) -> float:
    return f.center_hz if isinstance(f, FrequencyBand) else float(f)


# --- the four channel kinds ---------------------------------------------------


def h_ss(tx_contact, rx_contact, scene: Scene, f, grid: int = 32,
         params: ChannelParams | None = None) -> complex:
    """Contact-to-contact gain: direct path + boundary images + composite term.

    The composite term sums surface->air->surface over all discretized point
    pairs (p1, p2): C1 * sum A_S(tx,p1) A_air(p1,p2) A_S(p2,rx) dA^2.
    """
    params = params or default_params()
    f_hz = _center_hz(f)
    _, amps = _surface_paths(tx_contact, rx_contact, scene, f_hz, params)
    total = complex(np.sum(amps))
    c1 = params.coupling.c1
    if c1 > 0:
        m = scene.surface.material
        pts, kern, da = _air_kernel(
            scene.surface.width_m, scene.surface.height_m, grid, f_hz,
            params.air_ref_m, params.air_exponent,
        )
        a_tx = _surface_gain_arr(
            np.hypot(pts[:, 0] - tx_contact[0], pts[:, 1] - tx_contact[1]), f_hz, m
        )
        a_rx = _surface_gain_arr(
            np.hypot(pts[:, 0] - rx_contact[0], pts[:, 1] - rx_contact[1]), f_hz, m
        )
        total += c1 * da * da * complex(a_tx @ (kern @ a_rx))
    return total


def _h_cross(contact, antenna, scene: Scene, f, grid: int, c_scalar: float,
             params: ChannelParams) -> complex:
    """Shared body of h_sa / h_as (the two integrals are mirror images)."""
    f_hz = _center_hz(f)
    total = 0j
    if c_scalar > 0:
        m = scene.surface.material
        pts, _, da = _grid_points(scene.surface.width_m, scene.surface.height_m, grid)
        a_surf = _surface_gain_arr(
            np.hypot(pts[:, 0] - contact[0], pts[:, 1] - contact[1]), f_hz, m
        )
        d_air = np.sqrt(
            (pts[:, 0] - antenna[0]) ** 2
            + (pts[:, 1] - antenna[1]) ** 2
            + antenna[2] ** 2
        )
        b_air = _air_gain_arr(d_air, f_hz, params.air_ref_m, params.air_exponent)
        total += c_scalar * da * complex(a_surf @ b_air)
    nfc = params.coupling.near_field_coupling
    if nfc > 0:
        foot, hop = _antenna_foot(antenna, scene)
        if hop <= params.near_field_radius_m:
            _, amps = _surface_paths(contact, foot, scene, f_hz, params)
            total += nfc * complex(np.sum(amps)) * _hop_gain(hop, f_hz, params)
    return total


def h_sa(tx_contact, rx_antenna, scene: Scene, f, grid: int = 32,
         params: ChannelParams | None = None) -> complex:
    """Contact-to-antenna gain: C2 integral + local near-field coupling."""
    params = params or default_params()
    return _h_cross(tx_contact, rx_antenna, scene, f, grid, params.coupling.c2, params)


def h_as(tx_antenna, rx_contact, scene: Scene, f, grid: int = 32,
         params: ChannelParams | None = None) -> complex:
    """Antenna-to-contact gain: C3 integral + local near-field coupling."""
    params = params or default_params()
    return _h_cross(rx_contact, tx_antenna, scene, f, grid, params.coupling.c3, params)


def _scatterers(tx, rx, model: AirMultipathModel):
    if model.center_m is not None:
        c = model.center_m
        mid = (c[0], c[1], c[2] if len(c) == 3 else (tx[2] + rx[2]) / 2.0)
    else:
        mid = ((tx[0] + rx[0]) / 2.0, (tx[1] + rx[1]) / 2.0, (tx[2] + rx[2]) / 2.0)
    angles = 2.0 * math.pi * np.arange(model.n_scatterers) / model.n_scatterers
    pos = np.column_stack([
        mid[0] + model.radius_m * np.cos(angles),
        mid[1] + model.radius_m * np.sin(angles),
        np.full(model.n_scatterers, mid[2]),
    ])
    rng = np.random.default_rng(model.seed)
    phases = rng.uniform(0.0, 2.0 * math.pi, model.n_scatterers)
    return pos, phases


def h_aa(tx_antenna, rx_antenna, f, params: ChannelParams | None = None) -> complex:
    """Antenna-to-antenna gain: direct air path (plus optional scatterer ring)."""
    params = params or ChannelParams()
    f_hz = _center_hz(f)
    d = math.dist(tx_antenna, rx_antenna)
    if d < params.air_ref_m:
        raise NearFieldError(
            f"antenna separation {d:.4g} m is below the air reference distance "
            f"{params.air_ref_m} m"
        )
    k = 2.0 * math.pi * f_hz / SPEED_OF_LIGHT
    los = _air_amp_arr(d, params.air_ref_m, params.air_exponent) * complex(
        math.cos(k * d), -math.sin(k * d)
    )
    mp = params.air_multipath
    if mp is None:
        return complex(los)
    pos, phases = _scatterers(tx_antenna, rx_antenna, mp)
    d1 = np.sqrt(np.sum((pos - np.asarray(tx_antenna)) ** 2, axis=1))
    d2 = np.sqrt(np.sum((pos - np.asarray(rx_antenna)) ** 2, axis=1))
    scale = abs(los) * 10.0 ** (mp.relative_gain_db / 20.0) / math.sqrt(mp.n_scatterers)
    scattered = scale * np.exp(1j * (phases - k * (d1 + d2)))
    return complex(los + np.sum(scattered))


# --- matrix assembly ----------------------------------------------------------


def _all_ports(nodes):
    kinds, positions = [], []
    for node in nodes:
        for kind, pos in node.ports:
            kinds.append(kind)
            positions.append(pos)
    return tuple(kinds), tuple(positions)


def build_mimo(scene: Scene, f, grid: int = 32,
               params: ChannelParams | None = None) -> ChannelMatrix:
    """Channel matrix over all transmitter ports (columns) and receiver ports (rows).

    Port order within each node is contacts first, then antennas; the entry
    dispatches on the (RX kind, TX kind) pair.
    """
    params = params or default_params()
    band = f if isinstance(f, FrequencyBand) else FrequencyBand(float(f))
    tx_kinds, tx_pos = _all_ports(scene.transmitters())
    rx_kinds, rx_pos = _all_ports(scene.receivers())
    if not tx_kinds or not rx_kinds:
        raise DomainError("scene needs at least one transmitter port and one receiver port")
    h = np.zeros((len(rx_kinds), len(tx_kinds)), dtype=complex)
    for i, (rk, rp) in enumerate(zip(rx_kinds, rx_pos)):
        for j, (tk, tp) in enumerate(zip(tx_kinds, tx_pos)):
            if tk == CONTACT and rk == CONTACT:
                h[i, j] = h_ss(tp, rp, scene, band, grid, params)
            elif tk == CONTACT and rk == ANTENNA:
                h[i, j] = h_sa(tp, rp, scene, band, grid, params)
            elif tk == ANTENNA and rk == CONTACT:
                h[i, j] = h_as(tp, rp, scene, band, grid, params)
            else:
                h[i, j] = h_aa(tp, rp, band, params)
    return ChannelMatrix(h, band, rx_kinds, tx_kinds)


def subcarrier_frequencies(band: FrequencyBand, n_subcarriers: int) -> np.ndarray:
    """Uniform interior subcarrier centers across the band (n = 1 -> band center)."""
    if n_subcarriers < 1:
        raise ConfigError(f"need at least 1 subcarrier, got {n_subcarriers}")
    idx = np.arange(n_subcarriers)
    offsets = ((idx + 1.0) / (n_subcarriers + 1.0) - 0.5) * band.bandwidth_hz
    return band.center_hz + offsets


def csi(scene: Scene, band: FrequencyBand, n_subcarriers: int | None = None,
        grid: int = 32, params: ChannelParams | None = None):
    """Per-subcarrier channel matrices across the band.

    Defaults to the 802.11 data+pilot tone counts (114 at 40 MHz, 56 at
    20 MHz).  Frequency diversity emerges from the multipath delay structure.
    """
    params = params or default_params()
    if n_subcarriers is None:
        n_subcarriers = DEFAULT_SUBCARRIERS.get(band.bandwidth_hz, 64)
    freqs = subcarrier_frequencies(band, n_subcarriers)
    m = scene.surface.material
    lo, hi = m.freqs_hz[0], m.freqs_hz[-1]
    if band.center_hz - band.bandwidth_hz / 2 < lo or band.center_hz + band.bandwidth_hz / 2 > hi:
        raise PresetError(
            f"band edges [{band.center_hz - band.bandwidth_hz / 2:.4g}, "
            f"{band.center_hz + band.bandwidth_hz / 2:.4g}] Hz outside material "
            f"preset coverage [{lo:.4g}, {hi:.4g}] Hz"
        )
    out = []
    for f_sc in freqs:
        sub = FrequencyBand(float(f_sc), band.bandwidth_hz, band.band_id)
        out.append(build_mimo(scene, sub, grid, params))
    return out


# --- impulse responses ---------------------------------------------------------


def _merge_taps(taps, tol=1e-13):
    taps = sorted((t for t in taps if t[1] != 0), key=lambda t: t[0])
    merged = []
    for delay, amp in taps:
        if merged and delay - merged[-1][0] <= tol:
            merged[-1][1] += amp
        else:
            merged.append([delay, amp])
    return tuple((d, complex(a)) for d, a in merged)


def impulse_response(tx_port, rx_port, scene: Scene, band: FrequencyBand,
                     grid: int = 32, params: ChannelParams | None = None) -> ImpulseResponse:
    """Time-domain taps for one port pair.

    Discrete paths (direct, boundary images) travel their surface legs at the
    material phase velocity and free air legs at c.  Each composite integral
    collapses to one aggregate tap at its magnitude-weighted mean delay;
    composite routes are treated as surface-guided diffuse energy, so the
    whole route uses the surface velocity — they never precede the direct
    surface arrival.
    """
    params = params or default_params()
    f_hz = band.center_hz
    tk, tp = tx_port
    rk, rp = rx_port
    m = scene.surface.material
    taps = []

    if tk == CONTACT and rk == CONTACT:
        v = phase_velocity(band, m)
        lengths, amps = _surface_paths(tp, rp, scene, f_hz, params)
        taps.extend(zip(lengths / v, amps))
        c1 = params.coupling.c1
        if c1 > 0:
            pts, kern, da = _air_kernel(
                scene.surface.width_m, scene.surface.height_m, grid, f_hz,
                params.air_ref_m, params.air_exponent,
            )
            d1 = np.maximum(np.hypot(pts[:, 0] - tp[0], pts[:, 1] - tp[1]), m.d0_m)
            d3 = np.maximum(np.hypot(pts[:, 0] - rp[0], pts[:, 1] - rp[1]), m.d0_m)
            a_tx = _surface_gain_arr(d1, f_hz, m)
            a_rx = _surface_gain_arr(d3, f_hz, m)
            amp = c1 * da * da * complex(a_tx @ (kern @ a_rx))
            w = np.abs(a_tx)[:, None] * np.abs(kern) * np.abs(a_rx)[None, :]
            d2 = np.maximum(
                np.hypot(pts[:, 0][:, None] - pts[:, 0][None, :],
                         pts[:, 1][:, None] - pts[:, 1][None, :]),
                params.air_ref_m,
            )
            tau = (d1[:, None] + d3[None, :] + d2) / v
            taps.append((float(np.sum(w * tau) / np.sum(w)), amp))
    elif tk == ANTENNA and rk == ANTENNA:
        d = math.dist(tp, rp)
        taps.append((d / SPEED_OF_LIGHT, h_aa(tp, rp, band, params)))
    else:
        contact, antenna = (tp, rp) if tk == CONTACT else (rp, tp)
        c_scalar = params.coupling.c2 if tk == CONTACT else params.coupling.c3
        v = phase_velocity(band, m)
        nfc = params.coupling.near_field_coupling
        foot, hop = _antenna_foot(antenna, scene)
        if nfc > 0 and hop <= params.near_field_radius_m:
            hop_c = max(hop, params.air_ref_m)
            hg = _hop_gain(hop, f_hz, params)
            lengths, amps = _surface_paths(contact, foot, scene, f_hz, params)
            taps.extend(zip(lengths / v + hop_c / SPEED_OF_LIGHT, nfc * amps * hg))
        if c_scalar > 0:
            pts, _, da = _grid_points(scene.surface.width_m, scene.surface.height_m, grid)
            d1 = np.maximum(np.hypot(pts[:, 0] - contact[0], pts[:, 1] - contact[1]), m.d0_m)
            a_surf = _surface_gain_arr(d1, f_hz, m)
            d2 = np.maximum(
                np.sqrt((pts[:, 0] - antenna[0]) ** 2
                        + (pts[:, 1] - antenna[1]) ** 2
                        + antenna[2] ** 2),
                params.air_ref_m,
            )
            b_air = _air_gain_arr(d2, f_hz, params.air_ref_m, params.air_exponent)
            amp = c_scalar * da * complex(a_surf @ b_air)
            w = np.abs(a_surf) * np.abs(b_air)
            tau = (d1 + d2) / v
            taps.append((float(np.sum(w * tau) / np.sum(w)), amp))

    return ImpulseResponse(_merge_taps(taps), band.bandwidth_hz)
