"""Scenario runners: throughput-vs-distance sweeps, antenna-separation sweeps,
pulse/delay profiling, multi-band rate aggregation, radiation offsets, and
carrier-sense surface sharing.

All runners share one link pipeline: synthesize per-subcarrier channel
matrices, derive zero-forcing stream SNRs for every candidate transmit-column
subset, compress them with an effective-SNR mapping, look the result up in
the rate table, and keep the best (rate, stream-count) choice.  Reported
rates are PHY rates; MAC overhead is a separate scalar applied only when
results are written out.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelParams, NoiseModel, csi, default_params, impulse_response
from .errors import ConfigError, DomainError
from .geometry import Node, Scene, SurfaceSpec
from .mimo import (
    LinkResult,
    McsTable,
    StreamSeparationError,
    capacity,
    condition_number,
    effective_snr,
    map_rate,
    zf_stream_snrs,
)
from .propagation import FrequencyBand, band_for_frequency

FOOT_M = 0.3048

MODE_SISO = "siso"
MODE_AIR_MIMO = "air-mimo"
MODE_2X2 = "surface-2x2"
MODE_3X3 = "surface-3x3"
SWEEP_MODES = (MODE_SISO, MODE_AIR_MIMO, MODE_2X2, MODE_3X3)

_MODE_LABELS = {1: "SISO", 2: "MIMO-2x2", 3: "MIMO-3x3"}


def default_distances_m():
    """1 through 16 ft in 1 ft steps."""
    return tuple(i * FOOT_M for i in range(1, 17))


@dataclass(frozen=True)
class LinkSettings:
    """Shared knobs for all link-level runs.

    snr_db, when set, bypasses the transmit-power/noise link budget.  The
    MAC-efficiency scalar never touches phy_rate_bps; writers multiply it in
    when producing throughput columns.
    """

    band: FrequencyBand = FrequencyBand(2.437e9, 40e6)
    grid: int = 32
    n_subcarriers: int | None = None
    tx_power_dbm: float = -10.0
    noise: NoiseModel = NoiseModel()
    snr_db: float | None = None
    esm_beta: float = 1.0
    mac_efficiency: float = 0.65
    antenna_height_m: float = 0.02
    contact_spacing_m: float = 0.025
    air_antenna_spacing_m: float = 0.0625
    params: ChannelParams | None = None
    mcs_table: McsTable | None = None

    def __post_init__(self):
        if not 0.0 < self.mac_efficiency <= 1.0:
            raise ConfigError(f"mac_efficiency must be in (0, 1], got {self.mac_efficiency}")
        if self.antenna_height_m < 0:
            raise ConfigError("antenna_height_m must be >= 0")

    def channel_params(self) -> ChannelParams:
        return self.params if self.params is not None else default_params()

    def snr_linear(self) -> float:
        if self.snr_db is not None:
            return 10.0 ** (self.snr_db / 10.0)
        noise_dbm = self.noise.noise_power_dbm(self.band.bandwidth_hz)
        return 10.0 ** ((self.tx_power_dbm - noise_dbm) / 10.0)

    def rate_table(self) -> McsTable:
        if self.mcs_table is not None:
            return self.mcs_table
        from . import presets

        return presets.load_mcs_table(bandwidth_mhz=self.band.bandwidth_hz / 1e6)


@dataclass(frozen=True)
class SceneTemplate:
    """A surface plus the transmitter anchor used to instantiate sweep scenes."""

    surface: SurfaceSpec
    tx_x_m: float = 0.1524
    link_y_m: float | None = None

    def anchor(self):
        y = self.surface.height_m / 2.0 if self.link_y_m is None else self.link_y_m
        return self.tx_x_m, y


def default_template(material_name: str = "spraypaint") -> SceneTemplate:
    """A 17.5 ft x 2 ft surface.

    The 16 ft sweep endpoint then sits about a foot from the far edge: close
    enough that the edge echo is strong and still carries enough excess delay
    to decorrelate across a 40 MHz band, which is what makes frequency
    diversity keep growing out to the last sweep point.
    """
    from . import presets

    material = presets.load_material(material_name)
    return SceneTemplate(SurfaceSpec(17.5 * FOOT_M, 2.0 * FOOT_M, material))


def build_link_scene(template: SceneTemplate, distance_m: float, mode: str,
                     settings: LinkSettings | None = None) -> Scene:
    """One TX node and one RX node separated by distance_m along the surface.

    Port layout per mode:
      siso         one antenna per node
      air-mimo     two antennas per node, spaced along y
      surface-2x2  one contact + one antenna directly above it
      surface-3x3  two contacts (spaced along x) + one antenna above the first

    Antenna positions coincide across modes so mode comparisons isolate the
    added surface ports.
    """
    settings = settings or LinkSettings()
    if mode not in SWEEP_MODES:
        raise ConfigError(f"unknown sweep mode {mode!r}; expected one of {SWEEP_MODES}")
    if distance_m <= 0:
        raise DomainError(f"link distance must be positive, got {distance_m}")
    x0, y = template.anchor()
    x1 = x0 + distance_m
    h = settings.antenna_height_m
    dc = settings.contact_spacing_m
    sa = settings.air_antenna_spacing_m
    surface = template.surface
    far_x = x1 + (dc if mode == MODE_3X3 else 0.0)
    if not surface.contains(x0, y) or not surface.contains(far_x, y):
        raise DomainError(
            f"link from x={x0:.4g} to x={far_x:.4g} m does not fit on the "
            f"{surface.width_m:.4g} m surface"
        )

    def ports(x):
        if mode == MODE_SISO:
            return (), ((x, y, h),)
        if mode == MODE_AIR_MIMO:
            return (), ((x, y, h), (x, y + sa, h))
        if mode == MODE_2X2:
            return ((x, y),), ((x, y, h),)
        return ((x, y), (x + dc, y)), ((x, y, h),)

    tc, ta = ports(x0)
    rc, ra = ports(x1)
    return Scene(
        surface,
        nodes=(
            Node("tx", "transmitter", contacts=tc, antennas=ta),
            Node("rx", "receiver", contacts=rc, antennas=ra),
        ),
    )


def run_link(scene: Scene, settings: LinkSettings | None = None) -> LinkResult:
    """Full link analysis for one scene: capacity, conditioning, stream SNRs,
    and the best achievable table rate over all transmit-column subsets."""
    settings = settings or LinkSettings()
    params = settings.channel_params()
    matrices = csi(scene, settings.band, settings.n_subcarriers, settings.grid, params)
    rho = settings.snr_linear()
    bandwidth = settings.band.bandwidth_hz

    caps = [capacity(m, rho) for m in matrices]
    conds = [condition_number(m) for m in matrices]
    n_tx = matrices[0].entries.shape[1]

    table = settings.rate_table()
    best_rate = -1.0
    best_snrs: tuple = (float("-inf"),)
    for k in range(1, n_tx + 1):
        for subset in itertools.combinations(range(n_tx), k):
            per_stream = [[] for _ in subset]
            try:
                for m in matrices:
                    snrs = zf_stream_snrs(m.entries[:, subset], rho)
                    for i, s in enumerate(snrs):
                        per_stream[i].append(s)
            except StreamSeparationError:
                continue
            pooled = np.concatenate([np.asarray(s) for s in per_stream])
            esnr = max(effective_snr(pooled, settings.esm_beta), 1e-300)
            rate = map_rate(10.0 * math.log10(esnr), table, n_streams=k)
            if rate > best_rate:
                best_rate = rate
                best_snrs = tuple(
                    10.0 * math.log10(max(effective_snr(np.asarray(s), settings.esm_beta), 1e-300))
                    for s in per_stream
                )
    if best_rate < 0:  # every subset was singular; report a dead link
        best_rate = 0.0

    return LinkResult(
        capacity_bps=bandwidth * float(np.mean(caps)),
        condition_number=float(np.max(conds)),
        stream_snrs_db=best_snrs,
        phy_rate_bps=best_rate,
        mode=_MODE_LABELS.get(n_tx, f"MIMO-{n_tx}x{n_tx}"),
    )


def throughput_sweep(template: SceneTemplate | None = None, distances_m=None,
                     mode: str = MODE_2X2, settings: LinkSettings | None = None):
    """Rate/capacity/conditioning across link distances.  Returns
    [(distance_m, LinkResult), ...]."""
    template = template or default_template()
    settings = settings or LinkSettings()
    if distances_m is None:
        distances_m = default_distances_m()
    out = []
    for d in distances_m:
        scene = build_link_scene(template, d, mode, settings)
        out.append((float(d), run_link(scene, settings)))
    return out


def separation_sweep(template: SceneTemplate | None = None,
                     separations_m=(0.01, 0.03, 0.06), mode: str = MODE_2X2,
                     settings: LinkSettings | None = None, distances_m=None):
    """Distance sweeps repeated at several antenna separations.

    For surface modes the separation is the antenna height above its contact;
    for the air-MIMO baseline it is the array element spacing.  Each entry
    aggregates a full distance sweep: mean rate and capacity, worst-case
    condition number, mean pooled stream SNR.  Returns
    [(separation_m, LinkResult), ...].
    """
    settings = settings or LinkSettings()
    out = []
    for sep in separations_m:
        if mode == MODE_AIR_MIMO:
            s = replace(settings, air_antenna_spacing_m=float(sep))
        else:
            s = replace(settings, antenna_height_m=float(sep))
        rows = throughput_sweep(template, distances_m, mode, s)
        rates = [r.phy_rate_bps for _, r in rows]
        caps = [r.capacity_bps for _, r in rows]
        conds = [r.condition_number for _, r in rows]
        snr_means = [float(np.mean(r.stream_snrs_db)) for _, r in rows]
        out.append((
            float(sep),
            LinkResult(
                capacity_bps=float(np.mean(caps)),
                condition_number=float(np.max(conds)),
                stream_snrs_db=(float(np.mean(snr_means)),),
                phy_rate_bps=float(np.mean(rates)),
                mode=rows[0][1].mode,
            ),
        ))
    return out


# --- pulse profiling -----------------------------------------------------------


@dataclass(frozen=True)
class PulseProfile:
    """Sampled receive waveform for a short probe pulse through one link."""

    time_s: np.ndarray
    samples: np.ndarray
    response: object  # the underlying ImpulseResponse
    sample_rate_hz: float
    pulse_width_s: float

    def peak_amplitude(self) -> float:
        return float(np.max(np.abs(self.samples)))

    def residual_after(self, t_s: float) -> float:
        """Largest |sample| after t_s as a fraction of the overall peak."""
        tail = np.abs(self.samples[self.time_s > t_s])
        if tail.size == 0:
            return 0.0
        return float(np.max(tail) / self.peak_amplitude())


def pulse_profile(scene: Scene, tx_port, rx_port,
                  band: FrequencyBand | None = None,
                  sample_rate_hz: float = 4e9, duration_s: float | None = None,
                  pulse_width_s: float = 1e-9, grid: int = 32,
                  params: ChannelParams | None = None) -> PulseProfile:
    """Convolve a rectangular probe pulse with the link's impulse response.

    Ports are (kind, position) pairs as produced by Node.ports.  The default
    horizon extends well past the last tap so late-time residuals can be read
    directly off the waveform.
    """
    if sample_rate_hz < 1e9:
        raise ConfigError(f"sample rate must be >= 1 GHz, got {sample_rate_hz:.3g}")
    band = band or FrequencyBand(2.437e9, 40e6)
    resp = impulse_response(tx_port, rx_port, scene, band, grid, params)
    delays = resp.delays()
    if duration_s is None:
        duration_s = max(delays[-1] + 50e-9, delays[0] + 400e-9)
    n = int(math.ceil(duration_s * sample_rate_hz))
    t = np.arange(n) / sample_rate_hz
    y = np.zeros(n, dtype=complex)
    for delay, amp in resp.taps:
        y[(t >= delay) & (t < delay + pulse_width_s)] += amp
    return PulseProfile(t, y, resp, sample_rate_hz, pulse_width_s)


# --- multi-band aggregation ------------------------------------------------------


@dataclass(frozen=True)
class Chain:
    """One radio chain in an aggregation plan."""

    band: FrequencyBand
    conversion_loss_db: float = 0.0
    dfs: bool = False
    label: str = ""

    def __post_init__(self):
        if self.conversion_loss_db < 0:
            raise ConfigError("conversion_loss_db must be >= 0")
        if self.conversion_loss_db > 0 and self.band.band_id != "900MHz":
            raise ConfigError(
                "conversion loss models the 900 MHz up/down-converter; "
                f"chain {self.label or self.band.center_hz!r} is {self.band.band_id}"
            )


@dataclass(frozen=True)
class AggregationPlan:
    chains: tuple = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "chains", tuple(self.chains))
        if not self.chains:
            raise ConfigError("aggregation plan needs at least one chain")

    @property
    def total_bandwidth_hz(self) -> float:
        return float(sum(c.band.bandwidth_hz for c in self.chains))


def _ch5(ch: int) -> float:
    return 5e9 + ch * 5e6


def scenario1_plan() -> AggregationPlan:
    """Six 40 MHz channels at 5 GHz (four of them DFS) plus one 20 MHz channel
    at 2.437 GHz: 260 MHz total."""
    chains = [
        Chain(band_for_frequency(_ch5(ch), 40e6), dfs=dfs, label=f"5ghz-ch{ch}")
        for ch, dfs in ((38, False), (46, False), (54, True), (62, True),
                       (102, True), (110, True))
    ]
    chains.append(Chain(FrequencyBand(2.437e9, 20e6), label="2.4ghz-ch6"))
    return AggregationPlan(tuple(chains), name="scenario1")


def scenario2_plan() -> AggregationPlan:
    """DFS-free alternative: four non-DFS 40 MHz channels at 5 GHz, a 40 MHz
    and a 20 MHz channel at 2.4 GHz, and a 20 MHz chain at 915 MHz behind a
    6 dB converter: 240 MHz total."""
    chains = [
        Chain(band_for_frequency(_ch5(ch), 40e6), label=f"5ghz-ch{ch}")
        for ch in (38, 46, 151, 159)
    ]
    chains.append(Chain(FrequencyBand(2.422e9, 40e6), label="2.4ghz-ch3"))
    chains.append(Chain(FrequencyBand(2.462e9, 20e6), label="2.4ghz-ch11"))
    chains.append(Chain(band_for_frequency(915e6, 20e6), conversion_loss_db=6.0,
                        label="900mhz-915"))
    return AggregationPlan(tuple(chains), name="scenario2")


def aggregation_plan(no_dfs: bool = False) -> AggregationPlan:
    return scenario2_plan() if no_dfs else scenario1_plan()


@dataclass(frozen=True)
class ChainResult:
    label: str
    center_hz: float
    bandwidth_hz: float
    dfs: bool
    conversion_loss_db: float
    esnr_db: float
    phy_rate_bps: float


def aggregate_template(material_name: str = "spraypaint") -> SceneTemplate:
    """A 10 ft x 2 ft strip for the aggregation experiments."""
    from . import presets

    material = presets.load_material(material_name)
    return SceneTemplate(SurfaceSpec(10.0 * FOOT_M, 2.0 * FOOT_M, material))


def aggregate_capacity(plan: AggregationPlan, distance_m: float,
                       template: SceneTemplate | None = None,
                       settings: LinkSettings | None = None):
    """Total rate over all chains of the plan at one contact-to-contact
    distance, plus the per-chain breakdown.

    Each chain runs an independent surface link at its own center frequency
    and bandwidth; its conversion loss comes straight off the chain SNR
    before rate lookup.  Chains that fall below the lowest table threshold
    contribute zero.  Returns (total_bps, [ChainResult, ...]).
    """
    from . import presets

    template = template or aggregate_template()
    settings = settings or LinkSettings()
    rows = []
    total = 0.0
    for chain in plan.chains:
        s = replace(settings, band=chain.band, mcs_table=None)
        if s.snr_db is not None:
            s = replace(s, snr_db=s.snr_db - chain.conversion_loss_db)
        else:
            s = replace(s, tx_power_dbm=s.tx_power_dbm - chain.conversion_loss_db)
        scene = build_link_scene(template, distance_m, MODE_2X2, s)
        # contact-to-contact only: strip the antennas, keep the contacts
        scene = Scene(
            scene.surface,
            nodes=tuple(
                Node(n.id, n.role, contacts=n.contacts, antennas=())
                for n in scene.nodes
            ),
        )
        table = presets.load_mcs_table(bandwidth_mhz=chain.band.bandwidth_hz / 1e6)
        result = run_link(scene, replace(s, mcs_table=table))
        esnr_db = float(np.max(result.stream_snrs_db))
        rows.append(ChainResult(
            label=chain.label,
            center_hz=chain.band.center_hz,
            bandwidth_hz=chain.band.bandwidth_hz,
            dfs=chain.dfs,
            conversion_loss_db=chain.conversion_loss_db,
            esnr_db=esnr_db,
            phy_rate_bps=result.phy_rate_bps,
        ))
        total += result.phy_rate_bps
    return total, rows


def aggregate_sweep(plan: AggregationPlan, distances_m=None,
                    template: SceneTemplate | None = None,
                    settings: LinkSettings | None = None):
    """aggregate_capacity across distances (default 1-9 ft on the 10 ft strip)."""
    if distances_m is None:
        distances_m = tuple(i * FOOT_M for i in range(1, 10))
    return [
        (float(d), *aggregate_capacity(plan, d, template, settings))
        for d in distances_m
    ]


# --- radiation offsets ----------------------------------------------------------


@dataclass(frozen=True)
class RadiationProfile:
    """How much weaker surface-fed emissions are than a reference antenna,
    split by hemisphere (front: z >= 0, back: z < 0)."""

    front_offset_db: float = 13.0
    back_offset_db: float = 25.0

    def __post_init__(self):
        if self.front_offset_db < 0 or self.back_offset_db < 0:
            raise DomainError("radiation offsets must be >= 0")

    def offset_db(self, z: float) -> float:
        return self.front_offset_db if z >= 0 else self.back_offset_db


@dataclass(frozen=True)
class RadiationSample:
    position: tuple
    reference_dbm: float
    surface_fed_dbm: float
    offset_db: float


def default_radiation_positions(radius_m: float = 1.0, n_per_side: int = 4):
    """Points on front/back arcs around the feed, mirrored in z."""
    angles = np.linspace(math.pi / 8, math.pi - math.pi / 8, n_per_side)
    pts = []
    for sign in (1.0, -1.0):
        for a in angles:
            pts.append((radius_m * math.cos(a), 0.0, sign * radius_m * math.sin(a)))
    return tuple(pts)


def radiation_benchmark(profile: RadiationProfile | None = None, positions=None,
                        tx_power_dbm: float = 0.0,
                        params: ChannelParams | None = None,
                        f_hz: float = 2.437e9):
    """Received power at each position for an antenna reference versus a
    surface-fed emitter.

    The reference is a plain air path from the feed point; the surface-fed
    value is that same reference minus the hemisphere offset, so the offset
    is independent of (and applied after) distance attenuation.  Returns
    [RadiationSample, ...].
    """
    from .propagation import air_gain, received_power_dbm

    profile = profile or RadiationProfile()
    params = params or ChannelParams()
    if positions is None:
        positions = default_radiation_positions()
    out = []
    for pos in positions:
        d = math.sqrt(pos[0] ** 2 + pos[1] ** 2 + pos[2] ** 2)
        g = air_gain(d, f_hz, params.air_ref_m, params.air_exponent)
        ref = received_power_dbm(tx_power_dbm, g)
        off = profile.offset_db(pos[2])
        out.append(RadiationSample(tuple(pos), ref, ref - off, off))
    return out


# --- carrier-sense sharing --------------------------------------------------------


@dataclass(frozen=True)
class SharingPair:
    """A client/AP pair contending for surface airtime on one channel."""

    client: tuple
    ap: tuple
    channel: int
    band: FrequencyBand = FrequencyBand(2.437e9, 20e6)
    solo_rate_bps: float | None = None  # skip channel synthesis when given

    def __post_init__(self):
        if int(self.channel) != self.channel or self.channel < 0:
            raise ConfigError(f"channel id must be a non-negative integer, got {self.channel}")


@dataclass(frozen=True)
class SharingConfig:
    pairs: tuple = ()
    ambient_busy_fraction: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        if not self.pairs:
            raise ConfigError("sharing config needs at least one pair")
        if not 0.0 <= self.ambient_busy_fraction <= 1.0:
            raise ConfigError(
                f"ambient_busy_fraction must be in [0, 1], got {self.ambient_busy_fraction}"
            )


@dataclass(frozen=True)
class ShareResult:
    pair_index: int
    channel: int
    solo_rate_bps: float
    win_fraction: float
    throughput_bps: float


def share_template(material_name: str = "spraypaint") -> SceneTemplate:
    from . import presets

    material = presets.load_material(material_name)
    return SceneTemplate(SurfaceSpec(4.0 * FOOT_M, 2.0 * FOOT_M, material))


def _solo_rate(pair: SharingPair, template: SceneTemplate,
               settings: LinkSettings) -> float:
    if pair.solo_rate_bps is not None:
        return float(pair.solo_rate_bps)
    scene = Scene(
        template.surface,
        nodes=(
            Node("client", "transmitter", contacts=(pair.client,)),
            Node("ap", "receiver", contacts=(pair.ap,)),
        ),
    )
    s = replace(settings, band=pair.band, mcs_table=None)
    return run_link(scene, s).phy_rate_bps


def share_sim(config: SharingConfig, n_slots: int,
              template: SceneTemplate | None = None,
              settings: LinkSettings | None = None, seed: int = 0):
    """Slotted carrier-sense contention over the surface.

    Per slot and channel: an ambient-busy draw may block the slot outright
    (deferring to environment traffic); otherwise the pair with the smallest
    uniform backoff among that channel's contenders transmits.  Continuous
    backoffs make ties a measure-zero event, so two symmetric contenders
    split airtime exactly in half in expectation.  Each channel consumes its
    own seeded generator, so activity on one channel never perturbs another.
    Returns [ShareResult, ...] in pair order.
    """
    if n_slots <= 0:
        raise DomainError(f"n_slots must be positive, got {n_slots}")
    template = template or share_template()
    settings = settings or LinkSettings()
    solo = [_solo_rate(p, template, settings) for p in config.pairs]

    by_channel: dict = {}
    for i, p in enumerate(config.pairs):
        by_channel.setdefault(p.channel, []).append(i)

    win_fraction = [0.0] * len(config.pairs)
    for channel in sorted(by_channel):
        members = by_channel[channel]
        rng = np.random.default_rng([seed, channel])
        free = rng.uniform(size=n_slots) >= config.ambient_busy_fraction
        backoffs = rng.uniform(size=(n_slots, len(members)))
        winners = np.argmin(backoffs, axis=1)
        for j, idx in enumerate(members):
            win_fraction[idx] = float(np.sum(free & (winners == j)) / n_slots)

    return [
        ShareResult(i, p.channel, solo[i], win_fraction[i], win_fraction[i] * solo[i])
        for i, p in enumerate(config.pairs)
    ]
