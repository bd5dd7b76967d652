"""Information-theoretic and link-level analysis of channel matrices.

Capacity is the equal-power log-det form; stream separation uses a
zero-forcing receiver; per-subcarrier SNRs are compressed to a single
effective SNR which an MCS table maps to a PHY rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError, StreamSeparationError, UndefinedConditionError


def _as_matrix(h) -> np.ndarray:
    m = np.asarray(getattr(h, "entries", h), dtype=complex)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise DomainError(f"expected a matrix, got array of shape {m.shape}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise DomainError("channel matrix contains non-finite entries")
    return m


def capacity(h, snr_linear: float) -> float:
    """Shannon capacity log2 det(I + (snr/N_tx) H H†), in bits/s/Hz.

    Transmit power is split equally over the N_tx columns (no waterfilling).
    """
    if snr_linear <= 0:
        raise DomainError(f"snr_linear must be positive, got {snr_linear}")
    m = _as_matrix(h)
    n_rx, n_tx = m.shape
    gram = np.eye(n_rx, dtype=complex) + (snr_linear / n_tx) * (m @ m.conj().T)
    sign, logdet = np.linalg.slogdet(gram)
    if sign.real <= 0:
        raise DomainError("capacity determinant is not positive")
    return float(logdet / math.log(2.0))


def condition_number(h) -> float:
    """sigma_max / sigma_min of the matrix; +inf for (numerically) singular input."""
    m = _as_matrix(h)
    if not np.any(m):
        raise UndefinedConditionError("condition number of the zero matrix is undefined")
    s = np.linalg.svd(m, compute_uv=False)
    tol = s[0] * max(m.shape) * np.finfo(float).eps
    if s[-1] <= tol:
        return math.inf
    return float(s[0] / s[-1])


def mrc_combine(h, snr_linear: float = 1.0) -> float:
    """Maximal-ratio-combined SNR over receive branches with gains h.

    Per-branch SNR is snr_linear * |h_i|**2; MRC sums the branch SNRs, so N
    equal branches give an N-fold (e.g. N = 4 -> +6.02 dB) improvement.
    """
    g = np.asarray(h, dtype=complex).ravel()
    if g.size == 0:
        raise DomainError("mrc_combine needs at least one branch")
    if snr_linear <= 0:
        raise DomainError(f"snr_linear must be positive, got {snr_linear}")
    return float(snr_linear * np.sum(np.abs(g) ** 2))


def zf_stream_snrs(h, snr_linear: float) -> np.ndarray:
    """Post-zero-forcing SNR per spatial stream: snr / (N_tx * [(H†H)^-1]_kk).

    Raises StreamSeparationError for singular matrices so callers can fall
    back to fewer streams.
    """
    m = _as_matrix(h)
    if snr_linear <= 0:
        raise DomainError(f"snr_linear must be positive, got {snr_linear}")
    n_rx, n_tx = m.shape
    if n_rx < n_tx:
        raise StreamSeparationError(
            f"cannot separate {n_tx} streams with {n_rx} receive ports"
        )
    gram = m.conj().T @ m
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= s[0] * max(m.shape) * np.finfo(float).eps:
        raise StreamSeparationError("channel matrix is singular; streams are not separable")
    inv_diag = np.real(np.diag(np.linalg.inv(gram)))
    return snr_linear / (n_tx * inv_diag)


def effective_snr(snrs_linear, beta: float = 1.0) -> float:
    """Exponential effective SNR mapping of per-subcarrier linear SNRs.

    ESM = -beta * ln(mean(exp(-snr_i / beta))); beta = 1 is the plain
    exponential average.  Always <= max(snr_i), with dispersed SNRs pulled
    toward the weakest subcarriers.
    """
    s = np.asarray(snrs_linear, dtype=float).ravel()
    if s.size == 0:
        raise DomainError("effective_snr needs at least one subcarrier")
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta}")
    # logsumexp keeps exp(-snr/beta) from underflowing at high SNR.
    return float(-beta * (logsumexp(-s / beta) - math.log(s.size)))


@dataclass(frozen=True)
class McsRow:
    mcs_index: int
    modulation: str
    coding_rate: str
    bandwidth_mhz: float
    guard_interval_ns: float
    phy_rate_bps: float
    min_snr_db: float


@dataclass(frozen=True)
class McsTable:
    """Ordered MCS rows for one bandwidth class."""

    rows: tuple

    def __post_init__(self):
        if not self.rows:
            raise DomainError("MCS table must not be empty")
        by_bw: dict = {}
        for row in self.rows:
            by_bw.setdefault(row.bandwidth_mhz, []).append(row)
        for bw, rows in by_bw.items():
            rows = sorted(rows, key=lambda r: r.mcs_index)
            rates = [r.phy_rate_bps for r in rows]
            snrs = [r.min_snr_db for r in rows]
            if any(b <= a for a, b in zip(rates, rates[1:])):
                raise DomainError(f"{bw} MHz MCS rates must increase strictly with index")
            if any(b <= a for a, b in zip(snrs, snrs[1:])):
                raise DomainError(f"{bw} MHz MCS SNR thresholds must increase strictly with rate")

    def for_bandwidth(self, bandwidth_mhz: float) -> "McsTable":
        rows = tuple(r for r in self.rows if r.bandwidth_mhz == bandwidth_mhz)
        if not rows:
            raise DomainError(f"no MCS rows for bandwidth {bandwidth_mhz} MHz")
        return McsTable(rows)

    @property
    def max_rate_bps(self) -> float:
        return max(r.phy_rate_bps for r in self.rows)


def map_rate(esnr_db: float, table: McsTable, n_streams: int = 1) -> float:
    """PHY rate for an effective SNR: highest MCS whose threshold is met,
    scaled linearly by the stream count.  Below the lowest threshold the
    link is down (0 bps)."""
    if n_streams < 1:
        raise DomainError(f"n_streams must be >= 1, got {n_streams}")
    best = 0.0
    for row in table.rows:
        if row.min_snr_db <= esnr_db and row.phy_rate_bps > best:
            best = row.phy_rate_bps
    return best * n_streams


@dataclass(frozen=True)
class LinkResult:
    """Analysis summary for one scenario point."""

    capacity_bps: float
    condition_number: float
    stream_snrs_db: tuple
    phy_rate_bps: float
    mode: str

    def __post_init__(self):
        if self.capacity_bps < 0:
            raise DomainError("capacity_bps must be >= 0")
        if self.condition_number < 1:
            raise DomainError("condition_number must be >= 1")
