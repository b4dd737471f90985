"""Physical-layer quantities: SINRs, rates, secrecy rates, echo SNR
lower bounds, closed-form receive filters, power projection, and the
constraint-aware reward.

Rates are log2 (bps/Hz). SINR/SNR values and the echo threshold are
linear; dB conversion happens once at config load.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelRealization
from .star_ris import StarRisTsConfig


class PhysicsError(ValueError):
    pass


class DegenerateFilterError(PhysicsError):
    """Beamformer orthogonal to the sensing channel: the Rayleigh
    quotient has no maximizer direction."""


@dataclass
class TransmitDesign:
    """BS beamformers: M communication columns K_s and L radar columns
    K_w, stacked as K = [K_s K_w] of shape L x (M+L)."""

    K_s: np.ndarray
    K_w: np.ndarray

    @property
    def K(self) -> np.ndarray:
        return np.concatenate([self.K_s, self.K_w], axis=1)

    @property
    def k_vec(self) -> np.ndarray:
        """Column-stacked vectorization of K, length L*(M+L)."""
        return self.K.reshape(-1, order="F")


@dataclass(frozen=True)
class SensingParams:
    tau: float          # compound echo magnitude (amplitude)
    P: int              # matched-filter slot count
    sigma_s2: float     # sensing noise variance, watts
    kappa_t: float      # echo-SNR threshold, linear

    def __post_init__(self):
        if self.P < 1:
            raise PhysicsError("P must be >= 1")
        if self.sigma_s2 <= 0:
            raise PhysicsError("sensing noise variance must be positive")


@dataclass
class StepOutcome:
    reward: float
    lu_rates: np.ndarray          # R_{m,t}
    eve_rates: np.ndarray         # R^e_{m,t}
    st_rates: np.ndarray          # R^s_{m,t}
    secrecy_rates: np.ndarray     # per-LU hinge secrecy rates
    sum_secrecy_rate: float
    echo_snr: float               # lower bound, linear
    snr_feasible: bool
    rate_feasible: bool
    next_state: np.ndarray = None
    done: bool = False


# ---------------------------------------------------------------------------
# effective channels

def effective_channel(direct: np.ndarray, ris_side: np.ndarray,
                      phi: np.ndarray, H: np.ndarray) -> np.ndarray:
    """Row vector h^H = ris_side^H Phi H + direct^H, returned as the
    conjugated length-L vector h."""
    return (ris_side.conj() @ phi @ H + direct.conj()).conj()


def _sinr(h: np.ndarray, K_s: np.ndarray, K_w: np.ndarray, m: int,
          sigma2: float) -> float:
    if sigma2 <= 0:
        raise PhysicsError("noise variance must be positive")
    hH = h.conj()
    sig = np.abs(hH @ K_s[:, m]) ** 2
    proj_s = np.abs(hH @ K_s) ** 2
    interference = proj_s.sum() - proj_s[m] + (np.abs(hH @ K_w) ** 2).sum()
    return float(sig / (interference + sigma2))


def rate(sinr: float) -> float:
    return float(np.log2(1.0 + sinr))


# ---------------------------------------------------------------------------
# energy-splitting mode

def lu_sinr_es(m: int, ch: ChannelRealization, phi_b: np.ndarray,
               design: TransmitDesign, sigma2: float) -> float:
    h = effective_channel(ch.h_bm[m], ch.h_rm[m], phi_b, ch.H)
    return _sinr(h, design.K_s, design.K_w, m, sigma2)


def eve_sinr_es(m: int, ch: ChannelRealization, phi_b: np.ndarray,
                design: TransmitDesign, sigma2: float) -> float:
    h = effective_channel(ch.h_be, ch.h_re, phi_b, ch.H)
    return _sinr(h, design.K_s, design.K_w, m, sigma2)


def st_sinr_es(m: int, ch: ChannelRealization, phi_a: np.ndarray,
               design: TransmitDesign, sigma2: float) -> float:
    g = effective_channel(ch.g_bs, ch.g_rs, phi_a, ch.H)
    return _sinr(g, design.K_s, design.K_w, m, sigma2)


def secrecy_rate(r_lu: float, r_eve: float, r_st: float) -> float:
    """Hinge secrecy rate against both interceptors."""
    return max(r_lu - r_eve, 0.0) + max(r_lu - r_st, 0.0)


def secrecy_rate_es(m: int, ch: ChannelRealization, phi_a: np.ndarray,
                    phi_b: np.ndarray, design: TransmitDesign,
                    sigma2: float) -> float:
    r_lu = rate(lu_sinr_es(m, ch, phi_b, design, sigma2))
    r_eve = rate(eve_sinr_es(m, ch, phi_b, design, sigma2))
    r_st = rate(st_sinr_es(m, ch, phi_a, design, sigma2))
    return secrecy_rate(r_lu, r_eve, r_st)


def sensing_channel_es(ch: ChannelRealization, phi_a: np.ndarray) -> np.ndarray:
    """Two-way sensing channel g_s (via the reflection-side cascade)."""
    return effective_channel(ch.g_bs, ch.g_rs, phi_a, ch.H)


def echo_snr_lower_bound(g_s: np.ndarray, design: TransmitDesign,
                         u: np.ndarray, sensing: SensingParams) -> float:
    """Jensen lower bound on the matched-filtered echo SNR.

    Evaluates P*tau^2*|u^H (I (x) H_s) k|^2 / (sigma_s^2 u^H u) with
    H_s = g_s g_s^H; block structure is exploited instead of forming the
    Kronecker product.
    """
    u = np.asarray(u).reshape(-1)
    nrm = np.vdot(u, u).real
    if nrm == 0.0:
        raise PhysicsError("receive filter must be nonzero")
    K = design.K
    L = K.shape[0]
    U = u.reshape(L, -1, order="F")
    if U.shape[1] != K.shape[1]:
        raise PhysicsError("filter length must be L*(M+L)")
    # u^H (I (x) H_s) k = sum_c u_c^H g_s g_s^H k_c
    val = np.sum(U.conj().T @ g_s * (g_s.conj() @ K))
    num = sensing.P * sensing.tau ** 2 * np.abs(val) ** 2
    return float(num / (sensing.sigma_s2 * nrm))


def optimal_filter(g_s: np.ndarray, design: TransmitDesign) -> np.ndarray:
    """Closed-form Rayleigh-quotient maximizer of the echo SNR.

    Direction (I (x) H_s) k; the paper's normalization by
    k^H (I (x) H_s^H H_s) k only rescales and the SNR is scale-invariant.
    """
    K = design.K
    # (I (x) H_s) k stacks H_s k_c per column; H_s = g g^H
    cols = np.outer(g_s, g_s.conj() @ K)  # L x (M+L), col c = g (g^H k_c)
    u = cols.reshape(-1, order="F")
    denom = np.vdot(u, u).real
    if denom < 1e-300:
        raise DegenerateFilterError("beamformer orthogonal to sensing channel")
    return u / denom


def echo_snr_es(ch: ChannelRealization, phi_a: np.ndarray,
                design: TransmitDesign, sensing: SensingParams):
    """(SNR at the optimal filter, the filter). Degenerate sensing
    channels yield SNR 0 and a None filter."""
    g_s = sensing_channel_es(ch, phi_a)
    try:
        u = optimal_filter(g_s, design)
    except DegenerateFilterError:
        return 0.0, None
    return echo_snr_lower_bound(g_s, design, u, sensing), u


# ---------------------------------------------------------------------------
# time-switching mode

def lu_sinr_ts(m, ch, cfg: StarRisTsConfig, design, sigma2, period: str):
    """Per-period LU SINR: reflection period sees the direct link only,
    transmission period sees the Phi_B^TS cascade."""
    if period == "A":
        h = ch.h_bm[m]
    else:
        phi_b = np.diag(np.exp(1j * cfg.phi_b))
        h = effective_channel(ch.h_bm[m], ch.h_rm[m], phi_b, ch.H)
    return _sinr(h, design.K_s, design.K_w, m, sigma2)


def eve_sinr_ts(m, ch, cfg, design, sigma2, period: str):
    if period == "A":
        h = ch.h_be
    else:
        phi_b = np.diag(np.exp(1j * cfg.phi_b))
        h = effective_channel(ch.h_be, ch.h_re, phi_b, ch.H)
    return _sinr(h, design.K_s, design.K_w, m, sigma2)


def st_sinr_ts(m, ch, cfg, design, sigma2, period: str):
    # mirrors the echo-SNR split: direct link in the pi_1 term, Phi_A^TS
    # cascade in the pi_2 term
    if period == "A":
        g = ch.g_bs
    else:
        phi_a = np.diag(np.exp(1j * cfg.phi_a))
        g = effective_channel(ch.g_bs, ch.g_rs, phi_a, ch.H)
    return _sinr(g, design.K_s, design.K_w, m, sigma2)


def ts_rates(m, ch, cfg: StarRisTsConfig, design, sigma2):
    """(LU, Eve, ST) rates as pi-weighted combinations of the two
    per-period rates."""
    r_lu = (cfg.pi_1 * rate(lu_sinr_ts(m, ch, cfg, design, sigma2, "A"))
            + cfg.pi_2 * rate(lu_sinr_ts(m, ch, cfg, design, sigma2, "B")))
    r_eve = (cfg.pi_1 * rate(eve_sinr_ts(m, ch, cfg, design, sigma2, "A"))
             + cfg.pi_2 * rate(eve_sinr_ts(m, ch, cfg, design, sigma2, "B")))
    r_st = (cfg.pi_1 * rate(st_sinr_ts(m, ch, cfg, design, sigma2, "A"))
            + cfg.pi_2 * rate(st_sinr_ts(m, ch, cfg, design, sigma2, "B")))
    return r_lu, r_eve, r_st


def secrecy_rate_ts(m, ch, cfg, design, sigma2) -> float:
    r_lu, r_eve, r_st = ts_rates(m, ch, cfg, design, sigma2)
    return secrecy_rate(r_lu, r_eve, r_st)


def sensing_channels_ts(ch: ChannelRealization, cfg: StarRisTsConfig):
    """(direct-only, Phi_A^TS cascade) sensing channels."""
    phi_a = np.diag(np.exp(1j * cfg.phi_a))
    return ch.g_bs, effective_channel(ch.g_bs, ch.g_rs, phi_a, ch.H)


def echo_snr_ts(ch, cfg: StarRisTsConfig, design, u1, u2,
                sensing: SensingParams) -> float:
    """pi_1-weighted direct term plus pi_2-weighted cascaded term, each
    a Rayleigh quotient."""
    g1, g2 = sensing_channels_ts(ch, cfg)
    s1 = echo_snr_lower_bound(g1, design, u1, sensing)
    s2 = echo_snr_lower_bound(g2, design, u2, sensing)
    return cfg.pi_1 * s1 + cfg.pi_2 * s2


def optimal_filters_ts(ch, cfg: StarRisTsConfig, design):
    """(u1*, u2*), each maximizing its own quotient term; None where the
    term is degenerate."""
    g1, g2 = sensing_channels_ts(ch, cfg)
    filters = []
    for g in (g1, g2):
        try:
            filters.append(optimal_filter(g, design))
        except DegenerateFilterError:
            filters.append(None)
    return tuple(filters)


def echo_snr_ts_optimal(ch, cfg, design, sensing: SensingParams):
    """(pi-weighted echo SNR at the optimal filters, (u1, u2))."""
    g1, g2 = sensing_channels_ts(ch, cfg)
    u1, u2 = optimal_filters_ts(ch, cfg, design)
    s1 = echo_snr_lower_bound(g1, design, u1, sensing) if u1 is not None else 0.0
    s2 = echo_snr_lower_bound(g2, design, u2, sensing) if u2 is not None else 0.0
    return cfg.pi_1 * s1 + cfg.pi_2 * s2, (u1, u2)


# ---------------------------------------------------------------------------
# constraints and reward

def project_power(K_raw: np.ndarray, M: int, P_0: float) -> TransmitDesign:
    """Scale K down onto the total-power ball trace(K K^H) <= P_0;
    directions are preserved."""
    if P_0 <= 0:
        raise PhysicsError("power budget must be positive")
    tr = np.sum(np.abs(K_raw) ** 2)
    K = K_raw if tr <= P_0 else K_raw * np.sqrt(P_0 / tr)
    return TransmitDesign(K_s=K[:, :M], K_w=K[:, M:])


def reward(echo_snr: float, lu_rates: np.ndarray, sum_secrecy: float,
           R_0: float, kappa_t: float) -> float:
    """Constraint-shaped reward.

    Below the echo threshold the reward is the echo SNR itself; once
    sensing is satisfied it rewards meeting every per-user rate floor
    and then the sum secrecy rate on top.
    """
    if echo_snr <= kappa_t:
        return float(echo_snr)
    lu_rates = np.asarray(lu_rates, float)
    M = lu_rates.size
    if np.all(lu_rates >= R_0):
        return float(kappa_t + M * R_0 + sum_secrecy)
    return float(kappa_t + np.minimum(lu_rates, R_0).sum())
