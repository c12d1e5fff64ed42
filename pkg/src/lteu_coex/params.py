"""Static DCF configuration, slot normalization, and frame-duration arithmetic.

All model time is expressed in Wi-Fi slot units (one slot = ``slot_us``
microseconds); physical inputs are microseconds and bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path


class ConfigError(ValueError):
    """Invalid parameter value or malformed config file."""


class InvalidRetryIndexError(ValueError):
    """Retry index outside [0, m_retries]."""


# Classic DCF overhead table (bits / microseconds). Control frames carry one
# PHY header each; the data frame carries PHY header + MAC header + payload.
PHY_HDR_BITS = 128
MAC_HDR_BITS = 272
RTS_BITS = 160
CTS_BITS = 112
ACK_BITS = 112
SLOT_US = 9.0
SIFS_US = 16.0
DIFS_US = 34.0


@dataclass(frozen=True)
class WifiParams:
    """Static configuration of the Wi-Fi sub-system (one BSS, n clients)."""

    n: int = 17
    cw0: int = 16
    m_retries: int = 6
    lambda_: float = 0.0          # probability of an empty buffer; 0 = saturated
    payload_bits: int = 8192
    phy_rate_bps: float = 1_000_000.0
    slot_us: float = SLOT_US
    sifs_us: float = SIFS_US
    difs_us: float = DIFS_US
    rts_bits: int = RTS_BITS
    cts_bits: int = CTS_BITS
    ack_bits: int = ACK_BITS
    mac_hdr_bits: int = MAC_HDR_BITS
    phy_hdr_bits: int = PHY_HDR_BITS
    use_rts_cts: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.cw0 < 2 or self.cw0 & (self.cw0 - 1):
            raise ConfigError(f"cw0 must be a power of two >= 2, got {self.cw0}")
        if self.m_retries < 0:
            raise ConfigError(f"m_retries must be >= 0, got {self.m_retries}")
        if not 0.0 <= self.lambda_ <= 1.0:
            raise ConfigError(f"lambda must be in [0, 1], got {self.lambda_}")
        for name in ("payload_bits", "phy_rate_bps", "slot_us", "sifs_us",
                     "difs_us", "rts_bits", "cts_bits", "ack_bits",
                     "mac_hdr_bits", "phy_hdr_bits"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")

    def contention_window(self, retry_index: int) -> int:
        return contention_window(self.cw0, retry_index, self.m_retries)

    @property
    def windows(self) -> tuple[int, ...]:
        """Contention windows CW_0..CW_M."""
        return tuple(self.cw0 * 2 ** i for i in range(self.m_retries + 1))


@dataclass(frozen=True)
class FrameTimes:
    """Durations of one successful / one collided transmission, whole slots."""

    t_s: int
    t_c: int

    def __post_init__(self):
        if self.t_c < 1 or self.t_s < 1:
            raise ConfigError("frame times must be >= 1 slot")


def contention_window(cw0: int, retry_index: int, m_retries: int) -> int:
    """Window size before attempt ``retry_index``: doubles every retry."""
    if not 0 <= retry_index <= m_retries:
        raise InvalidRetryIndexError(
            f"retry index {retry_index} outside [0, {m_retries}]")
    return cw0 * 2 ** retry_index


def frame_times(p: WifiParams) -> FrameTimes:
    """Compute T_s and T_c in slots (rounded up) from the overhead table."""
    rate_bits_per_us = p.phy_rate_bps / 1e6
    rts = (p.rts_bits + p.phy_hdr_bits) / rate_bits_per_us
    cts = (p.cts_bits + p.phy_hdr_bits) / rate_bits_per_us
    ack = (p.ack_bits + p.phy_hdr_bits) / rate_bits_per_us
    data = (p.phy_hdr_bits + p.mac_hdr_bits + p.payload_bits) / rate_bits_per_us
    if p.use_rts_cts:
        t_s_us = rts + cts + data + ack + 3 * p.sifs_us + p.difs_us
        t_c_us = rts + p.difs_us
    else:
        t_s_us = data + ack + p.sifs_us + p.difs_us
        t_c_us = data + p.difs_us
    return FrameTimes(t_s=math.ceil(t_s_us / p.slot_us),
                      t_c=math.ceil(t_c_us / p.slot_us))


def ms_to_slots(ms: float, slot_us: float = SLOT_US) -> int:
    if ms < 0:
        raise ConfigError(f"duration must be >= 0 ms, got {ms}")
    return round(ms * 1000.0 / slot_us)


def slots_to_ms(slots: float, slot_us: float = SLOT_US) -> float:
    return slots * slot_us / 1000.0


# Config-file keys use the spec-facing name "lambda" for the lambda_ field.
_KEY_TO_FIELD = {("lambda" if f.name == "lambda_" else f.name): f.name
                 for f in fields(WifiParams)}
_FIELD_TYPES = {f.name: f.type for f in fields(WifiParams)}


def _parse_value(field_name: str, raw: str):
    raw = raw.strip()
    if field_name == "use_rts_cts":
        low = raw.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"use_rts_cts must be boolean, got {raw!r}")
    if field_name in ("n", "cw0", "m_retries", "payload_bits", "rts_bits",
                      "cts_bits", "ack_bits", "mac_hdr_bits", "phy_hdr_bits"):
        return int(raw)
    return float(raw)


def load_config(path: str | Path, base: WifiParams | None = None) -> WifiParams:
    """Load WifiParams from a flat ``key = value`` file.

    Grammar: one assignment per line, ``#`` starts a comment, blank lines
    ignored. Keys are the WifiParams field names (the empty-buffer
    probability is spelled ``lambda``).
    """
    overrides = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _KEY_TO_FIELD:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        field_name = _KEY_TO_FIELD[key]
        try:
            overrides[field_name] = _parse_value(field_name, raw)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return replace(base or WifiParams(), **overrides)
