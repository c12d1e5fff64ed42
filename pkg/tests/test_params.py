from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lteu_coex import (ConfigError, InvalidRetryIndexError, WifiParams,
                       contention_window, frame_times, load_config,
                       ms_to_slots, slots_to_ms)


class TestContentionWindow:
    def test_identity_case(self):
        assert contention_window(16, 0, 6) == 16

    def test_six_doublings(self):
        # the worst-case recovery window quoted for the 16/6 configuration
        assert contention_window(16, 6, 6) == 1024

    def test_small_window(self):
        assert contention_window(4, 2, 2) == 16

    def test_invalid_index(self):
        with pytest.raises(InvalidRetryIndexError):
            contention_window(16, 7, 6)
        with pytest.raises(InvalidRetryIndexError):
            contention_window(16, -1, 6)


class TestFrameTimes:
    def test_rts_cts_reference_values(self, default_params):
        # hand arithmetic with the committed table at 1 Mb/s, L=8192:
        # T_s = 288 + 240 + 8592 + 240 + 48 + 34 = 9442 us -> ceil 1050 slots
        # T_c = 288 + 34 = 322 us -> ceil 36 slots
        ft = frame_times(default_params)
        assert ft.t_s == 1050
        assert ft.t_c == 36

    def test_basic_mode_collision_grows_with_payload(self, default_params):
        base = replace(default_params, use_rts_cts=False)
        bigger = replace(base, payload_bits=base.payload_bits * 2)
        assert frame_times(bigger).t_c > frame_times(base).t_c

    def test_rts_collision_independent_of_payload(self, default_params):
        doubled = replace(default_params, payload_bits=default_params.payload_bits * 2)
        assert frame_times(doubled).t_c == frame_times(default_params).t_c
        delta_us = default_params.payload_bits / (default_params.phy_rate_bps / 1e6)
        grown = frame_times(doubled).t_s - frame_times(default_params).t_s
        assert abs(grown - delta_us / default_params.slot_us) <= 1

    def test_ordering(self, default_params):
        ft = frame_times(default_params)
        assert ft.t_s >= ft.t_c >= 1

    @given(bump=st.sampled_from(["payload_bits", "rts_bits", "cts_bits",
                                 "ack_bits", "mac_hdr_bits", "phy_hdr_bits",
                                 "sifs_us", "difs_us"]),
           factor=st.integers(min_value=1, max_value=8))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_sizes(self, bump, factor):
        base = WifiParams()
        grown = replace(base, **{bump: getattr(base, bump) * factor})
        for mode in (True, False):
            a = frame_times(replace(base, use_rts_cts=mode))
            b = frame_times(replace(grown, use_rts_cts=mode))
            assert b.t_s >= a.t_s
            assert b.t_c >= a.t_c


class TestSlotConversion:
    def test_half_second(self):
        assert ms_to_slots(500, 9.0) == 55556

    def test_zero(self):
        assert ms_to_slots(0, 9.0) == 0

    def test_single_slot(self):
        assert ms_to_slots(0.009, 9.0) == 1

    def test_negative_rejected(self):
        with pytest.raises(ConfigError):
            ms_to_slots(-1, 9.0)

    @given(st.integers(min_value=0, max_value=10 ** 9))
    @settings(max_examples=50, deadline=None)
    def test_round_trip(self, slots):
        assert ms_to_slots(slots_to_ms(slots, 9.0), 9.0) == slots


class TestValidation:
    def test_cw0_must_be_power_of_two(self):
        with pytest.raises(ConfigError):
            WifiParams(cw0=12)
        with pytest.raises(ConfigError):
            WifiParams(cw0=1)

    def test_bounds(self):
        with pytest.raises(ConfigError):
            WifiParams(n=0)
        with pytest.raises(ConfigError):
            WifiParams(lambda_=1.2)
        with pytest.raises(ConfigError):
            WifiParams(slot_us=0)

    def test_windows(self):
        p = WifiParams(cw0=4, m_retries=2)
        assert p.windows == (4, 8, 16)


class TestConfigFile:
    def test_load_and_override(self, tmp_path):
        cfg = tmp_path / "wifi.conf"
        cfg.write_text(
            "# comment line\n"
            "n = 5\n"
            "cw0 = 4            # inline comment\n"
            "m_retries = 2\n"
            "lambda = 0.0\n"
            "payload_bits = 2048\n"
            "phy_rate_bps = 10000000\n"
            "use_rts_cts = true\n"
        )
        p = load_config(cfg)
        assert p.n == 5 and p.cw0 == 4 and p.payload_bits == 2048
        assert p.lambda_ == 0.0 and p.use_rts_cts is True
        # untouched keys keep their defaults
        assert p.sifs_us == 16.0

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "bad.conf"
        cfg.write_text("bogus = 3\n")
        with pytest.raises(ConfigError, match="unknown key"):
            load_config(cfg)

    def test_missing_equals(self, tmp_path):
        cfg = tmp_path / "bad.conf"
        cfg.write_text("n 5\n")
        with pytest.raises(ConfigError, match="key = value"):
            load_config(cfg)

    def test_bad_value(self, tmp_path):
        cfg = tmp_path / "bad.conf"
        cfg.write_text("n = five\n")
        with pytest.raises(ConfigError, match="bad value"):
            load_config(cfg)
