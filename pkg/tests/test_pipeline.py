"""Pipeline tests: config parsing, per-frame composition, sequence runs,
training-pair export, and the Poisson noise model."""

import json
import math

import numpy as np
import pytest

from conftest import hdr, smooth_hdr, write_png16
from tirtone.enhance import ClaheConfig, TemporalState, clahe, rescale_to_ldr, sigma_clip
from tirtone.errors import ConfigError, EmptyInput
from tirtone.imgio import HdrFrame, load_hdr, load_ldr, list_sequence
from tirtone.pipeline import (
    PAIRS_FORMAT,
    PAIRS_MANIFEST_NAME,
    PipelineConfig,
    config_from_dict,
    export_training_pairs,
    load_config,
    poisson_noise,
    run_sequence,
    tonemap_frame,
)
from tirtone.retinex import RetinexConfig, multi_scale_retinex


def write_sequence(directory, rng, n=3, shape=(48, 48)):
    directory.mkdir(parents=True, exist_ok=True)
    frames = []
    for i in range(n):
        f = smooth_hdr(shape, rng, lo=3000 + 400 * i, hi=52000 + 600 * i)
        write_png16(directory / f"frame_{i:03d}.png", f.data)
        frames.append(f)
    return frames


class TestConfig:
    def test_default_round_trip(self):
        cfg = PipelineConfig()
        assert config_from_dict(cfg.to_dict()) == cfg

    def test_custom_round_trip_with_inf_clip(self):
        cfg = PipelineConfig(
            retinex=RetinexConfig(scales=(5.0, 40.0), weights=(0.25, 0.75), epsilon=2.0),
            clahe=ClaheConfig(tiles_x=4, tiles_y=2, clip_limit=math.inf),
            sigma_k=2.5,
            deflicker_mode="both",
            deflicker_window=30,
            noise_seed=7,
            noise_lambda=40.0,
        )
        d = cfg.to_dict()
        assert d["clahe"]["clip_limit"] == "inf"
        assert config_from_dict(d) == cfg

    def test_empty_dict_gives_defaults(self):
        assert config_from_dict({}) == PipelineConfig()

    def test_scales_without_weights_get_equal_weights(self):
        cfg = config_from_dict({"retinex": {"scales": [5, 20]}})
        assert cfg.retinex.scales == (5, 20)
        assert cfg.retinex.weights == (0.5, 0.5)

    @pytest.mark.parametrize(
        "data",
        [
            {"bogus": 1},
            {"retinex": {"sigma": 15}},
            {"clahe": {"tiles": 8}},
            {"retinex": [15, 80, 250]},
            {"deflicker_mode": "median"},
            {"sigma_k": 0},
            {"sigma_k": -1.0},
            {"deflicker_window": 0},
            {"deflicker_window": 2.5},
            {"noise_lambda": 0},
            {"clahe": {"clip_limit": "huge"}},
            {"clahe": {"clip_limit": 1.0}},
            {"retinex": {"scales": [15, 80], "weights": [1.0]}},
            {"retinex": {"epsilon": "tiny"}},
        ],
    )
    def test_bad_config_dict(self, data):
        with pytest.raises(ConfigError):
            config_from_dict(data)

    def test_load_config_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"deflicker_mode": "off", "sigma_k": 2.0}))
        cfg = load_config(path)
        assert cfg.deflicker_mode == "off"
        assert cfg.sigma_k == 2.0

    def test_load_config_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.json")

    def test_load_config_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(path)


class TestPoissonNoise:
    def test_deterministic_for_same_seed(self, rng):
        frame = smooth_hdr((32, 32), rng, 10000, 50000)
        a = poisson_noise(frame, 100.0, np.random.default_rng(9))
        b = poisson_noise(frame, 100.0, np.random.default_rng(9))
        assert np.array_equal(a.data, b.data)
        c = poisson_noise(frame, 100.0, np.random.default_rng(10))
        assert not np.array_equal(a.data, c.data)

    def test_zero_mean_and_variance_near_lambda(self):
        frame = hdr(np.full((1000, 1000), 30000))
        out = poisson_noise(frame, 100.0, np.random.default_rng(4))
        delta = out.data.astype(np.int64) - 30000
        assert abs(float(delta.mean())) <= 0.1
        assert abs(float(delta.var()) - 100.0) <= 5.0

    def test_clamps_to_valid_range(self):
        lo = poisson_noise(hdr(np.zeros((64, 64))), 100.0, np.random.default_rng(1))
        hi = poisson_noise(hdr(np.full((64, 64), 65535)), 100.0, np.random.default_rng(1))
        assert lo.data.min() == 0 and int(lo.data.max()) < 200
        assert hi.data.max() == 65535 and int(hi.data.min()) > 65335

    def test_bad_lambda(self, rng):
        frame = smooth_hdr((8, 8), rng)
        with pytest.raises(ConfigError):
            poisson_noise(frame, 0.0, np.random.default_rng(0))


class TestTonemapFrame:
    @pytest.mark.parametrize("mode", ["off", "sigma_clip"])
    def test_constant_frame_maps_to_127(self, mode):
        cfg = PipelineConfig(deflicker_mode=mode)
        out = tonemap_frame(cfg, hdr(np.full((24, 24), 31000)))
        assert np.array_equal(out.data, np.full((24, 24), 127, dtype=np.uint8))

    def test_hist_match_requires_state(self, rng):
        cfg = PipelineConfig(deflicker_mode="hist_match")
        with pytest.raises(ConfigError):
            tonemap_frame(cfg, smooth_hdr((24, 24), rng))

    def test_first_hist_match_frame_is_passthrough(self, rng):
        frame = smooth_hdr((32, 32), rng)
        plain = tonemap_frame(PipelineConfig(deflicker_mode="off"), frame)
        matched = tonemap_frame(
            PipelineConfig(deflicker_mode="hist_match"), frame, TemporalState()
        )
        assert np.array_equal(plain.data, matched.data)

    def test_stage_composition_matches_manual_chain(self, rng):
        cfg = PipelineConfig()
        frame = smooth_hdr((32, 32), rng)
        manual = clahe(
            rescale_to_ldr(
                sigma_clip(multi_scale_retinex(frame, cfg.retinex), cfg.sigma_k)
            ),
            cfg.clahe,
        )
        assert np.array_equal(tonemap_frame(cfg, frame).data, manual.data)


class TestRunSequence:
    def test_writes_one_ldr_per_frame(self, tmp_path, rng):
        src = tmp_path / "src"
        write_sequence(src, rng, n=3)
        out = tmp_path / "out"
        report = run_sequence(PipelineConfig(), src, out)
        names = sorted(p.name for p in out.glob("*.png"))
        assert names == ["frame_000.png", "frame_001.png", "frame_002.png"]
        assert report.tmqi is None
        assert report.noise_visibility_db is None
        assert report.global_temporal_incoherence is not None
        for p in out.glob("*.png"):
            assert load_ldr(p).data.shape == (48, 48)

    def test_rerun_is_bit_identical(self, tmp_path, rng):
        src = tmp_path / "src"
        write_sequence(src, rng, n=3)
        a, b = tmp_path / "a", tmp_path / "b"
        run_sequence(PipelineConfig(deflicker_mode="both"), src, a)
        run_sequence(PipelineConfig(deflicker_mode="both"), src, b)
        for pa in sorted(a.glob("*.png")):
            assert pa.read_bytes() == (b / pa.name).read_bytes()

    def test_noisy_twin_tree_and_metric(self, tmp_path, rng):
        src = tmp_path / "src"
        write_sequence(src, rng, n=3)
        out = tmp_path / "out"
        report = run_sequence(PipelineConfig(), src, out, noisy_twin=True, seed=5)
        twin = out / "noisy_twin"
        assert sorted(p.name for p in twin.glob("*.png")) == [
            "frame_000.png",
            "frame_001.png",
            "frame_002.png",
        ]
        assert report.noise_visibility_db is not None
        assert report.noise_visibility_db > -120.0

    def test_noisy_twin_seed_control(self, tmp_path, rng):
        src = tmp_path / "src"
        write_sequence(src, rng, n=2)
        outs = [tmp_path / n for n in ("a", "b", "c")]
        run_sequence(PipelineConfig(), src, outs[0], noisy_twin=True, seed=11)
        run_sequence(PipelineConfig(), src, outs[1], noisy_twin=True, seed=11)
        run_sequence(PipelineConfig(), src, outs[2], noisy_twin=True, seed=12)
        name = "noisy_twin/frame_000.png"
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
        twins_differ = any(
            (outs[0] / "noisy_twin" / p.name).read_bytes()
            != (outs[2] / "noisy_twin" / p.name).read_bytes()
            for p in (outs[0] / "noisy_twin").glob("*.png")
        )
        assert twins_differ

    def test_empty_input_dir(self, tmp_path):
        src = tmp_path / "src"
        src.mkdir()
        with pytest.raises(EmptyInput):
            run_sequence(PipelineConfig(), src, tmp_path / "out")


class TestExportPairs:
    def test_manifest_and_trees(self, tmp_path, rng):
        src = tmp_path / "src"
        frames = write_sequence(src, rng, n=4)
        out = tmp_path / "pairs"
        manifest_path = export_training_pairs(PipelineConfig(), src, out)
        assert manifest_path == out / PAIRS_MANIFEST_NAME
        manifest = json.loads(manifest_path.read_text())
        assert manifest["format"] == PAIRS_FORMAT
        assert len(manifest["pairs"]) == 4
        for entry, frame in zip(manifest["pairs"], frames):
            hdr_path = manifest_path.parent / entry["hdr"]
            ldr_path = manifest_path.parent / entry["ldr"]
            assert hdr_path.is_file() and ldr_path.is_file()
            assert np.array_equal(load_hdr(hdr_path).data, frame.data)

    def test_targets_use_sigma_clip_mode(self, tmp_path, rng):
        src = tmp_path / "src"
        write_sequence(src, rng, n=3)
        pair_out = tmp_path / "pairs"
        export_training_pairs(PipelineConfig(deflicker_mode="both"), src, pair_out)
        ref_out = tmp_path / "ref"
        run_sequence(PipelineConfig(deflicker_mode="sigma_clip"), src, ref_out)
        for p in sorted((pair_out / "ldr").glob("*.png")):
            assert np.array_equal(load_ldr(p).data, load_ldr(ref_out / p.name).data)

    def test_manifest_preserves_sequence_order(self, tmp_path, rng):
        src = tmp_path / "src"
        write_sequence(src, rng, n=3)
        manifest = json.loads(export_training_pairs(PipelineConfig(), src, tmp_path / "p").read_text())
        stems = [entry["hdr"].split("/")[-1] for entry in manifest["pairs"]]
        assert stems == [p.name for p in list_sequence(src)]
