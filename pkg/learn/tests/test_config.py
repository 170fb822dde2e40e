import json

import pytest

from tirlearn import ConfigError, TrainConfig, config_from_dict, load_train_config


class TestTrainConfig:
    def test_defaults(self):
        cfg = TrainConfig()
        assert cfg.depth == 6
        assert cfg.width == 16
        assert cfg.epochs == 32
        assert cfg.loss_alpha == 0.9
        assert cfg.history_n == 10
        assert cfg.poisson_lambda == 100.0
        assert cfg.normalization == "group"

    def test_round_trip(self):
        cfg = TrainConfig(depth=4, width=8, epochs=3, loss_alpha=1.0,
                          history_n=5, poisson_lambda=25.0, seed=9,
                          normalization="batch", learning_rate=5e-4, batch_size=1)
        assert config_from_dict(cfg.to_dict()) == cfg

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"depth": 0},
            {"width": 0},
            {"epochs": 0},
            {"loss_alpha": -0.1},
            {"loss_alpha": 1.1},
            {"history_n": 0},
            {"poisson_lambda": 0.0},
            {"normalization": "instance"},
            {"learning_rate": 0.0},
            {"batch_size": 0},
        ],
    )
    def test_invariants(self, kwargs):
        with pytest.raises(ConfigError):
            TrainConfig(**kwargs)

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            config_from_dict({"depths": 6})

    def test_non_mapping(self):
        with pytest.raises(ConfigError):
            config_from_dict([6, 16])


class TestLoadTrainConfig:
    def test_load(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text(json.dumps({"epochs": 2, "loss_alpha": 1.0}))
        cfg = load_train_config(path)
        assert cfg.epochs == 2 and cfg.loss_alpha == 1.0

    def test_missing(self, tmp_path):
        with pytest.raises(ConfigError):
            load_train_config(tmp_path / "absent.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text("{oops")
        with pytest.raises(ConfigError):
            load_train_config(path)
