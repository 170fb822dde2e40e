import json

import numpy as np
import pytest
from PIL import Image

from conftest import make_manifest, tiny_pairs, write_u16, write_u8
from tirlearn import BadManifest, DataError, PairsDataset, load_u8, load_u16, save_u8


class TestPairsDataset:
    def test_round_trip_in_manifest_order(self, tmp_path, rng):
        pairs = tiny_pairs(rng, n=3)
        path = make_manifest(tmp_path, pairs)
        ds = PairsDataset(path)
        assert len(ds) == 3
        for i, (x, y) in enumerate(pairs):
            got_x, got_y = ds.load_pair(i)
            assert np.array_equal(got_x, x)
            assert np.array_equal(got_y, y)

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(BadManifest):
            PairsDataset(tmp_path / "pairs.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "pairs.json"
        path.write_text("{nope")
        with pytest.raises(BadManifest):
            PairsDataset(path)

    def test_wrong_format_tag(self, tmp_path):
        path = tmp_path / "pairs.json"
        path.write_text(json.dumps({"format": "v2", "pairs": []}))
        with pytest.raises(BadManifest):
            PairsDataset(path)

    def test_empty_pairs(self, tmp_path):
        path = tmp_path / "pairs.json"
        path.write_text(json.dumps({"format": "tirtone-pairs-v1", "pairs": []}))
        with pytest.raises(BadManifest):
            PairsDataset(path)

    def test_entry_missing_keys(self, tmp_path):
        path = tmp_path / "pairs.json"
        path.write_text(json.dumps(
            {"format": "tirtone-pairs-v1", "pairs": [{"hdr": "a.png"}]}))
        with pytest.raises(BadManifest):
            PairsDataset(path)

    def test_dangling_file_reference(self, tmp_path, rng):
        path = make_manifest(tmp_path, tiny_pairs(rng, n=1))
        (tmp_path / "ldr" / "pair_000.png").unlink()
        with pytest.raises(BadManifest):
            PairsDataset(path)

    def test_pair_shape_mismatch(self, tmp_path, rng):
        path = make_manifest(tmp_path, tiny_pairs(rng, n=1))
        write_u8(tmp_path / "ldr" / "pair_000.png", np.zeros((32, 64), dtype=np.uint8))
        with pytest.raises(BadManifest):
            PairsDataset(path).load_pair(0)


class TestFrameIo:
    def test_u16_round_trip(self, tmp_path, rng):
        arr = rng.integers(0, 65536, size=(20, 30), dtype=np.uint16)
        write_u16(tmp_path / "f.png", arr)
        assert np.array_equal(load_u16(tmp_path / "f.png"), arr)

    def test_u8_round_trip(self, tmp_path, rng):
        arr = rng.integers(0, 256, size=(20, 30), dtype=np.uint8)
        save_u8(tmp_path / "sub" / "f.png", arr)
        assert np.array_equal(load_u8(tmp_path / "sub" / "f.png"), arr)

    def test_u16_rejects_rgb(self, tmp_path):
        Image.new("RGB", (8, 8)).save(tmp_path / "rgb.png")
        with pytest.raises(DataError):
            load_u16(tmp_path / "rgb.png")

    def test_u8_rejects_16_bit(self, tmp_path):
        write_u16(tmp_path / "deep.png", np.zeros((8, 8), dtype=np.uint16))
        with pytest.raises(DataError):
            load_u8(tmp_path / "deep.png")

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_u16(tmp_path / "absent.png")
