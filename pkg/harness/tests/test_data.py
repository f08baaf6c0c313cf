import json

import numpy as np
import pytest

from consensus_harness.data import DataError, load_dataset, load_pair, subsample


def train_path(small_pair_dir):
    return small_pair_dir / "ba_n20_base_train.jsonl"


class TestLoader:
    def test_shapes_and_counts(self, small_pair_dir):
        data = load_dataset(train_path(small_pair_dir))
        assert data.sequences.shape == (80, 10, 20)
        assert data.sequences.dtype == np.float32
        assert data.valid_steps.shape == (80,)
        assert data.targets.shape == (80,)
        assert data.model == "BA" and data.n == 20 and data.case == "base"
        assert data.dataset_id() == "ba_n20_base_train"

    def test_targets_match_raw_records(self, small_pair_dir):
        # the target column must be exactly the final_value field, read
        # independently of the loader
        path = train_path(small_pair_dir)
        raw = [json.loads(line)["final_value"] for line in path.read_text().splitlines()[1:]]
        data = load_dataset(path)
        assert np.array_equal(data.targets, np.array(raw))

    def test_padding_repeats_last_state(self, small_pair_dir):
        data = load_dataset(train_path(small_pair_dir))
        for i in range(data.count):
            length = data.valid_steps[i]
            if length < data.steps:
                tail = data.sequences[i, length:]
                assert np.all(tail == data.sequences[i, length - 1])

    def test_flat_features_layout(self, small_pair_dir):
        data = load_dataset(train_path(small_pair_dir))
        flat = data.flat_features()
        assert flat.shape == (80, 10 * 20 + 1)
        assert np.array_equal(flat[:, -1], data.valid_steps)

    def test_pair_and_subsample(self, small_pair_dir):
        pair = load_pair(
            train_path(small_pair_dir), small_pair_dir / "ba_n20_base_test.jsonl"
        )
        assert pair.cell_id() == "ba_n20_base"
        small = subsample(pair.train, 16, seed=3)
        again = subsample(pair.train, 16, seed=3)
        assert small.count == 16
        assert np.array_equal(small.targets, again.targets)

    def test_empty_file_rejected(self, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        with pytest.raises(DataError, match="empty"):
            load_dataset(empty)

    def test_schema_mismatch_rejected(self, small_pair_dir, tmp_path):
        text = train_path(small_pair_dir).read_text().replace('"schema":1', '"schema":9', 1)
        bad = tmp_path / "bad.jsonl"
        bad.write_text(text)
        with pytest.raises(DataError, match="schema"):
            load_dataset(bad)

    def test_malformed_record_reports_line(self, small_pair_dir, tmp_path):
        lines = train_path(small_pair_dir).read_text().splitlines()
        lines[3] = lines[3][:40]
        bad = tmp_path / "bad.jsonl"
        bad.write_text("\n".join(lines) + "\n")
        with pytest.raises(DataError, match=":4:"):
            load_dataset(bad)
