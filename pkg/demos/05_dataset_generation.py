"""Generate a small supervised dataset pair and round-trip it through disk.

Each JSONL record holds the first ten state vectors of one consensus run
and the final mean value as the prediction target. Any record can be
regenerated from its stored seed plus the manifest, which is the
correctness check used here.
"""

from pathlib import Path

from pathlap import CaseType, GraphModel, export_flat_csv, generate_dataset, read_dataset, replay_sample, write_dataset

OUT = Path("/tmp/pathlap_demo_data")
OUT.mkdir(exist_ok=True)

train, test = generate_dataset(
    GraphModel.BA, 25, CaseType.EXPONENTIAL,
    train_count=20, test_count=5, master_seed=42,
)
print(f"generated {len(train.samples)} train / {len(test.samples)} test samples")
print(f"resamples needed: train={train.manifest.resamples}, test={test.manifest.resamples}")

sample = train.samples[0]
print(f"\nfirst sample: seed={sample.sample_seed}")
print(f"  recorded prefix {sample.states.shape}, target {sample.final_value:.6f}, "
      f"iterations {sample.iterations}, eps {sample.epsilon:.2e}")

train_path = OUT / "ba_n25_exponential_train.jsonl"
write_dataset(train, train_path)
write_dataset(test, OUT / "ba_n25_exponential_test.jsonl")
print(f"\nwrote {train_path} ({train_path.stat().st_size} bytes)")

back = read_dataset(train_path)
fresh = replay_sample(back.samples[0], back.manifest)
print(f"replay of stored seed reproduces target exactly: "
      f"{fresh.final_value == back.samples[0].final_value}")

flat = OUT / "ba_n25_exponential_train.csv"
export_flat_csv(train, flat)
columns = flat.read_text().splitlines()[0].count(",") + 1
print(f"flat CSV for tree models: {columns} columns (10*25 features + valid_steps + target)")
