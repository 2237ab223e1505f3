"""End-to-end benchmark on a generated dataset.

Writes a synthetic Movies-Dataset-format trio of CSVs, runs the three
models over a small reviews-per-user grid, and prints the markdown table.
Point WNNREC_DATA_DIR at the real Kaggle files (ratings.csv,
movies_metadata.csv, links.csv) and use the `bench` CLI for the full
250-user grid.
"""

import tempfile
from pathlib import Path

from wnnrec import emit_report, run_suite
from wnnrec.demo_data import write_synthetic_dataset

root = write_synthetic_dataset(Path(tempfile.mkdtemp()) / "movies", n_movies=300, n_users=80, seed=5)
print(f"synthetic dataset at {root}")

grid = {
    "n_users": 50,
    "test_cap": 10,
    "seed": 42,
    "weighted": {"epochs": 100},
    "ratings_path": str(root / "ratings.csv"),
    "metadata_path": str(root / "movies_metadata.csv"),
    "links_path": str(root / "links.csv"),
}
rows = run_suite(grid, models=["wnn", "weighted", "cf"], reviews_per_user=[5, 10, 25])

for r in rows:
    print(
        f"  {r.model:9s} R={r.reviews_per_user:<3d} macro={r.macro_accuracy:.4f} "
        f"micro={r.micro_accuracy:.4f} train={r.train_time_s:.2f}s predict={r.predict_time_s:.2f}s"
    )

out = Path(tempfile.mkdtemp()) / "table.md"
emit_report(rows, "md", out)
print("\n" + out.read_text())
