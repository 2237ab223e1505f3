"""Drive the HTTP service in-process: the rate/predict/forget loop.

Uses the test client against a synthetic catalog; `python -m
wnnrec.service --synthetic` runs the same thing as a real server for the
browser UI.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from wnnrec.dataset import load_catalog
from wnnrec.demo_data import write_synthetic_dataset
from wnnrec.service import build_app

root = write_synthetic_dataset(Path(tempfile.mkdtemp()) / "movies", n_movies=120, n_users=5, seed=3)
catalog = load_catalog(root / "movies_metadata.csv", root / "links.csv")
app = build_app(catalog, snapshot_dir=Path(tempfile.mkdtemp()) / "snaps")
client = TestClient(app)

agent_id = client.post("/agents", json={"seed": 7}).json()["agent_id"]
print(f"created agent {agent_id}")

top = client.get("/movies", params={"limit": 3}).json()
print("\nmost popular movies:")
for m in top:
    print(f"  #{m['movie_id']} {m['title']} ({', '.join(m['genres'])})")

target = top[0]
print(f"\nrate {target['title']!r} at 5.0:")
resp = client.post(f"/agents/{agent_id}/ratings", json={"movie_id": target["movie_id"], "rating": 5.0}).json()
print(f"  stored as pair {resp['pair_id']}, service now predicts {resp['predicted_rating']} for it")

recs = client.get(f"/agents/{agent_id}/recommendations", params={"n": 5}).json()
print("\nrecommendations after one rating:")
for r in recs:
    print(f"  {r['predicted_rating']:>3} {r['title']}")

print("\nmemory inspector:")
for entry in client.get(f"/agents/{agent_id}/memory").json():
    print(f"  pair {entry['pair_id']}: {entry['title']} rated {entry['rating']}")

print(f"\nforget pair {resp['pair_id']} and re-check the prediction:")
client.delete(f"/agents/{agent_id}/memory/{resp['pair_id']}")
after = client.get(f"/agents/{agent_id}/predictions/{target['movie_id']}").json()["rating"]
print(f"  prediction for {target['title']!r} reverted to {after}")
