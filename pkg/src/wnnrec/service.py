"""HTTP JSON API: one live WNN agent per end-user.

Exposes the rate -> predict -> inspect memory -> forget loop over a movie
catalog. Every mutation is snapshotted to disk (atomic write-temp-rename)
before the response is sent, so a restarted service answers exactly like
an uninterrupted one. Agents run in stateless-context mode: state is
reset before every train and prediction, making behavior a pure function
of the memory registry.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .dataset import Catalog, load_catalog, resolve_paths
from .encoding import EncoderConfig, encode_movie, fit_encoder, validate_rating
from .errors import NotFoundError
from .wnn import Agent, AgentConfig, load_agent, save_agent

DEFAULT_POOL_SIZE = 1000


class RateRequest(BaseModel):
    movie_id: int
    rating: float


class AgentOverrides(BaseModel):
    extra_fanin: int | None = None
    recurrent: bool | None = None
    metric: str | None = None
    k_nearest: int | None = None
    seed: int | None = None


@dataclass
class _Slot:
    agent: Agent
    ratings: dict[int, int]  # pair_id -> movie_id
    path: Path
    lock: threading.Lock = field(default_factory=threading.Lock)


class AgentRegistry:
    """All live agents plus their on-disk snapshots."""

    def __init__(self, snapshot_dir: str | Path):
        self.snapshot_dir = Path(snapshot_dir)
        self.snapshot_dir.mkdir(parents=True, exist_ok=True)
        self._slots: dict[str, _Slot] = {}
        self._lock = threading.Lock()
        for path in sorted(self.snapshot_dir.glob("*.json")):
            doc = json.loads(path.read_text(encoding="utf-8"))
            if doc.get("version") != "agent-service-v1":
                continue
            slot = _Slot(
                agent=load_agent(json.dumps(doc["agent"])),
                ratings={int(k): int(v) for k, v in doc["ratings"].items()},
                path=path,
            )
            self._slots[doc["agent_id"]] = slot

    def create(self, agent: Agent) -> str:
        agent_id = uuid.uuid4().hex
        slot = _Slot(agent=agent, ratings={}, path=self.snapshot_dir / f"{agent_id}.json")
        with self._lock:
            self._slots[agent_id] = slot
        self.persist(agent_id)
        return agent_id

    def get(self, agent_id: str) -> _Slot:
        slot = self._slots.get(agent_id)
        if slot is None:
            raise NotFoundError(f"no agent {agent_id}")
        return slot

    def persist(self, agent_id: str) -> None:
        slot = self.get(agent_id)
        doc = {
            "version": "agent-service-v1",
            "agent_id": agent_id,
            "agent": json.loads(save_agent(slot.agent)),
            "ratings": {str(k): v for k, v in slot.ratings.items()},
        }
        tmp = slot.path.with_suffix(".tmp")
        tmp.write_text(json.dumps(doc), encoding="utf-8")
        os.replace(tmp, slot.path)


def build_app(
    catalog: Catalog,
    snapshot_dir: str | Path,
    encoder: EncoderConfig | None = None,
    agent_defaults: dict | None = None,
) -> FastAPI:
    """Assemble the service around a loaded catalog."""
    encoder = encoder or fit_encoder(catalog.features.values())
    defaults = agent_defaults or {}
    registry = AgentRegistry(snapshot_dir)
    by_popularity = sorted(
        catalog.features, key=lambda m: (-catalog.features[m].vote_count, m)
    )
    code_cache: dict[int, np.ndarray] = {}

    def movie_code(movie_id: int) -> np.ndarray:
        code = code_cache.get(movie_id)
        if code is None:
            if movie_id not in catalog:
                raise NotFoundError(f"no movie {movie_id}")
            code = code_cache[movie_id] = encode_movie(catalog.features[movie_id], encoder)
        return code

    app = FastAPI(title="wnnrec service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.registry = registry

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content={"error": "not_found", "message": str(exc)})

    @app.exception_handler(ValueError)
    async def _bad_request(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": "invalid_request", "message": str(exc)})

    @app.post("/agents")
    def create_agent(overrides: AgentOverrides | None = None):
        kwargs = dict(defaults)
        if overrides is not None:
            kwargs.update({k: v for k, v in overrides.model_dump().items() if v is not None})
        agent = Agent(AgentConfig(**kwargs))
        agent_id = registry.create(agent)
        return {"agent_id": agent_id}

    @app.get("/movies")
    def movies_search(q: str = "", limit: int = 20):
        if limit < 1:
            raise ValueError("limit must be positive")
        needle = q.strip().lower()
        out = []
        for movie_id in by_popularity:
            if needle and needle not in catalog.titles.get(movie_id, "").lower():
                continue
            f = catalog.features[movie_id]
            out.append(
                {
                    "movie_id": movie_id,
                    "title": catalog.titles.get(movie_id, ""),
                    "genres": sorted(f.genres),
                    "vote_average": f.vote_average,
                }
            )
            if len(out) >= limit:
                break
        return out

    @app.post("/agents/{agent_id}/ratings")
    def rate(agent_id: str, body: RateRequest):
        slot = registry.get(agent_id)
        code = movie_code(body.movie_id)
        rating = validate_rating(body.rating)
        with slot.lock:
            slot.agent.reset_state()
            pair_id = slot.agent.train(code, rating, timestamp=int(time.time()))
            slot.ratings[pair_id] = body.movie_id
            registry.persist(agent_id)
            hint, _ = slot.agent.predict_stateless(code)
        return {"pair_id": pair_id, "predicted_rating": hint}

    @app.get("/agents/{agent_id}/predictions/{movie_id}")
    def predict_one(agent_id: str, movie_id: int):
        slot = registry.get(agent_id)
        code = movie_code(movie_id)
        with slot.lock:
            rating, _ = slot.agent.predict_stateless(code)
        return {"rating": rating}

    @app.get("/agents/{agent_id}/recommendations")
    def recommend(agent_id: str, n: int = 10, pool: str | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        slot = registry.get(agent_id)
        if pool is not None:
            candidates = [int(tok) for tok in pool.split(",") if tok.strip()]
            for movie_id in candidates:
                if movie_id not in catalog:
                    raise NotFoundError(f"no movie {movie_id}")
        else:
            rated = set(slot.ratings.values())
            candidates = [m for m in by_popularity if m not in rated][:DEFAULT_POOL_SIZE]
        with slot.lock:
            scored = []
            for movie_id in candidates:
                rating, _ = slot.agent.predict_stateless(movie_code(movie_id))
                scored.append((movie_id, rating))
        scored.sort(key=lambda t: (-t[1], -catalog.features[t[0]].vote_count, t[0]))
        return [
            {
                "movie_id": movie_id,
                "title": catalog.titles.get(movie_id, ""),
                "predicted_rating": rating,
            }
            for movie_id, rating in scored[:n]
        ]

    @app.get("/agents/{agent_id}/memory")
    def memory_list(agent_id: str):
        slot = registry.get(agent_id)
        with slot.lock:
            pairs = slot.agent.list_memory()
            return [
                {
                    "pair_id": p.id,
                    "movie_id": slot.ratings.get(p.id),
                    "title": catalog.titles.get(slot.ratings.get(p.id), ""),
                    "rating": p.target,
                    "timestamp": p.timestamp,
                }
                for p in pairs
            ]

    @app.delete("/agents/{agent_id}/memory/{pair_id}")
    def memory_delete(agent_id: str, pair_id: int):
        slot = registry.get(agent_id)
        with slot.lock:
            slot.agent.delete_pair(pair_id)
            slot.ratings.pop(pair_id, None)
            registry.persist(agent_id)
        return {"deleted": pair_id}

    return app


def main(argv: list[str] | None = None) -> int:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="Run the recommender service")
    parser.add_argument("--port", type=int, default=int(os.environ.get("WNNREC_PORT", "8000")))
    parser.add_argument("--host", default=os.environ.get("WNNREC_HOST", "127.0.0.1"))
    parser.add_argument("--snapshots", default=os.environ.get("WNNREC_SNAPSHOT_DIR", "./snapshots"))
    parser.add_argument("--data-dir", help="directory holding the Movies Dataset CSVs")
    parser.add_argument(
        "--synthetic",
        action="store_true",
        help="generate and serve a synthetic catalog instead of the real dataset",
    )
    args = parser.parse_args(argv)

    if args.synthetic:
        from .demo_data import write_synthetic_dataset

        data_dir = write_synthetic_dataset(Path(args.snapshots) / "synthetic-data")
        catalog = load_catalog(data_dir / "movies_metadata.csv", data_dir / "links.csv")
    else:
        if args.data_dir:
            os.environ.setdefault("WNNREC_DATA_DIR", args.data_dir)
        _, metadata_path, links_path = resolve_paths()
        catalog = load_catalog(metadata_path, links_path)

    app = build_app(catalog, snapshot_dir=args.snapshots)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
