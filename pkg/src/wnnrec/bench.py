"""Benchmark harness: three models x reviews-per-user grid on sampled users.

Per-user models (WNN, weighted net) are trained fresh on each user's first
R events and scored on the next few; the collaborative filter is fit once
per cell on the union of the sampled users' training events. Accuracy is
macro-averaged over users: each user contributes the fraction of their
test predictions that land within the tolerance.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Iterable

import numpy as np

from .baselines import (
    MFHyperparams,
    NetHyperparams,
    mf_fit,
    mf_predict,
    net_predict,
    net_train_user,
)
from .dataset import Catalog, load_catalog, load_ratings, resolve_paths, sample_users, split_history
from .encoding import EncoderConfig, encode_movie, fit_encoder, is_accurate
from .errors import FormatError
from .wnn import Agent, AgentConfig

MODELS = ("wnn", "weighted", "cf")
PAPER_GRID = (5, 10, 25, 100, 200)

CSV_COLUMNS = ["model", "R", "macro_accuracy", "train_time_s", "predict_time_s", "n_users_effective"]


@dataclass
class ExperimentConfig:
    """One benchmark cell plus the shared knobs."""

    model: str = "wnn"
    reviews_per_user: int = 5
    n_users: int = 250
    tolerance: float = 1.0
    test_cap: int = 25
    seed: int = 0
    wnn: dict = field(default_factory=dict)
    weighted: dict = field(default_factory=dict)
    cf: dict = field(default_factory=dict)
    cf_fit_on_all_ratings: bool = False
    ratings_path: str | None = None
    metadata_path: str | None = None
    links_path: str | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}, expected one of {MODELS}")
        if not isinstance(self.reviews_per_user, int):
            raise ValueError(
                "reviews_per_user must be a single integer for one cell; "
                "lists belong in a suite grid (bench suite)"
            )
        if self.reviews_per_user < 1 or self.n_users < 1 or self.test_cap < 1:
            raise ValueError("reviews_per_user, n_users and test_cap must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    @classmethod
    def from_dict(cls, doc: dict, **overrides) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known - {"models", "reviews_per_user"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged = {k: v for k, v in doc.items() if k in known}
        merged.update(overrides)
        return cls(**merged)


@dataclass
class ResultRow:
    """One benchmark cell's outcome."""

    model: str
    reviews_per_user: int
    macro_accuracy: float
    per_user_accuracies: list[float]
    micro_accuracy: float
    macro_accuracy_tol05: float
    train_time_s: float
    predict_time_s: float
    n_users_effective: int


@dataclass
class _Bundle:
    catalog: Catalog
    encoder: EncoderConfig
    events: list

    @classmethod
    def load(cls, cfg: ExperimentConfig) -> "_Bundle":
        ratings_path, metadata_path, links_path = resolve_paths(
            cfg.ratings_path, cfg.metadata_path, cfg.links_path
        )
        catalog = load_catalog(metadata_path, links_path)
        encoder = fit_encoder(catalog.features.values())
        events = list(load_ratings(ratings_path))
        return cls(catalog=catalog, encoder=encoder, events=events)


def _user_seed(base_seed: int, user_id: int) -> int:
    return int(np.random.SeedSequence([base_seed, user_id]).generate_state(1)[0])


def _evaluate_user(predictions, actuals, tolerance) -> tuple[float, float, int]:
    hits = sum(is_accurate(p, a, tolerance) for p, a in zip(predictions, actuals))
    hits_half = sum(is_accurate(p, a, 0.5) for p, a in zip(predictions, actuals))
    return hits / len(actuals), hits_half / len(actuals), len(actuals)


def run_experiment(cfg: ExperimentConfig, _bundle: _Bundle | None = None) -> ResultRow:
    """Run one cell and return its row.

    Deterministic given (config, seed) apart from the wall-clock timing
    fields.
    """
    bundle = _bundle or _Bundle.load(cfg)
    R = cfg.reviews_per_user
    histories = sample_users(
        bundle.events, bundle.catalog, cfg.n_users, min_events=R + cfg.test_cap, seed=cfg.seed
    )

    codes = _CodeCache(bundle)
    train_time = 0.0
    predict_time = 0.0
    accs: list[float] = []
    accs_half: list[float] = []
    hits_total = 0.0
    n_total = 0

    splits = [split_history(h, R, cfg.test_cap) for h in histories]
    if cfg.model == "cf":
        test_keys = {e for _, test in splits for e in test}
        if cfg.cf_fit_on_all_ratings:
            fit_events = [e for e in bundle.events if e not in test_keys]
        else:
            fit_events = [e for train, _ in splits for e in train]
        leaked = test_keys.intersection(fit_events)
        assert not leaked, f"cf fit set leaks {len(leaked)} test events"
        fit_triples = [(e.user_id, e.movie_id, e.rating) for e in fit_events]
        t0 = time.perf_counter()
        model = mf_fit(fit_triples, MFHyperparams(**cfg.cf), seed=cfg.seed)
        train_time += time.perf_counter() - t0

    for history, (train_events, test_events) in zip(histories, splits):
        user_seed = _user_seed(cfg.seed, history.user_id)
        if cfg.model == "wnn":
            agent = Agent(AgentConfig(seed=user_seed, **cfg.wnn))
            t0 = time.perf_counter()
            for e in train_events:
                agent.reset_state()
                agent.train(codes.of(e.movie_id), e.rating)
            train_time += time.perf_counter() - t0
            t0 = time.perf_counter()
            preds = []
            for e in test_events:
                agent.reset_state()
                rating, _ = agent.predict(codes.of(e.movie_id))
                preds.append(rating)
            predict_time += time.perf_counter() - t0
        elif cfg.model == "weighted":
            pairs = [(codes.of(e.movie_id), e.rating) for e in train_events]
            t0 = time.perf_counter()
            net = net_train_user(pairs, NetHyperparams(**cfg.weighted), seed=user_seed)
            train_time += time.perf_counter() - t0
            t0 = time.perf_counter()
            preds = [net_predict(net, codes.of(e.movie_id)) for e in test_events]
            predict_time += time.perf_counter() - t0
        else:
            t0 = time.perf_counter()
            preds = [mf_predict(model, e.user_id, e.movie_id) for e in test_events]
            predict_time += time.perf_counter() - t0

        actuals = [e.rating for e in test_events]
        acc, acc_half, n = _evaluate_user(preds, actuals, cfg.tolerance)
        accs.append(acc)
        accs_half.append(acc_half)
        hits_total += acc * n
        n_total += n

    return ResultRow(
        model=cfg.model,
        reviews_per_user=R,
        macro_accuracy=float(np.mean(accs)),
        per_user_accuracies=accs,
        micro_accuracy=hits_total / n_total,
        macro_accuracy_tol05=float(np.mean(accs_half)),
        train_time_s=train_time,
        predict_time_s=predict_time,
        n_users_effective=len(histories),
    )


class _CodeCache:
    """Movie id -> 26-bit code, computed once per movie."""

    def __init__(self, bundle: _Bundle):
        self._bundle = bundle
        self._codes: dict[int, np.ndarray] = {}

    def of(self, movie_id: int) -> np.ndarray:
        code = self._codes.get(movie_id)
        if code is None:
            code = self._codes[movie_id] = encode_movie(
                self._bundle.catalog.features[movie_id], self._bundle.encoder
            )
        return code


def run_suite(
    grid: dict,
    models: Iterable[str] | None = None,
    reviews_per_user: Iterable[int] | None = None,
) -> list[ResultRow]:
    """Run every (model, R) cell of a grid config sequentially.

    `grid` is an ExperimentConfig-style dict; `models` and
    `reviews_per_user` default to the grid's own lists (or the full paper
    grid). Duplicate cells run once. A failing cell aborts the suite with
    the cell identified.
    """
    models = list(models if models is not None else grid.get("models", MODELS))
    r_values = list(
        reviews_per_user if reviews_per_user is not None else grid.get("reviews_per_user", PAPER_GRID)
    )
    cells: list[tuple[str, int]] = []
    for r in r_values:
        for m in models:
            if (m, r) not in cells:
                cells.append((m, r))

    bundle: _Bundle | None = None
    rows: list[ResultRow] = []
    for m, r in cells:
        cfg = ExperimentConfig.from_dict(grid, model=m, reviews_per_user=int(r))
        try:
            if bundle is None:
                bundle = _Bundle.load(cfg)
            rows.append(run_experiment(cfg, _bundle=bundle))
        except Exception as e:
            raise RuntimeError(f"benchmark cell model={m} R={r} failed: {e}") from e
    return rows


def rows_to_json(rows: list[ResultRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2)


def rows_from_json(text: str) -> list[ResultRow]:
    try:
        docs = json.loads(text)
        return [ResultRow(**doc) for doc in docs]
    except (json.JSONDecodeError, TypeError, KeyError) as e:
        raise FormatError(f"bad result rows document: {e}") from e


def emit_report(rows: list[ResultRow], format: str, path: str | Path) -> None:
    """Write rows as csv, json, or a markdown table mirroring the grid.

    The markdown layout has one row per R value and one accuracy column
    per model.
    """
    if not rows:
        raise ValueError("no result rows to report")
    path = Path(path)
    if format == "csv":
        lines = [",".join(CSV_COLUMNS)]
        for r in rows:
            lines.append(
                f"{r.model},{r.reviews_per_user},{r.macro_accuracy!r},"
                f"{r.train_time_s!r},{r.predict_time_s!r},{r.n_users_effective}"
            )
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif format == "json":
        path.write_text(rows_to_json(rows) + "\n", encoding="utf-8")
    elif format in ("md", "markdown", "markdown-table"):
        models = []
        for r in rows:
            if r.model not in models:
                models.append(r.model)
        r_values = sorted({r.reviews_per_user for r in rows})
        cell = {(r.model, r.reviews_per_user): r for r in rows}
        header = "| Reviews Per User | " + " | ".join(f"Accuracy ({m})" for m in models) + " |"
        sep = "|" + "---|" * (len(models) + 1)
        lines = [header, sep]
        for rv in r_values:
            vals = [
                f"{cell[(m, rv)].macro_accuracy:.4f}" if (m, rv) in cell else "-" for m in models
            ]
            lines.append(f"| {rv} | " + " | ".join(vals) + " |")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown report format {format!r}")
