"""Application configuration: TOML file with flag/env overrides.

Recognized tables and keys (all optional):

    [expansion]   top_docs=10, profile_size=100
    [verbosity]   threshold=5
    [keyphrase]   count=15
    [fixedpoint]  tol=1e-6, max_iters=50
    [index]       k1=1.2, b=0.75, weight_title=3, weight_abstract=2, weight_section=1
    [dedupe]      title_threshold=0.9, author_threshold=0.5
    [summarizer]  sample_size, elite_fraction, smoothing_alpha, max_iterations,
                  stop_tol, summary_length, seed
    [service]     host, port, cache_size
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .summarizer import CEConfig


@dataclass(frozen=True)
class AppConfig:
    expansion_top_docs: int = 10
    expansion_profile_size: int = 100
    verbosity_threshold: int = 5
    keyphrase_count: int = 15
    fixedpoint_tol: float = 1e-6
    fixedpoint_max_iters: int = 50
    bm25_k1: float = 1.2
    bm25_b: float = 0.75
    field_weights: dict = field(
        default_factory=lambda: {"title": 3.0, "abstract": 2.0, "section": 1.0}
    )
    dedupe_title_threshold: float = 0.9
    dedupe_author_threshold: float = 0.5
    summarizer: CEConfig = field(default_factory=CEConfig)
    host: str = "127.0.0.1"
    port: int = 8030
    cache_size: int = 64


def load_config(path: str | None = None) -> AppConfig:
    """Load config from ``path``, the SCISUMM_CONFIG env var, or defaults.

    SCISUMM_PORT overrides the service port when set.
    """
    path = path or os.environ.get("SCISUMM_CONFIG")
    cfg = AppConfig()
    if path:
        with open(path, "rb") as f:
            data = tomllib.load(f)
        exp = data.get("expansion", {})
        verb = data.get("verbosity", {})
        key = data.get("keyphrase", {})
        fp = data.get("fixedpoint", {})
        idx = data.get("index", {})
        dd = data.get("dedupe", {})
        summ = data.get("summarizer", {})
        svc = data.get("service", {})
        cfg = AppConfig(
            expansion_top_docs=int(exp.get("top_docs", cfg.expansion_top_docs)),
            expansion_profile_size=int(exp.get("profile_size", cfg.expansion_profile_size)),
            verbosity_threshold=int(verb.get("threshold", cfg.verbosity_threshold)),
            keyphrase_count=int(key.get("count", cfg.keyphrase_count)),
            fixedpoint_tol=float(fp.get("tol", cfg.fixedpoint_tol)),
            fixedpoint_max_iters=int(fp.get("max_iters", cfg.fixedpoint_max_iters)),
            bm25_k1=float(idx.get("k1", cfg.bm25_k1)),
            bm25_b=float(idx.get("b", cfg.bm25_b)),
            field_weights={
                "title": float(idx.get("weight_title", 3.0)),
                "abstract": float(idx.get("weight_abstract", 2.0)),
                "section": float(idx.get("weight_section", 1.0)),
            },
            dedupe_title_threshold=float(dd.get("title_threshold", cfg.dedupe_title_threshold)),
            dedupe_author_threshold=float(dd.get("author_threshold", cfg.dedupe_author_threshold)),
            summarizer=CEConfig(
                sample_size=int(summ.get("sample_size", 500)),
                elite_fraction=float(summ.get("elite_fraction", 0.1)),
                smoothing_alpha=float(summ.get("smoothing_alpha", 0.7)),
                max_iterations=int(summ.get("max_iterations", 60)),
                stop_tol=float(summ.get("stop_tol", 1e-3)),
                summary_length=int(summ.get("summary_length", 10)),
                seed=int(summ.get("seed", 0)),
            ),
            host=str(svc.get("host", cfg.host)),
            port=int(svc.get("port", cfg.port)),
            cache_size=int(svc.get("cache_size", cfg.cache_size)),
        )
    env_port = os.environ.get("SCISUMM_PORT")
    if env_port:
        cfg = replace(cfg, port=int(env_port))
    return cfg
