"""Shared fixtures: one small generated corpus + its ingested store."""

from __future__ import annotations

import pytest

from chefs.analytics import build_maps
from chefs.pipeline import RunConfig, run_ingest
from chefs.synth import default_plan, generate_corpus


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    plan = default_plan(seed=101, total_rows=12_000)
    return generate_corpus(plan, out)


@pytest.fixture(scope="session")
def corpus_config(small_corpus, tmp_path_factory):
    store_root = tmp_path_factory.mktemp("store") / "store"
    return RunConfig(
        input_root=small_corpus.files_dir,
        store_root=store_root,
        param_catalogue=small_corpus.catalogue_dir / "param.csv",
        product_catalogue=small_corpus.catalogue_dir / "product.csv",
    )


@pytest.fixture(scope="session")
def small_pipeline(small_corpus, corpus_config):
    return run_ingest(corpus_config)


@pytest.fixture(scope="session")
def small_maps(small_pipeline):
    return build_maps(small_pipeline.store)
