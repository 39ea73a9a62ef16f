import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from arcindex.config import PipelineConfig
from arcindex.pipeline import analyze_corpus, build_from_documents
from arcindex.synth import GenSpec, generate


@pytest.fixture(scope="session")
def synth_full():
    """The default 100-book synthetic corpus (4 archetypes x 25 books)."""
    return generate(GenSpec())


@pytest.fixture(scope="session")
def synth_cfg(synth_full):
    return PipelineConfig(**synth_full.recommended_config).validate()


@pytest.fixture(scope="session")
def synth_outcome(synth_full, synth_cfg):
    """Full-corpus pipeline outcome plus wall-clock cost of getting it."""
    t0 = time.perf_counter()
    result = build_from_documents(synth_full.documents, synth_cfg)
    elapsed = time.perf_counter() - t0
    return {"result": result, "elapsed": elapsed}


@pytest.fixture(scope="session")
def synth_small():
    """A light 2-archetype corpus for tests that only need shape."""
    from arcindex.synth import DEFAULT_TEMPLATES

    spec = GenSpec(seed=404, books_per_archetype=3,
                   templates=DEFAULT_TEMPLATES[:2])
    return generate(spec)


@pytest.fixture(scope="session")
def synth_small_analyses(synth_small, synth_cfg):
    analyses, failures = analyze_corpus(synth_small.documents, synth_cfg)
    assert not failures
    return analyses
