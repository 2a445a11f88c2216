import pathlib

import pytest

PROGRAMS_DIR = pathlib.Path(__file__).resolve().parents[1] / "src" / "graphdyn" / "programs"


@pytest.fixture(scope="session")
def corpus_sources() -> dict:
    return {
        name: (PROGRAMS_DIR / f"{name}.sp").read_text()
        for name in ("sssp_dynamic", "pr_dynamic", "tc_dynamic")
    }


@pytest.fixture(scope="session")
def checked_corpus(corpus_sources):
    from graphdyn.frontend import compile_source

    return {name: compile_source(src) for name, src in corpus_sources.items()}
