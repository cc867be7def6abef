"""Shared fixtures: parsed corpus, type-checked specs, found witnesses.

Everything here is session-scoped; the corpus is small and immutable, so
parsing and searching once keeps the whole suite fast.
"""

from pathlib import Path

import pytest

from ztc.fms import SearchConfig, search
from ztc.zparse import parse_file, resolve_includes
from ztc.ztype import typecheck

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"

CORPUS_FILES = ("launch_vehicle.ztc", "scheduler.ztc", "storage.ztc")

# Specs whose finite search does not end in a witness, and why.
SEARCH_CAPPED = {"DetectReferenceEvent18"}
SEARCH_EXHAUSTED = {"NoFit"}


@pytest.fixture(scope="session")
def sources():
    return {name: parse_file(CORPUS / name) for name in CORPUS_FILES}


@pytest.fixture(scope="session")
def typed_specs(sources):
    out = {}
    for src in sources.values():
        for name in src.spec_names():
            flat = resolve_includes(src, src.spec_named(name))
            out[name] = typecheck(flat, src.ctx)
    return out


@pytest.fixture(scope="session")
def search_results(typed_specs):
    cfg = SearchConfig()
    return {name: search(ts, cfg) for name, ts in typed_specs.items()}


@pytest.fixture(scope="session")
def witnesses(search_results):
    """name -> env for every spec with a known satisfying binding.

    The capped flagship spec inherits the binding of its pinned-down
    companion block, whose declarations and predicates are a superset.
    """
    envs = {n: r.env for n, r in search_results.items() if r.found}
    envs["DetectReferenceEvent18"] = envs["DetectReferenceEvent18TC"]
    return envs
