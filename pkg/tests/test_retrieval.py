import pytest

from repoctx.index import RepoIndex
from repoctx.retrieval import chunk_source, identifier_set, jaccard, retrieve_chunks


def index_of(files):
    return RepoIndex.from_sources("/r", {rel[:-3].replace("/", "."): (rel, text) for rel, text in files.items()})


PREFIX = "import os\n\n\ndef load_config(path):\n    data = read_file(path)\n"


def test_verbatim_repeat_ranks_first():
    index = index_of({"target.py": PREFIX + "    return data\n",
                      "copy.py": PREFIX,
                      "other.py": "def unrelated(a, b):\n    return a * b\n"})
    top = retrieve_chunks(PREFIX, index, exclude_module="target", k=3)
    assert top[0].module == "copy"
    assert top[0].score == 1.0
    assert all(c.module != "target" for c in top)


def test_k_larger_than_available():
    index = index_of({"a.py": "x = 1\n", "b.py": "y = 2\n"})
    assert len(retrieve_chunks("z", index, k=10)) == 2


def test_tie_break_by_path_then_line():
    text = "".join(f"value_{i} = {i}\n" for i in range(12))
    index = index_of({"b.py": text, "a.py": text})
    chunks = retrieve_chunks("nothing shared", index, k=10, chunk_lines=6)
    assert [(c.path, c.start_line) for c in chunks] == [
        ("a.py", 1), ("a.py", 4), ("a.py", 7), ("b.py", 1), ("b.py", 4), ("b.py", 7)]
    assert {c.score for c in chunks} == {0.0}


def test_chunking_windows():
    text = "".join(f"l{i}\n" for i in range(10))
    chunks = chunk_source("m", "m.py", text, chunk_lines=4)
    assert [(c.start_line, c.end_line) for c in chunks] == [(1, 4), (3, 6), (5, 8), (7, 10)]
    assert chunks[0].header == "# m.py:1-4"
    with pytest.raises(ValueError):
        chunk_source("m", "m.py", text, chunk_lines=0)


def test_k_must_be_positive():
    with pytest.raises(ValueError):
        retrieve_chunks("q", index_of({"a.py": "x = 1\n"}), k=0)


def test_identifier_similarity():
    assert identifier_set("def f(x): return x.y") == {"f", "x", "y"}
    assert jaccard(frozenset("ab"), frozenset("bc")) == pytest.approx(1 / 3)
    assert jaccard(frozenset(), frozenset()) == 0.0
