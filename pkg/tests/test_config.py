import json

import pytest

from repoctx.config import Config, ConfigError, config_from_json, load_config
from repoctx.llm import MockScript
from repoctx.prompt import Budget


def test_defaults():
    cfg = load_config(None)
    assert cfg == Config()
    assert cfg.budget == Budget(16000, 2000)
    assert cfg.max_refine_iters == 2 and cfg.rag_k == 3 and cfg.rag_chunk_lines == 12


@pytest.mark.parametrize("data", [
    {"bogus": 1},
    {"backend": {"kind": "mock", "extra": 1}},
    {"budget": {"max_chars": 100, "reserved_for_prefix": 200}},
    {"budget": {"max_chars": 0}},
    {"budget": {"max_chars": 100, "max_tokens": 10}},
    {"rag": {"k": 0}},
    {"max_refine_iters": -1},
    {"max_refine_iters": True},
    {"codebleu_weights": {"ngram": 1, "syntax": 1}},
    {"ignore": "*.py"},
    {"backend": {"kind": "ftp"}},
    {"backend": {"temperature": -0.5}},
])
def test_rejections(data):
    with pytest.raises(ConfigError):
        config_from_json(data)


def test_full_config(tmp_path):
    script = MockScript(fallback="return 1")
    (tmp_path / "mock.json").write_text(json.dumps(script.to_json()))
    data = {"backend": {"kind": "mock", "mock_script": "mock.json"},
            "budget": {"max_tokens": 1000, "chars_per_token": 3, "reserved_for_prefix": 500},
            "max_refine_iters": 0, "relevance_weights": {"target": 4, "user_defined": 1, "file": 2},
            "rag": {"k": 5, "chunk_lines": 8}, "ignore": ["gen/**"], "workers": 3,
            "codebleu_weights": {"ngram": 0.1, "weighted_ngram": 0.1, "syntax": 0.4, "dataflow": 0.4}}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    cfg = load_config(path)
    assert cfg.backend.mock_script == script
    assert cfg.budget == Budget(3000, 500)
    assert cfg.max_refine_iters == 0 and cfg.rag_k == 5 and cfg.rag_chunk_lines == 8
    assert cfg.relevance_weights.target == 4 and cfg.ignore == ("gen/**",) and cfg.workers == 3
    assert cfg.codebleu_weights.syntax == 0.4


def test_unreadable_and_malformed(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("{\n  oops")
    with pytest.raises(ConfigError, match="line 2"):
        load_config(tmp_path / "bad.json")
    with pytest.raises(ConfigError):
        config_from_json({"backend": {"mock_script": "nope.json"}}, tmp_path)
