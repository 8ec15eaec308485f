import json
import socket
import subprocess
import sys

import pytest

from repoctx.cli import main
from repoctx.evaluation.synthetic import write_ordering_corpus
from repoctx.llm import MockRule, MockScript

GOOD = "return svc.get_service_state()"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_config(path, backend):
    path.write_text(json.dumps({"backend": backend}))
    return path


@pytest.fixture
def mock_config(tmp_path):
    script = MockScript((MockRule(("def get_service_state(self) -> str",), GOOD),), "pass")
    (tmp_path / "mock.json").write_text(json.dumps(script.to_json()))
    return write_config(tmp_path / "cfg.json", {"kind": "mock", "mock_script": "mock.json"})


def snapshot(root):
    return {p: p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_index(capsys, app_root):
    code, out, _ = run(capsys, "index", app_root)
    assert code == 0 and "app.service.Service" in out
    json.loads(out)


def test_index_writes_file(capsys, app_root, tmp_path):
    code, out, _ = run(capsys, "index", app_root, "--json", tmp_path / "idx.json")
    assert code == 0 and out == ""
    assert "app.service.Service" in (tmp_path / "idx.json").read_text()


def test_index_missing_root(capsys, tmp_path):
    code, _, err = run(capsys, "index", tmp_path / "missing")
    assert code == 1 and "missing" in err


def test_index_unlexable_file(capsys, app_root):
    (app_root / "app" / "broken.py").write_text('x = "unterminated\n')
    code, out, err = run(capsys, "index", app_root)
    assert code == 0 and "app.service.Service" in out
    assert "warning" in err and "broken.py" in err


def test_complete_with_mock(capsys, app_root, mock_config, tmp_path):
    before = snapshot(app_root)
    code, out, _ = run(capsys, "--config", mock_config, "complete", app_root, "app.main", "log_state",
                       "--trace", tmp_path / "trace.json")
    assert code == 0 and out == GOOD + "\n"
    trace = json.loads((tmp_path / "trace.json").read_text())
    assert trace["completion"] == GOOD and trace["refine"]["converged"]
    assert snapshot(app_root) == before


def test_complete_in_file_misses(capsys, app_root, mock_config):
    code, out, _ = run(capsys, "complete", app_root, "app.main", "log_state", "--strategy", "in_file",
                       "--config", mock_config)
    assert code == 0 and out == "pass\n"


def test_complete_unknown_function(capsys, app_root, mock_config):
    code, _, err = run(capsys, "--config", mock_config, "complete", app_root, "app.main", "nope")
    assert code == 2 and "nope" in err


def test_complete_unreachable_backend(capsys, app_root, tmp_path):
    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    cfg = write_config(tmp_path / "http.json", {"kind": "http", "endpoint": f"http://127.0.0.1:{port}/v1",
                                                "model": "m", "api_key_env": None, "timeout": 2})
    code, _, err = run(capsys, "--config", cfg, "complete", app_root, "app.main", "log_state")
    assert code == 3 and "TransportError" in err


def test_bad_config(capsys, app_root, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"backend": {"knd": "mock"}}))
    code, _, err = run(capsys, "--config", cfg, "index", app_root)
    assert code == 1 and "knd" in err


def test_explain_context(capsys, app_root):
    code, out, _ = run(capsys, "explain-context", app_root, "app.main", "log_state")
    data = json.loads(out)
    assert code == 0
    assert any(i["symbol"] == "app.service.Service" and i["score"] == 5 for i in data["items"])
    assert run(capsys, "explain-context", app_root, "app.main", "zzz")[0] == 2


def test_lint(capsys, app_root, tmp_path):
    good, bad, imp = tmp_path / "good.txt", tmp_path / "bad.txt", tmp_path / "imp.txt"
    good.write_text(GOOD)
    bad.write_text("return svc.getState()")
    imp.write_text("return Helper('x')")
    assert run(capsys, "lint", app_root, "app.main", "log_state", "--completion", good) == (0, "", "")
    code, out, _ = run(capsys, "lint", app_root, "app.main", "log_state", "--completion", bad)
    assert code == 1 and out == "UnknownAttribute at 1:12: 'Service' has no attribute 'getState'\n"
    code, out, _ = run(capsys, "lint", app_root, "app.tasks", "go", "--completion", imp, "--json")
    assert code == 1 and json.loads(out)[0]["suggested_fix"] == "from app.util import Helper"
    code, out, err = run(capsys, "lint", app_root, "app.tasks", "go", "--completion", imp, "--fix-imports")
    assert code == 0 and "from app.util import Helper" in err
    assert "Helper" not in (app_root / "app" / "tasks.py").read_text()
    assert run(capsys, "lint", app_root, "app.main", "zzz", "--completion", good)[0] == 2


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    return write_ordering_corpus(tmp_path_factory.mktemp("cli_ordering"), n_tasks=10)


def test_eval_all_strategies(capsys, corpus, tmp_path):
    report = tmp_path / "report.json"
    code, _, err = run(capsys, "--config", corpus.config_path, "eval", corpus.dataset_path,
                       "--strategy", "all", "--report", report, "--workers", 2)
    assert code == 0
    em = {}
    for name in ("in_file", "all_import", "rag", "ide_context"):
        data = json.loads((tmp_path / f"report.{name}.json").read_text())
        assert data["n"] == 10 and data["errors"] == 0
        assert (tmp_path / f"report.{name}.trace.jsonl").exists()
        em[name] = data["em"]
        assert f"{name}: n=10" in err
    assert em["ide_context"] >= em["rag"] >= em["in_file"]


def test_eval_single_report_to_stdout(capsys, corpus):
    code, out, _ = run(capsys, "--config", corpus.config_path, "eval", corpus.dataset_path)
    assert code == 0 and json.loads(out)["strategy"] == "ide_context"


def test_eval_malformed(capsys, tmp_path):
    path = tmp_path / "d.jsonl"
    path.write_text('{"repo": "r", "module": "m", "function": "f", "gold_body": "pass"}\n{oops\n')
    code, _, err = run(capsys, "eval", path)
    assert code == 1 and "line 2" in err


def test_eval_no_tasks(capsys, tmp_path):
    path = tmp_path / "d.jsonl"
    long_body = "\n".join(f"x{i} = {i}" for i in range(20))
    path.write_text(json.dumps({"repo": "r", "module": "m", "function": "f", "gold_body": long_body}) + "\n")
    code, _, err = run(capsys, "eval", path)
    assert code == 1 and "no tasks" in err
    path.write_text("")
    assert run(capsys, "eval", path)[0] == 1


def test_help_mentions_key_variable():
    out = subprocess.run([sys.executable, "-m", "repoctx.cli", "complete", "--help"],
                         capture_output=True, text=True, check=True).stdout
    assert "api_key_env" in out
    for cmd in ("index", "complete", "explain-context", "lint", "eval"):
        assert subprocess.run([sys.executable, "-m", "repoctx.cli", cmd, "--help"],
                              capture_output=True).returncode == 0
