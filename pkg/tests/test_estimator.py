import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from repoctx.estimator import RepoCompleter, check_targets
from repoctx.llm import BackendConfig, MockRule, MockScript

GOOD = "return svc.get_service_state()"
SCRIPT = MockScript((MockRule(("def get_service_state(self) -> str",), GOOD),), "pass")


def test_check_targets():
    assert check_targets("app.main:log_state") == [("app.main", "log_state")]
    assert check_targets([("a", "f"), "b:C.g"]) == [("a", "f"), ("b", "C.g")]
    for bad in ("nocolon", [], [("a",)], [(1, 2)]):
        with pytest.raises(ValueError):
            check_targets(bad)


def test_fit_predict_score(app_root):
    est = RepoCompleter(backend=BackendConfig(mock_script=SCRIPT)).fit(app_root)
    assert est.n_modules_ == 4
    assert est.predict(["app.main:log_state"]) == [GOOD]
    assert est.score(["app.main:log_state"], [GOOD]) == 1.0
    assert est.exact_match_rate(["app.main:log_state"], [GOOD]) == 1.0
    with pytest.raises(ValueError):
        est.score(["app.main:log_state"], [])


def test_in_file_strategy_lacks_signature(app_root):
    est = RepoCompleter(strategy="in_file", backend=BackendConfig(mock_script=SCRIPT)).fit(app_root)
    assert est.predict([("app.main", "log_state")]) == ["pass"]
    (prompt,) = est.transform(["app.main:log_state"])
    assert "get_service_state" not in prompt


def test_transform_ide_context(app_root):
    (prompt,) = RepoCompleter().fit(app_root).transform("app.main:log_state")
    assert "def get_service_state(self) -> str" in prompt


def test_custom_backend_object(app_index):
    class Echo:
        def complete(self, prompt):
            return "return 42"

    est = RepoCompleter(strategy="rag", backend=Echo()).fit(app_index)
    assert est.predict("app.main:log_state") == ["return 42"]


def test_sklearn_protocol():
    est = RepoCompleter(strategy="rag", rag_k=5)
    assert est.get_params()["rag_k"] == 5
    assert clone(est).get_params() == est.get_params()
    with pytest.raises(NotFittedError):
        est.predict("a:f")
    with pytest.raises(ValueError):
        RepoCompleter(strategy="magic").fit(".")
    with pytest.raises(ValueError):
        RepoCompleter(max_refine_iters=-1).fit(".")
