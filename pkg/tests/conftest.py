import pytest

from mpk.constraints.evaluate import Evaluator
from mpk.kernel import bootstrap, dump
from mpk.syntax import default_registry, parse

from helpers import DATA, PURITY


@pytest.fixture(autouse=True)
def pure_evaluation(monkeypatch):
    original = Evaluator.run

    def checked(self, expr, env, self_val):
        before = dump(self.store)
        try:
            return original(self, expr, env, self_val)
        finally:
            after = dump(self.store)
            PURITY["checked"] += 1
            assert before == after, f"evaluating {expr} changed the store"

    monkeypatch.setattr(Evaluator, "run", checked)
    yield


@pytest.fixture
def store():
    return bootstrap()


@pytest.fixture
def beans_text():
    return (DATA / "order_beans.mpk").read_text()


@pytest.fixture
def package_text():
    return (DATA / "order_package.mpk").read_text()


@pytest.fixture
def order(store, beans_text):
    """A store holding the parsed bean container, and the container's id."""
    return store, parse(store, default_registry(), beans_text)

