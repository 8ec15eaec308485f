import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from repoctx.index import build_repo_index

APP_FILES = {
    "app/service.py": '''"""Service management."""


class Service:
    """Manages service lifecycle."""

    def get_service_state(self) -> str:
        return self.state
''',
    "app/main.py": '''"""Entry point."""
from app.service import Service
from . import service
import requests


def log_state(svc: Service):
    return svc.get_service_state()
''',
    "app/util.py": '''class Helper:
    def __init__(self, name, size=3):
        self.name = name

    def run(self, x, *, fast=False):
        return x
''',
    "app/tasks.py": '''from app.service import Service


def go(svc: Service):
    pass
''',
    "requirements.txt": "requests==2.31.0\n",
}


def write_tree(root: Path, files: dict) -> Path:
    for rel, text in files.items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return root


@pytest.fixture
def app_root(tmp_path) -> Path:
    return write_tree(tmp_path / "repo", APP_FILES)


@pytest.fixture
def app_index(app_root):
    return build_repo_index(app_root)
