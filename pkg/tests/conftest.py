import pytest

from app.core.config import settings


@pytest.fixture(autouse=True)
def _quiet_settings(monkeypatch):
    """No log files or run artifacts from the test session."""
    monkeypatch.setattr(settings, "log_to_files", False)
    monkeypatch.setattr(settings, "suite_artifacts_enabled", False)
    yield
