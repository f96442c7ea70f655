"""Pytest wiring for the script-style steps in integration_test.py."""

import shutil
import tempfile

import pytest


@pytest.fixture(scope="module")
def manager():
    # Same defaults as ``integration_test.main`` (40 days, 2000 scenarios, temp dir).
    from integration_test import build_manager

    output_dir = tempfile.mkdtemp(prefix="uvc-risk-")
    try:
        yield build_manager(output_dir, 40, 2000)
    finally:
        shutil.rmtree(output_dir, ignore_errors=True)
