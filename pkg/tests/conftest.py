import os
from pathlib import Path

import pytest


def _external_file(var):
    value = os.environ.get(var, "").strip()
    if not value:
        return None
    path = Path(value)
    return path if path.is_file() else None


@pytest.fixture(scope="session")
def student_mat_path():
    """The UCI student performance file (semicolon CSV), user supplied."""
    path = _external_file("FBST_STUDENT_MAT")
    if path is None:
        pytest.skip("set FBST_STUDENT_MAT to the student-mat CSV to run this test")
    return path


@pytest.fixture(scope="session")
def kitchen_rolls_path():
    """The kitchen-rolls two-group CSV, user supplied."""
    path = _external_file("FBST_KITCHEN_ROLLS")
    if path is None:
        pytest.skip("set FBST_KITCHEN_ROLLS to the kitchen-rolls CSV to run this test")
    return path
