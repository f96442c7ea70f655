"""
UVC Voltage Risk - Atomic Writes
Temp-file-and-rename writers so readers never see partial outputs
"""

import json
import os
import tempfile
from typing import Any, Optional

import pandas as pd


def atomic_write_text(path: str, text: str) -> str:
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise
    return path


def atomic_write_json(path: str, data: Any) -> str:
    return atomic_write_text(path, json.dumps(data, indent=2) + "\n")


def atomic_write_csv(path: str, frame: pd.DataFrame, float_format: Optional[str] = None,
                     index: bool = False) -> str:
    return atomic_write_text(path, frame.to_csv(index=index, float_format=float_format,
                                                lineterminator="\n"))
