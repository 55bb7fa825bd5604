import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

SRC = Path(__file__).resolve().parent.parent / "src"


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    # never touch the user's real config
    cfg = tmp_path / "mfc_config.json"
    monkeypatch.setenv("MFC_CONFIG", str(cfg))
    return cfg


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def write_kernel(tmp_path):
    def _write(matrix, name="kernel.csv"):
        rows = [str(len(matrix))]
        for row in matrix:
            rows.append(",".join("inf" if math.isinf(v) else repr(float(v)) for v in row))
        path = tmp_path / name
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def write_marginal(tmp_path):
    def _write(weights, name="mu.json"):
        path = tmp_path / name
        path.write_text(json.dumps({"weights": weights}), encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def write_text(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def cli_env(isolated_config):
    env = dict(os.environ)
    env["PYTHONPATH"] = os.pathsep.join([str(SRC), env.get("PYTHONPATH", "")]).rstrip(os.pathsep)
    env["PYTHONIOENCODING"] = "utf-8"
    env["MFC_CONFIG"] = str(isolated_config)
    return env
