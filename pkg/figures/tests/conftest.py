import pathlib
import subprocess
import sys

import pytest

GOLDEN_DIR = pathlib.Path(__file__).parent / "goldens"

# reduced-resolution preset runs keep the suite fast; the golden images are
# committed for exactly these grids
PRESET_RUNS = {
    "fig2c": ["reproduce-fig", "fig2c", "--grid", "48"],
    "fig3": ["reproduce-fig", "fig3", "--grid", "41"],
    "fig7c": ["reproduce-fig", "fig7c", "--grid", "61"],
}


def run_simulator(args, out_path):
    """Invoke the simulator command line (its external interface)."""
    cmd = [sys.executable, "-m", "ommsim.cli", *args, "--out", str(out_path)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(
            f"simulator failed ({proc.returncode}): {proc.stderr}")
    return out_path


@pytest.fixture(scope="session")
def preset_tables(tmp_path_factory):
    base = tmp_path_factory.mktemp("tables")
    tables = {}
    for name, args in PRESET_RUNS.items():
        tables[name] = run_simulator(args, base / f"{name}.csv")
    return tables
