import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


@pytest.mark.parametrize("name,args", [
    ("cutoff_table.py", ["--n", "20", "--thetas", "1/2", "--c-min", "0", "--c-max", "1"]),
    ("sst_vs_separation.py", ["--n", "4", "--trials", "2000", "--k-max", "6"]),
    ("asymptotic_error.py", ["--ns", "30", "--thetas", "1/2", "--c-values", "3"]),
])
def test_script_runs(name, args):
    out = subprocess.run([sys.executable, str(SCRIPTS / name), *args], capture_output=True,
                         text=True, check=True).stdout
    assert out.startswith("# schema: 1")
    assert len(out.splitlines()) > 4
