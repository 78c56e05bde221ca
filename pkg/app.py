# app.py
import sys
import importlib
from pathlib import Path

# -------------------------------------------------------------------
# Import shim: finds the package whether it lives in ./core, ../core,
# or next to app.py
# -------------------------------------------------------------------
def _load_cli():
    base = Path(__file__).resolve().parent
    candidates = [base, base.parent]
    for p in candidates:
        sp = str(p)
        if sp not in sys.path:
            sys.path.insert(0, sp)

    try:
        return importlib.import_module("core.cli")
    except ModuleNotFoundError as e:
        if e.name not in ("core", "core.cli"):
            raise
        raise ModuleNotFoundError(
            "Missing package 'core'. Place it in a 'core' folder next to app.py or in ../core."
        ) from e

if __name__ == "__main__":
    sys.exit(_load_cli().main(sys.argv[1:]))
