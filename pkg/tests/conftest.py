import contextlib
import io
from pathlib import Path

import pytest

from dagforge import build_registry, register_example_functions
from dagforge.cli import main as cli_main

REPO = Path(__file__).resolve().parent.parent
MODELS = REPO / "models"
DATA = Path(__file__).resolve().parent / "data"

MINIMAL_INSTRUCTIONS = """
instructions:
  simulation:
    csv_name: out
    num_samples: {num_samples}
"""


def model_yaml(nodes_block: str, num_samples: int = 10) -> str:
    """Assemble a model document from an indented nodes block."""
    return "graph:\n  nodes:\n" + nodes_block + MINIMAL_INSTRUCTIONS.format(num_samples=num_samples)


@pytest.fixture()
def registry():
    reg = build_registry()
    register_example_functions(reg)
    return reg


@pytest.fixture()
def run_cli():
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""

    def run(*argv: str):
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            try:
                code = cli_main([str(a) for a in argv])
            except SystemExit as stop:  # argparse usage errors
                code = int(stop.code or 0)
        return code, out.getvalue(), err.getvalue()

    return run
