import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from protlora.numerics import make_rng  # noqa: E402


@pytest.fixture
def rng():
    return make_rng(1234)


def arrays(params: dict, skip=()) -> dict:
    return {k: np.asarray(v, dtype=np.float64) for k, v in params.items() if k not in skip}


def rel_err(analytic, numeric, floor=1e-4):
    """Relative error; near-zero gradients fall back to an absolute 1e-8 scale at tol 1e-4."""
    analytic, numeric = np.asarray(analytic), np.asarray(numeric)
    return np.max(np.abs(analytic - numeric) / np.maximum(np.abs(numeric), floor))


# A configuration small enough for end-to-end runs inside unit tests.
TINY = [
    "encoder.n_layers=2", "encoder.d_model=16", "encoder.n_heads=2", "encoder.d_ff=32",
    "head.d_head=8", "head.d_l=4", "head.n_heads=2", "lora.rank=4",
    "data.n=48", "data.length=12", "train.epochs=2",
]


# One PASS/FAIL line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE: dict[int, str] = {}


class criterion:
    """Context manager that records the outcome of one acceptance criterion."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.details: list[str] = []

    def note(self, text: str) -> None:
        self.details.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = "; ".join(self.details)
        if exc_type is not None:
            detail = (detail + "; " if detail else "") + f"{exc_type.__name__}: {exc}".strip()
        line = f"[{status}] criterion {self.number:>2}: {self.title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE[self.number] = line
        print(line)
        return False


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
