"""Independent oracles and the frozen case corpus they produce."""

from .cases import (CASES_DIR, OracleCase, OracleReport, generate_all, load_case, load_cases,
                    run_oracles, write_corpus)

__all__ = ["CASES_DIR", "OracleCase", "OracleReport", "generate_all", "load_case", "load_cases",
           "run_oracles", "write_corpus"]
