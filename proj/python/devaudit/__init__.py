"""Finite audits for report-deviation frames and strategy-proofness."""

from ._devaudit import (
    DevauditError,
    Frame,
    Rule,
    check_dev_laws,
    factor_closure,
    formula_text,
    generate_single_peaked,
    model_check,
    replay,
    run_cli,
    search,
    strategy_proofness_witness,
    verify_certificate,
)

__all__ = [
    "DevauditError",
    "Frame",
    "Rule",
    "check_dev_laws",
    "factor_closure",
    "formula_text",
    "generate_single_peaked",
    "model_check",
    "replay",
    "run_cli",
    "search",
    "strategy_proofness_witness",
    "verify_certificate",
]
