"""Exact Hopf actions of quantum groups on quiver path algebras.

Thin python surface over the C++ core: exact q-combinatorics plus the JSON
command driver shared with the `qqw` CLI.
"""

import json as _json

try:  # installed layout: qqw/_core.so
    from ._core import (  # noqa: F401
        QqwError,
        coproduct_check,
        multiplicative_order,
        q_binomial,
        q_integer,
        q_multinomial,
        run_command as _run_command,
    )
except ImportError:  # build-tree layout: _core.so on PYTHONPATH
    from _core import (  # noqa: F401
        QqwError,
        coproduct_check,
        multiplicative_order,
        q_binomial,
        q_integer,
        q_multinomial,
        run_command as _run_command,
    )

__all__ = [
    "QqwError",
    "coproduct_check",
    "multiplicative_order",
    "q_binomial",
    "q_integer",
    "q_multinomial",
    "run",
]


def run(command, config, threads=1):
    """Run a driver command with a config dict; returns (exit_code, report dict)."""
    code, report = _run_command(command, _json.dumps(config), threads)
    return code, _json.loads(report)
