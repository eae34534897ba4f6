"""Selects the compiled kernels when built, pure Python otherwise."""

from __future__ import annotations

try:
    from . import _kernels as kernels

    HAVE_EXTENSION = True
except ImportError:  # pragma: no cover - depends on build environment
    from . import _py_kernels as kernels

    HAVE_EXTENSION = False

BACKEND = getattr(kernels, "BACKEND", "unknown")

solve_assignment_min = kernels.solve_assignment_min
kuhn_matching = kernels.kuhn_matching
lex_tighten = kernels.lex_tighten
