"""Kernel backend selection.

``IMPARTIAL_BACKEND=python`` forces the pure-Python kernels,
``IMPARTIAL_BACKEND=c`` requires the compiled extension, and the default
(``auto`` or unset) prefers the extension when it is importable.  Both
backends are bit-identical, so the choice only affects speed.
"""

import os


def _load():
    choice = os.environ.get("IMPARTIAL_BACKEND", "auto").strip().lower() or "auto"
    if choice not in ("auto", "c", "python"):
        raise ImportError(
            f"IMPARTIAL_BACKEND must be 'auto', 'c', or 'python', got {choice!r}"
        )
    if choice == "python":
        from impartial import _pykernels

        return _pykernels
    try:
        from impartial import _core

        return _core
    except ImportError:
        if choice == "c":
            raise
        from impartial import _pykernels

        return _pykernels


kernels = _load()

BACKEND = kernels.BACKEND
