"""Chain-enumeration kernel selection.

The compiled ``_chain`` extension is used when it imports; otherwise the
pure-Python ``_chain_py`` module is used.  Setting ``HIFKIT_PURE=1`` forces
the fallback.
"""

import os

from . import _chain_py

if os.environ.get("HIFKIT_PURE") == "1":
    _impl = _chain_py
else:
    try:
        from . import _chain as _impl  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _impl = _chain_py

BACKEND = "compiled" if _impl is not _chain_py else "python"

OP_VAR = _chain_py.OP_VAR
OP_CONST = _chain_py.OP_CONST
OP_NEG = _chain_py.OP_NEG
OP_AND = _chain_py.OP_AND
OP_OR = _chain_py.OP_OR
OP_IMPL = _chain_py.OP_IMPL

run_program = _impl.run_program
first_falsifying = _impl.first_falsifying
count_falsifying = _impl.count_falsifying
