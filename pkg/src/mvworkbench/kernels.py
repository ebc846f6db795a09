"""Kernel selection: compiled extension when available, pure Python otherwise.

Set MVWB_PURE=1 to force the fallback (useful for benchmarking and for
debugging suspected kernel issues; results are bit-identical either way).
"""

from __future__ import annotations

import os

if os.environ.get("MVWB_PURE") == "1":
    from mvworkbench import _ratkern_py as _impl
else:
    try:
        from mvworkbench import _ratkern as _impl  # type: ignore[attr-defined]
    except ImportError:
        from mvworkbench import _ratkern_py as _impl

IMPL = _impl.IMPL
idot = _impl.idot
form_value_scaled = _impl.form_value_scaled
eval_affine_scaled = _impl.eval_affine_scaled
point_in_cell_scaled = _impl.point_in_cell_scaled
locate_cell_scaled = _impl.locate_cell_scaled
eval_formula_scaled = _impl.eval_formula_scaled
bareiss_det = _impl.bareiss_det
