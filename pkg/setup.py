"""Build hook for the optional compiled kernel.

The package is pure Python plus one accelerator extension. If Cython or a C
compiler is unavailable the build silently degrades to the pure wheel; the
import-time selector in mvworkbench.kernels falls back automatically.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/mvworkbench/_ratkern.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    import sys

    print(f"warning: compiled kernel skipped ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
