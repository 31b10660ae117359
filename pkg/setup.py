"""Build script for the optional compiled kernels.

The package is pure Python plus one Cython extension holding the hot
loops (transportation network simplex, decision-tree split scan).  If
the extension cannot be built the install still succeeds and the
package falls back to the pure implementations at import time.

Set GRAPHSET_NO_EXT=1 to skip the extension build entirely.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: building the graphset._kernels._native extension failed "
            f"({exc!r}); the pure-Python kernels will be used instead.",
            file=sys.stderr,
        )


def extensions():
    if os.environ.get("GRAPHSET_NO_EXT") == "1":
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"WARNING: {exc!r}; skipping extension build.", file=sys.stderr)
        return []
    ext = Extension(
        "graphset._kernels._native",
        ["src/graphset/_kernels/_native.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
