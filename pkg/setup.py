"""Build script for the optional compiled kernel module.

The package works without the extension: ``impartial._backend`` falls back to
the pure-Python kernels when ``impartial._core`` is missing.  Set
``IMPARTIAL_PURE_PYTHON=1`` to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, degrade to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"skipping compiled kernels ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"skipping {ext.name} ({exc}); using pure-Python fallback")


ext_modules = []
cmdclass = {}
if os.environ.get("IMPARTIAL_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        # -ffp-contract=off keeps the compiled kernels bit-identical to the
        # pure-Python reference (no fused multiply-add contraction).
        ext_modules = cythonize(
            [
                Extension(
                    "impartial._core",
                    ["src/impartial/_core.pyx"],
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                )
            ],
            language_level="3",
        )
        cmdclass["build_ext"] = optional_build_ext
    except ImportError:
        pass

setup(ext_modules=ext_modules, cmdclass=cmdclass)
