"""Build script: compiles the optional RK4 extension when Cython is around.

The package is pure Python plus one optional speedup; a missing compiler or
missing Cython must never block installation (the import falls back to the
pure kernel). Set SLIN_NO_EXT=1 to skip the extension explicitly.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Give up on the extension instead of failing the whole install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: building slin._rk4core failed ({exc}); "
                  "falling back to the pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to the pure-Python kernel")


ext_modules = []
cmdclass = {}
if os.environ.get("SLIN_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/slin/_rk4core.pyx"],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
        cmdclass["build_ext"] = optional_build_ext
    except ImportError:
        pass

setup(ext_modules=ext_modules, cmdclass=cmdclass)
