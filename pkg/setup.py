"""Build the optional Cython kernels; a failed compile falls back to pure Python."""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

DIRECTIVES = dict(
    language_level=3,
    boundscheck=False,
    wraparound=False,
    cdivision=True,
    embedsignature=True,
)


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing etc.
            warnings.warn(f"charge2: compiled kernels not built ({exc}); using pure Python")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"charge2: failed to build {ext.name} ({exc}); using pure Python")


try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("charge2._ckernels", ["src/charge2/_ckernels.pyx"], extra_compile_args=["-O3"])],
        compiler_directives=DIRECTIVES,
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
