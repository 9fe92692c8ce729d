"""Build hook for the optional compiled kernels.

Falls back to a pure-Python install when Cython or a C compiler is missing.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("ARTIFACT_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("artifact._ckernels", ["src/artifact/_ckernels.pyx"],
                       extra_compile_args=["-O3"])],
            language_level=3,
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"compiled kernels disabled: {exc}")

setup(ext_modules=ext_modules)
