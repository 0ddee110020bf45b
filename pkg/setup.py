import os

from setuptools import setup

ext_modules = []
if os.environ.get("KFOREST_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # pure-Python install; kforest._kernels falls back
        pass
    else:
        ext_modules = cythonize(
            ["src/kforest/_enum.pyx"],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
