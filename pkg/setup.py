import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SETLATTICE_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/setlattice/_geom_cy.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # pure-Python fallback is selected at import time; the wheel still works
        ext_modules = []

setup(ext_modules=ext_modules)
