"""Build script.  The compiled elimination kernel is optional: if Cython or a
C compiler is unavailable the package installs with the pure-Python kernel."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "dgdeform._kernel._rref_cy",
                ["src/dgdeform/_kernel/_rref_cy.pyx"],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except Exception as exc:  # pragma: no cover
    import sys

    print(f"dgdeform: building without compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
