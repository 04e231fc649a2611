"""Build script: compiles the optional accelerator extension.

The package is fully functional without the extension (a pure numpy/scipy
backend is selected at import when the compiled core is missing), so a
failed extension build degrades to a pure-Python install instead of
aborting.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ommsim._core",
                ["src/ommsim/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
