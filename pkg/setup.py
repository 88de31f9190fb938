import sys

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    sys.stderr.write("Cython/numpy not found; building without the compiled kernels\n")
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "rsaint._kernels",
                ["src/rsaint/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
