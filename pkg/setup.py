from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("usogrid.kernels._ckernel", ["src/usogrid/kernels/_ckernel.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython: install the pure-Python package; the kernel dispatcher
    # falls back automatically.
    extensions = []

setup(ext_modules=extensions)
