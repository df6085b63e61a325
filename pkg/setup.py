from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [
            Extension(
                "odsim.kernels._march",
                ["src/odsim/kernels/_march.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
)
