from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [Extension("quiveralg._reduce_ext", ["src/quiveralg/_reduce_ext.pyx"])],
        compiler_directives={"language_level": "3"},
    ),
)
