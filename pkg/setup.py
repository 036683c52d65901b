import os

from setuptools import Extension, setup

# The compiled elimination kernel is optional: the package falls back to the
# pure-Python kernel in tpa/_rref_py.py when the extension is absent.
ext_modules = []
if os.environ.get("TPA_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("tpa._rref", ["src/tpa/_rref.pyx"])],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
