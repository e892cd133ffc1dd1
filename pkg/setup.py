from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:  # no build toolchain: install the numpy fallback only
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("tripauli._ext._ckernels", ["src/tripauli/_ext/_ckernels.pyx"],
                   include_dirs=[np.get_include()],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                   optional=True)],
        language_level=3,
    )

setup(ext_modules=ext_modules)
