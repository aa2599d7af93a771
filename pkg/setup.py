from setuptools import Extension, setup

# The compiled kernel is optional: without a C compiler or GMP the package
# falls back to the pure Python engine.
setup(
    ext_modules=[
        Extension(
            "swhbf._gbcore",
            sources=["src/swhbf/_gbcore.c"],
            libraries=["gmp"],
            extra_compile_args=["-O2"],
            optional=True,
        )
    ]
)
