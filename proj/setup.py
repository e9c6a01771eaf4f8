import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    for candidate in (
        os.environ.get("EIGEN3_INCLUDE_DIR"),
        "/usr/include/eigen3",
        "/usr/local/include/eigen3",
    ):
        if candidate and os.path.isdir(candidate):
            return candidate
    raise RuntimeError(
        "Eigen headers not found; set EIGEN3_INCLUDE_DIR or install libeigen3-dev"
    )


ext_modules = [
    Pybind11Extension(
        "dagbuild._core",
        sorted(
            os.path.join("src", name)
            for name in os.listdir("src")
            if name.endswith(".cpp")
        )
        + ["bindings/module.cpp"],
        include_dirs=["include", "vendor", eigen_include()],
        cxx_std=20,
    )
]

setup(ext_modules=ext_modules, cmdclass={"build_ext": build_ext})
