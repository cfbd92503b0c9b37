from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "tarstop._core",
    sources=[
        "src/bindings.cpp",
        "src/classifier.cpp",
        "src/corpus.cpp",
        "src/eval.cpp",
        "src/poisson.cpp",
        "src/rate.cpp",
        "src/report.cpp",
        "src/stopper.cpp",
        "src/textproc.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
