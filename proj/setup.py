"""Build the _opcalc pybind11 extension by driving the project's CMake."""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        out_dir.mkdir(parents=True, exist_ok=True)
        cfg = "Debug" if self.debug else "Release"
        subprocess.run(
            [
                "cmake",
                str(source_dir),
                f"-DCMAKE_BUILD_TYPE={cfg}",
                "-DOPCALC_PYTHON=ON",
                f"-DPython3_EXECUTABLE={sys.executable}",
                f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out_dir}",
            ],
            cwd=build_dir,
            check=True,
        )
        jobs = os.environ.get("CMAKE_BUILD_PARALLEL_LEVEL", "1")
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_opcalc", "-j", jobs],
            cwd=build_dir,
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("opcalc._opcalc")],
    cmdclass={"build_ext": CMakeBuild},
)
