"""Builds the Rust extension through cargo.

Neither maturin nor setuptools-rust is assumed; a plain build_ext
override compiles the cdylib with cargo and copies it to wherever
setuptools wants the extension artifact. Editable installs work with
``pip install -e . --no-build-isolation``.
"""

import shutil
import subprocess
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

CRATE_DIR = Path(__file__).resolve().parent


class CargoExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CargoBuildExt(build_ext):
    def build_extension(self, ext):
        subprocess.run(
            ["cargo", "build", "--release", "--package", "moonshine-py"],
            cwd=CRATE_DIR,
            check=True,
        )
        release_dir = CRATE_DIR.parent.parent / "target" / "release"
        for candidate in ("libmoonshine_py.so", "libmoonshine_py.dylib", "moonshine_py.dll"):
            built = release_dir / candidate
            if built.exists():
                break
        else:
            raise FileNotFoundError(f"no compiled extension under {release_dir}")
        target = Path(self.get_ext_fullpath(ext.name))
        target.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(built, target)


setup(
    ext_modules=[CargoExtension("moonshine_py")],
    cmdclass={"build_ext": CargoBuildExt},
    zip_safe=False,
)
