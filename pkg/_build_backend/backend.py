"""
setuptools backend that leaves setup.py alone.

setup.py in this repository is a host bootstrap script (system packages, pip
requirements, smoke run), not a setuptools script, so the build must not
execute it. Metadata comes from pyproject.toml instead.
"""
from setuptools import build_meta as _build_meta
from setuptools.build_meta import *  # noqa: F401,F403


class _Backend(_build_meta._BuildMetaBackend):
    def run_setup(self, setup_script="setup.py"):
        # A missing script makes setuptools fall back to a bare setup() call.
        super().run_setup(setup_script="__no_setup_script__.py")


_BACKEND = _Backend()
get_requires_for_build_wheel = _BACKEND.get_requires_for_build_wheel
get_requires_for_build_sdist = _BACKEND.get_requires_for_build_sdist
prepare_metadata_for_build_wheel = _BACKEND.prepare_metadata_for_build_wheel
build_wheel = _BACKEND.build_wheel
build_sdist = _BACKEND.build_sdist
get_requires_for_build_editable = _BACKEND.get_requires_for_build_editable
prepare_metadata_for_build_editable = _BACKEND.prepare_metadata_for_build_editable
build_editable = _BACKEND.build_editable
