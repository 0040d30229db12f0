"""Setup file for ramification."""
from __future__ import annotations

import os

from setuptools import find_namespace_packages, setup

SETUP_PTH = os.path.dirname(os.path.abspath(__file__))

with open(os.path.join(SETUP_PTH, "README.rst")) as f:
    desc = f.read()


setup(
    name="ramification-kummer",
    packages=find_namespace_packages(include=["ramification*"]),
    version="2024.6.3",
    python_requires=">=3.9",
    install_requires=["monty", "joblib", "numpy", "sympy"],
    extras_require={"dev": ["hypothesis", "pytest", "pytest-cov"]},
    package_data={"ramification.families": ["*.json"]},
    entry_points={"console_scripts": ["ramify = ramification.cli.ramify:main"]},
    author="materials virtual lab",
    author_email="ongsp@eng.ucsd.edu",
    maintainer="materials virtual lab",
    license="BSD",
    description="Exact ramification invariants of degree-p Kummer extensions of valued fields.",
    long_description=desc,
    long_description_content_type="text/x-rst",
    keywords=["ramification", "Swan conductor", "Kummer extension", "valuation", "defect"],
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Software Development :: Libraries :: Python Modules",
    ],
)
