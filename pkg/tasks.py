#!/usr/bin/env python

"""
Deployment file to facilitate releases of ramification.
"""
from __future__ import annotations

import datetime
import re

from invoke import task

__author__ = "Materials Virtual Lab"
__date__ = "Jun 3 2024"


NEW_VER = datetime.datetime.today().strftime("%Y.%-m.%-d")


@task
def set_ver(ctx):
    lines = []
    with open("ramification/__init__.py") as f:
        for line in f:
            if "__version__" in line:
                lines.append(f'__version__ = "{NEW_VER}"')
            else:
                lines.append(line.rstrip())
    with open("ramification/__init__.py", "w") as f:
        f.write("\n".join(lines) + "\n")

    lines = []
    with open("setup.py") as f:
        for line in f:
            lines.append(re.sub(r"version=([^,]+),", f'version="{NEW_VER}",', line.rstrip()))
    with open("setup.py", "w") as f:
        f.write("\n".join(lines) + "\n")
    ctx.run("ruff format ramification setup.py")


@task
def publish(ctx):
    ctx.run("rm dist/*.*", warn=True)
    ctx.run("python -m build")
    ctx.run("twine upload dist/*")


@task
def test(ctx):
    ctx.run("pytest ramification")


@task
def golden(ctx):
    """Run only the command line golden files."""
    ctx.run("pytest ramification/cli")


@task
def release(ctx):
    set_ver(ctx)
    test(ctx)
    publish(ctx)
