"""Python interface to the mpec-cq library."""

import json
from fractions import Fraction

from ._core import MpecCqError, __version__  # noqa: F401
from ._core import certify as _certify
from ._core import extreme_multipliers as _extreme_multipliers
from ._core import run_cli as _run_cli


def run(*args):
    """Run a subcommand with --json and return (exit_code, report dict)."""
    code, out, _ = _run_cli([str(a) for a in args] + ["--json"])
    return code, json.loads(out)


def analyze(path):
    return run("analyze", path)[1]


def diagnose(path, lam, direction=None):
    args = ["diagnose-mpcc", path, "--lambda", ",".join(str(x) for x in lam)]
    if direction is not None:
        args += ["--direction", ",".join(str(x) for x in direction)]
    return run(*args)[1]


def probe(path, *options):
    return run("probe", path, *options)[1]


def extreme_multipliers(path):
    return [[Fraction(x) for x in v] for v in _extreme_multipliers(path)]


def certify(path, depth=12, threads=0):
    return json.loads(_certify(path, depth, threads))
