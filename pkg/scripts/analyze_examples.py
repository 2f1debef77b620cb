#!/usr/bin/env python3
"""Analyze the four bundled example models and print their verdict matrices."""

import sys

from syncmdp import analyze, example_model
from syncmdp.examples import EXAMPLE_MODELS
from syncmdp.report import build_report, render_text


def main():
    for name in EXAMPLE_MODELS:
        pm = example_model(name)
        analysis = analyze(pm.mdp, pm.initial, pm.targets["target"])
        print(f"=== {name} ===")
        print(render_text(build_report(analysis, "target", model_path=name)))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
