"""The bundled models against their frozen verdict matrices.

Every cell in golden_matrices.json was hand-derived from the definitions
before being frozen; this test keeps the engine pinned to them.
"""

import json
from pathlib import Path

from syncmdp import analyze, example_model
from syncmdp.model import SYNC_MODES, WIN_MODES

GOLDEN = json.loads((Path(__file__).parent / "golden_matrices.json").read_text())


def test_every_example_matches_its_golden_matrix():
    for name, expected in GOLDEN.items():
        pm = example_model(name)
        analysis = analyze(pm.mdp, pm.initial, pm.targets["target"])
        for mode in SYNC_MODES:
            for win in WIN_MODES:
                got = "yes" if analysis.answer(mode, win) else "no"
                assert got == expected[mode][win], (name, mode, win)


def test_golden_covers_all_cells():
    assert set(GOLDEN) == {"drain", "funnel", "loopback", "twophase"}
    for matrix in GOLDEN.values():
        assert set(matrix) == set(SYNC_MODES)
        for row in matrix.values():
            assert set(row) == set(WIN_MODES)
