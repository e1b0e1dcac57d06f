#!/usr/bin/env python3
"""Derives the observation files in corpus/observations/.

The raw experimental datasets are not redistributable. Each file here is
reconstructed from the aggregate choice shares reported for the experiment:
a role's share of every observed path is written as an exact fraction so
that classifying the file reproduces the reported percentages exactly.

Responder shares are conditional on the responder's information set being
reached, which is how the aggregates are reported.

Usage: scripts/derive_observations.py [output_dir]
"""

import pathlib
import sys
from fractions import Fraction

# role -> list of (path, share in percent). Paths join the actions a role
# takes at its own information sets in play order with "/".
SHARES = {
    "cooper": {
        # Row player: Out 20%, In then 2 78%, In then 1 2%.
        "row": [("O", "20"), ("In/2", "78"), ("In/1", "2")],
        # Column player, conditional on In: 1 92%, 2 8%.
        "column": [("1", "92"), ("2", "8")],
    },
    "bn": {
        # Player 1: Out 88%; In followed by L 2.2% and by R 9.8%.
        "1": [("Out", "88"), ("In/L", "2.2"), ("In/R", "9.8")],
        # Player 2, conditional on In: r 43%, l 57%.
        "2": [("r", "43"), ("l", "57")],
    },
    "er": {
        # Player 1: Out 62%; In followed by X 36% and by Y 2%.
        "1": [("Out", "62"), ("In/X", "36"), ("In/Y", "2")],
        # Player 2, conditional on In: R 22%, L 78%.
        "2": [("R", "22"), ("L", "78")],
    },
}


def render(roles):
    lines = ["# weights: frequency", "role,path,weight"]
    for role, entries in roles.items():
        total = sum(Fraction(share) for _, share in entries)
        if total != 100:
            raise ValueError(f"shares for role {role} sum to {total}, not 100")
        for path, share in entries:
            weight = Fraction(share) / 100
            lines.append(f"{role},{path},{weight}")
    return "\n".join(lines) + "\n"


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else (
        root / "corpus" / "observations")
    out.mkdir(parents=True, exist_ok=True)
    for game, roles in SHARES.items():
        (out / f"{game}.csv").write_text(render(roles))


if __name__ == "__main__":
    main()
