"""Compute the rotation number two independent ways.

The rotation number of a generator is the winding of its velocity
(x', y') around the origin.  The same integer can be read off the front
alone by classifying cusps: rot = (c_down - c_up) / 2.  The two routes
share no code, so their agreement is a real consistency check, and it
holds for every closed immersed generator, not just nice ones.
"""

import numpy as np

from engel import curves, fourier, invariants, lifting

TAU = fourier.TAU


def show(name, g):
    bal = lifting.balance_closure(g)
    loop = lifting.lift(bal)
    report = invariants.invariant_report(loop)
    print("%-10s rot_winding %+d   rot_cusp %+d   cusps up/down %d/%d"
          % (name, report["rot_winding"], report["rot_cusp"],
             report["c_plus"], report["c_minus"]))


def main():
    n = 2048
    s = fourier.grid(n)
    show("circle", curves.LegendrianGenerator(
        np.cos(TAU * s), np.sin(TAU * s)))
    show("mirror", curves.LegendrianGenerator(
        np.cos(TAU * s) - np.cos(3 * TAU * s), np.sin(5 * TAU * s)))
    show("fish", curves.LegendrianGenerator(
        np.cos(TAU * s), np.sin(3 * TAU * s)))
    # Flipping the slope's sign sends the velocity around the other way.
    show("reversed", curves.LegendrianGenerator(
        np.cos(TAU * s), -np.sin(TAU * s)))


if __name__ == "__main__":
    main()
