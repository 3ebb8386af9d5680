"""Lift a planar front to a curve tangent to the standard plane fields.

A front is a closed plane curve (x(s), z(s)) whose slope recovers the
missing coordinate: y = z'/x'.  Here we start one step earlier, from a
generator (x, y) with y playing the slope role, close its two line
integrals with localized slope corrections, and integrate upward to the
4-dimensional curve (x, y, z, w) with z' = y x' and w' = z x'.
"""

import pathlib

import numpy as np

from engel import curves, fourier, lifting, render

OUT = pathlib.Path(__file__).resolve().parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    n = 4096
    s = fourier.grid(n)
    g = curves.LegendrianGenerator(
        np.cos(fourier.TAU * s), np.sin(fourier.TAU * s)
    )
    print("raw closure defects: z %.6f  w %.6f"
          % (lifting.z_closure_defect(g), lifting.w_closure_defect(g)))
    print("(the z defect is the enclosed area -pi; the lift would spiral)")

    balanced = lifting.balance_closure(g)
    print("after balancing:     z %.2e  w %.2e"
          % (lifting.z_closure_defect(balanced),
             lifting.w_closure_defect(balanced)))

    loop = lifting.lift(balanced)
    r_z, r_w = curves.horizontality_residual(loop)
    print("horizontality residuals (finite-difference check): %.2e %.2e"
          % (r_z, r_w))

    front = curves.front_of(loop)
    print("front: %d cusps, %d crossings"
          % (len(front.cusps), len(front.double_points)))

    svg = OUT / "lifted_front.svg"
    render.render_svg(front, svg)
    (OUT / "lifted_loop.csv").write_text(render.loop_csv_text(loop))
    print("wrote", svg, "and", OUT / "lifted_loop.csv")


if __name__ == "__main__":
    main()
