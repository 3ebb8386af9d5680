"""Hand-derived closed forms shared by the test modules.

Everything here was worked out by hand from products of sines and
cosines; nothing below calls into the package's integration code, so
these serve as independent oracles for it.

The main object is the "mirror" family

    x(s) = cos(2 pi s) - cos(6 pi s) + beta (sin(2 pi s) + sin(6 pi s))
    y(s) = sin(10 pi s)

which satisfies gamma(s + 1/2) = (-x, -y, z)(s).  Both closure integrals
vanish identically in beta, the space curve meets itself at the pair
(0, 1/2) for every beta, and the w-gap across that pair is exactly zero
when beta = 0 (every term of z x' is then a cosine, and full cosines
integrate to zero over half a period).
"""

import numpy as np

TAU = 2.0 * np.pi


def mirror_x(s, beta=0.0):
    s = np.asarray(s, dtype=float)
    return (np.cos(TAU * s) - np.cos(3 * TAU * s)
            + beta * (np.sin(TAU * s) + np.sin(3 * TAU * s)))


def mirror_y(s):
    s = np.asarray(s, dtype=float)
    return np.sin(5 * TAU * s)


def mirror_xp(s, beta=0.0):
    s = np.asarray(s, dtype=float)
    return (-TAU * np.sin(TAU * s) + 3 * TAU * np.sin(3 * TAU * s)
            + beta * (TAU * np.cos(TAU * s) + 3 * TAU * np.cos(3 * TAU * s)))


def mirror_yp(s):
    s = np.asarray(s, dtype=float)
    return 5 * TAU * np.cos(5 * TAU * s)


def mirror_z(s, beta=0.0):
    """Antiderivative of y x' with z(0) = 0, expanded by hand.

    y x' = -pi cos4 + pi cos6 + 3 pi cos2 - 3 pi cos8
           + beta pi (sin6 + sin4 + 3 sin8 + 3 sin2)
    where cosk, sink abbreviate cos/sin(2 pi k s).
    """
    s = np.asarray(s, dtype=float)
    base = (-np.sin(4 * TAU * s) / 8.0
            + np.sin(6 * TAU * s) / 12.0
            + 3.0 * np.sin(2 * TAU * s) / 4.0
            - 3.0 * np.sin(8 * TAU * s) / 16.0)
    if beta:
        base = base + beta * (
            (1.0 - np.cos(6 * TAU * s)) / 12.0
            + (1.0 - np.cos(4 * TAU * s)) / 8.0
            + 3.0 * (1.0 - np.cos(8 * TAU * s)) / 16.0
            + 3.0 * (1.0 - np.cos(2 * TAU * s)) / 4.0
        )
    return base


def mirror_w(s):
    """Antiderivative of z x' with w(0) = 0, for beta = 0 only.

    z x' = (9/8) pi cos1 + (9/8) pi cos3 - (145/48) pi cos5
           + (31/48) pi cos7 - (7/16) pi cos9 + (9/16) pi cos11.
    """
    s = np.asarray(s, dtype=float)
    return (9.0 / 16.0 * np.sin(TAU * s)
            + 3.0 / 16.0 * np.sin(3 * TAU * s)
            - 29.0 / 96.0 * np.sin(5 * TAU * s)
            + 31.0 / 672.0 * np.sin(7 * TAU * s)
            - 7.0 / 288.0 * np.sin(9 * TAU * s)
            + 9.0 / 352.0 * np.sin(11 * TAU * s))


# A closed loop whose front has exactly one transverse crossing, at the
# parameter pair (1/4, 3/4) and position (0, 0), with slopes -1 and +1:
#     x = cos(2 pi s), y = sin(6 pi s),
#     z = int y dx = -sin(4 pi s)/4 + sin(8 pi s)/8.
def fish_arrays(n):
    s = np.arange(n) / n
    x = np.cos(TAU * s)
    y = np.sin(3 * TAU * s)
    z = -np.sin(2 * TAU * s) / 4.0 + np.sin(4 * TAU * s) / 8.0
    return x, y, z


# A closed loop with no front crossings and no space-curve coincidences:
#     x = cos(2 pi s), y = sin(4 pi s),
#     z = -sin(2 pi s)/2 + sin(6 pi s)/6.
def plain_arrays(n):
    s = np.arange(n) / n
    x = np.cos(TAU * s)
    y = np.sin(2 * TAU * s)
    z = -np.sin(TAU * s) / 2.0 + np.sin(3 * TAU * s) / 6.0
    return x, y, z


def mirror_loop(n, beta=0.0):
    """The mirror family as a LegendrianLoop with its exact z samples."""
    from engel.curves import LegendrianGenerator, LegendrianLoop

    s = np.arange(n) / n
    g = LegendrianGenerator(mirror_x(s, beta), mirror_y(s))
    return LegendrianLoop(g, mirror_z(s, beta), 0.0, 0.0)


def raw_loop(x, y, z, defect=0.0):
    from engel.curves import LegendrianGenerator, LegendrianLoop

    return LegendrianLoop(LegendrianGenerator(x, y), np.asarray(z, float), float(np.asarray(z, float)[0]), defect)
