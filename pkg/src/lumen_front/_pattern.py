"""Static 256-pair sampling pattern for the binary descriptor.

Each row is ``(x1, y1, x2, y2)`` relative to the keypoint; bit b is set when
the (rotated) first point is darker than the second. Points were drawn once
from an isotropic Gaussian (sigma = 31/5 px) clipped to [-13, 13] and are
frozen here so descriptors are identical on every machine.
"""

PATTERN = (
    (0, 7, -1, -3), (-9, -1, 1, 6), (7, -11, 1, 2), (-1, 3, 0, 0),
    (-6, 3, 11, -1), (13, -6, 3, -8), (-9, 2, -1, 3), (-7, 13, -3, -1),
    (2, 0, 6, 3), (9, 5, -2, -2), (2, -3, 6, 1), (3, 7, 2, 3),
    (5, 2, 3, 4), (6, -6, 0, -1), (0, 4, -9, -3), (0, -4, -1, 13),
    (9, 0, -7, 0), (-12, -7, -4, -9), (9, 4, 10, -3), (4, 2, -3, -1),
    (0, 3, -5, 1), (-8, 3, -13, 3), (5, -1, -10, -3), (7, 7, 8, -3),
    (-10, -10, -4, -3), (6, 0, 0, 3), (-5, -1, 9, -2), (0, -1, -6, -3),
    (1, -7, 1, 3), (1, -2, 4, 4), (-4, -9, -6, 8), (3, -2, -8, 5),
    (-3, 13, -10, 13), (-4, 3, 0, 7), (0, 3, 5, 12), (-1, 6, 5, 0),
    (-3, -6, -3, -2), (-5, 2, 8, 2), (2, -5, -3, 0), (0, 3, -12, -10),
    (-5, -8, 9, -1), (2, 2, 3, 2), (3, -1, -13, 6), (2, -7, 1, 9),
    (4, -3, -2, 8), (-2, 8, 3, -8), (9, -1, -2, 8), (0, 0, -3, 0),
    (3, 13, -5, 8), (9, 4, 5, 4), (-5, 10, 2, 8), (-3, -9, -6, -4),
    (13, 9, 7, -2), (-1, 9, -5, -10), (10, 13, 0, 0), (7, 5, -11, -1),
    (-3, 1, -8, 7), (5, 2, 0, 9), (-2, 1, 5, 6), (0, 2, -2, -2),
    (1, 4, 2, -8), (3, 0, 1, 11), (9, 4, 10, 11), (9, 7, -6, 5),
    (5, -1, 6, -10), (4, -1, -4, -8), (-3, 11, 8, 4), (8, 4, 0, 4),
    (5, -1, 9, -1), (-1, -4, -10, -8), (1, -1, -6, -4), (-10, -1, -6, -12),
    (7, -7, 3, 0), (11, -4, 1, 1), (-13, 2, -1, -7), (-4, -2, -6, -7),
    (-8, 1, 7, 3), (7, 9, 3, 6), (6, -1, 6, 4), (2, -5, -6, 1),
    (-9, 13, -9, -6), (-1, 6, 13, 12), (4, 8, -5, 3), (-2, 10, -2, 4),
    (8, 2, -2, -5), (8, 2, -2, -2), (-4, -2, 5, 6), (-5, -6, 1, 3),
    (0, 6, 10, 6), (-4, -13, 0, 5), (8, -6, 5, -2), (0, 7, -13, 7),
    (0, 1, 5, -6), (-3, -4, -4, 2), (-10, 3, -13, 9), (6, 6, -8, -6),
    (4, -7, 0, 8), (1, 0, -3, 2), (1, -4, 4, 7), (-10, -6, -5, -6),
    (-13, -4, 0, 2), (-2, 4, 13, 5), (-3, 0, -2, 2), (5, -11, -8, -2),
    (-4, 2, 2, -13), (1, 6, -5, -2), (6, 8, 0, -5), (-2, -4, -8, -12),
    (-6, -4, 13, -8), (-12, -9, 2, -6), (-2, 9, 0, -10), (-11, 3, -5, 1),
    (7, 1, -3, -5), (-2, 3, 0, -6), (6, -13, 0, -5), (-2, 10, 3, -4),
    (-10, -3, -3, -2), (5, 4, -13, 12), (13, -6, -8, 13), (-7, -11, 5, -6),
    (-9, -7, 7, 4), (10, -5, 5, 1), (3, 2, -6, 6), (2, -9, 3, 4),
    (4, 12, 2, -1), (-2, 6, -2, 0), (3, 4, 0, 11), (5, -1, 5, 6),
    (-7, 8, 0, -3), (8, 10, 2, 5), (-9, -6, -10, -1), (0, -10, -2, -7),
    (-4, 0, -1, 3), (-1, -8, 4, 0), (-2, -2, 2, 12), (-5, 1, -5, -12),
    (-1, 11, -6, 3), (-3, -1, 8, -2), (10, -4, 4, 9), (0, 8, 8, -5),
    (4, -1, -1, 2), (4, 5, 3, 6), (5, 8, 6, -10), (-2, -2, -2, 3),
    (2, 0, -4, -5), (9, 3, 4, -8), (10, 0, 1, -6), (-6, -3, -5, -1),
    (7, -5, -10, -6), (11, 8, -7, -1), (7, 13, -2, 0), (-5, -13, 3, -2),
    (-4, -4, 1, 0), (2, 0, -9, 5), (-3, 7, 6, 3), (-6, -7, 1, -9),
    (5, -4, 4, -4), (-2, 2, -1, 10), (4, 4, -8, -10), (2, -1, -1, -6),
    (-5, -3, 8, -1), (-2, 2, -11, 3), (-1, -6, 5, 4), (-1, -2, -4, -11),
    (1, 2, 1, -6), (1, 4, -7, 6), (-8, 3, -13, 4), (9, 11, -5, 3),
    (-4, 1, 1, -11), (1, 0, -2, 3), (6, -13, -10, -1), (-9, -8, 9, 0),
    (-3, 1, 5, -2), (-2, 6, 0, -10), (-2, -4, -3, 5), (2, -7, 0, 7),
    (-11, -5, -3, -8), (5, 1, 0, 13), (8, -9, 3, -1), (-1, -6, 8, -9),
    (-3, 9, 3, 3), (1, 11, 7, -3), (-12, 7, 7, -1), (12, 6, 13, -2),
    (5, -7, 0, -4), (-2, -1, -8, -13), (8, 3, -5, -1), (10, 11, 4, 6),
    (0, 4, 8, -4), (1, -5, -6, -5), (1, -9, 8, 0), (-13, 6, 1, 0),
    (5, 13, 2, 11), (5, 2, 2, 3), (-11, 4, 0, -4), (-2, 1, 5, 4),
    (7, 0, 0, 8), (1, 7, -5, 13), (13, -6, 2, -1), (-7, 12, 2, -2),
    (-10, 8, 6, 4), (-1, 1, -1, -9), (-4, 9, -8, -12), (4, -3, -5, -10),
    (0, 1, 3, 2), (0, 12, -8, 13), (-4, -2, 3, -9), (-7, -1, 9, 5),
    (13, 10, 3, -2), (-7, -2, 5, 1), (2, 2, 6, -11), (7, 5, -2, -3),
    (-2, 5, 3, -13), (0, 0, -8, 4), (5, -8, -10, 4), (-2, -1, 0, -7),
    (5, -11, 1, 1), (-10, 3, -1, 5), (5, 13, -6, 6), (-4, 4, 7, 7),
    (-5, -7, -2, -6), (-9, 13, 3, 3), (-1, 4, -4, -9), (1, -8, -6, 1),
    (-7, 4, 0, 6), (2, 13, -2, -1), (8, -8, -6, -13), (-1, 8, -1, -5),
    (13, -2, 2, -11), (-6, -5, 2, 11), (4, -13, 1, 0), (-4, 8, -9, 1),
    (2, 4, 2, 3), (-1, 0, -12, -4), (-5, 2, 4, 7), (-4, 7, -4, -11),
    (-3, -8, 3, 6), (2, 11, 3, 4), (-8, 7, 7, -6), (-3, 2, 3, -6),
    (-3, 10, 6, 9), (-2, 0, -2, -3), (7, -9, 5, -2), (3, 5, -2, 5),
    (-2, -5, -4, -10), (-4, 1, 1, 12), (-8, -8, 3, 1), (-3, 9, 1, -6),
    (-8, 2, -3, -1), (6, -2, 2, 9), (-1, 1, -8, -5), (-2, -7, -9, 2),
    (11, 6, 8, -4), (2, -5, -5, -2), (-9, -3, 4, -6), (3, 1, 6, 2),
)
