"""Frozen reference data for the three base-2 curves on the 8x8 grid."""

MORTON_SEGMENTS = [  # [y][x]
    [1, 2, 2, 3, 3, 2, 2, 1],
    [2, 4, 4, 5, 5, 4, 4, 2],
    [2, 4, 4, 5, 5, 4, 4, 2],
    [2, 4, 4, 5, 5, 4, 4, 2],
    [2, 4, 4, 5, 5, 4, 4, 2],
    [2, 4, 4, 5, 5, 4, 4, 2],
    [2, 4, 4, 5, 5, 4, 4, 2],
    [1, 2, 2, 3, 3, 2, 2, 1],
]
MORTON_TRACE = [
    (0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (3, 0), (2, 1), (3, 1),
    (0, 2), (1, 2), (0, 3), (1, 3), (2, 2), (3, 2), (2, 3), (3, 3),
    (4, 0), (5, 0), (4, 1), (5, 1), (6, 0), (7, 0), (6, 1), (7, 1),
    (4, 2), (5, 2), (4, 3), (5, 3), (6, 2), (7, 2), (6, 3), (7, 3),
    (0, 4), (1, 4), (0, 5), (1, 5), (2, 4), (3, 4), (2, 5), (3, 5),
    (0, 6), (1, 6), (0, 7), (1, 7), (2, 6), (3, 6), (2, 7), (3, 7),
    (4, 4), (5, 4), (4, 5), (5, 5), (6, 4), (7, 4), (6, 5), (7, 5),
    (4, 6), (5, 6), (4, 7), (5, 7), (6, 6), (7, 6), (6, 7), (7, 7),
]
MORTON_EDGE_LABELS = {2: 32, 3: 16, 6: 16, 11: 8, 22: 8}  # difference -> edge count

HILBERT_SEGMENTS = [  # [y][x]
    [1, 2, 1, 2, 2, 1, 2, 1],
    [2, 3, 2, 3, 3, 2, 3, 2],
    [2, 3, 2, 3, 3, 2, 3, 2],
    [1, 3, 3, 3, 3, 3, 3, 1],
    [2, 3, 3, 4, 4, 3, 3, 2],
    [2, 3, 3, 3, 3, 3, 3, 2],
    [1, 2, 2, 2, 2, 2, 2, 1],
    [1, 1, 1, 2, 2, 1, 1, 1],
]
HILBERT_TRACE = [
    (0, 0), (0, 1), (1, 1), (1, 0), (2, 0), (3, 0), (3, 1), (2, 1),
    (2, 2), (3, 2), (3, 3), (2, 3), (1, 3), (1, 2), (0, 2), (0, 3),
    (0, 4), (1, 4), (1, 5), (0, 5), (0, 6), (0, 7), (1, 7), (1, 6),
    (2, 6), (2, 7), (3, 7), (3, 6), (3, 5), (2, 5), (2, 4), (3, 4),
    (4, 4), (5, 4), (5, 5), (4, 5), (4, 6), (4, 7), (5, 7), (5, 6),
    (6, 6), (6, 7), (7, 7), (7, 6), (7, 5), (6, 5), (6, 4), (7, 4),
    (7, 3), (7, 2), (6, 2), (6, 3), (5, 3), (4, 3), (4, 2), (5, 2),
    (5, 1), (4, 1), (4, 0), (5, 0), (6, 0), (6, 1), (7, 1), (7, 0),
]
HILBERT_EDGE_LABELS = {3: 20, 5: 10, 7: 1, 9: 1, 11: 5, 13: 4, 19: 2, 21: 2, 43: 1, 45: 1, 51: 1, 53: 1}  # difference -> edge count

MOORE_SEGMENTS = [  # [y][x]
    [1, 1, 2, 2, 2, 2, 1, 1],
    [1, 2, 3, 4, 4, 3, 2, 1],
    [1, 2, 3, 4, 4, 3, 2, 1],
    [2, 2, 3, 3, 3, 3, 2, 2],
    [2, 2, 3, 3, 3, 3, 2, 2],
    [1, 2, 3, 4, 4, 3, 2, 1],
    [1, 2, 3, 3, 3, 3, 2, 1],
    [1, 1, 2, 1, 1, 2, 1, 1],
]
MOORE_TRACE = [
    (3, 0), (3, 1), (2, 1), (2, 0), (1, 0), (0, 0), (0, 1), (1, 1),
    (1, 2), (0, 2), (0, 3), (1, 3), (2, 3), (2, 2), (3, 2), (3, 3),
    (3, 4), (3, 5), (2, 5), (2, 4), (1, 4), (0, 4), (0, 5), (1, 5),
    (1, 6), (0, 6), (0, 7), (1, 7), (2, 7), (2, 6), (3, 6), (3, 7),
    (4, 7), (4, 6), (5, 6), (5, 7), (6, 7), (7, 7), (7, 6), (6, 6),
    (6, 5), (7, 5), (7, 4), (6, 4), (5, 4), (5, 5), (4, 5), (4, 4),
    (4, 3), (4, 2), (5, 2), (5, 3), (6, 3), (7, 3), (7, 2), (6, 2),
    (6, 1), (7, 1), (7, 0), (6, 0), (5, 0), (5, 1), (4, 1), (4, 0),
]
MOORE_EDGE_LABELS = {3: 21, 5: 8, 7: 2, 9: 2, 11: 6, 13: 4, 29: 1, 31: 1, 33: 1, 35: 1, 61: 1, 63: 1}  # difference -> edge count

