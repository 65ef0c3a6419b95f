"""Small hand-checked arrays shared by several test modules."""
import numpy as np

# serializes to 1100101100010001
SD_SAMPLE = np.array(
    [
        [1, 1, 0, 0],
        [1, 0, 1, 1],
        [0, 0, 0, 1],
        [0, 0, 0, 1],
    ]
)

# zero 2-squares at (2,0) and (2,1), none larger
ZERO_SAMPLE = np.array(
    [
        [1, 1, 0, 0, 1],
        [1, 0, 1, 1, 1],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
        [0, 1, 0, 1, 0],
    ]
)

# identical 3-squares at (0,0) and (2,2); 4-squares all distinct
DUP_SAMPLE = np.array(
    [
        [1, 1, 0, 0, 1],
        [1, 0, 1, 1, 1],
        [0, 0, 1, 1, 0],
        [0, 0, 1, 0, 1],
        [0, 1, 0, 0, 1],
    ]
)

# semi squares: -1 marks cells outside the domain
SEMI_X = np.array(
    [
        [1, 1, 0, 0, 1],
        [1, 0, 1, 1, 1],
        [0, 0, 0, 1, 0],
        [0, 0, -1, -1, -1],
        [0, 1, -1, -1, -1],
    ]
)
SEMI_Y = np.array([[0, 0, 1], [1, -1, -1], [0, -1, -1]])
SEMI_XY = np.array(
    [
        [1, 1, 0, 0, 1],
        [1, 0, 1, 1, 1],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
        [0, 1, 1, -1, -1],
    ]
)
CR_X = np.array(
    [
        [1, 1, 0, 0, 1],
        [1, 0, 1, 1, 1],
        [0, 0, 0, 1, 0],
        [0, 0, 1, 1, 0],
        [0, 1, 1, 0, 1],
    ]
)
CR_Y = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
