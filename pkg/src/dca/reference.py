"""Published reference values for the Wisconsin experiments.

Used by the ``worked-example`` command and the regression tests.
"""

from .lymph import ClassLabel
from .wbc import SignalDerivationStats

REFERENCE_STATS = SignalDerivationStats(
    class1_means=(6.59, 6.56, 7.62, 5.88),
    clump_median=4,
)

# (clump, cell size, cell shape, bare nuclei, normal nucleoli); a class 1 item.
SAMPLE_ITEM = {
    "clump_thickness": 10,
    "cell_size": 8,
    "cell_shape": 8,
    "bare_nuclei": 4,
    "normal_nucleoli": 7,
}
SAMPLE_SIGNALS = {"pamp": 0.0, "safe": 6.0, "danger": 1.8975}
SAMPLE_CYTOKINES = {"csm": 2.7795, "semi": 6.0, "mat": -16.1025}

# actual class -> (predicted class 1, predicted class 2)
PUBLISHED_CONFUSION = {
    "class-by-class": {ClassLabel.CLASS1: (236, 4), ClassLabel.CLASS2: (0, 460)},
    "split-sandwich": {ClassLabel.CLASS1: (234, 6), ClassLabel.CLASS2: (1, 459)},
}
