"""Fixed color palette tables.

Continuous palettes are pinned as 8 evenly spaced RGB anchors taken from
the standard published colormap definitions, so transfer functions are
byte-stable across runs and platforms.  ``category10`` supplies
categorical colors, assigned to category values in lexicographic order.
"""

from __future__ import annotations

PALETTES: dict[str, tuple[tuple[float, float, float], ...]] = {
    "viridis": (
        (0.2670, 0.0049, 0.3294),
        (0.2752, 0.1949, 0.4960),
        (0.2124, 0.3597, 0.5517),
        (0.1534, 0.4970, 0.5577),
        (0.1223, 0.6332, 0.5304),
        (0.2889, 0.7584, 0.4284),
        (0.6266, 0.8546, 0.2234),
        (0.9932, 0.9062, 0.1439),
    ),
    "inferno": (
        (0.0015, 0.0005, 0.0139),
        (0.1558, 0.0446, 0.3253),
        (0.3977, 0.0833, 0.4332),
        (0.6217, 0.1642, 0.3888),
        (0.8323, 0.2839, 0.2574),
        (0.9613, 0.4887, 0.0843),
        (0.9812, 0.7591, 0.1569),
        (0.9884, 0.9984, 0.6449),
    ),
    "magma": (
        (0.0015, 0.0005, 0.0139),
        (0.1351, 0.0684, 0.3150),
        (0.3721, 0.0928, 0.4991),
        (0.5945, 0.1757, 0.5012),
        (0.8289, 0.2622, 0.4306),
        (0.9734, 0.4615, 0.3620),
        (0.9973, 0.7335, 0.5052),
        (0.9871, 0.9914, 0.7495),
    ),
    "plasma": (
        (0.0504, 0.0298, 0.5280),
        (0.3251, 0.0069, 0.6395),
        (0.5462, 0.0390, 0.6470),
        (0.7234, 0.1962, 0.5390),
        (0.8598, 0.3606, 0.4069),
        (0.9555, 0.5331, 0.2855),
        (0.9945, 0.7409, 0.1663),
        (0.9400, 0.9752, 0.1313),
    ),
    "turbo": (
        (0.1900, 0.0718, 0.2322),
        (0.2770, 0.4615, 0.9331),
        (0.1074, 0.8138, 0.8348),
        (0.3813, 0.9891, 0.4239),
        (0.8233, 0.9125, 0.2066),
        (0.9967, 0.6098, 0.1784),
        (0.8538, 0.2217, 0.0268),
        (0.4796, 0.0158, 0.0106),
    ),
    "grayscale": (
        (0.0000, 0.0000, 0.0000),
        (0.1429, 0.1429, 0.1429),
        (0.2857, 0.2857, 0.2857),
        (0.4286, 0.4286, 0.4286),
        (0.5714, 0.5714, 0.5714),
        (0.7143, 0.7143, 0.7143),
        (0.8571, 0.8571, 0.8571),
        (1.0000, 1.0000, 1.0000),
    ),
    "Greens": (
        (0.9686, 0.9882, 0.9608),
        (0.8828, 0.9547, 0.8622),
        (0.7371, 0.8955, 0.7108),
        (0.5573, 0.8164, 0.5470),
        (0.3388, 0.7117, 0.4058),
        (0.1714, 0.5815, 0.2979),
        (0.0178, 0.4427, 0.1852),
        (0.0000, 0.2667, 0.1059),
    ),
    "RdYlBu": (
        (0.6471, 0.0000, 0.1490),
        (0.8900, 0.2867, 0.1982),
        (0.9873, 0.6474, 0.3642),
        (0.9972, 0.9118, 0.6153),
        (0.9118, 0.9659, 0.9112),
        (0.6410, 0.8273, 0.9008),
        (0.3465, 0.5493, 0.7527),
        (0.1922, 0.2118, 0.5843),
    ),
}

PALETTE_NAMES = tuple(PALETTES)

CATEGORY10 = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)


def categorical_colors(categories: tuple[str, ...]) -> dict[str, str]:
    """Assign palette colors to categories in lexicographic order."""
    ordered = sorted(categories)
    return {
        cat: CATEGORY10[i % len(CATEGORY10)] for i, cat in enumerate(ordered)
    }
