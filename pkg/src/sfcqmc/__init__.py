"""Pixel sample enumeration along space-filling curves for quasi-Monte Carlo rendering.

Modules
-------
curves
    Morton, Hilbert, Moore and Peano curves on square pixel grids.
radical
    Radical inverses with Zaremba, Faure, random digit and Owen scrambling.
sequences
    Halton points, rank-1 lattice sequences, Cranley-Patterson rotation.
strategies
    Samplers deciding which sequence point each pixel sample receives.
analysis
    Segment counts, edge difference maps, dither maps, star discrepancy.
harness
    Renderer over analytic integrands with error reports.
cli
    The ``sfcqmc`` command.
"""

from .analysis import (
    EdgeDiffMap,
    diff_map,
    dither_map,
    neighborhood_uniformity,
    segment_stats,
    star_discrepancy_1d,
    star_discrepancy_2d,
)
from .curves import (
    CapacityError,
    CurveKind,
    GridSpec,
    ImageDims,
    PixelCoord,
    curve_index,
    curve_order,
    curve_point,
    fit_grid,
    in_image_rank,
    index_map,
    neighborhood_segments,
)
from .harness import ErrorReport, compare, reference, render
from .image import ImageBuffer
from .radical import (
    PRIMES,
    RadicalInverseSpec,
    ScrambleSpec,
    faure_permutation,
    inverse_radical,
    owen_scramble,
    partition_label,
    radical_inverse,
    zaremba_digit,
)
from .sequences import HaltonSpec, LatticeSpec, cranley_patterson, halton_point, lattice_point
from .strategies import (
    DoublingSegments,
    HilbertBlocks,
    ImagePlaneCRT,
    Partitioned,
    RandomizedPasses,
    SampleRequest,
    ShiftedLattice,
    assign_doubling,
    assign_hilbert_blocks,
    assign_image_plane_crt,
    assign_partitioned,
    assign_shifted_lattice,
    make_strategy,
    randomize_pass,
)

__version__ = "0.1.0"
