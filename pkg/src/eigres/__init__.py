"""Spectral splitting, isotropy strata and eigenbundle monodromy for Hermitian matrices."""

from .blowup2 import (
    BallCoords,
    BlowupChartPoint,
    EigenlinePair,
    LocalResolutionData,
    blow_down,
    eigenline_atlas,
    pauli_coords,
    projective_chart,
    radial_lift,
    resolve_local,
)
from .bundle import BundleChart, fix_frame, phi, reconstruct
from .exceptions import EigresError, NumericalError, ParseError, ValidationError
from .hermitian import eigendecompose, make_hermitian, random_hermitian, random_unitary, trace_split
from .isotropy import BlowupSchedule, IsotropyIndex, isotropy_index, leq, merge_index, schedule, split_index
from .paths import (
    MatrixPath,
    MonodromyReport,
    builtin_path,
    probe_smoothness,
    track_cluster,
    track_eigenlines,
)
from .riesz import (
    ClusterPartition,
    ContourSpec,
    SpectralSplit,
    contour_for_gap,
    detect_gaps,
    multi_split,
    spectral_projector,
    split_at_gap,
)

__version__ = "0.1.0"

_ESTIMATORS = ("ClusterDecomposer", "EigenbundleTracker", "LocalResolver", "RieszSplitter")


def __getattr__(name):
    # scikit-learn is imported only when an estimator is first requested
    if name in _ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
