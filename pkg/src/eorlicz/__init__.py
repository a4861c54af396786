"""Plane-map compositions of Young-type functions: classification against
the four classes, Orlicz-family norms, and seeded property suites."""

from .classify import CLASSES, ClassReport, ToleranceConfig, classify, raw_classify
from .expr import ComposedPhi, PhiSpec, PlaneMap, parse_expr
from .measure import DiscreteSpace, IntervalSpace, SampledFn, load_csv, sample
from .norms import (
    LorentzConfig,
    MorreyConfig,
    NormResult,
    SobolevConfig,
    lorentz_norm,
    luxemburg_norm,
    morrey_norm,
    sobolev_norm,
    weak_orlicz_norm,
)

__version__ = "0.1.0"
