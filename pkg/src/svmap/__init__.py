"""Sampled visibility maps for finite-resolution hidden surface removal."""

from .builder import SampledVisibilityMap, build_svm_offline, build_svm_online
from .engine import AcceleratedEngine, BaselineEngine, make_engine
from .geometry import Point2, Point3, Triangle, p2, p3
from .lattice import (
    ConvexPolygon,
    lattice_point_brute,
    lowest_leftmost_lattice_point,
)
from .locator import TrapezoidLocator
from .rational import BACKEND, rat
from .scene import (
    BACKGROUND_ID,
    PixelGrid,
    PixelList,
    Rect,
    Scene,
    load_scene,
    serialize_scene,
    validate_disjoint,
)
from .trapezoid import Trapezoid, build_trapezoid, contains

__all__ = [
    "AcceleratedEngine",
    "BACKEND",
    "BACKGROUND_ID",
    "BaselineEngine",
    "ConvexPolygon",
    "PixelGrid",
    "PixelList",
    "Point2",
    "Point3",
    "Rect",
    "SampledVisibilityMap",
    "Scene",
    "Trapezoid",
    "TrapezoidLocator",
    "Triangle",
    "build_svm_offline",
    "build_svm_online",
    "build_trapezoid",
    "contains",
    "lattice_point_brute",
    "load_scene",
    "lowest_leftmost_lattice_point",
    "make_engine",
    "p2",
    "p3",
    "rat",
    "serialize_scene",
    "validate_disjoint",
]

__version__ = "0.1.0"
