"""Exact computations with deformed preprojective algebras of quivers."""
from .exact import Cyclotomic, rational
from .kernel import BACKEND
from .pathalg import AlgebraElement, Path
from .quiver import DoubleQuiver, Quiver, QuiverError, Weight, double, dynkin_catalog

__version__ = "0.1.0"
