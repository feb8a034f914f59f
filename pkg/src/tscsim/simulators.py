"""Random two-class time series problems, one simulator per representation.

Each simulator works in two stages. :func:`instantiate_model` draws a frozen
per-class description (which shapes, where, how many, which AR coefficients)
and the model then emits series for either class. :func:`simulate` runs both
stages and splits the cases into a stratified train/test pair.

Example
-------
>>> from tscsim.simulators import SimulatorKind, simulate
>>> ds = simulate(SimulatorKind.ELASTIC, seed=1)
>>> ds.X_train.shape, ds.X_test.shape
((20, 100), (180, 100))
"""

import math
import warnings
import zlib
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
from scipy.signal import lfilter

from tscsim.errors import ConfigurationError, DegenerateConfigurationWarning
from tscsim.shapes import ShapeKind, ShapeSpec, insert_shape, render_shape

__all__ = [
    "STANDARD_NOISE",
    "LOW_NOISE",
    "DEFAULT_AMPLITUDE",
    "SimulatorKind",
    "CommonParams",
    "ElasticParams",
    "IntervalParams",
    "ShapeletParams",
    "DictionaryParams",
    "ArmaParams",
    "Placement",
    "ElasticModel",
    "IntervalModel",
    "ShapeletModel",
    "DictionaryModel",
    "ArmaModel",
    "DatasetPair",
    "default_params",
    "white_noise",
    "sample_disjoint_starts",
    "is_stationary",
    "instantiate_model",
    "generate_cases",
    "split_train_test",
    "simulate",
    "simulate_elastic",
    "simulate_interval",
    "simulate_shapelet",
    "simulate_dictionary",
    "simulate_arma",
    "child_seed",
]

STANDARD_NOISE = 1.0
LOW_NOISE = 0.1
# frozen after calibrating the directional accuracy targets at sigma = 1
DEFAULT_AMPLITUDE = 2.0

ARMA_BURN_IN = 100
ARMA_MIN_SEPARATION = 0.2
_MAX_AR_DRAWS = 10_000


class SimulatorKind(Enum):
    ELASTIC = "elastic"
    INTERVAL = "interval"
    SHAPELET = "shapelet"
    DICTIONARY = "dictionary"
    ARMA = "arma"


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class CommonParams:
    """Settings shared by every simulator.

    ``noise_sigma`` and ``amplitude`` are in the same units: amplitude 2 with
    sigma 1 puts a shape peak two noise standard deviations above zero.
    """

    series_length: int = 100
    cases_per_class: tuple = (50, 50)
    train_prop: float = 0.1
    noise_sigma: float = STANDARD_NOISE
    amplitude: float = DEFAULT_AMPLITUDE
    n_classes: int = 2

    def train_counts(self):
        return tuple(math.floor(self.train_prop * c + 0.5) for c in self.cases_per_class)

    def validate(self):
        if self.n_classes != 2:
            raise ConfigurationError("only two-class problems are supported")
        if int(self.series_length) != self.series_length or self.series_length < 1:
            raise ConfigurationError(f"series_length must be a positive integer, got {self.series_length}")
        if len(self.cases_per_class) != self.n_classes:
            raise ConfigurationError("cases_per_class must give one count per class")
        if any(int(c) != c or c < 1 for c in self.cases_per_class):
            raise ConfigurationError(f"cases_per_class must be positive integers, got {self.cases_per_class}")
        if not 0.0 < self.train_prop < 1.0:
            raise ConfigurationError(f"train_prop must lie in (0, 1), got {self.train_prop}")
        if not (self.noise_sigma >= 0 and math.isfinite(self.noise_sigma)):
            raise ConfigurationError(f"noise_sigma must be finite and >= 0, got {self.noise_sigma}")
        if not (self.amplitude > 0 and math.isfinite(self.amplitude)):
            raise ConfigurationError(f"amplitude must be finite and > 0, got {self.amplitude}")
        for label, n_train in enumerate(self.train_counts()):
            if n_train < 1:
                raise ConfigurationError(
                    f"train_prop={self.train_prop} leaves class {label} without train cases"
                )


@dataclass(frozen=True)
class ElasticParams(CommonParams):
    series_length: int = 100
    cases_per_class: tuple = (100, 100)

    def validate(self):
        super().validate()
        if self.series_length < 10:
            raise ConfigurationError("elastic series must be at least 10 long")

    @property
    def min_stretch(self):
        return math.ceil(0.2 * self.series_length)


@dataclass(frozen=True)
class IntervalParams(CommonParams):
    series_length: int = 1000
    cases_per_class: tuple = (200, 200)
    num_intervals: int = 3
    shape_to_noise_ratio: int = 10

    @property
    def interval_length(self):
        return self.series_length // (self.num_intervals * self.shape_to_noise_ratio)

    def validate(self):
        super().validate()
        if self.num_intervals < 1 or self.shape_to_noise_ratio < 1:
            raise ConfigurationError("num_intervals and shape_to_noise_ratio must be >= 1")
        if self.interval_length < 2:
            raise ConfigurationError(
                f"interval length {self.interval_length} is too short to carry a shape"
            )
        if self.num_intervals * self.interval_length > self.series_length:
            raise ConfigurationError("intervals do not fit without overlapping")


@dataclass(frozen=True)
class ShapeletParams(CommonParams):
    series_length: int = 300
    cases_per_class: tuple = (50, 50)
    num_shapelets: int = 1
    shapelet_length: int = 29

    def validate(self):
        super().validate()
        if self.num_shapelets < 1:
            raise ConfigurationError("num_shapelets must be >= 1")
        if self.shapelet_length < 2:
            raise ConfigurationError("shapelet_length must be >= 2")
        if self.num_shapelets * self.shapelet_length > self.series_length:
            raise ConfigurationError(
                f"{self.num_shapelets} shapelets of length {self.shapelet_length} "
                f"do not fit in {self.series_length}"
            )


@dataclass(frozen=True)
class DictionaryParams(CommonParams):
    series_length: int = 1500
    cases_per_class: tuple = (200, 200)
    shapelets_per_class: tuple = (5, 10)
    shape_length: int = 29

    def validate(self):
        super().validate()
        if len(self.shapelets_per_class) != 2 or min(self.shapelets_per_class) < 0:
            raise ConfigurationError("shapelets_per_class needs two non-negative counts")
        if self.shape_length < 2:
            raise ConfigurationError("shape_length must be >= 2")
        if sum(self.shapelets_per_class) * self.shape_length > self.series_length:
            raise ConfigurationError(
                f"{sum(self.shapelets_per_class)} shapes of length {self.shape_length} "
                f"cannot be packed into {self.series_length}"
            )


@dataclass(frozen=True)
class ArmaParams(CommonParams):
    series_length: int = 100
    cases_per_class: tuple = (50, 50)
    # None draws a random AR(2) per class at model instantiation
    ar_coefficients: Optional[tuple] = None

    def validate(self):
        super().validate()
        if self.ar_coefficients is None:
            return
        if len(self.ar_coefficients) != self.n_classes:
            raise ConfigurationError("ar_coefficients needs one vector per class")
        for label, phi in enumerate(self.ar_coefficients):
            if not is_stationary(phi):
                raise ConfigurationError(f"AR coefficients {list(phi)} of class {label} are not stationary")


_PARAM_TYPES = {
    SimulatorKind.ELASTIC: ElasticParams,
    SimulatorKind.INTERVAL: IntervalParams,
    SimulatorKind.SHAPELET: ShapeletParams,
    SimulatorKind.DICTIONARY: DictionaryParams,
    SimulatorKind.ARMA: ArmaParams,
}


def default_params(kind, **overrides):
    """Default parameters for a simulator, with optional field overrides."""
    params = _PARAM_TYPES[SimulatorKind(kind)]()
    if overrides:
        params = replace(params, **overrides)
    return params


# ---------------------------------------------------------------------------
# building blocks


class Placement(NamedTuple):
    shape: ShapeKind
    start: int
    length: int


def white_noise(length, sigma, rng):
    """``length`` i.i.d. N(0, sigma^2) draws."""
    if length < 1:
        raise ConfigurationError("noise length must be >= 1")
    return rng.normal(0.0, sigma, size=int(length))


def sample_disjoint_starts(n_items, item_length, series_length, rng):
    """Sorted start indices of ``n_items`` non-overlapping blocks.

    Every arrangement of the blocks (abutting allowed) is equally likely: the
    block order is fixed, so choosing which of the ``free + n_items`` cells
    (free cells plus one token per block) hold block tokens picks the layout.
    """
    free = series_length - n_items * item_length
    if free < 0:
        raise ConfigurationError(
            f"{n_items} blocks of length {item_length} do not fit in {series_length}"
        )
    slots = np.sort(rng.choice(free + n_items, size=n_items, replace=False))
    return slots + np.arange(n_items) * (item_length - 1)


def is_stationary(phi):
    """True when every root of ``1 - phi_1 z - ... - phi_p z^p`` lies outside the unit circle."""
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if not np.all(np.isfinite(phi)):
        return False
    nz = np.flatnonzero(phi)
    if nz.size == 0:
        return True
    phi = phi[: nz[-1] + 1]
    poly = np.concatenate([-phi[::-1], [1.0]])
    return bool(np.all(np.abs(np.roots(poly)) > 1.0))


def _draw_ar2(rng):
    while True:
        phi1 = rng.uniform(-0.9, 0.9)
        phi2 = rng.uniform(-1.0, 1.0 - abs(phi1))
        if is_stationary((phi1, phi2)):
            return (float(phi1), float(phi2))


# ---------------------------------------------------------------------------
# models


def _distinct_shapes(rng, n):
    kinds = list(ShapeKind)
    picks = rng.choice(len(kinds), size=n, replace=False)
    return tuple(kinds[i] for i in picks)


@dataclass(frozen=True)
class ElasticModel:
    """One shape per class, stretched to a random length and centred."""

    shapes: tuple
    kind: SimulatorKind = field(default=SimulatorKind.ELASTIC, init=False)

    def generate_series(self, label, params, rng):
        n = params.series_length
        length = int(rng.integers(params.min_stretch, n + 1))
        start = (n - length) // 2
        series = white_noise(n, params.noise_sigma, rng)
        shape = render_shape(ShapeSpec(self.shapes[label], length, params.amplitude))
        return insert_shape(series, shape, start), (Placement(self.shapes[label], start, length),)


@dataclass(frozen=True)
class IntervalModel:
    """One shape per class repeated at interval starts shared by both classes."""

    shapes: tuple
    starts: tuple
    interval_length: int
    kind: SimulatorKind = field(default=SimulatorKind.INTERVAL, init=False)

    def generate_series(self, label, params, rng):
        series = white_noise(params.series_length, params.noise_sigma, rng)
        shape = render_shape(ShapeSpec(self.shapes[label], self.interval_length, params.amplitude))
        placements = []
        for start in self.starts:
            series = insert_shape(series, shape, start)
            placements.append(Placement(self.shapes[label], start, self.interval_length))
        return series, tuple(placements)


@dataclass(frozen=True)
class ShapeletModel:
    """One shape per class at a fresh random location in every series."""

    shapes: tuple
    shapelet_length: int
    num_shapelets: int = 1
    kind: SimulatorKind = field(default=SimulatorKind.SHAPELET, init=False)

    def generate_series(self, label, params, rng):
        n = params.series_length
        series = white_noise(n, params.noise_sigma, rng)
        starts = sample_disjoint_starts(self.num_shapelets, self.shapelet_length, n, rng)
        shape = render_shape(ShapeSpec(self.shapes[label], self.shapelet_length, params.amplitude))
        placements = []
        for start in starts:
            series = insert_shape(series, shape, start)
            placements.append(Placement(self.shapes[label], int(start), self.shapelet_length))
        return series, tuple(placements)


@dataclass(frozen=True)
class DictionaryModel:
    """Two shapes shared by both classes; the classes differ in how often each occurs.

    ``counts[c]`` holds the number of occurrences of ``shapes[0]`` and
    ``shapes[1]`` in every series of class ``c``.
    """

    shapes: tuple
    counts: tuple
    shape_length: int
    kind: SimulatorKind = field(default=SimulatorKind.DICTIONARY, init=False)

    def generate_series(self, label, params, rng):
        n = params.series_length
        series = white_noise(n, params.noise_sigma, rng)
        n_a, n_b = self.counts[label]
        which = rng.permutation(np.repeat([0, 1], [n_a, n_b]))
        starts = sample_disjoint_starts(n_a + n_b, self.shape_length, n, rng)
        rendered = [render_shape(ShapeSpec(s, self.shape_length, params.amplitude)) for s in self.shapes]
        placements = []
        for idx, start in zip(which, starts):
            series = insert_shape(series, rendered[idx], start)
            placements.append(Placement(self.shapes[idx], int(start), self.shape_length))
        return series, tuple(placements)


@dataclass(frozen=True)
class ArmaModel:
    """Per-class autoregressive coefficients; series carry no shapes."""

    coefficients: tuple
    burn_in: int = ARMA_BURN_IN
    kind: SimulatorKind = field(default=SimulatorKind.ARMA, init=False)

    def generate_series(self, label, params, rng):
        phi = np.asarray(self.coefficients[label], dtype=float)
        eps = white_noise(params.series_length + self.burn_in, params.noise_sigma, rng)
        y = lfilter([1.0], np.concatenate([[1.0], -phi]), eps)
        return y[self.burn_in:], ()


def instantiate_model(kind, params, rng):
    """Draw the frozen per-class description for one resample.

    Parameters
    ----------
    kind : SimulatorKind
    params : CommonParams subclass matching ``kind``
    rng : numpy.random.Generator

    Returns
    -------
    ElasticModel, IntervalModel, ShapeletModel, DictionaryModel or ArmaModel
    """
    kind = SimulatorKind(kind)
    params.validate()
    if kind is SimulatorKind.ELASTIC:
        return ElasticModel(_distinct_shapes(rng, 2))
    if kind is SimulatorKind.INTERVAL:
        shapes = _distinct_shapes(rng, 2)
        starts = sample_disjoint_starts(
            params.num_intervals, params.interval_length, params.series_length, rng
        )
        return IntervalModel(shapes, tuple(int(s) for s in starts), params.interval_length)
    if kind is SimulatorKind.SHAPELET:
        return ShapeletModel(_distinct_shapes(rng, 2), params.shapelet_length, params.num_shapelets)
    if kind is SimulatorKind.DICTIONARY:
        n_a, n_b = (int(c) for c in params.shapelets_per_class)
        if n_a == n_b:
            warnings.warn(
                f"shapelets_per_class={params.shapelets_per_class} gives both classes the "
                "same signature; the classes are indistinguishable",
                DegenerateConfigurationWarning,
                stacklevel=2,
            )
        return DictionaryModel(_distinct_shapes(rng, 2), ((n_a, n_b), (n_b, n_a)), params.shape_length)
    if kind is SimulatorKind.ARMA:
        if params.ar_coefficients is not None:
            coefs = tuple(tuple(float(v) for v in phi) for phi in params.ar_coefficients)
            return ArmaModel(coefs)
        for _ in range(_MAX_AR_DRAWS):
            phi0, phi1 = _draw_ar2(rng), _draw_ar2(rng)
            if np.max(np.abs(np.subtract(phi0, phi1))) >= ARMA_MIN_SEPARATION:
                return ArmaModel((phi0, phi1))
        raise ConfigurationError("could not draw two separated AR models")  # pragma: no cover
    raise ConfigurationError(f"unknown simulator {kind!r}")


# ---------------------------------------------------------------------------
# datasets


@dataclass
class DatasetPair:
    """A stratified train/test split of one simulated problem.

    ``meta`` records the simulator, its parameters and the seed so the
    dataset can be regenerated. ``train_placements``/``test_placements`` give
    the shapes inserted into each series (empty tuples for ARMA data).
    """

    X_train: np.ndarray
    y_train: np.ndarray
    X_test: np.ndarray
    y_test: np.ndarray
    meta: dict = field(default_factory=dict)
    model: object = None
    train_placements: Optional[list] = None
    test_placements: Optional[list] = None

    @property
    def series_length(self):
        return self.X_train.shape[1]


def generate_cases(model, params, rng):
    """All cases of both classes, class 0 first, with their placements."""
    rows, labels, placements = [], [], []
    for label, count in enumerate(params.cases_per_class):
        for _ in range(count):
            values, where = model.generate_series(label, params, rng)
            rows.append(values)
            labels.append(label)
            placements.append(where)
    return np.vstack(rows), np.asarray(labels, dtype=int), placements


def split_train_test(X, y, train_prop, rng, meta=None, model=None, placements=None):
    """Stratified split: ``round(train_prop * n_c)`` random cases of each class go to train.

    Rounding is half-up. Cases keep their original relative order within
    each half.

    Raises
    ------
    ConfigurationError
        If some class would receive no train case.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    is_train = np.zeros(y.shape[0], dtype=bool)
    for label in np.unique(y):
        members = np.flatnonzero(y == label)
        n_train = math.floor(train_prop * members.size + 0.5)
        if n_train < 1:
            raise ConfigurationError(f"train_prop={train_prop} leaves class {label} without train cases")
        is_train[rng.choice(members, size=n_train, replace=False)] = True
    train_idx = np.flatnonzero(is_train)
    test_idx = np.flatnonzero(~is_train)
    pick = (lambda idx: [placements[i] for i in idx]) if placements is not None else (lambda idx: None)
    return DatasetPair(
        X_train=X[train_idx],
        y_train=y[train_idx],
        X_test=X[test_idx],
        y_test=y[test_idx],
        meta=dict(meta or {}),
        model=model,
        train_placements=pick(train_idx),
        test_placements=pick(test_idx),
    )


def _plain(value):
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    return value


def _params_record(params):
    return {key: _plain(value) for key, value in asdict(params).items()}


def simulate(kind, params=None, rng=None, *, seed=None, resample=None):
    """Generate one random problem from the chosen simulator.

    Parameters
    ----------
    kind : SimulatorKind or str
    params : CommonParams subclass, optional
        Defaults to :func:`default_params` for ``kind``.
    rng : numpy.random.Generator, optional
        Source of randomness; built from ``seed`` when omitted.
    seed : int, optional
        Recorded in ``meta`` and used to seed a fresh generator.
    resample : int, optional
        Recorded in ``meta``.
    """
    kind = SimulatorKind(kind)
    if params is None:
        params = default_params(kind)
    elif not isinstance(params, _PARAM_TYPES[kind]):
        raise ConfigurationError(f"{type(params).__name__} does not configure the {kind.value} simulator")
    if rng is None:
        rng = np.random.default_rng(seed)
    model = instantiate_model(kind, params, rng)
    X, y, placements = generate_cases(model, params, rng)
    meta = {"simulator": kind.value, "params": _params_record(params), "seed": seed, "resample": resample}
    return split_train_test(X, y, params.train_prop, rng, meta=meta, model=model, placements=placements)


def simulate_elastic(params=None, rng=None, **kw):
    return simulate(SimulatorKind.ELASTIC, params, rng, **kw)


def simulate_interval(params=None, rng=None, **kw):
    return simulate(SimulatorKind.INTERVAL, params, rng, **kw)


def simulate_shapelet(params=None, rng=None, **kw):
    return simulate(SimulatorKind.SHAPELET, params, rng, **kw)


def simulate_dictionary(params=None, rng=None, **kw):
    return simulate(SimulatorKind.DICTIONARY, params, rng, **kw)


def simulate_arma(params=None, rng=None, **kw):
    return simulate(SimulatorKind.ARMA, params, rng, **kw)


def child_seed(master_seed, kind, resample):
    """Seed for one resample, fixed by ``(master_seed, simulator, resample)``.

    The simulator enters through the CRC-32 of its name, so the mapping does
    not depend on Python's randomised ``hash``.
    """
    tag = zlib.crc32(SimulatorKind(kind).value.encode("ascii"))
    seq = np.random.SeedSequence([int(master_seed), tag, int(resample)])
    return int(seq.generate_state(1, dtype=np.uint32)[0])
