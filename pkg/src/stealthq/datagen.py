"""
Synthetic DG1 measurements under normal operation and coordinated stealth attack.

Normal operation
    Reactive power ``Q`` follows a mean-reverting random walk around a
    dispatch set-point, reflected into ``[q_min, q_max]``. Frequency deviation
    sits on the cubic droop curve ``g(Q) = -k1*Q - k3*Q**3`` and terminal
    voltage on the line ``v0 - kv*Q``, both with additive sensor noise.

Stealth attack
    Starting from an independently generated normal row, the attacker
    shifts ``Q`` by ``delta_q``, moves ``f_dev`` along the droop curve to the
    new ``Q`` plus a small offset ``delta_f``, and offsets ``V`` by ``delta_v``.
    Every component of the perturbation is checked against its bound, and
    dataset attack rows are drawn only from moments where the corrupted row
    stays inside the envelope of the normal rows.

Sensor noise is Gaussian truncated at ``noise_clip`` standard deviations,
so the generated envelope is bounded.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .encoding import FEATURES, RawSample
from .errors import InvalidArgumentError, StealthViolationError

DATASET_HEADER = ("sample_id",) + FEATURES + ("label",)
SERIES_HEADER = ("t",) + FEATURES + ("label",)


@dataclass(frozen=True)
class GeneratorConfig:
    # grid nominals
    f0: float = 50.0  # Hz
    v0: float = 1.0  # p.u.
    sample_period: float = 0.01  # s
    # quasi-static couplings
    k1: float = 0.5  # Hz per p.u.
    k3: float = 1.0  # Hz per p.u.^3
    kv: float = 0.2  # p.u. per p.u.
    # reactive-power walk
    q_nominal: float = 0.02
    q_min: float = 0.0
    q_max: float = 0.8
    q_reversion: float = 0.03
    sigma_q: float = 0.3  # per-step std of log(Q / q_nominal)
    # sensor noise
    sigma_f: float = 0.02
    sigma_v: float = 0.01
    noise_clip: float = 3.0
    # attack offsets and stealth bounds
    delta_q: float = 0.025
    delta_f: float = 0.025
    delta_v: float = 0.005
    bound_q: float = 0.05
    bound_f: float = 0.05
    bound_v: float = 0.01
    # dataset assembly
    n_samples: int = 600
    attack_fraction: float = 0.5
    series_length: int = 10000
    seed: int = 42

    def __post_init__(self):
        for name in ("f0", "v0", "sample_period"):
            if not getattr(self, name) > 0:
                raise InvalidArgumentError(f"{name} must be positive")
        for name in ("sigma_q", "sigma_f", "sigma_v", "q_reversion", "k1", "k3", "kv"):
            if not getattr(self, name) >= 0:
                raise InvalidArgumentError(f"{name} must be non-negative")
        if not self.noise_clip > 0:
            raise InvalidArgumentError("noise_clip must be positive")
        if not self.q_reversion <= 1:
            raise InvalidArgumentError("q_reversion must be at most 1")
        if not self.q_min <= self.q_nominal <= self.q_max:
            raise InvalidArgumentError("need q_min <= q_nominal <= q_max")
        for comp in ("q", "f", "v"):
            bound = getattr(self, f"bound_{comp}")
            delta = getattr(self, f"delta_{comp}")
            if not bound > 0:
                raise InvalidArgumentError(f"bound_{comp} must be positive")
            if abs(delta) > bound:
                raise StealthViolationError(f"delta_{comp}", delta, bound)
        worst = self.max_frequency_shift()
        if worst > self.bound_f * (1 + 1e-12):
            raise StealthViolationError("a_f", worst, self.bound_f)
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise InvalidArgumentError("n_samples must be an integer >= 2")
        if not 0 < self.attack_fraction < 1:
            raise InvalidArgumentError("attack_fraction must be in (0, 1)")
        if int(self.series_length) != self.series_length or self.series_length < 1:
            raise InvalidArgumentError("series_length must be a positive integer")
        if int(self.seed) != self.seed:
            raise InvalidArgumentError("seed must be an integer")

    @property
    def n_attack(self) -> int:
        return int(round(self.n_samples * self.attack_fraction))

    @property
    def n_normal(self) -> int:
        return self.n_samples - self.n_attack

    def droop(self, q):
        """Noiseless frequency deviation on the droop curve at ``q``."""
        return -self.k1 * q - self.k3 * q**3

    def frequency_shift(self, q):
        """Frequency component of the attack vector for a row at ``q``."""
        return self.droop(q + self.delta_q) - self.droop(q) + self.delta_f

    def max_frequency_shift(self) -> float:
        """Largest ``|a_f|`` over the walk limits.

        ``a_f`` is quadratic in ``q``, so the extremes are the two limits and
        the vertex at ``-delta_q / 2``.
        """
        qs = [self.q_min, self.q_max]
        if self.q_min < -self.delta_q / 2 < self.q_max:
            qs.append(-self.delta_q / 2)
        return float(np.max(np.abs(self.frequency_shift(np.array(qs)))))

    def replace(self, **changes) -> "GeneratorConfig":
        return dataclasses.replace(self, **changes)


# ---------------------------------------------------------------------------
# plain-text key = value config files


def dump_config(config: GeneratorConfig) -> str:
    return "".join(f"{f.name} = {getattr(config, f.name)!r}\n" for f in fields(config))


def parse_config(text: str) -> GeneratorConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment.

    Unknown keys and unparseable values raise :class:`InvalidArgumentError`
    naming the key. Missing keys keep their defaults.
    """
    types = {f.name: f.type for f in fields(GeneratorConfig)}
    values: dict[str, float | int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in types:
            raise InvalidArgumentError(f"unknown config key {key!r} (line {lineno})")
        try:
            values[key] = int(value) if types[key] == "int" else float(value)
        except ValueError:
            raise InvalidArgumentError(
                f"bad value for config key {key!r}: {value!r} (line {lineno})"
            ) from None
    return GeneratorConfig(**values)


def load_config(path) -> GeneratorConfig:
    return parse_config(Path(path).read_text())


# ---------------------------------------------------------------------------
# generation


def _truncated_normal(rng: np.random.Generator, sigma: float, clip: float, size: int) -> np.ndarray:
    return sigma * np.clip(rng.standard_normal(size), -clip, clip)


def _reflect(q: float, lo: float, hi: float) -> float:
    if hi == lo:
        return lo
    width = hi - lo
    r = (q - lo) % (2 * width)
    return lo + (r if r <= width else 2 * width - r)


def reactive_power_walk(config: GeneratorConfig, n: int, rng: np.random.Generator) -> np.ndarray:
    """Geometric walk around ``q_nominal``, reflected into ``[q_min, q_max]``.

    The log-ratio ``log(Q / q_nominal)`` is a mean-reverting Gaussian walk,
    which gives the right-skewed spread of a set-point with occasional large
    excursions.
    """
    steps = config.sigma_q * rng.standard_normal(n)
    q = np.empty(n)
    log_ratio = 0.0
    for k in range(n):
        q[k] = _reflect(config.q_nominal * math.exp(log_ratio), config.q_min, config.q_max)
        log_ratio += -config.q_reversion * log_ratio + steps[k]
    return q


def normal_from_q(config: GeneratorConfig, q: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Measurement rows ``(q, f_dev, v1)`` for the given reactive-power values."""
    n = q.size
    f_dev = config.droop(q) + _truncated_normal(rng, config.sigma_f, config.noise_clip, n)
    v1 = config.v0 - config.kv * q + _truncated_normal(rng, config.sigma_v, config.noise_clip, n)
    return np.column_stack([q, f_dev, v1])


def generate_normal(config: GeneratorConfig, n: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """``n`` consecutive normal-operation rows as an ``(n, 3)`` array (label 0)."""
    if int(n) != n or n < 1:
        raise InvalidArgumentError("n must be a positive integer")
    if rng is None:
        rng = np.random.default_rng(config.seed)
    q = reactive_power_walk(config, int(n), rng)
    return normal_from_q(config, q, rng)


def attack_vector(config: GeneratorConfig, normal_rows) -> np.ndarray:
    """Perturbation ``(a_q, a_f, a_v)`` for each normal row, bounds checked."""
    X = np.atleast_2d(np.asarray(normal_rows, dtype=float))[:, :3]
    q = X[:, 0]
    a = np.empty_like(X)
    a[:, 0] = config.delta_q
    a[:, 1] = config.frequency_shift(q)
    a[:, 2] = config.delta_v
    for i, comp in enumerate(("q", "f", "v")):
        bound = getattr(config, f"bound_{comp}")
        worst = int(np.argmax(np.abs(a[:, i])))
        if abs(a[worst, i]) > bound * (1 + 1e-12):
            raise StealthViolationError(f"a_{comp}", float(a[worst, i]), bound)
    return a


def inject_stealth(config: GeneratorConfig, normal_rows):
    """Corrupt normal rows, ``z + a``. Returns the same shape as the input.

    A single :class:`RawSample` comes back as a RawSample labelled 1.
    """
    if isinstance(normal_rows, RawSample):
        out = inject_stealth(config, np.array(normal_rows[:3], dtype=float))
        return RawSample(*map(float, out), label=1)
    X = np.asarray(normal_rows, dtype=float)
    flat = np.atleast_2d(X)[:, :3]
    out = flat + attack_vector(config, flat)
    return out.reshape(X.shape[:-1] + (3,)) if X.ndim == 1 else out


def normal_envelope(config: GeneratorConfig, normal_rows) -> tuple[np.ndarray, np.ndarray]:
    """Per-feature ``[min - bound, max + bound]`` of normal rows."""
    X = np.asarray(normal_rows, dtype=float)[:, :3]
    bounds = np.array([config.bound_q, config.bound_f, config.bound_v])
    return X.min(axis=0) - bounds, X.max(axis=0) + bounds


# ---------------------------------------------------------------------------
# dataset assembly


@dataclass
class LabeledDataset:
    X: np.ndarray  # (n, 3): q_dg1, f_dev, v1
    y: np.ndarray  # (n,) 0 = normal, 1 = attack
    config: GeneratorConfig | None = None
    split: np.ndarray | None = None  # bool, True = train
    series: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return self.y.size

    def rows(self) -> list[RawSample]:
        return [RawSample(*map(float, x), label=int(lbl)) for x, lbl in zip(self.X, self.y)]

    @property
    def train(self) -> tuple[np.ndarray, np.ndarray]:
        self._require_split()
        return self.X[self.split], self.y[self.split]

    @property
    def test(self) -> tuple[np.ndarray, np.ndarray]:
        self._require_split()
        return self.X[~self.split], self.y[~self.split]

    def _require_split(self):
        if self.split is None:
            raise InvalidArgumentError("dataset has no split assignment")


def _subsample(n_total: int, n: int) -> np.ndarray:
    if n > n_total:
        raise InvalidArgumentError(f"cannot draw {n} rows from a series of {n_total}")
    return np.linspace(0, n_total - 1, n).round().astype(int)


def generate_series(config: GeneratorConfig) -> dict[str, np.ndarray]:
    """Normal and attack time series, each ``series_length`` rows long.

    The attack series is injected into its own independently generated
    normal series. ``baseline`` holds that series before injection.
    """
    root = np.random.SeedSequence(config.seed)
    normal_rng, attack_rng = (np.random.default_rng(s) for s in root.spawn(2))
    normal = generate_normal(config, config.series_length, normal_rng)
    baseline = generate_normal(config, config.series_length, attack_rng)
    return {"normal": normal, "baseline": baseline, "attack": inject_stealth(config, baseline)}


def stealthy_indices(config: GeneratorConfig, attack_rows, normal_rows) -> np.ndarray:
    """Indices of corrupted rows lying inside the envelope of ``normal_rows``."""
    lo, hi = normal_envelope(config, normal_rows)
    A = np.asarray(attack_rows, dtype=float)[:, :3]
    return np.flatnonzero(np.all((A >= lo) & (A <= hi), axis=1))


def build_dataset(config: GeneratorConfig = GeneratorConfig()) -> LabeledDataset:
    """``n_samples`` rows, normal rows first.

    Normal rows are subsampled uniformly from the normal series. The attacker
    only strikes at moments where the corrupted row stays inside the normal
    operating envelope (normal min/max widened by the stealth bounds), so
    attack rows are subsampled uniformly from those moments of the attack
    series.
    """
    series = generate_series(config)
    normal = series["normal"][_subsample(config.series_length, config.n_normal)]
    feasible = stealthy_indices(config, series["attack"], normal)
    if feasible.size < config.n_attack:
        raise InvalidArgumentError(
            f"only {feasible.size} attack moments stay inside the normal envelope; "
            f"{config.n_attack} needed"
        )
    attack = series["attack"][feasible[_subsample(feasible.size, config.n_attack)]]
    X = np.vstack([normal, attack])
    y = np.concatenate([np.zeros(config.n_normal, dtype=int), np.ones(config.n_attack, dtype=int)])
    return LabeledDataset(X, y, config, series=series)


def stratified_split(y, train_fraction: float = 0.7, seed: int = 42) -> np.ndarray:
    """Boolean train mask holding ``round(fraction * size)`` rows of each class.

    Each class is shuffled with its own stream derived from ``seed``.
    """
    y = np.asarray(y)
    if not 0 < train_fraction < 1:
        raise InvalidArgumentError("train_fraction must be in (0, 1)")
    classes = np.unique(y)
    if classes.size < 2:
        raise InvalidArgumentError("both classes are required for a stratified split")
    mask = np.zeros(y.size, dtype=bool)
    streams = np.random.SeedSequence(seed).spawn(classes.size)
    for cls, ss in zip(classes, streams):
        idx = np.flatnonzero(y == cls)
        n_train = int(math.floor(train_fraction * idx.size + 0.5))
        if not 0 < n_train < idx.size:
            raise InvalidArgumentError(
                f"class {cls} with {idx.size} rows cannot be split at {train_fraction}"
            )
        chosen = np.random.default_rng(ss).permutation(idx)[:n_train]
        mask[chosen] = True
    return mask


def split_hash(mask) -> str:
    """Short digest of the train row indices, for cross-checking runs."""
    idx = np.flatnonzero(np.asarray(mask, dtype=bool)).astype("<i8")
    return hashlib.sha256(idx.tobytes()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# CSV I/O


def _fmt(x: float) -> str:
    return repr(float(x))


def dataset_csv(dataset: LabeledDataset) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DATASET_HEADER)
    for i, (x, lbl) in enumerate(zip(dataset.X, dataset.y)):
        w.writerow([i, *map(_fmt, x), int(lbl)])
    return buf.getvalue()


def series_csv(config: GeneratorConfig, series: dict[str, np.ndarray]) -> str:
    """Normal series followed by attack series, each timed from zero."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SERIES_HEADER)
    for label, key in ((0, "normal"), (1, "attack")):
        for k, x in enumerate(series[key]):
            w.writerow([_fmt(k * config.sample_period), *map(_fmt, x), label])
    return buf.getvalue()


def _read_csv(path, header: tuple[str, ...]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            got = tuple(next(reader))
        except StopIteration:
            raise InvalidArgumentError(f"{path}: empty file") from None
        if got != header:
            raise InvalidArgumentError(f"{path}: expected header {','.join(header)}")
        rows = list(reader)
    if not rows:
        raise InvalidArgumentError(f"{path}: no data rows")
    try:
        first = np.array([float(r[0]) for r in rows])
        X = np.array([[float(v) for v in r[1:4]] for r in rows])
        y = np.array([int(r[4]) for r in rows])
    except (ValueError, IndexError) as exc:
        raise InvalidArgumentError(f"{path}: malformed row ({exc})") from None
    if not np.isin(y, (0, 1)).all() or not np.all(np.isfinite(X)):
        raise InvalidArgumentError(f"{path}: labels must be 0/1 and features finite")
    return first, X, y


def read_dataset_csv(path) -> LabeledDataset:
    _, X, y = _read_csv(path, DATASET_HEADER)
    return LabeledDataset(X, y)


def read_series_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(t, X, label)`` arrays from a series CSV."""
    return _read_csv(path, SERIES_HEADER)
