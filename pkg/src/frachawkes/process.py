"""Fractional Hawkes process: conditional intensity and thinning simulation.

The conditional intensity is

    lambda(t | H_t) = lam + alpha * sum_{t_i < t} f_beta(t - t_i)

with the Mittag-Leffler density f_beta as excitation kernel and branching
ratio alpha < 1 for stability.  Simulation follows Ogata's thinning loop: the
dominating rate is the intensity evaluated a small epsilon after the current
time (valid because f_beta is completely monotone, hence decreasing between
events), candidates arrive with exponential gaps at that rate, and each is
accepted with probability lambda(tau|H)/M.
"""

from dataclasses import dataclass, field, replace
import json

import numpy as np
from numpy.polynomial.legendre import leggauss

from .mlf import mixture_kernel, mlf_pdf

__all__ = [
    "ModelParams",
    "ThinningConfig",
    "EventSequence",
    "IntensityPath",
    "ThinningDiagnostics",
    "SimulationCapError",
    "conditional_intensity",
    "simulate",
    "intensity_path",
    "replicate_counts",
]

_SUPPORTED_RNGS = {"pcg64": np.random.PCG64}


class SimulationCapError(RuntimeError):
    """Accepted events exceeded the configured safety cap."""


@dataclass(frozen=True)
class ModelParams:
    """Full specification of one fractional Hawkes process.

    lam    baseline rate (events per unit time), > 0
    alpha  branching ratio, in [0, 1) for stability
    beta   kernel exponent, in (0, 1]; beta = 1 is the exponential kernel
    """

    lam: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.lam > 0.0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must be in [0, 1) for stability, got {self.alpha}")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")

    def as_dict(self):
        return {"lambda": self.lam, "alpha": self.alpha, "beta": self.beta}

    @classmethod
    def from_dict(cls, d):
        return cls(lam=d["lambda"], alpha=d["alpha"], beta=d["beta"])


@dataclass(frozen=True)
class ThinningConfig:
    """Knobs of the thinning loop.

    epsilon        shift used for the dominating rate M = lambda(t+eps|H);
                   also the minimum lag at which the singular kernel is
                   evaluated
    max_events     safety cap on accepted events per run
    rng_algorithm  named bit generator, for cross-platform reproducibility
    markov_nodes   if set, the history sum is replaced by a discretized
                   exponential mixture with this many nodes (O(nodes) state
                   updates instead of O(history) sums); exact mode when None
    """

    epsilon: float = 1e-10
    max_events: int = 1_000_000
    rng_algorithm: str = "pcg64"
    markov_nodes: int | None = None

    def __post_init__(self):
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_events < 1:
            raise ValueError("max_events must be at least 1")
        if self.rng_algorithm not in _SUPPORTED_RNGS:
            raise ValueError(
                f"unknown rng_algorithm {self.rng_algorithm!r}; "
                f"supported: {sorted(_SUPPORTED_RNGS)}"
            )
        if self.markov_nodes is not None and self.markov_nodes < 8:
            raise ValueError("markov_nodes must be >= 8 when set")


@dataclass
class ThinningDiagnostics:
    """Counters from one thinning run."""

    candidates: int = 0
    accepted: int = 0
    # times the acceptance ratio exceeded 1 and was clamped (candidate gap
    # shorter than epsilon, where M is not a valid bound)
    clamped: int = 0


@dataclass
class EventSequence:
    """Ordered event epochs on [0, horizon] plus everything needed to redo the run."""

    epochs: np.ndarray
    horizon: float
    seed: int
    params: ModelParams
    diagnostics: ThinningDiagnostics | None = field(default=None, compare=False)

    def __post_init__(self):
        self.epochs = np.asarray(self.epochs, dtype=float)
        if self.epochs.size:
            if np.any(np.diff(self.epochs) <= 0.0):
                raise ValueError("epochs must be strictly increasing")
            if self.epochs[0] < 0.0 or self.epochs[-1] > self.horizon:
                raise ValueError("epochs must lie in [0, horizon]")

    def __len__(self):
        return len(self.epochs)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write("t\n")
            for t in self.epochs:
                fh.write(f"{t:.17g}\n")

    @classmethod
    def from_csv(cls, path, horizon, seed, params):
        epochs = np.loadtxt(path, skiprows=1, ndmin=1)
        return cls(epochs=epochs, horizon=horizon, seed=seed, params=params)

    def to_json(self, path=None):
        doc = {
            "params": self.params.as_dict(),
            "horizon": self.horizon,
            "seed": self.seed,
            "epochs": [float(t) for t in self.epochs],
        }
        if path is None:
            return json.dumps(doc, indent=2)
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)

    @classmethod
    def from_json(cls, source):
        if isinstance(source, str) and source.lstrip().startswith("{"):
            doc = json.loads(source)
        else:
            with open(source) as fh:
                doc = json.load(fh)
        return cls(
            epochs=np.asarray(doc["epochs"], dtype=float),
            horizon=doc["horizon"],
            seed=doc["seed"],
            params=ModelParams.from_dict(doc["params"]),
        )


@dataclass
class IntensityPath:
    """Sampled trajectory of the conditional intensity of one event sequence."""

    grid: np.ndarray
    values: np.ndarray
    source: EventSequence


def _excitation(params, history, t):
    """alpha * sum_{t_i < t} f_beta(t - t_i); history is a sorted array."""
    if len(history) == 0:
        return 0.0
    lags = t - history[history < t]
    if lags.size == 0:
        return 0.0
    return params.alpha * float(np.sum(mlf_pdf(lags, params.beta)))


def conditional_intensity(params, history, t):
    """Conditional intensity lambda(t|H_t) given past event times.

    Raises if t coincides with a history epoch and beta < 1 (the kernel is
    singular at zero lag); shift by a small epsilon instead.
    """
    history = np.asarray(history, dtype=float)
    if params.beta < 1.0 and history.size and np.any(history == t):
        raise ValueError(
            f"intensity is singular at event epoch t={t} for beta < 1; "
            "evaluate at t + epsilon"
        )
    return params.lam + _excitation(params, history, t)


def _mixture_nodes(beta, n_nodes, u_max=25.0):
    """Gauss-Legendre discretization of f_beta as a finite exponential mixture.

    Returns rates theta_j and weights c_j with
    f_beta(t) ~= sum_j c_j exp(-theta_j t), from the substitution
    theta = exp(u) in the continuous mixture.
    """
    u, w = leggauss(n_nodes)
    u = u * u_max
    w = w * u_max
    theta = np.exp(u)
    coeff = w * theta**2 * mixture_kernel(theta, beta)
    return theta, coeff


class _ExactIntensity:
    """Intensity by direct O(history) kernel sums."""

    def __init__(self, params):
        self.params = params
        self.events = []

    def value(self, t):
        p = self.params
        if not self.events:
            return p.lam
        lags = t - np.asarray(self.events)
        return p.lam + p.alpha * float(np.sum(mlf_pdf(lags, p.beta)))

    def add_event(self, t):
        self.events.append(t)


class _MarkovIntensity:
    """Intensity via the discretized exponential mixture; O(nodes) per update.

    State s_j carries the summed, decayed contribution of past events to node
    j; the history sum becomes a dot product.  Only valid for beta < 1 (the
    mixture degenerates at beta = 1).
    """

    def __init__(self, params, n_nodes):
        if params.beta >= 1.0:
            raise ValueError("markov mode requires beta < 1; use exact mode")
        self.params = params
        self.theta, self.coeff = _mixture_nodes(params.beta, n_nodes)
        self.state = np.zeros_like(self.theta)
        self.t_ref = 0.0
        self.events = []

    def value(self, t):
        decay = np.exp(-self.theta * (t - self.t_ref))
        return self.params.lam + self.params.alpha * float(
            np.dot(self.coeff, self.state * decay)
        )

    def add_event(self, t):
        self.state = self.state * np.exp(-self.theta * (t - self.t_ref)) + 1.0
        self.t_ref = t
        self.events.append(t)


def simulate(params, horizon, config=None, seed=0):
    """Simulate one event sequence on [0, horizon] by thinning.

    Implements the eight-step loop: M is the intensity at t + epsilon, the
    candidate gap is exponential with rate M (mean 1/M), acceptance
    probability is lambda(tau|H)/M clamped to 1, and candidates past the
    horizon are discarded.  Deterministic given (params, horizon, config,
    seed).
    """
    if config is None:
        config = ThinningConfig()
    if not horizon > 0.0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    bitgen = _SUPPORTED_RNGS[config.rng_algorithm](seed)
    rng = np.random.Generator(bitgen)

    if config.markov_nodes is not None:
        state = _MarkovIntensity(params, config.markov_nodes)
    else:
        state = _ExactIntensity(params)

    diag = ThinningDiagnostics()
    t = 0.0
    while t < horizon:
        bound = state.value(t + config.epsilon)
        t = t + rng.exponential(1.0 / bound)
        if t > horizon:
            break
        diag.candidates += 1
        ratio = state.value(t) / bound
        if ratio > 1.0:
            diag.clamped += 1
            ratio = 1.0
        if rng.random() < ratio:
            diag.accepted += 1
            if diag.accepted > config.max_events:
                raise SimulationCapError(
                    f"exceeded max_events={config.max_events} before reaching "
                    f"horizon={horizon}; alpha may be too close to 1"
                )
            state.add_event(t)

    return EventSequence(
        epochs=np.asarray(state.events),
        horizon=horizon,
        seed=seed,
        params=params,
        diagnostics=diag,
    )


def intensity_path(seq, grid, epsilon=1e-10):
    """Sample lambda(t|H_t) of an event sequence on a time grid.

    Grid points that collide with an event epoch are shifted by +epsilon so
    the singular kernel is evaluated just past the event, matching what the
    thinning loop itself sees.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size and (grid[0] < 0.0 or grid[-1] > seq.horizon):
        raise ValueError("grid times must lie in [0, horizon]")
    params = seq.params
    shifted = grid.copy()
    if params.beta < 1.0 and seq.epochs.size:
        collide = np.isin(shifted, seq.epochs)
        shifted[collide] += epsilon
    values = np.array(
        [params.lam + _excitation(params, seq.epochs, t) for t in shifted]
    )
    return IntensityPath(grid=shifted, values=values, source=seq)


def child_seeds(master_seed, n):
    """Per-replication seeds derived from a master seed.

    Split rule: numpy SeedSequence(master_seed).spawn(n), one child stream
    per replication; documented so runs can be reproduced replication by
    replication.
    """
    return np.random.SeedSequence(master_seed).spawn(n)


def _run_one(args):
    params, horizon, config, child = args
    rng_seed = child.generate_state(2)
    # fold the child entropy into a single 64-bit seed for EventSequence
    seed = int(rng_seed[0]) << 32 | int(rng_seed[1])
    return len(simulate(params, horizon, config, seed=seed))


def replicate_counts(params, horizon, config=None, master_seed=0, n=1000, jobs=1):
    """Event counts N(horizon) over n independent replications.

    Replications use independent RNG streams split from master_seed (see
    child_seeds); with jobs > 1 they run in a process pool.
    """
    if config is None:
        config = ThinningConfig()
    children = child_seeds(master_seed, n)
    work = [(params, horizon, config, c) for c in children]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            counts = list(pool.map(_run_one, work, chunksize=max(1, n // (8 * jobs))))
    else:
        counts = [_run_one(w) for w in work]
    return np.asarray(counts, dtype=int)
