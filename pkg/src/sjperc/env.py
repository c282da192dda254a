"""Weight distributions and reproducible weight environments on the quadrant.

Every vertex (i, j) of the nonnegative quadrant carries a Bernoulli switch
B(i,j) plus two candidate weights xi(i,j) and eta(i,j).  The incoming
horizontal edge (i-1,j) -> (i,j) gets weight B*xi and the incoming vertical
edge (i,j-1) -> (i,j) gets weight (1-B)*eta, so exactly one incoming edge of
every vertex is free.

Randomness is counter-based: each (seed, stream, row) triple keys an
independent Philox stream, and the value at column i is the i-th draw of
that stream.  Values are therefore a pure function of (seed, stream, i, j),
independent of evaluation order, sub-rectangle extents and parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1
_INV_2_53 = 2.0**-53

STREAM_SWITCH = 0
STREAM_XI = 1
STREAM_ETA = 2


class ConfigurationError(ValueError):
    """Invalid distribution, environment or experiment parameters."""


def _uniform_row(seed: int, stream: int, row: int, count: int) -> np.ndarray:
    """Uniform [0,1) draws 0..count-1 of the (seed, stream, row) stream."""
    key = np.array([seed & _MASK64, ((stream << 56) | row) & _MASK64], dtype=np.uint64)
    raw = np.random.Philox(key=key).random_raw(count)
    return (raw >> np.uint64(11)) * _INV_2_53


@dataclass(frozen=True)
class DistributionSpec:
    """A nonnegative, integrable weight law.

    Supported kinds and params:
      bernoulli (q,)          values {0,1}, P(1)=q
      constant (c,)           the single value c >= 0
      geometric (q,)          support {0,1,2,...}, P(k) = q(1-q)^k
      exponential (rate,)     rate > 0
      scaled_bernoulli (c,q)  values {0,c}, P(c)=q
    """

    kind: str
    params: tuple

    def __post_init__(self):
        p = self.params
        if self.kind in ("bernoulli", "geometric"):
            if len(p) != 1 or not (0.0 <= p[0] <= 1.0):
                raise ConfigurationError(f"{self.kind} needs one probability in [0,1]: {p}")
            if self.kind == "geometric" and p[0] == 0.0:
                raise ConfigurationError("geometric success probability must be positive")
        elif self.kind == "constant":
            if len(p) != 1 or p[0] < 0.0:
                raise ConfigurationError(f"constant needs one value >= 0: {p}")
        elif self.kind == "exponential":
            if len(p) != 1 or p[0] <= 0.0:
                raise ConfigurationError(f"exponential needs a positive rate: {p}")
        elif self.kind == "scaled_bernoulli":
            if len(p) != 2 or p[0] < 0.0 or not (0.0 <= p[1] <= 1.0):
                raise ConfigurationError(f"scaled_bernoulli needs (scale>=0, prob in [0,1]): {p}")
        else:
            raise ConfigurationError(f"unknown distribution kind: {self.kind!r}")

    @classmethod
    def bernoulli(cls, q):
        return cls("bernoulli", (float(q),))

    @classmethod
    def constant(cls, c):
        return cls("constant", (float(c),))

    @classmethod
    def geometric(cls, q):
        return cls("geometric", (float(q),))

    @classmethod
    def exponential(cls, rate):
        return cls("exponential", (float(rate),))

    @classmethod
    def scaled_bernoulli(cls, scale, q):
        return cls("scaled_bernoulli", (float(scale), float(q)))

    _TOKENS = {
        "bernoulli": "bernoulli",
        "bern": "bernoulli",
        "const": "constant",
        "constant": "constant",
        "geom": "geometric",
        "geometric": "geometric",
        "exp": "exponential",
        "exponential": "exponential",
        "sbern": "scaled_bernoulli",
        "scaled_bernoulli": "scaled_bernoulli",
    }
    _SHORT = {
        "bernoulli": "bernoulli",
        "constant": "const",
        "geometric": "geom",
        "exponential": "exp",
        "scaled_bernoulli": "sbern",
    }

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        """Parse spec strings like "bernoulli:0.5", "const:1", "sbern:2.0,0.5"."""
        head, sep, tail = text.strip().partition(":")
        kind = cls._TOKENS.get(head.strip().lower())
        if kind is None or not sep:
            raise ConfigurationError(f"cannot parse distribution spec {text!r}")
        try:
            params = tuple(float(tok) for tok in tail.split(","))
        except ValueError:
            raise ConfigurationError(f"bad numeric parameters in {text!r}") from None
        return cls(kind, params)

    def spec_string(self) -> str:
        def fmt(v):
            return str(int(v)) if float(v).is_integer() else repr(v)

        return self._SHORT[self.kind] + ":" + ",".join(fmt(v) for v in self.params)

    def zero_probability(self) -> float:
        """Exact P(value = 0)."""
        if self.kind == "bernoulli":
            return 1.0 - self.params[0]
        if self.kind == "constant":
            return 1.0 if self.params[0] == 0.0 else 0.0
        if self.kind == "geometric":
            return self.params[0]
        if self.kind == "exponential":
            return 0.0
        scale, q = self.params
        return 1.0 if scale == 0.0 else 1.0 - q

    def mean(self) -> float:
        if self.kind == "bernoulli":
            return self.params[0]
        if self.kind == "constant":
            return self.params[0]
        if self.kind == "geometric":
            q = self.params[0]
            return (1.0 - q) / q
        if self.kind == "exponential":
            return 1.0 / self.params[0]
        scale, q = self.params
        return scale * q

    def is_integer_valued(self) -> bool:
        if self.kind in ("bernoulli", "geometric"):
            return True
        if self.kind == "constant":
            return float(self.params[0]).is_integer()
        if self.kind == "scaled_bernoulli":
            return float(self.params[0]).is_integer()
        return False

    def is_indicator(self) -> bool:
        """True when all values lie in {0, 1}."""
        if self.kind == "bernoulli":
            return True
        if self.kind == "constant":
            return self.params[0] in (0.0, 1.0)
        if self.kind == "scaled_bernoulli":
            return self.params[0] in (0.0, 1.0)
        return False

    def transform(self, u):
        """Inverse-transform sampling of uniform draws in [0,1)."""
        u = np.asarray(u, dtype=np.float64)
        if self.kind == "bernoulli":
            return np.where(u < self.params[0], 1.0, 0.0)
        if self.kind == "constant":
            return np.full_like(u, self.params[0])
        if self.kind == "geometric":
            q = self.params[0]
            if q == 1.0:
                return np.zeros_like(u)
            return np.floor(np.log1p(-u) / math.log1p(-q))
        if self.kind == "exponential":
            return -np.log1p(-u) / self.params[0]
        scale, q = self.params
        return np.where(u < q, scale, 0.0)


def sample_value(spec: DistributionSpec, uniform_draw: float) -> float:
    """One inverse-transform sample from a uniform draw in [0,1)."""
    if not 0.0 <= uniform_draw < 1.0:
        raise ValueError(f"uniform draw outside [0,1): {uniform_draw}")
    return float(spec.transform(np.float64(uniform_draw)))


@dataclass(frozen=True)
class EnvironmentConfig:
    """Weight laws for the switch field and the two candidate weights."""

    p_bern: float
    xi_dist: DistributionSpec
    eta_dist: DistributionSpec
    arithmetic_mode: str = "integer"

    def __post_init__(self):
        if not 0.0 <= self.p_bern <= 1.0:
            raise ConfigurationError(f"switch probability outside [0,1]: {self.p_bern}")
        if self.arithmetic_mode not in ("integer", "real"):
            raise ConfigurationError(f"unknown arithmetic mode {self.arithmetic_mode!r}")
        if self.arithmetic_mode == "integer":
            for which, dist in (("xi", self.xi_dist), ("eta", self.eta_dist)):
                if not dist.is_integer_valued():
                    raise ConfigurationError(
                        f"integer mode requires integer-valued {which} law, got {dist.kind}"
                    )

    @property
    def weight_dtype(self):
        return np.int64 if self.arithmetic_mode == "integer" else np.float64


class WeightEnvironment:
    """Immutable random weight field on [0,M] x [0,N], keyed by a 64-bit seed.

    Rows are generated on demand; nothing is stored, so environments of any
    extent are cheap to hold and safe to share across threads/processes.
    """

    def __init__(self, config: EnvironmentConfig, seed: int, extent):
        m_max, n_max = extent
        if m_max < 0 or n_max < 0:
            raise ConfigurationError(f"extent must be nonnegative: {extent}")
        self.config = config
        self.seed = int(seed) & _MASK64
        self.extent = (int(m_max), int(n_max))
        self.arithmetic_mode = config.arithmetic_mode
        self.weight_dtype = config.weight_dtype

    def _check(self, j, m):
        m_max, n_max = self.extent
        if not 0 <= j <= n_max:
            raise IndexError(f"row {j} outside extent {self.extent}")
        if not 0 <= m <= m_max:
            raise IndexError(f"column {m} outside extent {self.extent}")

    def _field_row(self, stream, dist, j, m):
        count = m + 1
        if dist.kind == "constant":  # degenerate law: skip RNG, same values
            values = np.full(count, dist.params[0])
        else:
            values = dist.transform(_uniform_row(self.seed, stream, j, count))
        return values.astype(self.weight_dtype, copy=False)

    def switch_row(self, j, m=None):
        m = self.extent[0] if m is None else m
        self._check(j, m)
        p = self.config.p_bern
        if p in (0.0, 1.0):
            return np.full(m + 1, int(p), dtype=self.weight_dtype)
        u = _uniform_row(self.seed, STREAM_SWITCH, j, m + 1)
        return (u < p).astype(self.weight_dtype)

    def xi_row(self, j, m=None):
        m = self.extent[0] if m is None else m
        self._check(j, m)
        return self._field_row(STREAM_XI, self.config.xi_dist, j, m)

    def eta_row(self, j, m=None):
        m = self.extent[0] if m is None else m
        self._check(j, m)
        return self._field_row(STREAM_ETA, self.config.eta_dist, j, m)

    def rows(self, j, m=None):
        """(switch, xi, eta) arrays for columns 0..m of row j."""
        return self.switch_row(j, m), self.xi_row(j, m), self.eta_row(j, m)

    def horizontal_row(self, j, m=None):
        """Weights B*xi; entry i belongs to edge (i-1,j) -> (i,j), entry 0 unused."""
        return self.switch_row(j, m) * self.xi_row(j, m)

    def vertical_row(self, j, m=None):
        """Weights (1-B)*eta; entry i belongs to edge (i,j-1) -> (i,j)."""
        return (1 - self.switch_row(j, m)) * self.eta_row(j, m)

    def switch_at(self, i, j):
        return int(self.switch_row(j, m=i)[i])

    def xi_at(self, i, j):
        return self.xi_row(j, m=i)[i].item()

    def eta_at(self, i, j):
        return self.eta_row(j, m=i)[i].item()


class ArrayEnvironment:
    """Weight field backed by explicit arrays, indexed [j, i] (row-major in j).

    Used for hand-built instances and for recombining fields of sampled
    environments (e.g. swapping in a foreign eta field).
    """

    def __init__(self, switch, xi, eta, arithmetic_mode="integer"):
        switch = np.asarray(switch)
        xi = np.asarray(xi)
        eta = np.asarray(eta)
        if not (switch.shape == xi.shape == eta.shape) or switch.ndim != 2:
            raise ConfigurationError("switch/xi/eta must be equal-shape 2-d arrays")
        if not np.isin(switch, (0, 1)).all():
            raise ConfigurationError("switch field must be 0/1 valued")
        if arithmetic_mode not in ("integer", "real"):
            raise ConfigurationError(f"unknown arithmetic mode {arithmetic_mode!r}")
        self.arithmetic_mode = arithmetic_mode
        self.weight_dtype = np.int64 if arithmetic_mode == "integer" else np.float64
        if arithmetic_mode == "integer":
            for name, arr in (("xi", xi), ("eta", eta)):
                if not np.equal(np.floor(arr), arr).all():
                    raise ConfigurationError(f"integer mode requires integral {name} values")
        self._switch = switch.astype(self.weight_dtype)
        self._xi = xi.astype(self.weight_dtype)
        self._eta = eta.astype(self.weight_dtype)
        n_rows, n_cols = switch.shape
        self.extent = (n_cols - 1, n_rows - 1)
        self.config = None

    def _check(self, j, m):
        m_max, n_max = self.extent
        if not 0 <= j <= n_max:
            raise IndexError(f"row {j} outside extent {self.extent}")
        if not 0 <= m <= m_max:
            raise IndexError(f"column {m} outside extent {self.extent}")

    def _slice(self, field, j, m):
        m = self.extent[0] if m is None else m
        self._check(j, m)
        return field[j, : m + 1]

    def switch_row(self, j, m=None):
        return self._slice(self._switch, j, m)

    def xi_row(self, j, m=None):
        return self._slice(self._xi, j, m)

    def eta_row(self, j, m=None):
        return self._slice(self._eta, j, m)

    def rows(self, j, m=None):
        return self.switch_row(j, m), self.xi_row(j, m), self.eta_row(j, m)

    def horizontal_row(self, j, m=None):
        return self.switch_row(j, m) * self.xi_row(j, m)

    def vertical_row(self, j, m=None):
        return (1 - self.switch_row(j, m)) * self.eta_row(j, m)

    def switch_at(self, i, j):
        return int(self._switch[j, i])

    def xi_at(self, i, j):
        return self._xi[j, i].item()

    def eta_at(self, i, j):
        return self._eta[j, i].item()


def sample_environment(config: EnvironmentConfig, seed: int, extent) -> WeightEnvironment:
    """New reproducible environment; identical (config, seed) give identical fields."""
    return WeightEnvironment(config, seed, extent)


def materialize(env, m=None, n=None):
    """Dense (switch, xi, eta) arrays of shape (n+1, m+1) for small rectangles."""
    m = env.extent[0] if m is None else m
    n = env.extent[1] if n is None else n
    rows = [env.rows(j, m) for j in range(n + 1)]
    return tuple(np.stack([r[k] for r in rows]) for k in range(3))


def edge_weight(env, edge) -> float:
    """Weight of one edge, given as (orientation, i, j) with head vertex (i,j).

    Orientation "H" is the edge (i-1,j) -> (i,j), "V" is (i,j-1) -> (i,j).
    """
    orientation, i, j = edge
    m_max, n_max = env.extent
    if not (0 <= i <= m_max and 0 <= j <= n_max):
        raise IndexError(f"vertex ({i},{j}) outside extent {env.extent}")
    if orientation == "H":
        if i < 1:
            raise IndexError("horizontal edge needs i >= 1")
        return (env.switch_at(i, j) * env.xi_at(i, j))
    if orientation == "V":
        if j < 1:
            raise IndexError("vertical edge needs j >= 1")
        return ((1 - env.switch_at(i, j)) * env.eta_at(i, j))
    raise ValueError(f"orientation must be 'H' or 'V', got {orientation!r}")
