"""Synthetic input models with seeded, reproducible sampling.

Three families are supported:

* :class:`ProductSpec` - every ``x_i`` independent with its own distribution;
* :class:`LinearClassSpec` - hidden classes whose members are distinct linear
  functions of one shared random parameter, plus constant (degenerate) indices;
* :class:`MixtureSpec` - a hidden mixture of product distributions.

All indices are 0-based. Sampling uses numpy's PCG64 generator seeded with a
64-bit integer so every run can be replayed from its recorded seed.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np

from .errors import SpecError, TooLargeForOracle

FORMAT_VERSION = 1
_KINDS = ("uniform", "gaussian", "discrete", "constant")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True)
class ScalarDist:
    """One real-valued distribution.

    ``params`` by kind: uniform ``(a, b)``, gaussian ``(mean, sd)``,
    discrete ``(values, probs)``, constant ``(c,)``.
    """

    kind: str
    params: tuple

    @classmethod
    def uniform(cls, a, b):
        return cls("uniform", (float(a), float(b)))

    @classmethod
    def gaussian(cls, mean, sd):
        return cls("gaussian", (float(mean), float(sd)))

    @classmethod
    def discrete(cls, values, probs):
        return cls("discrete", (tuple(float(v) for v in values), tuple(float(p) for p in probs)))

    @classmethod
    def constant(cls, c):
        return cls("constant", (float(c),))

    def validate(self, path="dist"):
        if self.kind not in _KINDS:
            raise SpecError(path, f"unknown distribution kind {self.kind!r}")
        p = self.params
        if self.kind == "uniform":
            if not (len(p) == 2 and all(math.isfinite(v) for v in p) and p[0] < p[1]):
                raise SpecError(path, "uniform needs finite a < b")
        elif self.kind == "gaussian":
            if not (len(p) == 2 and math.isfinite(p[0]) and p[1] > 0 and math.isfinite(p[1])):
                raise SpecError(path, "gaussian needs finite mean and sd > 0")
        elif self.kind == "discrete":
            values, probs = p
            if len(values) == 0 or len(values) != len(probs):
                raise SpecError(path, "discrete needs equally long, non-empty values and probs")
            if any(q <= 0 for q in probs):
                raise SpecError(path + ".probs", "probabilities must be positive")
            if abs(sum(probs) - 1.0) > 1e-9:
                raise SpecError(path + ".probs", "probabilities must sum to 1")
            if not all(math.isfinite(v) for v in values):
                raise SpecError(path + ".values", "values must be finite")
        else:
            if not (len(p) == 1 and math.isfinite(p[0])):
                raise SpecError(path, "constant needs one finite value")

    def max_point_mass(self) -> float:
        if self.kind == "constant":
            return 1.0
        if self.kind == "discrete":
            mass = Counter()
            for v, q in zip(*self.params):
                mass[v] += q
            return max(mass.values())
        return 0.0

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        p = self.params
        if self.kind == "uniform":
            return rng.uniform(p[0], p[1], size=size)
        if self.kind == "gaussian":
            return rng.normal(p[0], p[1], size=size)
        if self.kind == "discrete":
            return rng.choice(np.asarray(p[0]), size=size, p=np.asarray(p[1]))
        return np.full(size, p[0])

    def to_dict(self) -> dict:
        p = self.params
        if self.kind == "uniform":
            return {"kind": "uniform", "a": p[0], "b": p[1]}
        if self.kind == "gaussian":
            return {"kind": "gaussian", "mean": p[0], "sd": p[1]}
        if self.kind == "discrete":
            return {"kind": "discrete", "values": list(p[0]), "probs": list(p[1])}
        return {"kind": "constant", "c": p[0]}

    @classmethod
    def from_dict(cls, d: dict, path="dist") -> "ScalarDist":
        try:
            kind = d["kind"]
            if kind == "uniform":
                out = cls.uniform(d["a"], d["b"])
            elif kind == "gaussian":
                out = cls.gaussian(d["mean"], d["sd"])
            elif kind == "discrete":
                out = cls.discrete(d["values"], d["probs"])
            elif kind == "constant":
                out = cls.constant(d["c"])
            else:
                raise SpecError(path + ".kind", f"unknown distribution kind {kind!r}")
        except KeyError as exc:
            raise SpecError(path, f"missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise SpecError(path, str(exc)) from None
        out.validate(path)
        return out


def _sample_columns(dists, rng, rows: int) -> np.ndarray:
    """Draw ``rows`` independent rows from a list of per-column distributions."""
    n = len(dists)
    out = np.empty((rows, n))
    groups: dict[str, list[int]] = {}
    for i, d in enumerate(dists):
        groups.setdefault(d.kind, []).append(i)
    for kind in _KINDS:
        cols = groups.get(kind)
        if not cols:
            continue
        if kind == "uniform":
            lo = np.array([dists[i].params[0] for i in cols])
            hi = np.array([dists[i].params[1] for i in cols])
            out[:, cols] = rng.uniform(lo, hi, size=(rows, len(cols)))
        elif kind == "gaussian":
            mu = np.array([dists[i].params[0] for i in cols])
            sd = np.array([dists[i].params[1] for i in cols])
            out[:, cols] = rng.normal(mu, sd, size=(rows, len(cols)))
        elif kind == "constant":
            out[:, cols] = np.array([dists[i].params[0] for i in cols])
        else:
            for i in cols:
                out[:, i] = dists[i].draw(rng, rows)
    return out


@dataclass(frozen=True)
class ProductSpec:
    dists: tuple

    @property
    def n(self) -> int:
        return len(self.dists)

    def validate(self):
        if self.n < 1:
            raise SpecError("dists", "need at least one index")
        for i, d in enumerate(self.dists):
            d.validate(f"dists[{i}]")

    def sample_batch(self, rng, count: int) -> np.ndarray:
        return _sample_columns(self.dists, rng, count)


@dataclass(frozen=True)
class LinearClassSpec:
    """Hidden linear classes: ``x_i = slope_i * z_k + intercept_i`` for ``i`` in class ``k``."""

    n: int
    degenerates: dict
    classes: tuple
    coeffs: dict
    parameter_dists: tuple
    rho: float = 0.5

    def validate(self):
        if self.n < 1:
            raise SpecError("n", "must be positive")
        if not 0 < self.rho < 1:
            raise SpecError("rho", "must lie in (0, 1)")
        seen = {}
        for i, c in self.degenerates.items():
            if not 0 <= i < self.n:
                raise SpecError(f"degenerates[{i}]", "index out of range")
            if not math.isfinite(c):
                raise SpecError(f"degenerates[{i}]", "value must be finite")
            seen[i] = "degenerates"
        if len(self.parameter_dists) != len(self.classes):
            raise SpecError("parameter_dists", "need one parameter distribution per class")
        for k, members in enumerate(self.classes):
            path = f"classes[{k}]"
            if not members:
                raise SpecError(path, "empty class")
            pairs = set()
            for i in members:
                if not 0 <= i < self.n:
                    raise SpecError(path, f"index {i} out of range")
                if i in seen:
                    raise SpecError(path, f"index {i} already used by {seen[i]}")
                seen[i] = path
                if i not in self.coeffs:
                    raise SpecError(f"coeffs[{i}]", "missing line for class member")
                a, b = self.coeffs[i]
                if a == 0 or not (math.isfinite(a) and math.isfinite(b)):
                    raise SpecError(f"coeffs[{i}]", "slope must be finite and nonzero")
                if (a, b) in pairs:
                    raise SpecError(f"coeffs[{i}]", "duplicate line within class")
                pairs.add((a, b))
            dist = self.parameter_dists[k]
            dist.validate(f"parameter_dists[{k}]")
            if dist.max_point_mass() > 1 - self.rho + 1e-12:
                raise SpecError(f"parameter_dists[{k}]", "point mass exceeds 1 - rho")
        missing = [i for i in range(self.n) if i not in seen]
        if missing:
            raise SpecError("classes", f"indices {missing} belong to no class")

    def partition(self) -> tuple:
        """Ground-truth classes as sorted tuples, ordered by smallest member."""
        return tuple(sorted(tuple(sorted(c)) for c in self.classes))

    def linear_map(self, z) -> np.ndarray:
        """Instances for given per-class parameters; ``z`` has shape ``(g,)`` or ``(rows, g)``."""
        z = np.asarray(z, dtype=float)
        single = z.ndim == 1
        z = np.atleast_2d(z)
        out = np.empty((z.shape[0], self.n))
        for i, c in self.degenerates.items():
            out[:, i] = c
        for k, members in enumerate(self.classes):
            idx = list(members)
            a = np.array([self.coeffs[i][0] for i in idx])
            b = np.array([self.coeffs[i][1] for i in idx])
            out[:, idx] = z[:, k : k + 1] * a + b
        return out[0] if single else out

    def sample_batch(self, rng, count: int) -> np.ndarray:
        z = np.empty((count, len(self.classes)))
        for k, d in enumerate(self.parameter_dists):
            z[:, k] = d.draw(rng, count)
        return self.linear_map(z)


@dataclass(frozen=True)
class MixtureSpec:
    """``components`` is a tuple of ``(weight, per-index dists)``; ``m`` bounds their number."""

    n: int
    components: tuple
    m: int = field(default=0)

    def __post_init__(self):
        if self.m == 0:
            object.__setattr__(self, "m", len(self.components))

    @property
    def kappa(self) -> int:
        return len(self.components)

    def validate(self):
        if self.n < 1:
            raise SpecError("n", "must be positive")
        if not self.components:
            raise SpecError("components", "need at least one component")
        if self.kappa > self.m:
            raise SpecError("m", f"kappa={self.kappa} exceeds m={self.m}")
        total = 0.0
        for q, (w, dists) in enumerate(self.components):
            if not w > 0:
                raise SpecError(f"components[{q}].weight", "must be positive")
            total += w
            if len(dists) != self.n:
                raise SpecError(f"components[{q}].dists", f"expected {self.n} distributions")
            for i, d in enumerate(dists):
                d.validate(f"components[{q}].dists[{i}]")
        if abs(total - 1.0) > 1e-9:
            raise SpecError("components", "weights must sum to 1")

    def sample_batch(self, rng, count: int) -> np.ndarray:
        weights = np.array([w for w, _ in self.components])
        which = rng.choice(self.kappa, size=count, p=weights / weights.sum())
        out = np.empty((count, self.n))
        for q, (_, dists) in enumerate(self.components):
            rows = np.flatnonzero(which == q)
            if rows.size:
                out[rows] = _sample_columns(dists, rng, rows.size)
        return out


Spec = Union[ProductSpec, LinearClassSpec, MixtureSpec]


def sample(spec: Spec, rng: np.random.Generator) -> np.ndarray:
    return spec.sample_batch(rng, 1)[0]


def sample_batch(spec: Spec, rng: np.random.Generator, count: int) -> np.ndarray:
    return spec.sample_batch(rng, count)


def instance_stream(spec: Spec, seed: int, count: int | None = None, chunk: int = 2048) -> Iterator[np.ndarray]:
    """Yield instances one at a time; unbounded when ``count`` is None."""
    rng = make_rng(seed)
    produced = 0
    while count is None or produced < count:
        k = chunk if count is None else min(chunk, count - produced)
        for row in spec.sample_batch(rng, k):
            yield row
        produced += k


def estimate_perm_entropy(spec: Spec, trials: int = 100_000, seed: int = 0) -> float:
    """Plug-in entropy (bits) of the rank permutation of a sampled instance."""
    if spec.n > 8:
        raise TooLargeForOracle(f"n={spec.n} exceeds 8")
    if trials < 10_000:
        raise ValueError("need at least 10^4 trials")
    rows = spec.sample_batch(make_rng(seed), trials)
    perms = np.argsort(rows, axis=1, kind="stable")
    _, counts = np.unique(perms, axis=0, return_counts=True)
    p = counts / trials
    return float(-(p * np.log2(p)).sum())


# --- serialization ---------------------------------------------------------


def spec_to_dict(spec: Spec) -> dict:
    if isinstance(spec, ProductSpec):
        return {"format_version": FORMAT_VERSION, "type": "product",
                "dists": [d.to_dict() for d in spec.dists]}
    if isinstance(spec, LinearClassSpec):
        return {
            "format_version": FORMAT_VERSION,
            "type": "linear",
            "n": spec.n,
            "rho": spec.rho,
            "degenerates": [[i, c] for i, c in sorted(spec.degenerates.items())],
            "classes": [
                {
                    "members": [[i, spec.coeffs[i][0], spec.coeffs[i][1]] for i in members],
                    "parameter": spec.parameter_dists[k].to_dict(),
                }
                for k, members in enumerate(spec.classes)
            ],
        }
    if isinstance(spec, MixtureSpec):
        return {
            "format_version": FORMAT_VERSION,
            "type": "mixture",
            "n": spec.n,
            "m": spec.m,
            "components": [
                {"weight": w, "dists": [d.to_dict() for d in dists]} for w, dists in spec.components
            ],
        }
    raise TypeError(f"not a spec: {spec!r}")


def _need(d, key, path):
    if key not in d:
        raise SpecError(f"{path}.{key}" if path else key, "missing field")
    return d[key]


def spec_from_dict(d: dict) -> Spec:
    version = d.get("format_version")
    if version != FORMAT_VERSION:
        raise SpecError("format_version", f"expected {FORMAT_VERSION}, got {version!r}")
    kind = _need(d, "type", "")
    try:
        if kind == "product":
            spec = ProductSpec(tuple(ScalarDist.from_dict(x, f"dists[{i}]")
                                     for i, x in enumerate(_need(d, "dists", ""))))
        elif kind == "linear":
            classes, coeffs, params = [], {}, []
            for k, c in enumerate(_need(d, "classes", "")):
                members = []
                for j, (i, a, b) in enumerate(_need(c, "members", f"classes[{k}]")):
                    members.append(int(i))
                    coeffs[int(i)] = (float(a), float(b))
                classes.append(tuple(members))
                params.append(ScalarDist.from_dict(_need(c, "parameter", f"classes[{k}]"),
                                                   f"classes[{k}].parameter"))
            spec = LinearClassSpec(
                n=int(_need(d, "n", "")),
                degenerates={int(i): float(c) for i, c in d.get("degenerates", [])},
                classes=tuple(classes),
                coeffs=coeffs,
                parameter_dists=tuple(params),
                rho=float(d.get("rho", 0.5)),
            )
        elif kind == "mixture":
            comps = []
            for q, c in enumerate(_need(d, "components", "")):
                dists = tuple(ScalarDist.from_dict(x, f"components[{q}].dists[{i}]")
                              for i, x in enumerate(_need(c, "dists", f"components[{q}]")))
                comps.append((float(_need(c, "weight", f"components[{q}]")), dists))
            spec = MixtureSpec(n=int(_need(d, "n", "")), components=tuple(comps), m=int(d.get("m", 0)))
        else:
            raise SpecError("type", f"unknown spec type {kind!r}")
    except (TypeError, ValueError) as exc:
        raise SpecError(kind, str(exc)) from None
    spec.validate()
    return spec


def save_spec(spec: Spec, path) -> None:
    with open(path, "w") as fh:
        json.dump(spec_to_dict(spec), fh, indent=1)
        fh.write("\n")


def load_spec(path) -> Spec:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"line {exc.lineno}", exc.msg) from None
    return spec_from_dict(d)


# --- ready-made specs used by tests, scripts and benchmarks -----------------


def random_linear_spec(n: int, g: int, n_degenerate: int = 0, seed: int = 0,
                       parameter: ScalarDist | None = None, band_gap: float | None = None) -> LinearClassSpec:
    """Random class assignment with random nonzero slopes.

    With ``band_gap`` set, class ``k`` gets intercepts near ``k * band_gap`` so
    class values occupy nearly disjoint bands.
    """
    rng = make_rng(seed)
    perm = rng.permutation(n)
    degenerate_idx = sorted(int(i) for i in perm[:n_degenerate])
    rest = [int(i) for i in perm[n_degenerate:]]
    degenerates = {i: float(rng.uniform(-3, 3)) if band_gap is None else float(rng.uniform(0, g * band_gap))
                   for i in degenerate_idx}
    classes = [sorted(rest[k::g]) for k in range(g)] if g else []
    classes = [c for c in classes if c]
    coeffs = {}
    for k, members in enumerate(classes):
        for i in members:
            slope = float(rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0]))
            if band_gap is None:
                intercept = float(rng.uniform(-1.0, 1.0))
            else:
                intercept = float(k * band_gap + rng.uniform(0.0, band_gap / 2))
            coeffs[i] = (slope, intercept)
    param = parameter or ScalarDist.uniform(0.0, 1.0)
    spec = LinearClassSpec(n=n, degenerates=degenerates, classes=tuple(tuple(c) for c in classes),
                           coeffs=coeffs, parameter_dists=tuple(param for _ in classes), rho=0.5)
    spec.validate()
    return spec


def near_deterministic_mixture_spec(n: int, kappa: int, m: int | None = None, seed: int = 0,
                                    noise: float = 0.05) -> MixtureSpec:
    """Each component fixes a random order of the indices, up to tiny uniform noise."""
    rng = make_rng(seed)
    comps = []
    for _ in range(kappa):
        pos = rng.permutation(n)
        comps.append((1.0 / kappa, tuple(ScalarDist.uniform(float(p), float(p) + noise) for p in pos)))
    spec = MixtureSpec(n=n, components=tuple(comps), m=m or kappa)
    spec.validate()
    return spec


def random_mixture_spec(n: int, kappa: int, m: int | None = None, seed: int = 0) -> MixtureSpec:
    """Components with random per-index uniform/gaussian laws and random weights."""
    rng = make_rng(seed)
    w = rng.uniform(0.5, 1.5, size=kappa)
    w = w / w.sum()
    comps = []
    for q in range(kappa):
        dists = []
        for _ in range(n):
            centre = float(rng.uniform(0, n))
            if rng.random() < 0.5:
                dists.append(ScalarDist.uniform(centre, centre + float(rng.uniform(0.1, 3.0))))
            else:
                dists.append(ScalarDist.gaussian(centre, float(rng.uniform(0.1, 2.0))))
        comps.append((float(w[q]), tuple(dists)))
    # fix rounding so weights sum to 1 exactly enough
    total = sum(c[0] for c in comps)
    comps = [(c[0] / total, c[1]) for c in comps]
    spec = MixtureSpec(n=n, components=tuple(comps), m=m or kappa)
    spec.validate()
    return spec
