"""Base test functions and shifted, rotated, hybrid and composition problems.

Base functions are evaluated in their classical form by :func:`eval_base`.
Problems use each base in *centered* form, ``raw(scale * z + offset)``,
whose minimizer is ``z = 0``; a problem then evaluates

    g(x) = centered(M (x - o)) + f*

with shift ``o``, orthogonal rotation ``M`` and bias ``f*``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .core import ConfigError, SearchSpace
from .rng import RngStream, mix64

SHIFT_RANGE = 80.0


@dataclass(frozen=True)
class BaseFunction:
    name: str
    code: int
    modality: str          # "unimodal" | "multimodal"
    separable: bool
    scale: float = 1.0     # input scaling of the centered form
    offset: float = 0.0    # raw-form minimizer coordinate

    def raw(self, Z: np.ndarray) -> np.ndarray:
        return kernels.eval_base(self.code, np.atleast_2d(Z))

    def centered(self, Z: np.ndarray) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        if self.scale != 1.0:
            Z = Z * self.scale
        if self.offset != 0.0:
            Z = Z + self.offset
        return kernels.eval_base(self.code, Z)

    @property
    def optimizer(self) -> float:
        return self.offset


BASES: dict[str, BaseFunction] = {b.name: b for b in (
    BaseFunction("sphere", 0, "unimodal", True),
    BaseFunction("bent_cigar", 1, "unimodal", False),
    BaseFunction("zakharov", 2, "unimodal", False),
    BaseFunction("elliptic", 3, "unimodal", True),
    BaseFunction("rosenbrock", 4, "multimodal", False, 2.048 / 100.0, 1.0),
    BaseFunction("rastrigin", 5, "multimodal", True, 5.12 / 100.0),
    BaseFunction("ackley", 6, "multimodal", False),
    BaseFunction("griewank", 7, "multimodal", False, 600.0 / 100.0),
    BaseFunction("schwefel", 8, "multimodal", True, 1000.0 / 100.0, 420.9687462275036),
    BaseFunction("levy", 9, "multimodal", False, 1.0, 1.0),
)}

UNIMODAL = ("bent_cigar", "zakharov", "elliptic", "sphere")
MULTIMODAL = ("rosenbrock", "rastrigin", "schwefel", "levy", "ackley", "griewank")


def get_base(name: str) -> BaseFunction:
    try:
        return BASES[name]
    except KeyError:
        raise ConfigError(f"unknown base function {name!r}") from None


def eval_base(name: str, x) -> float | np.ndarray:
    """Classical-form value of base ``name`` at ``x`` (a vector or a batch)."""
    base = get_base(name)
    x = np.asarray(x, dtype=float)
    out = base.raw(x)
    return float(out[0]) if x.ndim == 1 else out


def random_rotation(dim: int, seed: int) -> np.ndarray:
    """Orthogonal matrix from the QR factorization of a seeded Gaussian."""
    A = RngStream(seed).normal((dim, dim))
    Q, R = np.linalg.qr(A)
    return Q * np.where(np.diag(R) < 0, -1.0, 1.0)


# ---------------------------------------------------------------------------
# problems
# ---------------------------------------------------------------------------
@dataclass(eq=False)
class Problem:
    """Shared fields: box, optimum value, optimizer location and bookkeeping."""

    space: SearchSpace
    known_optimum: float
    index: int
    shift: np.ndarray
    rotation: np.ndarray | None
    rotation_seed: int | None
    kind: str = "unimodal"

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def optimizer(self) -> np.ndarray:
        return self.shift.copy()

    def _local(self, X: np.ndarray) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(X, dtype=float)) - self.shift
        return Z if self.rotation is None else Z @ self.rotation.T

    def __call__(self, x) -> float:
        return float(self.evaluate_batch(np.asarray(x, dtype=float)[None, :])[0])

    def record(self) -> dict:
        return {
            "index": self.index,
            "name": self.name,
            "kind": self.kind,
            "dim": self.dim,
            "shift": [float(v) for v in self.shift],
            "rotation_seed": self.rotation_seed,
            "f_star": self.known_optimum,
        }


@dataclass(eq=False)
class BenchmarkProblem(Problem):
    base: BaseFunction = field(default=BASES["sphere"])

    @property
    def name(self) -> str:
        return self.base.name

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        return self.base.centered(self._local(X)) + self.known_optimum


@dataclass(frozen=True)
class HybridSpec:
    """Dimension permutation split into consecutive segments.

    Segment ``k`` covers ``lengths[k]`` permuted coordinates and is
    evaluated by ``bases[k]`` in centered form, scaled by ``weights[k]``.
    """

    perm: tuple[int, ...]
    bases: tuple[str, ...]
    lengths: tuple[int, ...]
    weights: tuple[float, ...] | None = None

    def validate(self, dim: int) -> None:
        if sorted(self.perm) != list(range(dim)):
            raise ConfigError("hybrid permutation must cover every dimension exactly once")
        if len(self.bases) != len(self.lengths) or not self.bases:
            raise ConfigError("hybrid needs one length per base")
        if any(k < 1 for k in self.lengths) or sum(self.lengths) != dim:
            raise ConfigError(f"hybrid segment lengths {self.lengths} do not partition {dim} dims")
        if self.weights is not None and (len(self.weights) != len(self.bases)
                                         or any(w < 0 for w in self.weights)):
            raise ConfigError("hybrid weights must be nonnegative, one per segment")
        for name in self.bases:
            get_base(name)


def eval_hybrid(spec: HybridSpec, Z) -> np.ndarray | float:
    """Weighted sum of segment evaluations of the local coordinates ``Z``."""
    Z = np.asarray(Z, dtype=float)
    single = Z.ndim == 1
    Z = np.atleast_2d(Z)
    spec.validate(Z.shape[1])
    Zp = Z[:, list(spec.perm)]
    weights = spec.weights or (1.0,) * len(spec.bases)
    total = np.zeros(Z.shape[0])
    start = 0
    for name, length, w in zip(spec.bases, spec.lengths, weights):
        total += w * get_base(name).centered(Zp[:, start:start + length])
        start += length
    return float(total[0]) if single else total


@dataclass(eq=False)
class HybridProblem(Problem):
    spec: HybridSpec | None = None

    def __post_init__(self):
        self.spec.validate(self.dim)

    @property
    def name(self) -> str:
        return "hybrid(" + "+".join(self.spec.bases) + ")"

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        return eval_hybrid(self.spec, self._local(X)) + self.known_optimum


@dataclass(frozen=True, eq=False)
class CompositionSpec:
    """Components as ``(problem, sigma, bias)`` triples.

    Each component problem should carry a zero objective bias; its shift
    marks where it dominates the blend.
    """

    components: tuple

    def validate(self) -> None:
        if not self.components:
            raise ConfigError("composition needs at least one component")
        for comp in self.components:
            if len(comp) != 3 or comp[1] <= 0:
                raise ConfigError("composition components are (problem, sigma > 0, bias)")


def composition_weights(spec: CompositionSpec, X: np.ndarray) -> np.ndarray:
    """Normalized blend weights, shape ``(n, k)``; rows sum to one.

    ``w_i = exp(-d_i^2 / (2 D sigma_i^2)) / d_i`` with ``d_i`` the distance
    to component ``i``'s optimizer; a zero distance gives that component all
    the weight and an all-zero row falls back to equal weights.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, d = X.shape
    k = len(spec.components)
    W = np.empty((n, k))
    zero = np.zeros((n, k), dtype=bool)
    for i, (prob, sigma, _) in enumerate(spec.components):
        d2 = np.sum((X - prob.shift) ** 2, axis=1)
        zero[:, i] = d2 == 0.0
        with np.errstate(divide="ignore"):
            W[:, i] = np.exp(-d2 / (2.0 * d * sigma ** 2)) / np.sqrt(d2)
    hit = zero.any(axis=1)
    W[hit] = zero[hit].astype(float)
    empty = W.sum(axis=1) == 0.0
    W[empty] = 1.0
    return W / W.sum(axis=1, keepdims=True)


def eval_composition(spec: CompositionSpec, X) -> np.ndarray | float:
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    spec.validate()
    W = composition_weights(spec, X)
    vals = np.column_stack([prob.evaluate_batch(X) + bias
                            for prob, _, bias in spec.components])
    out = np.sum(W * vals, axis=1)
    return float(out[0]) if single else out


@dataclass(eq=False)
class CompositionProblem(Problem):
    spec: CompositionSpec | None = None

    def __post_init__(self):
        self.spec.validate()

    @property
    def name(self) -> str:
        return "composition(" + "+".join(p.name for p, _, _ in self.spec.components) + ")"

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        return eval_composition(self.spec, X) + self.known_optimum


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------
def make_problem(base: str | BaseFunction, dim: int, shift_mode: str = "none",
                 rotate: str = "none", index: int = 1, rng: RngStream | None = None,
                 f_star: float | None = None, space: SearchSpace | None = None,
                 shift: np.ndarray | None = None,
                 rotation_seed: int | None = None) -> BenchmarkProblem:
    """Transformed single-base problem.

    ``shift_mode="random-interior"`` draws the shift from
    ``U[-80, 80]^dim``; ``rotate="random-orthogonal"`` builds a rotation
    from ``rotation_seed`` (or from a sub-stream of ``rng``).
    """
    if dim < 1:
        raise ConfigError(f"dim must be positive, got {dim}")
    if isinstance(base, str):
        base = get_base(base)
    rng = rng if rng is not None else RngStream(0)
    if shift is None:
        if shift_mode == "none":
            shift = np.zeros(dim)
        elif shift_mode == "random-interior":
            shift = rng.spawn("shift").uniform(-SHIFT_RANGE, SHIFT_RANGE, dim)
        else:
            raise ConfigError(f"unknown shift mode {shift_mode!r}")
    rotation = None
    if rotate == "random-orthogonal":
        if rotation_seed is None:
            rotation_seed = rng.spawn("rotation").seed
        rotation = random_rotation(dim, rotation_seed)
    elif rotate != "none":
        raise ConfigError(f"unknown rotation mode {rotate!r}")
    else:
        rotation_seed = None
    return BenchmarkProblem(
        space=space or SearchSpace.box(dim),
        known_optimum=100.0 * index if f_star is None else float(f_star),
        index=index, shift=np.asarray(shift, dtype=float), rotation=rotation,
        rotation_seed=rotation_seed, kind=base.modality, base=base)


def _split_lengths(dim: int, k: int, rng: RngStream) -> tuple[int, ...]:
    k = max(1, min(k, dim))
    props = rng.random(k) + 0.5
    raw = np.floor(props / props.sum() * (dim - k)).astype(int) + 1
    raw[-1] += dim - raw.sum()
    return tuple(int(v) for v in raw)


def _suite_problem(kind: str, slot: int, index: int, dim: int, shifted: bool,
                   seed: int, rotate: bool) -> Problem:
    structure = RngStream(mix64(seed, "structure", index, dim))
    shift = (RngStream(mix64(seed, "shift", index, dim)).uniform(-SHIFT_RANGE, SHIFT_RANGE, dim)
             if shifted else np.zeros(dim))
    rot_seed = mix64(seed, "rotation", index, dim) if rotate else None
    rotation = random_rotation(dim, rot_seed) if rotate else None
    f_star = 100.0 * index
    space = SearchSpace.box(dim)
    if kind in ("unimodal", "multimodal"):
        names = UNIMODAL if kind == "unimodal" else MULTIMODAL
        base = get_base(names[slot % len(names)])
        return BenchmarkProblem(space, f_star, index, shift, rotation, rot_seed, kind, base)
    if kind == "hybrid":
        k = 3 + slot % 3
        bases = tuple(str(b) for b in structure.permutation(np.array(sorted(BASES)))[:k])
        lengths = _split_lengths(dim, k, structure)
        spec = HybridSpec(tuple(int(p) for p in structure.permutation(dim)),
                          bases[:len(lengths)], lengths)
        return HybridProblem(space, f_star, index, shift, rotation, rot_seed, kind, spec)
    # composition: component 0 sits at the problem shift with zero bias
    k = 3 + slot % 3
    names = structure.permutation(np.array(sorted(BASES)))[:k]
    comps = []
    for c, name in enumerate(names):
        offset = np.zeros(dim) if c == 0 else structure.uniform(-SHIFT_RANGE, SHIFT_RANGE, dim)
        c_seed = mix64(seed, "rotation", index, dim, c) if rotate else None
        comp = BenchmarkProblem(space, 0.0, index, shift + offset,
                                random_rotation(dim, c_seed) if rotate else None,
                                c_seed, get_base(str(name)).modality, get_base(str(name)))
        comps.append((comp, 10.0 + 10.0 * c, 100.0 * c))
    return CompositionProblem(space, f_star, index, shift, None, rot_seed, kind,
                              CompositionSpec(tuple(comps)))


def make_suite(dim: int, counts: Sequence[int] = (3, 7, 10, 10), shifted: bool = True,
               seed: int = 2017, rotate: bool = True) -> list[Problem]:
    """Four-class suite ordered unimodal, multimodal, hybrid, composition.

    Problem ``i`` (1-based) has optimum value ``100 i``.  Bases, rotations
    and hybrid/composition structure depend on ``seed`` only, so the
    shifted and non-shifted suites built from one seed differ only in the
    shift vectors.
    """
    if dim < 1:
        raise ConfigError(f"dim must be positive, got {dim}")
    if len(counts) != 4 or any(c < 0 for c in counts):
        raise ConfigError("counts must be four nonnegative integers")
    problems: list[Problem] = []
    index = 1
    for kind, count in zip(("unimodal", "multimodal", "hybrid", "composition"), counts):
        for slot in range(count):
            problems.append(_suite_problem(kind, slot, index, dim, shifted, seed, rotate))
            index += 1
    return problems


def suite_manifest(problems: Sequence[Problem], seed: int | None = None) -> str:
    """JSON Lines manifest, one record per problem."""
    lines = []
    for p in problems:
        rec = p.record()
        if seed is not None:
            rec["suite_seed"] = seed
        lines.append(json.dumps(rec, sort_keys=True, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def manifest_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_manifest(problems: Sequence[Problem], path: str | Path, seed: int | None = None) -> str:
    text = suite_manifest(problems, seed)
    Path(path).write_text(text, encoding="utf-8")
    return manifest_hash(text)
