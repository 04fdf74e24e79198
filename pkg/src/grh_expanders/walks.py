"""Random walks on Cayley and isogeny graphs, and the walk-based discrete-log reduction.

Randomness is counter based: trial i of a run with seed s draws from a
Philox stream keyed by (s, i), so trials can be replayed or split freely.
"""
from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .abelian import AbelianGroup, CayleyGraph, spectrum
from .arith import factorize
from .curves.ec import Curve, Point
from .curves.isogeny_class import DEFAULT_B, IsogenyClass, Level, _prime_set, isogeny_bound
from .curves.velu import Isogeny, rational_isogenies

DISTRIBUTION_MAX_STEPS = 10**4
DISTRIBUTION_MAX_VERTICES = 10**5
DEFAULT_C = 4.0
_EPS = 1e-9


@dataclass(frozen=True)
class WalkConfig:
    length: int
    trials: int
    seed: int
    C: float = DEFAULT_C

    def __post_init__(self):
        if self.length < 0 or self.trials < 1:
            raise ValueError("length must be >= 0 and trials >= 1")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1), trial])))


def mixing_length(graph_size: int, subset_size: int, k: float, c: float) -> int:
    """Steps after which a walk lands in a fixed subset with probability within [1/2, 3/2] of its share."""
    if not 1 <= subset_size <= graph_size:
        raise ValueError("need 1 <= subset_size <= graph_size")
    if c >= k:
        raise ValueError(f"c = {c} must be below the degree k = {k}")
    if c <= 0:
        return 1
    t = math.log(2 * graph_size / math.sqrt(subset_size)) / math.log(k / c)
    return max(1, math.ceil(t - _EPS))


def corollary_length(group_size: int, q: float, C: float = DEFAULT_C) -> int:
    """max(1, ceil(C log|G| / log log q))."""
    if q < 16:
        raise ValueError("q must be at least 16 so that log log q is comfortably positive")
    if group_size < 1:
        raise ValueError("group_size must be positive")
    return max(1, math.ceil(C * math.log(group_size) / math.log(math.log(q)) - _EPS))


def _vertex_index(graph: CayleyGraph, v) -> int:
    if np.ndim(v) == 0:
        return int(v)
    return int(graph.group.index(np.asarray(v, dtype=np.int64)))


def exact_distribution(graph: CayleyGraph, start, t: int) -> np.ndarray:
    """Distribution of a t-step walk from start, indexed like graph.group.elements()."""
    if t > DISTRIBUTION_MAX_STEPS or graph.order > DISTRIBUTION_MAX_VERTICES:
        raise ValueError("exact_distribution is capped at t <= 1e4 and |G| <= 1e5")
    if graph.degree == 0:
        raise ValueError("graph has no generators")
    dist = np.zeros(graph.order)
    dist[_vertex_index(graph, start)] = 1.0
    if t == 0:
        return dist
    nbr = graph.neighbor_table()
    w = graph.multiplicities / graph.degree
    return _kernels.evolve(dist, nbr, w, t)


def uniform_distance_bound(c: float, k: float, t: int, n: int) -> float:
    """(c/k)^t sqrt(n): a bound on the sup distance of the t-step distribution from uniform."""
    return (c / k) ** t * math.sqrt(n)


def complete_cayley_graph(moduli) -> CayleyGraph:
    """S = every element of G (identity included), so one step is exactly uniform."""
    G = AbelianGroup(moduli)
    return CayleyGraph(G, G.elements(), allow_loops=True, label=f"complete{tuple(moduli)}")


def random_target(graph: CayleyGraph, size: int, seed: int) -> np.ndarray:
    if not 1 <= size <= graph.order:
        raise ValueError("target size must be between 1 and |G|")
    return np.sort(trial_rng(seed, 2**32).choice(graph.order, size=size, replace=False))


def walk_endpoints(graph: CayleyGraph, start, config: WalkConfig) -> np.ndarray:
    """Vertex index of each trial's endpoint."""
    k = graph.degree
    steps = np.empty((config.trials, config.length), dtype=np.int64)
    for i in range(config.trials):
        steps[i] = trial_rng(config.seed, i).integers(0, k, size=config.length)
    s = np.asarray(graph.group.element(_vertex_index(graph, start)), dtype=np.int64).reshape(graph.group.rank)
    moduli = np.asarray(graph.group.moduli, dtype=np.int64)
    ends = _kernels.walk_endpoints(s, graph.generators, moduli, steps)
    if graph.group.rank == 0:
        return np.zeros(config.trials, dtype=np.int64)
    return np.atleast_1d(graph.group.index(ends))


@dataclass
class WalkReport:
    graph_id: str
    length: int
    trials: int
    seed: int
    target_size: int
    graph_size: int
    expected_prob: float
    observed_freq: float
    ci3sigma: tuple[float, float]
    within_3sigma: bool
    lemma_band: tuple[float, float]
    in_lemma_band: bool | None  # None: not applicable (bipartite graph)
    bipartite: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ci3sigma"] = list(self.ci3sigma)
        d["lemma_band"] = list(self.lemma_band)
        return d


def is_bipartite(graph: CayleyGraph, values: np.ndarray | None = None) -> bool:
    lam = spectrum(graph) if values is None else values
    return bool(np.min(lam) <= -graph.degree + 1e-9)


def run_walks(graph: CayleyGraph, start, config: WalkConfig, target) -> WalkReport:
    target = np.unique(np.asarray(target, dtype=np.int64))
    if target.size == 0:
        raise ValueError("target set is empty")
    ends = walk_endpoints(graph, start, config)
    hits = int(np.isin(ends, target).sum())
    freq = hits / config.trials
    expected = float(exact_distribution(graph, start, config.length)[target].sum())
    sigma = math.sqrt(max(expected * (1 - expected), 0.0) / config.trials)
    lo, hi = expected - 3 * sigma, expected + 3 * sigma
    share = target.size / graph.order
    band = (0.5 * share, 1.5 * share)
    bip = is_bipartite(graph)
    return WalkReport(
        graph_id=graph.label, length=config.length, trials=config.trials, seed=config.seed,
        target_size=int(target.size), graph_size=graph.order, expected_prob=expected, observed_freq=freq,
        ci3sigma=(lo, hi), within_3sigma=bool(lo - 1e-12 <= freq <= hi + 1e-12), lemma_band=band,
        in_lemma_band=None if bip else bool(band[0] <= freq <= band[1]), bipartite=bip,
    )


# ---------------------------------------------------------------- discrete logarithms

def dlog_bsgs(curve: Curve, P: Point, Q: Point, order: int | None = None) -> int | None:
    """x in [0, n) with xP = Q, or None when Q is not in <P>."""
    n = order if order is not None else curve.point_order(P)
    m = math.isqrt(n - 1) + 1 if n > 1 else 1
    baby: dict = {}
    R = None
    for j in range(m):
        baby.setdefault(R, j)
        R = curve.add(R, P)
    step = curve.neg(curve.mul(m, P))
    G = Q
    for i in range(m + 1):
        if G in baby:
            x = (i * m + baby[G]) % n
            if curve.mul(x, P) == Q:
                return x
        G = curve.add(G, step)
    return None


class KernelCollision(RuntimeError):
    """An isogeny on the walk killed part of <P>."""


def push_through_isogeny(path: list[Isogeny], P: Point, Q: Point, order: int | None = None):
    """(P', Q') on the last codomain; raises KernelCollision if the order of P drops."""
    for phi in path:
        P, Q = phi(P), phi(Q)
        if P is None and order != 1:
            raise KernelCollision(f"degree-{phi.degree} step sends P to the identity")
    if order is not None and path:
        E = path[-1].codomain
        if E.mul(order, P) is not None or any(E.mul(order // r, P) is None for r in factorize(order).primes()):
            raise KernelCollision("order of P changed along the path")
    return P, Q


@dataclass
class OracleModel:
    """Solves discrete logs on curves whose j-invariant is covered, refuses elsewhere."""
    covered: frozenset
    level_size: int
    queries: int = 0
    answered: int = 0

    @property
    def mu(self) -> float:
        return len(self.covered) / self.level_size

    def __call__(self, E: Curve, P: Point, Q: Point, order: int | None = None) -> int | None:
        self.queries += 1
        if E.j not in self.covered:
            return None
        self.answered += 1
        return dlog_bsgs(E, P, Q, order)


def make_oracle(level: Level, mu: float, seed: int) -> OracleModel:
    if not 0 < mu <= 1:
        raise ValueError(f"mu must lie in (0, 1], got {mu}")
    size = max(1, round(mu * len(level.members)))
    rng = random.Random(seed)
    covered = frozenset(rng.sample(list(level.members), size))
    return OracleModel(covered, len(level.members))


class LevelWalker:
    """Random horizontal-isogeny walks inside one level.

    Each step picks a prime ell from the generator multiset (two slots per
    prime, as in the class-group Cayley graph) and follows one of the
    rational horizontal ell-isogenies out of the current model.
    """

    def __init__(self, level: Level, cls: IsogenyClass, B: float | None = None, M: float | None = None):
        if M is None:
            M = isogeny_bound(cls.p, B if B is not None else DEFAULT_B)
        primes, omitted = _prime_set(level, M, velu_fallback=False)
        if not primes:
            raise ValueError(f"no usable prime below M = {M:g} for the level D = {level.D}")
        self.level = level
        self.members = set(level.members)
        self.primes = primes
        self.omitted = omitted
        self.slots = [(ell, side) for ell, _ in primes for side in (0, 1)]
        self._cache: dict = {}

    def horizontal(self, E: Curve, ell: int) -> list[Isogeny]:
        key = (E.a, E.b, ell)
        if key not in self._cache:
            isos = [phi for phi in rational_isogenies(E, ell) if phi.codomain.j in self.members]
            if len(isos) not in (1, 2):
                raise AssertionError(f"{len(isos)} horizontal {ell}-isogenies from j = {E.j}")
            self._cache[key] = isos
        return self._cache[key]

    def walk(self, E: Curve, length: int, rng: np.random.Generator) -> list[Isogeny]:
        path = []
        for s in rng.integers(0, len(self.slots), size=length).tolist():
            ell, side = self.slots[s]
            isos = self.horizontal(E, ell)
            phi = isos[side % len(isos)]
            path.append(phi)
            E = phi.codomain
        return path


@dataclass
class DlogResult:
    x: int | None
    queries: int
    walks: int
    collisions: int
    verified: bool
    path_lengths: list[int] = field(default_factory=list)


def reduce_dlog(walker: LevelWalker, oracle: OracleModel, E: Curve, P: Point, Q: Point, order: int,
                config: WalkConfig, run: int = 0, retry_cap: int | None = None) -> DlogResult:
    """Walk to a random curve of the level, ask the oracle there, and pull the answer back.

    The walk is repeated until the oracle answers; every invocation counts as a query.
    """
    if not oracle.covered:
        raise ValueError("oracle covers no curve")
    if E.j not in walker.members:
        raise ValueError(f"j = {E.j} is not in the level")
    cap = retry_cap if retry_cap is not None else math.ceil(64 / oracle.mu)
    rng = trial_rng(config.seed, run)
    start_queries = oracle.queries
    walks = collisions = 0
    lengths = []
    while walks < cap:
        walks += 1
        path = walker.walk(E, config.length, rng)
        lengths.append(len(path))
        try:
            P2, Q2 = push_through_isogeny(path, P, Q, order)
        except KernelCollision:
            collisions += 1
            continue
        target = path[-1].codomain if path else E
        x = oracle(target, P2, Q2, order)
        if x is None:
            continue
        ok = E.mul(x, P) == Q
        return DlogResult(x % order, oracle.queries - start_queries, walks, collisions, ok, lengths)
    return DlogResult(None, oracle.queries - start_queries, walks, collisions, False, lengths)


def prime_order_point(E: Curve, N: int, min_prime: int, rng: random.Random) -> tuple[Point, int]:
    """A point of prime order r, with r the largest prime factor of N; r must exceed min_prime."""
    r = max(factorize(N).primes())
    if r <= min_prime:
        raise ValueError(f"largest prime factor {r} of N = {N} does not exceed {min_prime}")
    while True:
        P = E.mul(N // r, E.random_point(rng))
        if P is not None:
            return P, r


@dataclass
class DlogReport:
    level_id: str
    mu: float
    runs: int
    mean_queries: float
    max_queries: int
    failures: int
    all_verified: bool
    walk_length: int
    C: float
    point_order: int
    queries: list[int]

    def to_dict(self) -> dict:
        return asdict(self)


def dlog_experiment(level: Level, cls: IsogenyClass, mu: float, runs: int, seed: int, C: float = DEFAULT_C,
                    B: float | None = None, M: float | None = None) -> DlogReport:
    walker = LevelWalker(level, cls, B, M)
    oracle = make_oracle(level, mu, seed)
    length = corollary_length(len(level.members), cls.p, C)
    config = WalkConfig(length, runs, seed, C)
    min_prime = max(ell for ell, _ in walker.primes)
    queries, failures, verified = [], 0, True
    for run in range(runs):
        rr = random.Random(seed * 1_000_003 + run)
        E = cls.members[rr.choice(level.members)]
        P, r = prime_order_point(E, cls.N, min_prime, rr)
        x = rr.randrange(r)
        Q = E.mul(x, P)
        res = reduce_dlog(walker, oracle, E, P, Q, r, config, run)
        queries.append(res.queries)
        if res.x is None:
            failures += 1
        elif not res.verified:
            verified = False
    return DlogReport(
        level_id=f"p={cls.p},N={cls.N},c={level.c},D={level.D}", mu=oracle.mu, runs=runs,
        mean_queries=float(np.mean(queries)), max_queries=int(max(queries)), failures=failures,
        all_verified=verified and failures == 0, walk_length=length, C=C, point_order=r, queries=queries,
    )
