"""Numeric constants, in theory mode (exact formulas) or experiment mode.

Theory-mode values grow like δ⁷ and are only for formula audits and
reports; experiment-mode profiles drive every graph search. All arithmetic
is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

from .errors import Budget, BudgetError, InputError
from .graph import SimpleGraph, farthest_from_geodesics

THEORY = "theory"
EXPERIMENT = "experiment"
DEFAULT_BUDGET = 2_000_000

# canonical key order of the profile file
PROFILE_KEYS = ("mode", "delta", "lambda", "epsilon", "mu", "nu", "l", "neighbor_threshold", "budget")


@dataclass(frozen=True)
class ConstantProfile:
    delta: int
    lam: int
    epsilon: int
    mu: int
    nu: int
    l: int  # noqa: E741
    neighbor_threshold: int
    mode: str = EXPERIMENT
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        for f in fields(self):
            if f.name != "mode" and not isinstance(getattr(self, f.name), int):
                raise InputError(f"profile field {f.name} must be an integer")
        if self.mode not in (THEORY, EXPERIMENT):
            raise InputError(f"unknown profile mode {self.mode!r}")
        if self.budget <= 0:
            raise InputError("profile budget must be positive")
        if self.mode == EXPERIMENT:
            for name in ("delta", "epsilon", "neighbor_threshold"):
                if getattr(self, name) < 0:
                    raise InputError(f"experiment profile: {name} must be >= 0")
            for name in ("lam", "mu", "nu", "l"):
                if getattr(self, name) <= 0:
                    raise InputError(f"experiment profile: {name} must be positive")
        else:
            expected = _theory_fields(self.delta, self.epsilon)
            for name, value in expected.items():
                if getattr(self, name) != value:
                    raise InputError(
                        f"theory profile: {name}={getattr(self, name)} but the formula gives {value}"
                    )

    @property
    def degenerate(self) -> bool:
        return self.mu == 0 or self.l == 0 or self.lam == 0

    @property
    def slice_diameter_bound(self) -> int:
        return 2 * self.neighbor_threshold

    @property
    def slice_gap_bound(self) -> int:
        return 10 * self.neighbor_threshold

    def with_l(self, l: int) -> "ConstantProfile":  # noqa: E741
        d = asdict(self)
        d["l"] = l
        return ConstantProfile(**d)

    def to_text(self) -> str:
        vals = {
            "mode": self.mode,
            "delta": self.delta,
            "lambda": self.lam,
            "epsilon": self.epsilon,
            "mu": self.mu,
            "nu": self.nu,
            "l": self.l,
            "neighbor_threshold": self.neighbor_threshold,
            "budget": self.budget,
        }
        return "".join(f"{k} = {vals[k]}\n" for k in PROFILE_KEYS)


def _theory_fields(delta: int, epsilon: int) -> dict[str, int]:
    lam = 1000 * delta
    mu = (100 * epsilon + lam * lam) * 40 * lam
    nu = 40 * lam * (epsilon + 100 * lam * delta)
    return {"lam": lam, "mu": mu, "nu": nu, "neighbor_threshold": 100 * delta}


def theory_profile(delta: int, epsilon: int, budget: int = DEFAULT_BUDGET) -> ConstantProfile:
    """Exact theory-mode constants for given δ and ε; ``l`` is set to its minimum μ."""
    if delta < 0:
        raise InputError("delta must be >= 0")
    if epsilon < 1:
        raise InputError("epsilon must be >= 1")
    f = _theory_fields(delta, epsilon)
    return ConstantProfile(
        delta=delta,
        lam=f["lam"],
        epsilon=epsilon,
        mu=f["mu"],
        nu=f["nu"],
        l=f["mu"],
        neighbor_threshold=f["neighbor_threshold"],
        mode=THEORY,
        budget=budget,
    )


def experiment_profile(
    delta: int = 0,
    lam: int = 2,
    epsilon: int = 1,
    mu: int = 2,
    nu: int = 4,
    l: int = 2,  # noqa: E741
    neighbor_threshold: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> ConstantProfile:
    return ConstantProfile(delta, lam, epsilon, mu, nu, l, neighbor_threshold, EXPERIMENT, budget)


def parse_profile(text: str, source: str = "<profile>") -> ConstantProfile:
    vals: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in PROFILE_KEYS:
            raise InputError(f"{source}:{lineno}: unknown key {key!r}")
        if key in vals:
            raise InputError(f"{source}:{lineno}: duplicate key {key!r}")
        if key == "mode":
            vals[key] = value
        else:
            try:
                vals[key] = int(value)
            except ValueError:
                raise InputError(f"{source}:{lineno}: {key} must be an integer, got {value!r}") from None
    missing = [k for k in PROFILE_KEYS if k not in vals and k != "budget"]
    if missing:
        raise InputError(f"{source}: missing keys {', '.join(missing)}")
    vals["lam"] = vals.pop("lambda")
    try:
        return ConstantProfile(**vals)
    except InputError as exc:
        raise InputError(f"{source}: {exc}") from exc


def psi(n: int, kappa_mu: int, epsilon: int) -> int:
    """24 (n+1) κ(μ) (2ε+1) ε."""
    if min(n, kappa_mu, epsilon) < 0:
        raise InputError("psi arguments must be >= 0")
    return 24 * (n + 1) * kappa_mu * (2 * epsilon + 1) * epsilon


def l_candidates(profile: ConstantProfile, psi_n: int) -> list[int]:
    """[10μ + 2iε for i = 1 .. ψ(n)/(2ε)]."""
    eps = profile.epsilon
    if eps < 1:
        raise InputError("l_candidates needs epsilon >= 1")
    count = psi_n // (2 * eps)
    if count < 1:
        raise InputError(f"empty candidate range: psi_n={psi_n} < 2*epsilon={2 * eps}")
    return [10 * profile.mu + 2 * i * eps for i in range(1, count + 1)]


def d0_bound(profile: ConstantProfile, triangles: int, psi_t: int) -> int:
    """Displacement bound for vertex-group generators.

    Theory mode: T (20 ψ(T) · 1000δ + 200δ). Experiment mode replaces 1000δ
    and 200δ by 10 and 2 times the neighbor threshold.
    """
    if profile.mode == THEORY:
        return triangles * (20 * psi_t * 1000 * profile.delta + 200 * profile.delta)
    t = profile.neighbor_threshold
    return triangles * (20 * psi_t * 10 * t + 2 * t)


@dataclass(frozen=True)
class MeasuredBounds:
    kappa_mu: int
    K0: int
    K1: int
    k1: int
    psi_of_n: int
    n: int

    @classmethod
    def build(cls, kappa_mu: int, n: int, epsilon: int, K0: int = 0, K1: int = 0, k1: int = 0):
        return cls(kappa_mu, K0, K1, k1, psi(n, kappa_mu, epsilon), n)

    def check(self, epsilon: int):
        if self.psi_of_n != psi(self.n, self.kappa_mu, epsilon):
            raise InputError(
                f"psi_of_n={self.psi_of_n} does not match the formula for n={self.n}"
            )


def morse_epsilon(g: SimpleGraph, lam, budget: int = DEFAULT_BUDGET) -> int:
    """Least ε such that every λ-quasi-geodesic stays ε-close to every geodesic between its ends.

    λ-quasi-geodesics never revisit a vertex, and the property is inherited by
    prefixes, so a depth-first enumeration pruned by the quasi-geodesic test is
    exhaustive. On budget exhaustion the error carries the best lower bound.
    """
    from .cylinders import _lambda_ratio

    g.require_connected()
    num, den = _lambda_ratio(lam)
    steps = Budget(budget, "morse_epsilon")
    D = g._dist
    idx = g.index
    best = 0
    far_cache: dict[tuple[str, str], dict[str, int]] = {}

    def far(a, b):
        hit = far_cache.get((a, b))
        if hit is None:
            hit = far_cache[(a, b)] = farthest_from_geodesics(g, a, b)
        return hit

    def dfs(path):
        nonlocal best
        try:
            steps.tick()
        except BudgetError as exc:
            raise BudgetError(f"morse_epsilon budget exhausted; lower bound {best}", partial=best) from exc
        if len(path) > 1:
            f = far(path[0], path[-1])
            worst = max(f[v] for v in path)
            if worst > best:
                best = worst
        last = path[-1]
        k = len(path)
        for w in g.neighbors(last):
            iw = idx[w]
            ok = True
            for i, u in enumerate(path):
                d = D[idx[u]][iw]
                # |i - j| <= λ d  and  d <= λ |i - j|
                if (k - i) * den > num * d or d * den > num * (k - i):
                    ok = False
                    break
            if ok:
                path.append(w)
                dfs(path)
                path.pop()

    for v in g.vertices:
        dfs([v])
    return best
