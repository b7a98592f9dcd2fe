"""Exact minimal-error computations on finite-dimensional RKHS models.

A DiscreteProblem models F = span{K(., p_i)} over m domain points through its
kernel Gram matrix: a coefficient vector c represents f = sum_i c_i K(., p_i),
so function values are (gram_F @ c), the F inner product is c' gram_F c~, and
the operator S maps coefficients to G coordinates with inner product gram_G.
On such models the minimal worst-case error of algorithms using n function
values is exactly computable: for fixed sample points it is the norm of the
target restricted to the F-orthogonal complement of the sampled kernel
sections, and the infimum over point sets is an exhaustive search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import NumericError, ParameterError, ResourceLimitError
from .spectra import REL_TIE

_SPD_RTOL = 1e-12
_SUBSET_GUARD = 10 ** 6
_GS_DROP_TOL = 1e-10


@dataclass
class DiscreteProblem:
    """Finite-dimensional RKHS problem (gram_F, operator_S, gram_G)."""

    gram_F: np.ndarray
    operator_S: np.ndarray
    gram_G: np.ndarray
    points: tuple = ()

    def __post_init__(self):
        self.gram_F = np.asarray(self.gram_F, dtype=float)
        self.operator_S = np.atleast_2d(np.asarray(self.operator_S, dtype=float))
        self.gram_G = np.asarray(self.gram_G, dtype=float)
        m = self.gram_F.shape[0]
        k = self.gram_G.shape[0]
        if self.gram_F.shape != (m, m) or self.gram_G.shape != (k, k):
            raise ParameterError("gram matrices must be square")
        if self.operator_S.shape != (k, m):
            raise ParameterError(f"operator must be {k}x{m}, got {self.operator_S.shape}")
        for name, mat in (("gram_F", self.gram_F), ("gram_G", self.gram_G)):
            if np.max(np.abs(mat - mat.T)) > 1e-12 * max(1.0, np.max(np.abs(mat))):
                raise ParameterError(f"{name} must be symmetric")
            ev = np.linalg.eigvalsh(mat)
            if ev[0] <= _SPD_RTOL * ev[-1]:
                raise ParameterError(f"{name} must be positive definite")
        if not self.points:
            self.points = tuple(range(m))
        if len(self.points) != m or len(set(self.points)) != m:
            raise ParameterError("need m distinct domain points")

    @property
    def m(self) -> int:
        return self.gram_F.shape[0]

    @property
    def k(self) -> int:
        return self.gram_G.shape[0]

    def point_indices(self, points: Sequence) -> list[int]:
        lookup = {p: i for i, p in enumerate(self.points)}
        idx = []
        for p in points:
            if p not in lookup:
                raise ParameterError(f"{p!r} is not a domain point")
            idx.append(lookup[p])
        if len(set(idx)) != len(idx):
            raise ParameterError("duplicate sample points")
        return idx


@dataclass
class Functional:
    """I_g f = <f, S*g>_F for a unit-norm g, held via its F-representer."""

    representer: np.ndarray
    g_coords: np.ndarray


def _operator_quadratic_form(problem: DiscreteProblem) -> np.ndarray:
    S, M = problem.operator_S, problem.gram_G
    return S.T @ M @ S


def top_eigenpair(problem: DiscreteProblem) -> tuple[float, np.ndarray, int]:
    """(lambda_1, eta_1, multiplicity) of W = S*S via the generalized
    symmetric eigenproblem (S' gram_G S) c = lambda gram_F c."""
    lam, vecs = _eigenspace(problem)
    mult = int(np.count_nonzero(lam >= lam[-1] * (1.0 - REL_TIE)))
    return float(lam[-1]), vecs[:, -1].copy(), mult


def _eigenspace(problem: DiscreteProblem) -> tuple[np.ndarray, np.ndarray]:
    A = _operator_quadratic_form(problem)
    try:
        lam, vecs = scipy.linalg.eigh(A, problem.gram_F)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericError(f"generalized eigensolver failed: {exc}") from exc
    if not lam[-1] > 0.0:
        raise ParameterError("operator is zero: W has no positive eigenvalue")
    return lam, vecs


def top_eigenspace_basis(problem: DiscreteProblem) -> tuple[float, np.ndarray]:
    """F-orthonormal basis of the eigenspace of the largest eigenvalue."""
    lam, vecs = _eigenspace(problem)
    keep = lam >= lam[-1] * (1.0 - REL_TIE)
    return float(lam[-1]), vecs[:, keep]


def build_Ig(problem: DiscreteProblem, g_coords: np.ndarray) -> Functional:
    """The linear functional I_g f = <f, S*g>_F = <Sf, g>_G for unit g.

    g within 1e-6 of unit G-norm is renormalized; anything farther is
    rejected.  The representer solves gram_F r = S' gram_G g.
    """
    g = np.asarray(g_coords, dtype=float).reshape(-1)
    if g.shape != (problem.k,):
        raise ParameterError(f"g must have {problem.k} coordinates")
    nrm = math.sqrt(float(g @ problem.gram_G @ g))
    if abs(nrm - 1.0) > 1e-6:
        raise ParameterError(f"g must have unit G-norm, got {nrm!r}")
    g = g / nrm
    r = np.linalg.solve(problem.gram_F, problem.operator_S.T @ (problem.gram_G @ g))
    return Functional(representer=r, g_coords=g)


def e0_functional(problem: DiscreteProblem, functional: Functional) -> float:
    """Initial error of I_g: the F-norm of its representer S*g."""
    r = functional.representer
    return math.sqrt(max(float(r @ problem.gram_F @ r), 0.0))


def _gram_schmidt(columns: np.ndarray, gram: np.ndarray,
                  expected_rank: int | None = None) -> np.ndarray:
    """Orthonormalize columns in the inner product <u, v> = u' gram v.

    Modified Gram-Schmidt with one reorthogonalization pass; columns whose
    residual drops below the rank tolerance are discarded.
    """
    basis: list[np.ndarray] = []
    scale = math.sqrt(max(np.max(np.abs(gram)), 1e-300))
    for v in columns.T:
        v = v.astype(float).copy()
        norm0 = math.sqrt(max(float(v @ gram @ v), 0.0))
        if norm0 == 0.0:
            continue
        for _ in range(2):
            for u in basis:
                v -= float(u @ gram @ v) * u
        nrm = math.sqrt(max(float(v @ gram @ v), 0.0))
        if nrm > _GS_DROP_TOL * scale * max(np.max(np.abs(v)), 1.0) and nrm > _GS_DROP_TOL * norm0:
            basis.append(v / nrm)
    out = np.column_stack(basis) if basis else np.zeros((columns.shape[0], 0))
    if expected_rank is not None and out.shape[1] != expected_rank:
        raise NumericError(f"orthonormalization rank {out.shape[1]}, expected {expected_rank}")
    return out


def _annihilator_basis(problem: DiscreteProblem, idx: list[int]) -> np.ndarray:
    """F-orthonormal basis of {f : f(p_i) = 0 for sampled i}: project the
    sampled kernel sections out of the coordinate basis."""
    m = problem.m
    G = problem.gram_F
    if not idx:
        return _gram_schmidt(np.eye(m), G, expected_rank=m)
    sections = np.eye(m)[:, idx]
    U = _gram_schmidt(sections, G, expected_rank=len(idx))
    residual = np.eye(m) - U @ (U.T @ G)
    return _gram_schmidt(residual, G, expected_rank=m - len(idx))


def fixed_info_radius(problem: DiscreteProblem, target, points: Sequence = ()) -> float:
    """Worst-case error of the optimal algorithm for fixed sample points:
    sup{ ||target f|| : ||f||_F <= 1, f(p) = 0 for all sampled p }.

    ``target`` is the string 'operator' (meaning S itself) or a Functional.
    """
    idx = problem.point_indices(points)
    N = _annihilator_basis(problem, idx)
    if N.shape[1] == 0:
        return 0.0
    if isinstance(target, Functional):
        vec = N.T @ (problem.gram_F @ target.representer)
        return float(np.linalg.norm(vec))
    if not (isinstance(target, str) and target == "operator"):
        raise ParameterError("target must be 'operator' or a Functional")
    H = N.T @ _operator_quadratic_form(problem) @ N
    top = scipy.linalg.eigvalsh(H)[-1]
    return math.sqrt(max(float(top), 0.0))


def _fully_exchangeable(problem: DiscreteProblem, target) -> bool:
    """True when every permutation of the domain points is a problem
    automorphism, so all n-subsets of sample points are equivalent."""
    G = problem.gram_F
    m = problem.m
    if problem.k != m or not np.array_equal(problem.gram_G, G):
        return False
    diag = np.diag(G)
    if not np.all(diag == diag[0]):
        return False
    off = G[~np.eye(m, dtype=bool)]
    if off.size and not np.all(off == off[0]):
        return False
    S = problem.operator_S
    if not np.array_equal(S, S[0, 0] * np.eye(m)):
        return False
    if isinstance(target, Functional):
        r = target.representer
        return bool(np.all(r == r[0]))
    return target == "operator"


def minimal_error_std(problem: DiscreteProblem, target, n: int) -> tuple[float, tuple]:
    """Exact n-th minimal error for standard information: the smallest
    fixed_info_radius over all n-subsets of the domain points, with one
    minimizing subset.

    On fully exchangeable problems every subset is equivalent, so a single
    representative is evaluated; otherwise the search is exhaustive and
    guarded at C(m, n) <= 1e6 subsets.
    """
    if n < 0:
        raise ParameterError("n must be >= 0")
    m = problem.m
    if n > m:
        n = m  # extra evaluations beyond dim(F) cannot help
    if n == 0:
        return fixed_info_radius(problem, target, ()), ()
    if _fully_exchangeable(problem, target):
        subset = problem.points[:n]
        return fixed_info_radius(problem, target, subset), tuple(subset)
    if math.comb(m, n) > _SUBSET_GUARD:
        raise ResourceLimitError(f"C({m},{n}) subsets exceed the search guard")
    best, best_subset = math.inf, ()
    for subset in itertools.combinations(problem.points, n):
        r = fixed_info_radius(problem, target, subset)
        if r < best:
            best, best_subset = r, subset
    return best, tuple(best_subset)


# ---------------------------------------------------------------------------
# Verification drivers
# ---------------------------------------------------------------------------

@dataclass
class DominationReport:
    """Outcome of checking e_n(I_g) <= e_n(S) exactly, plus the pointwise
    algorithm-transfer inequality |I_g f - B_n f| <= ||Sf - A_n f||_G on
    random trials."""

    e_n_functional: float
    e_n_operator: float
    max_pointwise_excess: float
    trials: int
    counterexample: dict | None
    passed: bool


def verify_domination(problem: DiscreteProblem, g_coords: np.ndarray, n: int,
                      trials: int, seed: int = 0, tol: float = 1e-12) -> DominationReport:
    """Check that the functional I_g is never harder than S at level n.

    (a) minimal_error_std(I_g, n) <= minimal_error_std(S, n) + tol, both by
    exhaustive search; (b) for random linear algorithms A_n f = sum f(t_j) S f_j
    and random unit-ball f, the transferred algorithm
    B_n f = sum f(t_j) <f_j, S*g>_F satisfies
    |I_g f - B_n f| <= ||Sf - A_n f||_G + tol.
    """
    func = build_Ig(problem, g_coords)
    e_func, _ = minimal_error_std(problem, func, n)
    e_op, _ = minimal_error_std(problem, "operator", n)
    counterexample = None
    if e_func > e_op + tol:
        counterexample = {"kind": "exact", "e_n_functional": e_func, "e_n_operator": e_op}

    rng = np.random.default_rng(seed)
    G, A = problem.gram_F, _operator_quadratic_form(problem)
    Gr = G @ func.representer
    max_excess = -math.inf
    for _ in range(trials):
        idx = rng.choice(problem.m, size=n, replace=False) if n else np.array([], dtype=int)
        fjs = rng.standard_normal((n, problem.m))
        f = rng.standard_normal(problem.m)
        f /= math.sqrt(float(f @ G @ f))
        values = (G @ f)[idx]
        resid = f - values @ fjs if n else f
        lhs = abs(float(resid @ Gr))
        rhs = math.sqrt(max(float(resid @ A @ resid), 0.0))
        max_excess = max(max_excess, lhs - rhs)
        if lhs > rhs + tol and counterexample is None:
            counterexample = {"kind": "pointwise", "lhs": lhs, "rhs": rhs,
                              "points": idx.tolist()}
    return DominationReport(e_n_functional=e_func, e_n_operator=e_op,
                            max_pointwise_excess=max_excess, trials=trials,
                            counterexample=counterexample,
                            passed=counterexample is None)


@dataclass
class CharacterizationReport:
    """Outcome of verifying that unit g attains e0(I_g) = e0(S) exactly on
    {lambda_1^(-1/2) S eta : eta unit, in the top eigenspace}."""

    lambda1: float
    multiplicity: int
    forward_max_defect: float
    achievers: int
    max_achiever_distance: float
    strict_gap_margin: float
    passed: bool


def verify_e0_characterization(problem: DiscreteProblem, samples: int,
                               seed: int = 0) -> CharacterizationReport:
    """Forward: g = lambda_1^(-1/2) S eta has unit norm and ||S*g||_F = sqrt(lambda_1).
    Converse: numerically maximize ||S*g||_F over unit g; every achiever must
    lie within 1e-6 G-distance of the characterized set.  Also checks the
    strict gap: adding a component orthogonal to S(top eigenspace) provably
    lowers ||S*g||_F.
    """
    if samples < 1:
        raise ParameterError("need at least one search sample")
    lam1, basis = top_eigenspace_basis(problem)
    mult = basis.shape[1]
    S, M, G = problem.operator_S, problem.gram_G, problem.gram_F
    rng = np.random.default_rng(seed)

    # G-orthonormal basis of S(top eigenspace): columns S eta_i / sqrt(lambda_1)
    V = (S @ basis) / math.sqrt(lam1)

    def s_star_norm(g):
        r = np.linalg.solve(G, S.T @ (M @ g))
        return math.sqrt(max(float(r @ G @ r), 0.0))

    forward_defect = 0.0
    for _ in range(10):
        z = rng.standard_normal(mult)
        eta = basis @ (z / np.linalg.norm(z))
        g = (S @ eta) / math.sqrt(lam1)
        gnorm = math.sqrt(float(g @ M @ g))
        forward_defect = max(forward_defect,
                             abs(gnorm - 1.0),
                             abs(s_star_norm(g) - math.sqrt(lam1)))

    # converse: random starts refined by power iteration on SS* in G
    achievers = 0
    max_dist = 0.0
    for _ in range(samples):
        g = rng.standard_normal(problem.k)
        g /= math.sqrt(float(g @ M @ g))
        for _ in range(80):
            g = S @ np.linalg.solve(G, S.T @ (M @ g))
            nrm = math.sqrt(float(g @ M @ g))
            if nrm == 0.0:
                break
            g /= nrm
        if nrm == 0.0:
            continue
        if s_star_norm(g) >= math.sqrt(lam1) - 1e-8:
            achievers += 1
            proj = V @ (V.T @ (M @ g))
            pn = math.sqrt(float(proj @ M @ proj))
            if pn == 0.0:
                max_dist = math.inf
                continue
            diff = g - proj / pn
            max_dist = max(max_dist, math.sqrt(max(float(diff @ M @ diff), 0.0)))

    # strict inequality for g with a component outside S(top eigenspace)
    strict_margin = math.inf
    lam_all, _ = _eigenspace(problem)
    lam_next = lam_all[-(mult + 1)] if mult < len(lam_all) else 0.0
    for _ in range(10):
        h = rng.standard_normal(problem.k)
        h -= V @ (V.T @ (M @ h))
        hn = math.sqrt(max(float(h @ M @ h), 0.0))
        if hn < 1e-8:
            continue  # S(top eigenspace) already fills G
        h /= hn
        z = rng.standard_normal(mult)
        eta = basis @ (z / np.linalg.norm(z))
        g = 0.8 * (S @ eta) / math.sqrt(lam1) + 0.6 * h
        g /= math.sqrt(float(g @ M @ g))
        bound = lam1 * (1.0 - (1.0 - lam_next / lam1) * 0.36)
        strict_margin = min(strict_margin, math.sqrt(bound) + 1e-9 - s_star_norm(g))

    passed = (forward_defect <= 1e-10 and achievers > 0 and max_dist <= 1e-6
              and strict_margin >= 0.0)
    return CharacterizationReport(lambda1=lam1, multiplicity=mult,
                                  forward_max_defect=forward_defect,
                                  achievers=achievers,
                                  max_achiever_distance=max_dist,
                                  strict_gap_margin=strict_margin,
                                  passed=passed)


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

def piecewise_constant_instance(d: int) -> DiscreteProblem:
    """Identity operator on piecewise-constant functions over the 2^d
    sub-cubes of the unit cube, under the L2 norm.

    Domain points are the sub-cube representatives (binary corners); the
    kernel Gram is 2^d I so that function values reproduce, and S is the
    identity, making every eigenvalue of W equal to one.
    """
    if d < 1:
        raise ParameterError("d must be >= 1")
    if d > 12:
        raise ResourceLimitError("2^d domain points with d > 12 exceed the model guard")
    m = 2 ** d
    gram = (2.0 ** d) * np.eye(m)
    corners = tuple(itertools.product((0, 1), repeat=d))
    return DiscreteProblem(gram_F=gram, operator_S=np.eye(m), gram_G=gram.copy(),
                           points=corners)


def cube_mean_functional(problem: DiscreteProblem) -> Functional:
    """I_g for g identically one: the mean of f over the unit cube."""
    m = problem.m
    return build_Ig(problem, np.full(m, 1.0 / m))


def subcube_indicator_functional(problem: DiscreteProblem, corner_index: int = 0) -> Functional:
    """I_g for the scaled indicator of one sub-cube: I_g f = 2^(-d/2) f(corner)."""
    m = problem.m
    g = np.zeros(m)
    g[corner_index] = 1.0 / math.sqrt(m)
    return build_Ig(problem, g)


def random_problem(seed: int, m: int, k: int) -> DiscreteProblem:
    """Well-conditioned reproducible instance: gram matrices A'A + 0.1 I from
    seeded standard-normal A, and a standard-normal operator."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, m))
    B = rng.standard_normal((k, k))
    return DiscreteProblem(gram_F=A.T @ A + 0.1 * np.eye(m),
                           operator_S=rng.standard_normal((k, m)),
                           gram_G=B.T @ B + 0.1 * np.eye(k))


def random_problem_with_multiplicity(seed: int, m: int, multiplicity: int,
                                     gap: float = 0.5) -> DiscreteProblem:
    """Instance with a prescribed top-eigenvalue multiplicity.

    Synthesized spectrally: W gets eigenvalues [1]*multiplicity followed by a
    geometric tail below 1 - gap, realized through S = Lambda^(1/2) Q' L' with
    Euclidean gram_G.
    """
    if not 1 <= multiplicity <= m:
        raise ParameterError("need 1 <= multiplicity <= m")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, m))
    G = A.T @ A + 0.1 * np.eye(m)
    L = np.linalg.cholesky(G)
    Q, _ = np.linalg.qr(rng.standard_normal((m, m)))
    tail = (1.0 - gap) * 0.7 ** np.arange(m - multiplicity)
    lam = np.concatenate([np.ones(multiplicity), tail])
    S = np.sqrt(lam)[:, None] * (Q.T @ L.T)
    return DiscreteProblem(gram_F=G, operator_S=S, gram_G=np.eye(m))


# ---------------------------------------------------------------------------
# Flat-file serialization
# ---------------------------------------------------------------------------

def save_problem(problem: DiscreteProblem, path) -> None:
    """Plain-text format: first line 'm k', then gram_F, operator_S, gram_G
    row-major, whitespace-separated."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{problem.m} {problem.k}\n")
        for mat in (problem.gram_F, problem.operator_S, problem.gram_G):
            for row in np.atleast_2d(mat):
                fh.write(" ".join(format(v, ".17g") for v in row) + "\n")


def load_problem(path) -> DiscreteProblem:
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ParameterError("problem file too short")
    m, k = int(tokens[0]), int(tokens[1])
    need = 2 + m * m + k * m + k * k
    if len(tokens) != need:
        raise ParameterError(f"problem file has {len(tokens)} tokens, expected {need}")
    vals = np.array([float(t) for t in tokens[2:]])
    gram_F = vals[:m * m].reshape(m, m)
    S = vals[m * m:m * m + k * m].reshape(k, m)
    gram_G = vals[m * m + k * m:].reshape(k, k)
    return DiscreteProblem(gram_F=gram_F, operator_S=S, gram_G=gram_G)
