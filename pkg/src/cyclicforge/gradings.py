"""Z/mZ-graded complex semisimple matrix Lie algebras.

Builds sl_n and so_n gradings from a block-dimension vector, together with
the Cartan data (conjugate-linear involution tau, trace form B, inner
product B_tau), grade projections, the graded root-space decomposition with
respect to the diagonal torus, cyclic-root detection, Jordan-Chevalley
splitting and Levi/parabolic subalgebras from a Hermitian element.

All matrices are plain complex ndarrays.  Operations broadcast over leading
axes, so a grid of algebra elements with shape (N, M, n, n) can be projected
or bracketed in one call.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "AlgebraMismatch",
    "AsymmetricDims",
    "CyclicRootReport",
    "DegenerateTorus",
    "DimensionMismatch",
    "GradedElement",
    "GradedLieAlgebra",
    "IllConditioned",
    "ModulusTooSmall",
    "Root",
    "RootDatum",
    "build_sl_grading",
    "build_so_grading",
    "component_group_generators",
    "detect_cyclic_roots",
    "jordan_chevalley",
    "levi_from_element",
    "root_decomposition",
]


class DimensionMismatch(ValueError):
    pass


class ModulusTooSmall(ValueError):
    pass


class AsymmetricDims(ValueError):
    pass


class AlgebraMismatch(ValueError):
    pass


class DegenerateTorus(ValueError):
    pass


class IllConditioned(ValueError):
    pass


def _dagger(x: np.ndarray) -> np.ndarray:
    """Conjugate transpose on the last two axes."""
    return np.conj(np.swapaxes(x, -1, -2))


@dataclass(frozen=True)
class GradedLieAlgebra:
    """A matrix Lie algebra sl_n or so(q) with a Z/mZ-grading by basis blocks.

    ``line_grade[l]`` is the grade of the l-th basis line of C^n; the grading
    automorphism is conjugation by ``grading_element``.  For so-kind, ``q``
    is the symmetric bilinear form pairing the grade-j block with the
    grade-(-j) block, and ``dual_line`` is the induced involution on basis
    lines.
    """

    kind: str  # "sl" | "so"
    n: int
    m: int
    dims: tuple[int, ...]
    line_grade: np.ndarray  # (n,) int
    grading_element: np.ndarray  # (n, n), normalized to det 1 for sl
    q: np.ndarray | None = None  # (n, n) real symmetric, q @ q = I
    dual_line: np.ndarray | None = None  # (n,) int involution, so-kind only
    q_sign: np.ndarray | None = None  # (n,) entries q[l, dual_line[l]]

    # -- scalars and involutions ------------------------------------------------

    @property
    def zeta(self) -> complex:
        return np.exp(2j * np.pi / self.m)

    @cached_property
    def theta_diag(self) -> np.ndarray:
        """Diagonal of the unnormalized grading element zeta^{-grade}."""
        return self.zeta ** (-self.line_grade)

    @cached_property
    def grading_involution(self) -> np.ndarray | None:
        """For even m, the +-1 diagonal of theta^{m/2}; None for odd m."""
        if self.m % 2:
            return None
        return np.where(self.line_grade % 2 == 0, 1.0, -1.0)

    def theta(self, x: np.ndarray, k: int = 1) -> np.ndarray:
        """Apply the grading automorphism k times: Ad(I)^k x."""
        d = self.theta_diag**k
        return (d[:, None] / d[None, :]) * x

    def tau(self, x: np.ndarray) -> np.ndarray:
        """Cartan involution fixing the compact form: x -> -x^*."""
        return -_dagger(x)

    def form(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Trace form B(x, y) = tr(xy) (proportional to the Killing form)."""
        return np.einsum("...ij,...ji->...", x, y)

    def inner(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Positive-definite inner product B_tau(x, y) = -B(tau x, y) = tr(x^* y)."""
        return np.einsum("...ji,...jk->...", np.conj(x), y)

    def norm(self, x: np.ndarray) -> np.ndarray:
        return np.sqrt(np.abs(self.inner(x, x)))

    # -- grade projections --------------------------------------------------------

    def project(self, x: np.ndarray, j: int) -> np.ndarray:
        """Grade projection pr_j(x): averaging over theta-powers.

        The (a, b) entry of x maps the grade-g[b] line into the grade-g[a]
        line and so sits in grade g[b] - g[a]; the averaging formula reduces
        to an exact entry mask.
        """
        mask = (self.line_grade[None, :] - self.line_grade[:, None] - j) % self.m == 0
        return np.where(mask, x, 0.0)

    def project_z(self, x: np.ndarray) -> np.ndarray:
        """Projection onto the sum of grades outside {0, 1, -1}."""
        out = x.copy()
        for j in (0, 1, -1):
            out = out - self.project(x, j)
        return out

    def project_pm1(self, x: np.ndarray) -> np.ndarray:
        return self.project(x, 1) + self.project(x, -1)

    def project_h0(self, x: np.ndarray) -> np.ndarray:
        """Compact part of the grade-0 component (anti-Hermitian)."""
        x0 = self.project(x, 0)
        return 0.5 * (x0 - _dagger(x0))

    def project_m0(self, x: np.ndarray) -> np.ndarray:
        """Non-compact part of the grade-0 component (Hermitian)."""
        x0 = self.project(x, 0)
        return 0.5 * (x0 + _dagger(x0))

    def project_line(self, x: np.ndarray, span: np.ndarray) -> np.ndarray:
        """B_tau-orthogonal projection onto the line spanned by ``span``."""
        u = span / self.norm(span)
        coeff = self.inner(u, x)
        return coeff[..., None, None] * u

    # -- membership and sampling --------------------------------------------------

    def contains(self, x: np.ndarray, tol: float = 1e-10) -> bool:
        if self.kind == "sl":
            return bool(np.all(np.abs(np.trace(x, axis1=-2, axis2=-1)) <= tol * max(1.0, np.max(np.abs(x)))))
        qx = self.q @ x
        return bool(np.max(np.abs(qx + np.swapaxes(qx, -1, -2))) <= tol * max(1.0, np.max(np.abs(x))))

    def into_algebra(self, x: np.ndarray) -> np.ndarray:
        """Project an arbitrary matrix onto the algebra (traceless / q-skew part)."""
        if self.kind == "sl":
            tr = np.trace(x, axis1=-2, axis2=-1) / self.n
            return x - tr[..., None, None] * np.eye(self.n)
        return 0.5 * (x - self.q @ np.swapaxes(x, -1, -2) @ self.q)

    def random_element(self, rng: np.random.Generator, grade: int | None = None, shape: tuple = ()) -> np.ndarray:
        x = rng.standard_normal(shape + (self.n, self.n)) + 1j * rng.standard_normal(shape + (self.n, self.n))
        x = self.into_algebra(x)
        if grade is not None:
            x = self.project(x, grade)
        return x

    # -- bases ----------------------------------------------------------------------

    @cached_property
    def basis(self) -> list[tuple[np.ndarray, int]]:
        """List of (matrix, grade) spanning the algebra, B_tau-orthogonal."""
        out: list[tuple[np.ndarray, int]] = []
        n = self.n
        g = self.line_grade
        if self.kind == "sl":
            for a in range(n):
                for b in range(n):
                    if a == b:
                        continue
                    e = np.zeros((n, n), dtype=complex)
                    e[a, b] = 1.0
                    out.append((e, int((g[b] - g[a]) % self.m)))
            for a in range(n - 1):
                e = np.zeros((n, n), dtype=complex)
                e[a, a] = 1.0
                e[a + 1, a + 1] = -1.0
                out.append((e / np.sqrt(2.0), 0))
            return out
        sigma = self.dual_line
        s = self.q_sign
        seen = set()
        for a in range(n):
            for b in range(n):
                pair = (a, b)
                mirror = (int(sigma[b]), int(sigma[a]))
                if mirror in seen or pair in seen:
                    continue
                seen.add(pair)
                e = np.zeros((n, n), dtype=complex)
                e[a, b] = 1.0
                e[sigma[b], sigma[a]] -= s[a] * s[b]
                if np.max(np.abs(e)) == 0.0:
                    continue
                out.append((e / np.linalg.norm(e), int((g[b] - g[a]) % self.m)))
        return out

    def basis_of_grade(self, j: int) -> list[np.ndarray]:
        return [b for b, k in self.basis if k == j % self.m]

    @cached_property
    def basis_h0(self) -> list[np.ndarray]:
        """Real basis of the compact part of the grade-0 subalgebra."""
        raw: list[np.ndarray] = []
        for b in self.basis_of_grade(0):
            for cand in (b - _dagger(b), 1j * (b + _dagger(b))):
                if np.linalg.norm(cand) > 1e-12:
                    raw.append(cand / np.linalg.norm(cand))
        if not raw:
            return []
        flat = np.array([c.ravel() for c in raw])
        flat = np.concatenate([flat.real, flat.imag], axis=1)
        _, sv, vt = np.linalg.svd(flat, full_matrices=False)
        keep = vt[sv > 1e-9 * sv[0]]
        half = keep.shape[1] // 2
        return [(keep[i, :half] + 1j * keep[i, half:]).reshape(self.n, self.n) for i in range(keep.shape[0])]

    @cached_property
    def torus_basis(self) -> list[np.ndarray]:
        """Basis of the diagonal torus of the grade-0 subalgebra."""
        n = self.n
        if self.kind == "sl":
            vecs = []
            for a in range(n - 1):
                v = np.zeros(n)
                v[a], v[a + 1] = 1.0, -1.0
                vecs.append(v)
        else:
            sigma = self.dual_line
            vecs = []
            for a in range(n):
                if a < sigma[a]:
                    v = np.zeros(n)
                    v[a], v[sigma[a]] = 1.0, -1.0
                    vecs.append(v)
        return [np.diag(v.astype(complex)) for v in vecs]

    # -- line labelling for root coordinates -----------------------------------------

    @cached_property
    def line_label(self) -> list[tuple[int, int, int]]:
        """Per basis line, (sign, block j, index p) in the epsilon coordinates.

        sign=+1 for a primary line carrying the functional eps_p^{(j)}, -1 for
        the dual line carrying -eps_p^{(j)}, 0 for a line with trivial torus
        action (middle of a self-paired odd block).
        """
        labels: list[tuple[int, int, int]] = []
        offsets = np.cumsum((0,) + self.dims)
        for a in range(self.n):
            j = int(self.line_grade[a])
            p = a - int(offsets[j]) + 1
            if self.kind == "sl":
                labels.append((1, j, p))
                continue
            d = self.dims[j]
            if (2 * j) % self.m == 0:
                if 2 * p == d + 1:
                    labels.append((0, j, p))
                elif 2 * p <= d:
                    labels.append((1, j, p))
                else:
                    labels.append((-1, j, d + 1 - p))
            else:
                jr = j if (j % self.m) <= (self.m - j) % self.m else (self.m - j) % self.m
                if j == jr:
                    labels.append((1, j, p))
                else:
                    labels.append((-1, jr, p))
        return labels


@dataclass
class GradedElement:
    """An algebra element with cached graded components."""

    algebra: GradedLieAlgebra
    value: np.ndarray
    _components: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    def component(self, j: int) -> np.ndarray:
        j = j % self.algebra.m
        if j not in self._components:
            self._components[j] = self.algebra.project(self.value, j)
        return self._components[j]

    def bracket(self, other: "GradedElement") -> "GradedElement":
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("elements live in different algebras")
        v = self.value @ other.value - other.value @ self.value
        return GradedElement(self.algebra, v)


# -- builders -------------------------------------------------------------------------


def _check_modulus(m: int) -> None:
    if m < 3:
        raise ModulusTooSmall(f"grading modulus must be >= 3, got {m}")


def build_sl_grading(n: int, dims: tuple[int, ...]) -> GradedLieAlgebra:
    """Grade sl_n by a decomposition C^n = V_0 + ... + V_{m-1} of block sizes ``dims``."""
    dims = tuple(int(d) for d in dims)
    m = len(dims)
    _check_modulus(m)
    if sum(dims) != n:
        raise DimensionMismatch(f"block dimensions {dims} do not sum to n={n}")
    if any(d < 0 for d in dims):
        raise DimensionMismatch("block dimensions must be nonnegative")
    line_grade = np.repeat(np.arange(m), dims)
    zeta = np.exp(2j * np.pi / m)
    diag = zeta ** (-line_grade.astype(float))
    det = np.prod(diag)
    grading_element = np.diag(diag / det ** (1.0 / n))
    return GradedLieAlgebra(kind="sl", n=n, m=m, dims=dims, line_grade=line_grade, grading_element=grading_element)


def build_so_grading(dims: tuple[int, ...], self_paired_signs: dict[int, np.ndarray] | None = None) -> GradedLieAlgebra:
    """Grade so(q) by blocks of sizes ``dims`` with q pairing V_j and V_{-j}.

    The form q is the standard one: anti-diagonal +1 on self-paired blocks
    (grades j with 2j = 0) and the identity pairing between V_j and V_{-j}
    otherwise.  ``self_paired_signs`` optionally overrides the anti-diagonal
    entries of a self-paired block, e.g. {0: [-1]} to make the grade-0 line
    negative.
    """
    dims = tuple(int(d) for d in dims)
    m = len(dims)
    _check_modulus(m)
    for j in range(m):
        if dims[j] != dims[(-j) % m]:
            raise AsymmetricDims(f"block dimensions must satisfy d_j = d_(-j); got {dims}")
    n = sum(dims)
    line_grade = np.repeat(np.arange(m), dims)
    offsets = np.cumsum((0,) + dims)
    dual = np.zeros(n, dtype=int)
    q = np.zeros((n, n))
    for j in range(m):
        d = dims[j]
        if d == 0:
            continue
        a0 = int(offsets[j])
        if (2 * j) % m == 0:
            signs = np.ones(d)
            if self_paired_signs and j in self_paired_signs:
                signs = np.asarray(self_paired_signs[j], dtype=float)
                if signs.shape != (d,):
                    raise DimensionMismatch(f"self_paired_signs[{j}] must have length {d}")
            for p in range(d):
                dual[a0 + p] = a0 + (d - 1 - p)
                q[a0 + p, a0 + (d - 1 - p)] = signs[p]
            if np.max(np.abs(q[a0 : a0 + d, a0 : a0 + d] - q[a0 : a0 + d, a0 : a0 + d].T)) > 0:
                raise DimensionMismatch(f"self-paired signs on block {j} must be symmetric under p -> d+1-p")
        else:
            b0 = int(offsets[(-j) % m])
            for p in range(d):
                dual[a0 + p] = b0 + p
                q[a0 + p, b0 + p] = 1.0
    if np.max(np.abs(q @ q - np.eye(n))) > 1e-14:
        raise DimensionMismatch("bilinear form must square to the identity")
    zeta = np.exp(2j * np.pi / m)
    grading_element = np.diag(zeta ** (-line_grade.astype(float)))
    q_sign = q[np.arange(n), dual]
    return GradedLieAlgebra(
        kind="so", n=n, m=m, dims=dims, line_grade=line_grade,
        grading_element=grading_element, q=q, dual_line=dual, q_sign=q_sign,
    )


# -- root data ------------------------------------------------------------------------


@dataclass
class Root:
    weight: dict[tuple[int, int], float]  # (block j, index p) -> coefficient of eps_p^{(j)}
    grade: int
    space: list[np.ndarray]
    weight_values: np.ndarray  # values on the torus basis, used as the grouping key
    is_cyclic: bool | None = None
    heuristic: bool = False

    @property
    def label(self) -> str:
        if not self.weight:
            return "0"
        parts = []
        for (j, p), c in sorted(self.weight.items()):
            c = int(round(c))
            head = "" if abs(c) == 1 else str(abs(c)) + "*"
            parts.append(("-" if c < 0 else ("+" if parts else "")) + head + f"e({j},{p})")
        return "".join(parts)

    def dimension(self) -> int:
        return len(self.space)


@dataclass
class RootDatum:
    algebra: GradedLieAlgebra
    torus_basis: list[np.ndarray]
    roots: list[Root]
    heuristic_family: bool = False

    def find(self, label: str, grade: int) -> Root | None:
        for r in self.roots:
            if r.grade == grade % self.algebra.m and r.label == label:
                return r
        return None

    def cyclic_roots(self) -> list[Root]:
        return [r for r in self.roots if r.is_cyclic]


@dataclass
class CyclicRootReport:
    labels: list[str]
    heuristic: bool


def root_decomposition(alg: GradedLieAlgebra, gap_tol: float = 1e-8) -> RootDatum:
    """Split each graded piece into joint ad-eigenspaces of the diagonal torus.

    Every basis element is already a joint eigenvector, so the decomposition
    groups basis elements by their weight values on the torus basis.  Raises
    DegenerateTorus when two weight groups are closer than ``gap_tol`` without
    being identical.
    """
    torus = alg.torus_basis
    tvals = np.array([np.real(np.diag(t)) for t in torus])  # (r, n)
    groups: dict[tuple, Root] = {}
    for b, grade in alg.basis:
        a, c = np.unravel_index(int(np.argmax(np.abs(b))), b.shape)
        w = tvals[:, a] - tvals[:, c]
        key = (grade,) + tuple(int(round(v)) for v in w)
        if key not in groups:
            sign_a, ja, pa = alg.line_label[a]
            sign_c, jc, pc = alg.line_label[c]
            weight: dict[tuple[int, int], float] = {}
            if sign_a:
                weight[(ja, pa)] = weight.get((ja, pa), 0.0) + sign_a
            if sign_c:
                weight[(jc, pc)] = weight.get((jc, pc), 0.0) - sign_c
            weight = {k: v for k, v in weight.items() if v != 0.0}
            groups[key] = Root(weight=weight, grade=grade, space=[], weight_values=w)
        groups[key].space.append(b)
    roots = [r for r in groups.values()]
    # weight separation check
    for i, ri in enumerate(roots):
        for rj in roots[i + 1 :]:
            if ri.grade != rj.grade:
                continue
            d = np.max(np.abs(ri.weight_values - rj.weight_values))
            if 0 < d < gap_tol:
                raise DegenerateTorus(f"torus weights separated by {d}, below tolerance {gap_tol}")
    for r in roots:
        if np.max(np.abs(r.weight_values), initial=0.0) > 0.5 and len(r.space) != 1:
            raise DegenerateTorus(f"nonzero weight {r.label} has root space dimension {len(r.space)}")
    heuristic = not _is_appendix_family(alg)
    return RootDatum(algebra=alg, torus_basis=torus, roots=[r for r in roots if r.weight], heuristic_family=heuristic)


def _is_appendix_family(alg: GradedLieAlgebra) -> bool:
    """Families whose cyclic-root detection rule is exact rather than heuristic."""
    if alg.kind == "sl":
        return alg.dims[0] == 1 and alg.dims[1] == 1
    if alg.dims[0] == 1 and alg.dims[1] == 1:
        return True
    if alg.m == 3 and alg.dims[1] == 2:
        return True
    return False


def component_group_generators(alg: GradedLieAlgebra) -> list[np.ndarray]:
    """Finite generator list used to approximate the component group of H^Theta.

    For sl-kind the fixed group is connected, so the list is empty.  For
    so-kind we take the sign elements +-I_(d) and -1 whenever they are
    special orthogonal; these are diagonal phase matrices, unitary and fixed
    by the grading automorphism.
    """
    if alg.kind == "sl":
        return []
    gens = []
    base = np.diag(alg.theta_diag)
    for cand in (base, -base, -np.eye(alg.n, dtype=complex)):
        if abs(np.linalg.det(cand) - 1.0) < 1e-10:
            gens.append(cand)
    return gens


def detect_cyclic_roots(alg: GradedLieAlgebra, rd: RootDatum, tol: float = 1e-10) -> RootDatum:
    """Mark grade-1 roots whose space is ad(h_0)-stable and Ad-stable under
    the configured component-group generators."""
    h0 = alg.basis_h0
    gens = component_group_generators(alg)
    for r in rd.roots:
        if r.grade != 1 % alg.m:
            r.is_cyclic = None
            continue
        if len(r.space) != 1:
            r.is_cyclic = False
            continue
        v = r.space[0]
        v = v / alg.norm(v)
        ok = True
        for h in h0:
            w = h @ v - v @ h
            resid = w - alg.project_line(w, v)
            if alg.norm(resid) > tol * max(1.0, float(alg.norm(w))):
                ok = False
                break
        if ok:
            for gmat in gens:
                w = gmat @ v @ np.linalg.inv(gmat)
                resid = w - alg.project_line(w, v)
                if alg.norm(resid) > tol * max(1.0, float(alg.norm(w))):
                    ok = False
                    break
        r.is_cyclic = ok
        r.heuristic = rd.heuristic_family
    return rd


# -- Jordan-Chevalley and Levi data ---------------------------------------------------


def _cluster(vals: np.ndarray, tol: float) -> list[np.ndarray]:
    """Group complex values into clusters linked at distance < tol."""
    order = np.argsort(vals.real + 1e-9 * vals.imag)
    idx = order.tolist()
    clusters: list[list[int]] = []
    for i in idx:
        placed = False
        for cl in clusters:
            if any(abs(vals[i] - vals[j]) < tol for j in cl):
                cl.append(i)
                placed = True
                break
        if not placed:
            clusters.append([i])
    # merge clusters that ended up linked
    merged = True
    while merged:
        merged = False
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                if any(abs(vals[i] - vals[j]) < tol for i in clusters[a] for j in clusters[b]):
                    clusters[a] += clusters[b]
                    del clusters[b]
                    merged = True
                    break
            if merged:
                break
    return [np.array(c, dtype=int) for c in clusters]


def jordan_chevalley(x: np.ndarray, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Split x = s + n with s semisimple, n nilpotent, [s, n] = 0.

    s is computed as a Hermite interpolation polynomial in x: on each
    eigenvalue cluster the polynomial takes the cluster mean with vanishing
    derivatives up to the cluster multiplicity.  Commutation with x is then
    automatic.  Raises IllConditioned when clusters chain together over a
    range much wider than ``tol``.
    """
    x = np.asarray(x, dtype=complex)
    nsize = x.shape[0]
    vals = np.linalg.eigvals(x)
    clusters = _cluster(vals, tol)
    for cl in clusters:
        if len(cl) > 1 and np.max(np.abs(vals[cl] - vals[cl].mean())) > 2 * tol:
            raise IllConditioned("eigenvalue clusters chain beyond the separation tolerance")
    scale = max(1.0, float(np.max(np.abs(vals))))
    mus = [vals[cl].mean() / scale for cl in clusters]
    mults = [len(cl) for cl in clusters]
    deg = sum(mults)
    rows, rhs = [], []
    for mu, mult in zip(mus, mults):
        for r in range(mult):
            row = np.zeros(deg, dtype=complex)
            for k in range(r, deg):
                c = 1.0
                for t in range(r):
                    c *= k - t
                row[k] = c * mu ** (k - r)
            rows.append(row)
            rhs.append(mu if r == 0 else 0.0)
    coeffs = np.linalg.solve(np.array(rows), np.array(rhs))
    xs = x / scale
    s = np.zeros_like(x)
    p = np.eye(nsize, dtype=complex)
    for c in coeffs:
        s = s + c * p
        p = p @ xs
    s = s * scale
    return s, x - s


def levi_from_element(alg: GradedLieAlgebra, h: np.ndarray, tol: float = 1e-8) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Levi and parabolic subalgebra bases from a Hermitian element h.

    The Levi part is ker ad(h); the parabolic part collects the nonnegative
    ad-eigenvalue spaces.  ad(h) is Hermitian for B_tau, so an eigh on its
    matrix in an orthonormal basis is exact enough.
    """
    basis = [b for b, _ in alg.basis]
    k = len(basis)
    admat = np.zeros((k, k), dtype=complex)
    for j, b in enumerate(basis):
        w = h @ b - b @ h
        for i, bi in enumerate(basis):
            admat[i, j] = alg.inner(bi, w)
    evals, evecs = np.linalg.eigh(0.5 * (admat + admat.conj().T))
    levi, para = [], []
    for i in range(k):
        vec = sum(evecs[j, i] * basis[j] for j in range(k))
        if abs(evals[i]) <= tol:
            levi.append(vec)
            para.append(vec)
        elif evals[i] > tol:
            para.append(vec)
    return levi, para
