"""Lie algebras as exact structure-constant tables, with reductive splittings.

The bracket convention throughout is [e_b, e_c] = sum_a c[a, b, c] e_a, and
for algebra-valued forms [x, y]^a = sum_{b,c} c[a, b, c] x^b wedge y^c.
Built-in families (so(n), gl(n; C), u(n), su(2), abelian R^d) ship with a
matrix realization from which the table is computed, so the two descriptions
can be cross-validated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .algebra import (
    Context,
    ContextError,
    ContractError,
    GradedElement,
    Scalar,
    ZERO,
)

__all__ = [
    "LieAlgebra",
    "ReductiveSplit",
    "LieValuedForm",
    "ValidationFailure",
    "ValidationReport",
    "validate",
    "validate_split",
    "bracket",
    "project",
    "so_algebra",
    "gl_algebra",
    "u_algebra",
    "su2_algebra",
    "abelian_algebra",
    "split_from_h",
    "so_subalgebra_split",
    "gl_subalgebra_split",
    "su2_diagonal_split",
    "trivial_split",
    "named_algebra",
    "named_split",
    "algebra_from_dict",
    "algebra_from_file",
]


# ---------------------------------------------------------------------------
# Exact matrices (tuples of tuples of Scalar)
# ---------------------------------------------------------------------------

def _as_scalar(v) -> Scalar:
    return v if isinstance(v, Scalar) else Scalar(v)


def make_matrix(rows) -> tuple:
    return tuple(tuple(_as_scalar(v) for v in row) for row in rows)


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = ZERO
            for k in range(m):
                a = A[i][k]
                if a.is_zero:
                    continue
                b = B[k][j]
                if b.is_zero:
                    continue
                s = s + a * b
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def mat_sub(A, B):
    return tuple(
        tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def mat_add(A, B):
    return tuple(
        tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def mat_scale(s: Scalar, A):
    return tuple(tuple(s * a for a in row) for row in A)


def mat_commutator(A, B):
    return mat_sub(mat_mul(A, B), mat_mul(B, A))


def mat_trace(A) -> Scalar:
    s = ZERO
    for i in range(len(A)):
        s = s + A[i][i]
    return s


def mat_is_zero(A) -> bool:
    return all(v.is_zero for row in A for v in row)


def _flatten(A):
    return [v for row in A for v in row]


def _expand_in_basis(basis_vecs: Sequence[Sequence[Scalar]], targets):
    """Express each target vector in the given independent basis, exactly.

    Gaussian elimination over the Gaussian rationals; raises ContractError if
    a target is outside the span or the basis is dependent.
    """
    d = len(basis_vecs)
    m = len(basis_vecs[0])
    n_t = len(targets)
    rows = [
        [basis_vecs[j][r] for j in range(d)] + [t[r] for t in targets]
        for r in range(m)
    ]
    pivot_rows = []
    cur = 0
    for col in range(d):
        pivot = None
        for r in range(cur, m):
            if not rows[r][col].is_zero:
                pivot = r
                break
        if pivot is None:
            raise ContractError("matrix basis is linearly dependent")
        rows[cur], rows[pivot] = rows[pivot], rows[cur]
        inv = rows[cur][col].inverse()
        rows[cur] = [v * inv for v in rows[cur]]
        for r in range(m):
            if r == cur:
                continue
            f = rows[r][col]
            if f.is_zero:
                continue
            rows[r] = [a - f * b for a, b in zip(rows[r], rows[cur])]
        pivot_rows.append(cur)
        cur += 1
    for r in range(cur, m):
        if any(not rows[r][d + t].is_zero for t in range(n_t)):
            raise ContractError("target is outside the span of the basis")
    return [
        [rows[pivot_rows[j]][d + t] for j in range(d)] for t in range(n_t)
    ]


def structure_from_matrices(matrices) -> dict:
    """Structure constants of the span of independent matrices, exactly."""
    d = len(matrices)
    basis_vecs = [_flatten(M) for M in matrices]
    pairs = [(b, c) for b in range(d) for c in range(b + 1, d)]
    targets = [_flatten(mat_commutator(matrices[b], matrices[c])) for b, c in pairs]
    coeff_rows = _expand_in_basis(basis_vecs, targets)
    structure = {}
    for (b, c), coeffs in zip(pairs, coeff_rows):
        for a, v in enumerate(coeffs):
            if v.is_zero:
                continue
            structure[(a, b, c)] = v
            structure[(a, c, b)] = -v
    return structure


# ---------------------------------------------------------------------------
# Core types
# ---------------------------------------------------------------------------

class LieAlgebra:
    """Structure-constant table [e_b, e_c] = sum_a c[a,b,c] e_a."""

    def __init__(self, dim: int, labels: Sequence[str], structure: Mapping,
                 matrices=None, name: str = "", meta: Optional[dict] = None):
        if dim <= 0:
            raise ContractError("dimension must be positive")
        if len(labels) != dim:
            raise ContractError("need one label per basis element")
        table = {}
        for key, value in structure.items():
            a, b, c = key
            if not (0 <= a < dim and 0 <= b < dim and 0 <= c < dim):
                raise ContractError(f"structure index out of range: {key}")
            value = _as_scalar(value)
            if not value.is_zero:
                table[(a, b, c)] = value
        self.dim = dim
        self.labels = tuple(labels)
        self.structure = table
        self.matrices = tuple(make_matrix(M) for M in matrices) if matrices else None
        self.name = name
        self.meta = dict(meta or {})
        by_bc: dict = {}
        for (a, b, c), v in table.items():
            by_bc.setdefault((b, c), []).append((a, v))
        self._by_bc = {k: tuple(v) for k, v in by_bc.items()}

    def c(self, a: int, b: int, c: int) -> Scalar:
        return self.structure.get((a, b, c), ZERO)

    def bracket_on_basis(self, b: int, c: int):
        """[e_b, e_c] as a tuple of (index, coefficient)."""
        return self._by_bc.get((b, c), ())

    def has_imaginary_data(self) -> bool:
        if any(v.im for v in self.structure.values()):
            return True
        if self.matrices:
            return any(v.im for M in self.matrices for row in M for v in row)
        return False

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or 'custom'}, dim={self.dim})"


@dataclass(frozen=True)
class ReductiveSplit:
    """Index partition of the basis into a subalgebra part and a complement."""

    h: tuple
    p: tuple

    @staticmethod
    def from_h(dim: int, h_indices: Sequence[int]) -> "ReductiveSplit":
        h = tuple(sorted(h_indices))
        if any(not 0 <= i < dim for i in h) or len(set(h)) != len(h):
            raise ContractError(f"bad subalgebra indices {h_indices}")
        p = tuple(i for i in range(dim) if i not in set(h))
        return ReductiveSplit(h, p)


@dataclass
class ValidationFailure:
    invariant: str
    indices: tuple
    detail: str = ""


@dataclass
class ValidationReport:
    passed: bool
    failures: list = field(default_factory=list)

    def first(self) -> Optional[ValidationFailure]:
        return self.failures[0] if self.failures else None


def validate(algebra: LieAlgebra) -> ValidationReport:
    """Check antisymmetry, the Jacobi identity, and the matrix realization.

    Each invariant reports at most its first violating index tuple.
    """
    failures = []

    keys = set(algebra.structure)
    keys |= {(a, c, b) for (a, b, c) in algebra.structure}
    for key in sorted(keys):
        a, b, c = key
        if not (algebra.c(a, b, c) + algebra.c(a, c, b)).is_zero:
            failures.append(ValidationFailure(
                "antisymmetry", key,
                f"c[{a},{b},{c}] + c[{a},{c},{b}] = "
                f"{(algebra.c(a, b, c) + algebra.c(a, c, b)).render()}"))
            break

    jac_done = False
    for b in range(algebra.dim):
        if jac_done:
            break
        for c in range(algebra.dim):
            if jac_done:
                break
            for d in range(algebra.dim):
                acc: dict = {}
                for (pair1, pair2) in (((b, c), d), ((c, d), b), ((d, b), c)):
                    for e, k1 in algebra.bracket_on_basis(*pair1):
                        for a, k2 in algebra.bracket_on_basis(e, pair2):
                            cur = acc.get(a, ZERO) + k1 * k2
                            if cur.is_zero:
                                acc.pop(a, None)
                            else:
                                acc[a] = cur
                if acc:
                    a = sorted(acc)[0]
                    failures.append(ValidationFailure(
                        "jacobi", (a, b, c, d),
                        f"cyclic sum = {acc[a].render()}"))
                    jac_done = True
                    break

    if algebra.matrices is not None:
        done = False
        for b in range(algebra.dim):
            if done:
                break
            for c in range(algebra.dim):
                expected = mat_commutator(algebra.matrices[b], algebra.matrices[c])
                for a, v in algebra.bracket_on_basis(b, c):
                    expected = mat_sub(expected, mat_scale(v, algebra.matrices[a]))
                if not mat_is_zero(expected):
                    failures.append(ValidationFailure(
                        "matrix-realization", (b, c),
                        "commutator does not match the table"))
                    done = True
                    break

    return ValidationReport(not failures, failures)


def validate_split(algebra: LieAlgebra, split: ReductiveSplit) -> ValidationReport:
    """Check that h is a subalgebra and [h, p] lands in p."""
    failures = []
    h, p = set(split.h), set(split.p)
    if h & p or h | p != set(range(algebra.dim)):
        failures.append(ValidationFailure(
            "partition", (tuple(split.h), tuple(split.p)),
            "indices must partition the basis"))
        return ValidationReport(False, failures)

    for (a, b, c), v in sorted(algebra.structure.items()):
        if b in h and c in h and a in p:
            failures.append(ValidationFailure(
                "subalgebra", (a, b, c),
                f"c[{a},{b},{c}] = {v.render()} leaks into the complement"))
            break
    for (a, b, c), v in sorted(algebra.structure.items()):
        if b in h and c in p and a in h:
            failures.append(ValidationFailure(
                "reductive", (a, b, c),
                f"c[{a},{b},{c}] = {v.render()} breaks ad-invariance of the complement"))
            break
    return ValidationReport(not failures, failures)


class LieValuedForm:
    """One graded element per basis index, all of one homogeneous degree."""

    __slots__ = ("algebra", "ctx", "components", "degree")

    def __init__(self, algebra: LieAlgebra, ctx: Context,
                 components: Sequence[GradedElement], degree: int):
        components = tuple(components)
        if len(components) != algebra.dim:
            raise ContractError("need one component per basis element")
        for comp in components:
            if comp.ctx is not ctx:
                raise ContextError("component over a different context")
            if comp.is_zero:
                continue
            if not comp.is_homogeneous or comp.degree() != degree:
                raise ContractError(
                    f"components must be homogeneous of degree {degree}")
        self.algebra = algebra
        self.ctx = ctx
        self.components = components
        self.degree = degree

    @staticmethod
    def zero(algebra: LieAlgebra, ctx: Context, degree: int) -> "LieValuedForm":
        z = ctx.zero()
        return LieValuedForm(algebra, ctx, (z,) * algebra.dim, degree)

    def _check(self, other: "LieValuedForm") -> None:
        if self.algebra is not other.algebra or self.ctx is not other.ctx:
            raise ContextError("forms over different algebras or contexts")

    def __add__(self, other: "LieValuedForm") -> "LieValuedForm":
        self._check(other)
        if self.degree != other.degree:
            raise ContractError("cannot add forms of different degrees")
        comps = tuple(a + b for a, b in zip(self.components, other.components))
        return LieValuedForm(self.algebra, self.ctx, comps, self.degree)

    def __sub__(self, other: "LieValuedForm") -> "LieValuedForm":
        return self + (-other)

    def __neg__(self) -> "LieValuedForm":
        return LieValuedForm(
            self.algebra, self.ctx,
            tuple(-c for c in self.components), self.degree)

    def scale(self, s) -> "LieValuedForm":
        return LieValuedForm(
            self.algebra, self.ctx,
            tuple(c.scale(s) for c in self.components), self.degree)

    def times_t(self, power: int = 1) -> "LieValuedForm":
        return LieValuedForm(
            self.algebra, self.ctx,
            tuple(c.times_t(power) for c in self.components), self.degree)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def support(self) -> tuple:
        return tuple(a for a, c in enumerate(self.components) if not c.is_zero)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieValuedForm):
            return NotImplemented
        return (self.algebra is other.algebra and self.ctx is other.ctx
                and self.components == other.components)

    def first_nonzero(self):
        """(basis index, leading term string) of the first nonzero component."""
        for a, c in enumerate(self.components):
            if not c.is_zero:
                return a, c.leading_term_str()
        return None

    def __repr__(self) -> str:
        nz = self.support()
        return f"LieValuedForm(degree={self.degree}, support={nz})"


def bracket(x: LieValuedForm, y: LieValuedForm) -> LieValuedForm:
    """[x, y]^a = sum c[a,b,c] x^b /\\ y^c; degrees add."""
    x._check(y)
    algebra, ctx = x.algebra, x.ctx
    acc = [ctx.zero() for _ in range(algebra.dim)]
    for (b, c), entries in algebra._by_bc.items():
        xb = x.components[b]
        if xb.is_zero:
            continue
        yc = y.components[c]
        if yc.is_zero:
            continue
        prod = xb * yc
        if prod.is_zero:
            continue
        for a, k in entries:
            acc[a] = acc[a] + prod.scale(k)
    return LieValuedForm(algebra, ctx, acc, x.degree + y.degree)


def project(split: ReductiveSplit, x: LieValuedForm):
    """Zero out the complementary components; returns (h_part, p_part)."""
    zero = x.ctx.zero()
    h_set = set(split.h)
    h_comps = tuple(c if a in h_set else zero for a, c in enumerate(x.components))
    p_comps = tuple(zero if a in h_set else c for a, c in enumerate(x.components))
    return (
        LieValuedForm(x.algebra, x.ctx, h_comps, x.degree),
        LieValuedForm(x.algebra, x.ctx, p_comps, x.degree),
    )


# ---------------------------------------------------------------------------
# Built-in families
# ---------------------------------------------------------------------------

def _elementary(n: int, i: int, j: int, value=1):
    rows = [[Scalar(0)] * n for _ in range(n)]
    rows[i][j] = _as_scalar(value)
    return make_matrix(rows)


def so_algebra(n: int) -> LieAlgebra:
    """so(n) with basis E_ij - E_ji for i < j, ordered lexicographically."""
    if n < 2:
        raise ContractError("so(n) needs n >= 2")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mats = [mat_sub(_elementary(n, i, j), _elementary(n, j, i)) for i, j in pairs]
    labels = [f"E[{i + 1},{j + 1}]" for i, j in pairs]
    structure = structure_from_matrices(mats) if len(pairs) > 1 else {}
    return LieAlgebra(len(pairs), labels, structure, mats, name=f"so{n}",
                      meta={"family": "so", "n": n, "pairs": tuple(pairs)})


def gl_algebra(n: int) -> LieAlgebra:
    """gl(n; C) with basis E_ij, ordered lexicographically."""
    pairs = [(i, j) for i in range(n) for j in range(n)]
    mats = [_elementary(n, i, j) for i, j in pairs]
    labels = [f"E[{i + 1},{j + 1}]" for i, j in pairs]
    structure = structure_from_matrices(mats)
    return LieAlgebra(len(pairs), labels, structure, mats, name=f"gl{n}",
                      meta={"family": "gl", "n": n, "pairs": tuple(pairs)})


def u_algebra(n: int) -> LieAlgebra:
    """u(n): skew-hermitian matrices over the Gaussian rationals."""
    i_unit = Scalar(0, 1)
    mats = []
    labels = []
    for k in range(n):
        mats.append(_elementary(n, k, k, i_unit))
        labels.append(f"iE[{k + 1},{k + 1}]")
    for j in range(n):
        for k in range(j + 1, n):
            mats.append(mat_sub(_elementary(n, j, k), _elementary(n, k, j)))
            labels.append(f"A[{j + 1},{k + 1}]")
            mats.append(mat_add(_elementary(n, j, k, i_unit),
                                _elementary(n, k, j, i_unit)))
            labels.append(f"S[{j + 1},{k + 1}]")
    structure = structure_from_matrices(mats) if len(mats) > 1 else {}
    return LieAlgebra(len(mats), labels, structure, mats, name=f"u{n}",
                      meta={"family": "u", "n": n})


def su2_algebra() -> LieAlgebra:
    """su(2) with [X1, X2] = X3 cyclically; X_a = sigma_a / (2i)."""
    half_i = Scalar(0, Fraction(-1, 2))
    X1 = make_matrix([[0, half_i], [half_i, 0]])
    X2 = make_matrix([[0, Fraction(-1, 2)], [Fraction(1, 2), 0]])
    X3 = make_matrix([[half_i, 0], [0, Scalar(0, Fraction(1, 2))]])
    mats = [X1, X2, X3]
    structure = structure_from_matrices(mats)
    return LieAlgebra(3, ("X[1]", "X[2]", "X[3]"), structure, mats,
                      name="su2", meta={"family": "su2", "n": 2})


def abelian_algebra(d: int) -> LieAlgebra:
    """R^d with the zero bracket, realized by commuting diagonal matrices."""
    mats = [_elementary(d, k, k) for k in range(d)]
    labels = [f"x[{k + 1}]" for k in range(d)]
    return LieAlgebra(d, labels, {}, mats, name=f"abelian{d}",
                      meta={"family": "abelian", "n": d})


def split_from_h(algebra: LieAlgebra, h_indices: Sequence[int]) -> ReductiveSplit:
    return ReductiveSplit.from_h(algebra.dim, h_indices)


def so_subalgebra_split(algebra: LieAlgebra, m: int) -> ReductiveSplit:
    """so(m) inside so(n): pairs contained in the first m coordinates."""
    if algebra.meta.get("family") != "so":
        raise ContractError("so subalgebra split needs an so(n) algebra")
    pairs = algebra.meta["pairs"]
    h = [idx for idx, (i, j) in enumerate(pairs) if j < m]
    return ReductiveSplit.from_h(algebra.dim, h)


def gl_subalgebra_split(algebra: LieAlgebra, m: int) -> ReductiveSplit:
    """gl(m) inside gl(n): matrix units in the top-left m-by-m block."""
    if algebra.meta.get("family") != "gl":
        raise ContractError("gl subalgebra split needs a gl(n) algebra")
    pairs = algebra.meta["pairs"]
    h = [idx for idx, (i, j) in enumerate(pairs) if i < m and j < m]
    return ReductiveSplit.from_h(algebra.dim, h)


def su2_diagonal_split(algebra: LieAlgebra) -> ReductiveSplit:
    """The u(1) line spanned by the diagonal generator of su(2)."""
    if algebra.meta.get("family") != "su2":
        raise ContractError("diagonal split needs su(2)")
    return ReductiveSplit.from_h(algebra.dim, (2,))


def trivial_split(algebra: LieAlgebra) -> ReductiveSplit:
    """Empty subalgebra: the whole algebra is the complement."""
    return ReductiveSplit.from_h(algebra.dim, ())


# ---------------------------------------------------------------------------
# Named lookup and the algebra file format
# ---------------------------------------------------------------------------

def named_algebra(name: str) -> LieAlgebra:
    name = name.strip().lower()
    if name == "su2":
        return su2_algebra()
    for prefix, builder in (("so", so_algebra), ("gl", gl_algebra),
                            ("u", u_algebra), ("abelian", abelian_algebra)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return builder(int(name[len(prefix):]))
    raise ContractError(f"unknown algebra name {name!r}")


def named_split(algebra: LieAlgebra, spec: Optional[str]) -> ReductiveSplit:
    """Resolve a subalgebra description: a known name, 'none', or h indices."""
    if spec is None or spec.strip().lower() in ("none", "trivial", ""):
        return trivial_split(algebra)
    spec = spec.strip().lower()
    if spec.startswith("so") and spec[2:].isdigit():
        return so_subalgebra_split(algebra, int(spec[2:]))
    if spec.startswith("gl") and spec[2:].isdigit():
        return gl_subalgebra_split(algebra, int(spec[2:]))
    if spec in ("u1", "u1-line") and algebra.meta.get("family") == "su2":
        return su2_diagonal_split(algebra)
    try:
        indices = [int(tok) for tok in spec.split(",") if tok.strip() != ""]
    except ValueError:
        raise ContractError(f"cannot resolve subalgebra {spec!r}") from None
    return split_from_h(algebra, indices)


def algebra_from_dict(data: dict) -> LieAlgebra:
    """Build a custom algebra from the JSON-shaped table format.

    Required: ``dim`` and ``entries`` (quadruples [a, b, c, value] with exact
    rational strings, meaning c[a,b,c] = value).  A missing mirror entry
    (a, c, b) is filled in antisymmetrically; a present one must already be
    the negative, otherwise the table is rejected.  Optional: ``labels`` and
    ``matrices`` (rational strings).
    """
    unknown = set(data) - {"dim", "labels", "entries", "matrices", "name"}
    if unknown:
        raise ContractError(f"unknown keys in algebra file: {sorted(unknown)}")
    dim = data.get("dim")
    if not isinstance(dim, int) or dim <= 0:
        raise ContractError("dim must be a positive integer")
    labels = data.get("labels") or [f"e[{a + 1}]" for a in range(dim)]
    structure: dict = {}
    for entry in data.get("entries", []):
        if len(entry) != 4:
            raise ContractError(f"entry must be [a, b, c, value]: {entry!r}")
        a, b, c, value = entry
        key = (int(a), int(b), int(c))
        v = Scalar.parse(value) if isinstance(value, str) else Scalar(value)
        if key in structure:
            raise ContractError(f"duplicate entry for {key}")
        structure[key] = v
    for (a, b, c), v in list(structure.items()):
        mirror = (a, c, b)
        if mirror not in structure:
            if b == c:
                if not v.is_zero:
                    raise ContractError(
                        f"non-antisymmetric table: c[{a},{b},{c}] with b == c")
                continue
            structure[mirror] = -v
        elif not (structure[mirror] + v).is_zero:
            raise ContractError(
                f"non-antisymmetric table at ({a},{b},{c})/({a},{c},{b})")
    matrices = None
    if data.get("matrices") is not None:
        matrices = [
            [[Scalar.parse(v) if isinstance(v, str) else Scalar(v) for v in row]
             for row in M]
            for M in data["matrices"]
        ]
        if len(matrices) != dim:
            raise ContractError("need one matrix per basis element")
    return LieAlgebra(dim, labels, structure, matrices,
                      name=data.get("name", "custom"), meta={"family": "custom"})


def algebra_from_file(path: str) -> LieAlgebra:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ContractError(f"cannot parse {path}: {exc}") from None
    return algebra_from_dict(data)
