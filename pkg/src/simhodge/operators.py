"""Oriented form bases and the operators living on them.

The de Rham basis of a complex is its simplex list; a connection basis of
order k consists of the ordered k-tuples of pairwise intersecting simplices,
graded by total dimension.  Every simplex is oriented by its increasing
vertex order (a gauge choice), which fixes all incidence signs.  Operators
are square sparse integer matrices over a single graded basis, so exterior
derivative, Dirac and Hodge operators share one representation and exact
integer arithmetic end to end.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .complexes import Complex, vertex_masks
from .errors import ContractViolationError, InvalidInputError


class GradedBasis:
    """Ordered basis elements with a degree for each.

    Elements are sorted degree-major then lexicographically, so each degree
    occupies one contiguous index range.
    """

    __slots__ = ("elements", "degrees", "index", "dims", "offsets")

    def __init__(self, elements, degrees):
        pairs = sorted(zip(degrees, elements))
        self.elements = tuple(e for _, e in pairs)
        self.degrees = tuple(d for d, _ in pairs)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise InvalidInputError("basis elements must be unique")
        top = max(self.degrees, default=-1)
        dims = [0] * (top + 1)
        for d in self.degrees:
            dims[d] += 1
        self.dims = tuple(dims)
        offsets = [0]
        for d in dims:
            offsets.append(offsets[-1] + d)
        self.offsets = tuple(offsets)

    @property
    def max_degree(self) -> int:
        return len(self.dims) - 1

    def __len__(self):
        return len(self.elements)

    def degree_slice(self, k: int) -> slice:
        if 0 <= k <= self.max_degree:
            return slice(self.offsets[k], self.offsets[k + 1])
        return slice(0, 0)

    def dimension_of(self, k: int) -> int:
        return self.dims[k] if 0 <= k <= self.max_degree else 0

    def alternating_dimension_sum(self) -> int:
        return sum(d if k % 2 == 0 else -d for k, d in enumerate(self.dims))


class GradedOperator:
    """A sparse integer matrix over one graded basis, with a grading shift.

    The exterior derivative has shift +1 (degree p maps into degree p+1);
    Dirac, Hodge and induced automorphism actions have shift 0 in the sense
    of being degree-symmetric or degree-preserving.
    """

    def __init__(self, matrix, basis: GradedBasis, shift: int = 0):
        m = sparse.csr_array(matrix)
        if m.shape != (len(basis), len(basis)):
            raise InvalidInputError("operator shape does not match basis size")
        m.eliminate_zeros()
        self.matrix = m
        self.basis = basis
        self.shift = shift
        self._eigs = {}

    @property
    def shape(self):
        return self.matrix.shape

    def is_zero(self) -> bool:
        return self.matrix.count_nonzero() == 0

    def transpose(self) -> "GradedOperator":
        return GradedOperator(self.matrix.T, self.basis, -self.shift)

    def block(self, row_degree: int, col_degree: int) -> np.ndarray:
        """Dense integer block mapping col_degree forms to row_degree forms."""
        rs = self.basis.degree_slice(row_degree)
        cs = self.basis.degree_slice(col_degree)
        return self.matrix[rs, :][:, cs].toarray()

    def diag_block(self, k: int) -> np.ndarray:
        return self.block(k, k)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray().astype(float)

    def eigensystem(self, k: int):
        """Eigenvalues and eigenvectors of the symmetric degree-k block (cached)."""
        if k not in self._eigs:
            block = self.diag_block(k)
            if block.size and not np.array_equal(block, block.T):
                raise ContractViolationError(f"degree-{k} block is not symmetric")
            if block.size:
                self._eigs[k] = np.linalg.eigh(block.astype(float))
            else:
                self._eigs[k] = (np.zeros(0), np.zeros(block.shape))
        return self._eigs[k]

    def eigenvalues(self, k: int) -> np.ndarray:
        return self.eigensystem(k)[0]


def graded_basis(c: Complex) -> GradedBasis:
    """De Rham basis: one element per simplex, graded by dimension."""
    elements = list(c)
    return GradedBasis(elements, [len(s) - 1 for s in elements])


def exterior_derivative(c: Complex) -> GradedOperator:
    """Signed incidence operator d with d(d(f)) = 0.

    (df)(x) sums (-1)^i f(x with its i-th vertex removed) over the vertices
    of x in increasing order.
    """
    basis = graded_basis(c)
    rows, cols, vals = [], [], []
    for i, s in enumerate(basis.elements):
        if len(s) == 1:
            continue
        for j in range(len(s)):
            face = s[:j] + s[j + 1:]
            rows.append(i)
            cols.append(basis.index[face])
            vals.append(1 if j % 2 == 0 else -1)
    n = len(basis)
    m = sparse.coo_array((vals, (rows, cols)), shape=(n, n), dtype=np.int64)
    return GradedOperator(m.tocsr(), basis, shift=1)


def dirac(d: GradedOperator) -> GradedOperator:
    """Symmetric operator d + d*, after verifying nilpotency of d exactly."""
    square = d.matrix @ d.matrix
    square.eliminate_zeros()
    if square.count_nonzero():
        raise ContractViolationError("d is not nilpotent: d @ d has non-zero entries")
    return GradedOperator(d.matrix + d.matrix.T, d.basis, shift=0)


def hodge(dirac_op: GradedOperator) -> GradedOperator:
    """Hodge operator: the square of the Dirac operator, block-diagonal by degree."""
    return GradedOperator(dirac_op.matrix @ dirac_op.matrix, dirac_op.basis, shift=0)


def _chain_vector(basis: GradedBasis, chain: dict) -> np.ndarray:
    v = np.zeros(len(basis), dtype=np.int64)
    for element, coefficient in chain.items():
        key = element
        if key not in basis.index and all(isinstance(x, int) for x in element):
            key = tuple(sorted(element))
        if key not in basis.index:
            raise InvalidInputError(f"chain element {element!r} is not in the basis")
        v[basis.index[key]] += int(coefficient)
    return v


def boundary_chain(d: GradedOperator, chain: dict) -> dict:
    """Boundary of an integer chain, the transpose action of d.

    Defined so that pairing a form against the boundary equals pairing its
    derivative against the chain.
    """
    v = _chain_vector(d.basis, chain)
    w = d.matrix.T @ v
    return {d.basis.elements[i]: int(w[i]) for i in np.nonzero(w)[0]}


def stokes_check(d: GradedOperator, form: dict, chain: dict):
    """Evaluate form(boundary chain) and (d form)(chain) independently.

    Returns (lhs, rhs, equal); equality is exact in integer arithmetic.
    """
    f = _chain_vector(d.basis, form)
    a = _chain_vector(d.basis, chain)
    lhs = int(f @ (d.matrix.T @ a))
    rhs = int((d.matrix @ f) @ a)
    return lhs, rhs, lhs == rhs


def intersection_masks(c: Complex):
    """For each simplex (deterministic order), the bitmask of simplices meeting it."""
    masks = vertex_masks(c)
    n = len(masks)
    meet = [0] * n
    for i in range(n):
        meet[i] |= 1 << i
        mi = masks[i]
        for j in range(i + 1, n):
            if mi & masks[j]:
                meet[i] |= 1 << j
                meet[j] |= 1 << i
    return masks, meet


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def connection_basis(c: Complex, k: int) -> GradedBasis:
    """Ordered k-tuples of pairwise intersecting simplices, graded by total dimension."""
    if k < 1:
        raise InvalidInputError("connection order must be at least 1")
    order = list(c)
    _, meet = intersection_masks(c)
    full = (1 << len(order)) - 1
    elements, degrees = [], []

    def extend(chosen, allowed, degree):
        if len(chosen) == k:
            elements.append(tuple(order[i] for i in chosen))
            degrees.append(degree)
            return
        for i in iter_bits(allowed):
            extend(chosen + (i,), allowed & meet[i], degree + len(order[i]) - 1)

    extend((), full, 0)
    return GradedBasis(elements, degrees)


def connection_tuple_count(c: Complex, k: int) -> int:
    """Number of ordered pairwise-intersecting k-tuples, without materializing them."""
    if k < 1:
        raise InvalidInputError("connection order must be at least 1")
    _, meet = intersection_masks(c)
    n = len(meet)
    if k == 1:
        return n
    if k == 2:
        return sum(m.bit_count() for m in meet)
    # fold one slot at a time, grouping by the distinct candidate masks
    current = {}
    for i in range(n):
        current[meet[i]] = current.get(meet[i], 0) + 1
    for _ in range(k - 2):
        nxt = {}
        for allowed, mult in current.items():
            for i in iter_bits(allowed):
                key = allowed & meet[i]
                nxt[key] = nxt.get(key, 0) + mult
        current = nxt
    return sum(allowed.bit_count() * mult for allowed, mult in current.items())


def connection_derivative(c: Complex, k: int) -> GradedOperator:
    """Derivative on the order-k connection basis.

    Each slot contributes its simplicial boundary with the graded sign
    (-1)^(sum of the dimensions before the slot); terms whose tuple stops
    being pairwise intersecting are dropped.  Tuples containing a disjoint
    pair can never regain intersection under further boundaries, so this is
    the differential of a quotient complex and squares to zero for every
    order.  Order 1 reproduces the exterior derivative.
    """
    basis = connection_basis(c, k)
    vmask = {s: m for s, m in zip(list(c), vertex_masks(c))}
    rows, cols, vals = [], [], []
    for i, element in enumerate(basis.elements):
        prefix = 0
        for slot, simplex in enumerate(element):
            if len(simplex) > 1:
                others = [vmask[t] for t_i, t in enumerate(element) if t_i != slot]
                for j in range(len(simplex)):
                    face = simplex[:j] + simplex[j + 1:]
                    fm = vmask[face]
                    if all(fm & om for om in others):
                        target = element[:slot] + (face,) + element[slot + 1:]
                        rows.append(i)
                        cols.append(basis.index[target])
                        vals.append((-1) ** (prefix + j))
            prefix += len(simplex) - 1
    n = len(basis)
    m = sparse.coo_array((vals, (rows, cols)), shape=(n, n), dtype=np.int64)
    return GradedOperator(m.tocsr(), basis, shift=1)
