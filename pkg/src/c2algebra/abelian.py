"""Exact integer linear algebra for finitely generated abelian groups.

Everything is built on Smith normal form over Z with arbitrary-precision
integers: presentations of f.g. abelian groups, homomorphisms between them,
kernels, cokernels and homology.  Elements of a group presented on n ambient
generators are length-n integer tuples; a homomorphism is an integer matrix
acting on column vectors.

>>> G = FgAbGroup.from_invariants([2, 0])
>>> G.invariant_factors()
(2, 0)
>>> f = AbMap(Z(), Z(), [[2]])
>>> cokernel(f)[0].invariant_factors()
(2,)
"""

from itertools import product


class AbelianError(Exception):
    pass


class IllFormedMap(AbelianError):
    pass


class NotAComplex(AbelianError):
    pass


# ---------------------------------------------------------------------------
# matrix helpers (lists of lists of int, row-major)

def mat_copy(A):
    return [list(row) for row in A]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def mat_mul(A, B):
    if A and B and len(A[0]) != len(B):
        raise ValueError("shape mismatch")
    n = len(B[0]) if B else 0
    inner = len(B)
    out = []
    for row in A:
        out_row = []
        for j in range(n):
            s = 0
            for k in range(inner):
                a = row[k]
                if a:
                    s += a * B[k][j]
            out_row.append(s)
        out.append(out_row)
    return out


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def mat_eq(A, B):
    return [list(r) for r in A] == [list(r) for r in B]


def is_zero_matrix(A):
    return all(all(x == 0 for x in row) for row in A)


def hstack(A, B):
    if not A:
        return mat_copy(B)
    if not B:
        return mat_copy(A)
    return [list(ra) + list(rb) for ra, rb in zip(A, B)]


def block_diag(A, B, arows, acols, brows, bcols):
    out = zeros(arows + brows, acols + bcols)
    for i in range(arows):
        for j in range(acols):
            out[i][j] = A[i][j]
    for i in range(brows):
        for j in range(bcols):
            out[arows + i][acols + j] = B[i][j]
    return out


def kronecker(A, B, arows, acols, brows, bcols):
    """Kronecker product; index (i, j) of the tensor is i * bdim + j."""
    out = zeros(arows * brows, acols * bcols)
    for i in range(arows):
        for j in range(acols):
            a = A[i][j]
            if not a:
                continue
            for k in range(brows):
                for l in range(bcols):
                    out[i * brows + k][j * bcols + l] = a * B[k][l]
    return out


# ---------------------------------------------------------------------------
# Smith normal form

def smith_normal_form(A):
    """U, D, V with U*A*V = D, D diagonal, d1 | d2 | ..., di >= 0.

    U and V are unimodular.  Pivots are chosen by minimal absolute value;
    plain gcd-driven row/column elimination, no modular shortcuts.

    >>> U, D, V = smith_normal_form([[2, 4], [6, 8]])
    >>> [D[0][0], D[1][1]]
    [2, 4]
    """
    D = mat_copy(A)
    m = len(D)
    n = len(D[0]) if D else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        D[dst] = [x + c * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in D:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while True:
        # find the minimal-absolute-value nonzero entry in D[t:, t:]
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        # clear row and column t
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        # remainder became the smaller pivot
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # enforce divisibility d_t | entries of the remaining block
        fixed = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i][j] % D[t][t]:
                    add_row(i, t, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue  # redo elimination at the same t
        if D[t][t] < 0:
            negate_row(t)
        t += 1
        if t == m or t == n:
            break
    return U, D, V


def diagonal_of(D):
    k = min(len(D), len(D[0]) if D else 0)
    return [D[i][i] for i in range(k)]


def _unimodular_inverse(V):
    n = len(V)
    if n == 0:
        return []
    U2, D2, V2 = smith_normal_form(V)
    # U2 * V * V2 = D2 = identity-signed; V^-1 = V2 * D2^-1 * U2
    Dinv = identity(n)
    for i in range(n):
        if D2[i][i] not in (1, -1):
            raise ValueError("matrix is not unimodular")
        Dinv[i][i] = D2[i][i]
    return mat_mul(mat_mul(V2, Dinv), U2)


def integer_kernel(A, ncols):
    """Basis (list of length-ncols vectors) of {x : A x = 0}."""
    if not A:
        return [list(row) for row in identity(ncols)]
    U, D, V = smith_normal_form(A)
    rank = sum(1 for d in diagonal_of(D) if d)
    cols = transpose(V)
    return [cols[j] for j in range(rank, ncols)]


def solve_integer(A, b, ncols):
    """One x with A x = b, or None.  A has ncols columns."""
    if not A:
        return [0] * ncols if all(v == 0 for v in b) else None
    U, D, V = smith_normal_form(A)
    c = mat_vec(U, b)
    y = [0] * ncols
    diag = diagonal_of(D)
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return mat_vec(V, y)


def hermite_normal_form(A):
    """Row Hermite normal form (nonnegative pivots, zero rows dropped)."""
    rows = [list(r) for r in A if any(r)]
    if not rows:
        return []
    n = len(rows[0])
    out = []
    col = 0
    while rows and col < n:
        # pick row with nonzero entry of minimal abs value at col
        cand = [r for r in rows if r[col]]
        if not cand:
            col += 1
            continue
        while True:
            cand.sort(key=lambda r: abs(r[col]))
            piv = cand[0]
            done = True
            for r in cand[1:]:
                q = r[col] // piv[col]
                for j in range(n):
                    r[j] -= q * piv[j]
                if r[col]:
                    done = False
            cand = [r for r in cand if r[col]] or [piv]
            if done or len(cand) == 1:
                break
        piv = cand[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        rest = []
        for r in rows:
            if r is not piv and any(r):
                q = r[col] // piv[col] if piv[col] else 0
                rr = [x - q * y for x, y in zip(r, piv)]
                if any(rr):
                    rest.append(rr)
        rows = rest
        col += 1
    # reduce entries above pivots
    out.sort(key=lambda r: next(j for j, x in enumerate(r) if x))
    for i in range(len(out) - 1, -1, -1):
        piv_col = next(j for j, x in enumerate(out[i]) if x)
        for k in range(i):
            q = out[k][piv_col] // out[i][piv_col]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return out


# ---------------------------------------------------------------------------
# groups

class FgAbGroup:
    """Finitely generated abelian group Z^n / rowspan(relations).

    relations: iterable of length-n integer rows.  The Hermite normal form
    of the relations is the canonical stored presentation.
    """

    def __init__(self, ngens, relations=(), labels=None):
        self.ngens = ngens
        rels = [list(r) for r in relations]
        for r in rels:
            if len(r) != ngens:
                raise ValueError("relation length != number of generators")
        self.relations = hermite_normal_form(rels)
        self.labels = list(labels) if labels else None
        self._snf = None

    # -- canonical data ----------------------------------------------------

    def _smith(self):
        if self._snf is None:
            R = self.relations if self.relations else zeros(0, self.ngens)
            if not R:
                U, D, V = [], zeros(0, self.ngens), identity(self.ngens)
            else:
                U, D, V = smith_normal_form(R)
            Vinv = _unimodular_inverse(V) if self.ngens else []
            self._snf = (U, D, V, Vinv)
        return self._snf

    def invariant_factors(self):
        """Nonnegative, each dividing the next, 0 = Z, units dropped.

        >>> FgAbGroup(2, [[2, 0], [0, 4]]).invariant_factors()
        (2, 4)
        """
        _, D, _, _ = self._smith()
        diag = [d for d in diagonal_of(D) if d != 1]
        rank = self.ngens - sum(1 for d in diagonal_of(D) if d)
        return tuple(d for d in diag if d) + (0,) * rank

    def rank(self):
        return sum(1 for d in self.invariant_factors() if d == 0)

    def torsion(self):
        return tuple(d for d in self.invariant_factors() if d)

    def is_trivial(self):
        return not self.invariant_factors()

    def contains_zero(self, v):
        """Is the class of v the identity?"""
        if all(x == 0 for x in v):
            return True
        R = self.relations
        if not R:
            return False
        return solve_integer(transpose(R), list(v), len(R)) is not None

    def canonical_coords(self, v):
        """Coordinates of [v] in the invariant-factor decomposition."""
        _, D, _, Vinv = self._smith()
        y = mat_vec(Vinv, list(v)) if self.ngens else []
        diag = diagonal_of(D)
        out = []
        for i, yi in enumerate(y):
            d = diag[i] if i < len(diag) else 0
            if d == 1:
                continue
            out.append(yi % d if d else yi)
        return out

    def canonical_ngens(self):
        return len(self.canonical_coords([0] * self.ngens))

    def canonical_group(self):
        """The same group presented on invariant-factor generators."""
        inv = self.invariant_factors()
        rels = []
        for i, d in enumerate(inv):
            if d:
                row = [0] * len(inv)
                row[i] = d
                rels.append(row)
        return FgAbGroup(len(inv), rels)

    def elements(self):
        """Iterate all elements (finite groups only), in canonical coords."""
        inv = self.invariant_factors()
        if any(d == 0 for d in inv):
            raise ValueError("infinite group")
        for tup in product(*[range(d) for d in inv]):
            yield list(tup)

    def __eq__(self, other):
        if not isinstance(other, FgAbGroup):
            return NotImplemented
        return self.invariant_factors() == other.invariant_factors()

    def __hash__(self):
        return hash(self.invariant_factors())

    def __repr__(self):
        return "FgAbGroup%r" % (self.invariant_factors(),)

    def __str__(self):
        return render_invariants(self.invariant_factors())

    @classmethod
    def from_invariants(cls, invs):
        rels = []
        n = len(invs)
        for i, d in enumerate(invs):
            if d:
                row = [0] * n
                row[i] = d
                rels.append(row)
        return cls(n, rels)

    @classmethod
    def free(cls, n, labels=None):
        return cls(n, (), labels)


def render_invariants(invs):
    if not invs:
        return "0"
    parts = ["Z" if d == 0 else "Z/%d" % d for d in invs]
    return " + ".join(parts)


def Z():
    return FgAbGroup.free(1)


def Zmod(m):
    return FgAbGroup(1, [[m]])


def trivial_group():
    return FgAbGroup(0)


def direct_sum_groups(groups):
    n = sum(g.ngens for g in groups)
    rels = []
    offset = 0
    for g in groups:
        for r in g.relations:
            row = [0] * n
            row[offset:offset + g.ngens] = r
            rels.append(row)
        offset += g.ngens
    return FgAbGroup(n, rels)


# ---------------------------------------------------------------------------
# maps

class AbMap:
    """Homomorphism source -> target given by a matrix on ambient generators."""

    def __init__(self, source, target, matrix):
        self.source = source
        self.target = target
        M = [list(r) for r in matrix]
        if not M:
            M = [[0] * source.ngens for _ in range(target.ngens)]
        if len(M) != target.ngens:
            raise IllFormedMap("matrix has %d rows, target has %d generators"
                               % (len(M), target.ngens))
        if any(len(r) != source.ngens for r in M):
            raise IllFormedMap("matrix column count != source generators")
        self.matrix = M

    def is_well_defined(self):
        for r in self.source.relations:
            if not self.target.contains_zero(mat_vec(self.matrix, r)):
                return False
        return True

    def check(self):
        if not self.is_well_defined():
            raise IllFormedMap("matrix does not carry source relations into target relations")
        return self

    def __call__(self, v):
        return mat_vec(self.matrix, list(v))

    def compose(self, other):
        """self after other."""
        if self.source.ngens == 0:
            return AbMap.zero_map(other.source, self.target)
        return AbMap(other.source, self.target, mat_mul(self.matrix, other.matrix))

    def __add__(self, other):
        M = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.matrix, other.matrix)]
        return AbMap(self.source, self.target, M)

    def __sub__(self, other):
        M = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.matrix, other.matrix)]
        return AbMap(self.source, self.target, M)

    def __neg__(self):
        return AbMap(self.source, self.target, [[-a for a in r] for r in self.matrix])

    def scale(self, c):
        return AbMap(self.source, self.target, [[c * a for a in r] for r in self.matrix])

    def equals(self, other):
        """Equality as maps, i.e. matrix equality modulo target relations."""
        if self.source.ngens != other.source.ngens:
            return False
        diff = self - other
        return all(self.target.contains_zero(mat_vec(diff.matrix, e))
                   for e in identity(self.source.ngens))

    def is_zero(self):
        return all(self.target.contains_zero(mat_vec(self.matrix, e))
                   for e in identity(self.source.ngens))

    def __repr__(self):
        return "AbMap(%r -> %r)" % (self.source, self.target)

    @classmethod
    def identity_map(cls, G):
        return cls(G, G, identity(G.ngens))

    @classmethod
    def zero_map(cls, source, target):
        return cls(source, target, zeros(target.ngens, source.ngens))


def direct_sum_maps(maps, source=None, target=None):
    src = source or direct_sum_groups([f.source for f in maps])
    tgt = target or direct_sum_groups([f.target for f in maps])
    M = zeros(tgt.ngens, src.ngens)
    roff = coff = 0
    for f in maps:
        for i in range(f.target.ngens):
            for j in range(f.source.ngens):
                M[roff + i][coff + j] = f.matrix[i][j]
        roff += f.target.ngens
        coff += f.source.ngens
    return AbMap(src, tgt, M)


# ---------------------------------------------------------------------------
# kernels, cokernels, homology

def subgroup_coords(gens, relations, v, ngens_ambient):
    """y with gens*y = v modulo rowspan(relations); None if no solution.

    gens: list of column vectors (each length ngens_ambient).
    """
    cols = [list(g) for g in gens]
    rel_cols = transpose(relations) if relations else []
    A = []
    for i in range(ngens_ambient):
        row = [c[i] for c in cols]
        if rel_cols:
            row += rel_cols[i]
        A.append(row)
    sol = solve_integer(A, list(v), len(cols) + (len(relations) if relations else 0))
    if sol is None:
        return None
    return sol[:len(cols)]


def kernel(f):
    """(K, inclusion) with K = ker(f) as a subgroup of the source.

    >>> f = AbMap(FgAbGroup.free(2), Z(), [[1, 1]])
    >>> kernel(f)[0].invariant_factors()
    (0,)
    """
    f.check()
    n = f.source.ngens
    # x with f(x) in rowspan(target relations): kernel of [M | -Rt^T]
    Rt = f.target.relations
    A = hstack(f.matrix, [[-x for x in col] for col in transpose(Rt)] if Rt else [])
    ncols = n + (len(Rt) if Rt else 0)
    full = integer_kernel(A, ncols) if f.target.ngens else [list(r) for r in identity(n)]
    gens = [v[:n] for v in full]
    gens = [g for g in hermite_normal_form(gens)] if gens else []
    # relations among the kernel generators: combos landing in source relations
    if gens:
        gen_cols = transpose(gens)  # n x s
        Rs = f.source.relations
        B = hstack(gen_cols, [[-x for x in col] for col in transpose(Rs)] if Rs else [])
        bk = integer_kernel(B, len(gens) + (len(Rs) if Rs else 0))
        rels = [v[:len(gens)] for v in bk]
    else:
        rels = []
    K = FgAbGroup(len(gens), rels)
    incl = AbMap(K, f.source, transpose(gens) if gens else [[] for _ in range(n)])
    return K, incl


def cokernel(f):
    """(C, projection) with C = target/im(f)."""
    f.check()
    rels = [list(r) for r in f.target.relations]
    for e in identity(f.source.ngens):
        rels.append(mat_vec(f.matrix, e))
    C = FgAbGroup(f.target.ngens, rels, f.target.labels)
    proj = AbMap(f.target, C, identity(f.target.ngens))
    return C, proj


def homology_at(d_in, d_out):
    """ker(d_out)/im(d_in) for composable maps with d_out after d_in zero.

    >>> two = AbMap(Z(), Z(), [[2]])
    >>> zero = AbMap(Z(), Z(), [[0]])
    >>> homology_at(two, zero).invariant_factors()
    (2,)
    """
    if not d_out.compose(d_in).is_zero():
        raise NotAComplex("d_out o d_in != 0")
    K, incl = kernel(d_out)
    # relations on K: existing + preimages of im(d_in) (mod middle relations)
    mid = d_out.source
    Rm = mid.relations
    if K.ngens:
        # columns: K-generators, then d_in images, then middle relations
        stacked = incl.matrix
        stacked = hstack(stacked, [[-x for x in row] for row in d_in.matrix])
        stacked = hstack(stacked, [[-x for x in col] for col in transpose(Rm)] if Rm else [])
        ncols = K.ngens + d_in.source.ngens + (len(Rm) if Rm else 0)
        bk = integer_kernel(stacked, ncols)
        rels = [v[:K.ngens] for v in bk]
    else:
        rels = []
    H = FgAbGroup(K.ngens, list(K.relations) + rels)
    return H


def homology_with_inclusion(d_in, d_out):
    """Like homology_at but also returns the kernel inclusion for transport."""
    if not d_out.compose(d_in).is_zero():
        raise NotAComplex("d_out o d_in != 0")
    H = homology_at(d_in, d_out)
    K, incl = kernel(d_out)
    return H, AbMap(H, d_out.source, incl.matrix)


def induced_map(h_src, incl_src, h_tgt, incl_tgt, phi):
    """Map on homology induced by phi commuting with the differentials.

    h_src/h_tgt: homology groups, incl_*: their kernel inclusions into the
    chain groups, phi: AbMap between the chain groups.
    """
    cols = []
    tgt_gens = transpose(incl_tgt.matrix) if h_tgt.ngens else []
    for e in identity(h_src.ngens):
        v = phi(incl_src(e))
        y = subgroup_coords(tgt_gens, phi.target.relations, v, phi.target.ngens)
        if y is None:
            raise IllFormedMap("induced map does not preserve kernels")
        cols.append(y)
    M = transpose(cols) if cols else [[] for _ in range(h_tgt.ngens)]
    return AbMap(h_src, h_tgt, M).check()


def tensor_groups(G, H):
    """G (x) H presented on generator pairs (i, j) -> i * H.ngens + j.

    >>> tensor_groups(Zmod(4), Zmod(6)).invariant_factors()
    (2,)
    """
    n = G.ngens * H.ngens
    rels = []
    for r in G.relations:
        for j in range(H.ngens):
            row = [0] * n
            for i, c in enumerate(r):
                row[i * H.ngens + j] = c
            rels.append(row)
    for s in H.relations:
        for i in range(G.ngens):
            row = [0] * n
            for j, c in enumerate(s):
                row[i * H.ngens + j] = c
            rels.append(row)
    return FgAbGroup(n, rels)


def tensor_maps(f, g, source=None, target=None):
    src = source or tensor_groups(f.source, g.source)
    tgt = target or tensor_groups(f.target, g.target)
    M = kronecker(f.matrix, g.matrix, f.target.ngens, f.source.ngens,
                  g.target.ngens, g.source.ngens)
    if not M:
        M = [[] for _ in range(tgt.ngens)] if src.ngens == 0 else zeros(tgt.ngens, src.ngens)
    return AbMap(src, tgt, M)
