"""C2-Mackey functors as validated Lewis diagrams.

A Mackey functor M is a pair of f.g. abelian groups M^{C2} (fixed level)
and M^e (underlying level) together with restriction, transfer and the
Weyl action sigma on M^e, subject to

    sigma o sigma = id,   sigma o res = res,   tr o sigma = tr,
    res o tr = 1 + sigma.

Standard diagrams: zbar() is the constant functor at Z (res = 1, tr = 2),
zsign() has trivial fixed level and sigma = -1, zbar_c2() = induced(Z),
burnside() is the Burnside Mackey functor.
"""

from .abelian import (
    AbMap,
    FgAbGroup,
    cokernel,
    direct_sum_groups,
    direct_sum_maps,
    identity,
    kernel,
    mat_vec,
    subgroup_coords,
    tensor_groups,
    tensor_maps,
    transpose,
    zeros,
)


class MackeyError(Exception):
    pass


class NotInvolution(MackeyError):
    pass


class TorsionNotSupported(MackeyError):
    pass


class Violation:
    """First failed Lewis axiom, with a witness generator."""

    def __init__(self, axiom, detail=""):
        self.axiom = axiom
        self.detail = detail

    def __repr__(self):
        return "Violation(%s%s)" % (self.axiom, ": " + self.detail if self.detail else "")


AXIOM_WELL_DEFINED = "well_defined"
AXIOM_SIGMA_INVOLUTION = "sigma_squared"
AXIOM_SIGMA_RES = "sigma_res"
AXIOM_TR_SIGMA = "tr_sigma"
AXIOM_DOUBLE_COSET = "res_tr"


class MackeyFunctor:
    def __init__(self, fixed, underlying, res, tr, sigma, cells=None):
        self.fixed = fixed
        self.underlying = underlying
        self.res = res
        self.tr = tr
        self.sigma = sigma
        # cells: tuple over {"triv", "free"} when the functor is a known
        # direct sum of zbar/zbar_c2 summands (soundness tag for Phi)
        self.cells = tuple(cells) if cells is not None else None

    def __repr__(self):
        return "MackeyFunctor(%s / %s)" % (self.fixed, self.underlying)

    def levels(self):
        return self.fixed.invariant_factors(), self.underlying.invariant_factors()


class MackeyMap:
    def __init__(self, source, target, f_fixed, f_underlying):
        self.source = source
        self.target = target
        self.f_fixed = f_fixed
        self.f_underlying = f_underlying

    def is_valid(self):
        f, u = self.f_fixed, self.f_underlying
        if not (f.is_well_defined() and u.is_well_defined()):
            return False
        s, t = self.source, self.target
        if not t.res.compose(f).equals(u.compose(s.res)):
            return False
        if not t.tr.compose(u).equals(f.compose(s.tr)):
            return False
        if not t.sigma.compose(u).equals(u.compose(s.sigma)):
            return False
        return True

    def compose(self, other):
        return MackeyMap(other.source, self.target,
                         self.f_fixed.compose(other.f_fixed),
                         self.f_underlying.compose(other.f_underlying))

    def __add__(self, other):
        return MackeyMap(self.source, self.target,
                         self.f_fixed + other.f_fixed,
                         self.f_underlying + other.f_underlying)

    def __sub__(self, other):
        return MackeyMap(self.source, self.target,
                         self.f_fixed - other.f_fixed,
                         self.f_underlying - other.f_underlying)

    def scale(self, c):
        return MackeyMap(self.source, self.target,
                         self.f_fixed.scale(c), self.f_underlying.scale(c))

    def is_zero(self):
        return self.f_fixed.is_zero() and self.f_underlying.is_zero()

    @classmethod
    def identity_map(cls, M):
        return cls(M, M, AbMap.identity_map(M.fixed), AbMap.identity_map(M.underlying))

    @classmethod
    def zero_map(cls, source, target):
        return cls(source, target,
                   AbMap.zero_map(source.fixed, target.fixed),
                   AbMap.zero_map(source.underlying, target.underlying))


def validate(M):
    """None if M satisfies the Lewis axioms, else the first Violation."""
    for f, name in ((M.res, "res"), (M.tr, "tr"), (M.sigma, "sigma")):
        if not f.is_well_defined():
            return Violation(AXIOM_WELL_DEFINED, "%s is not well defined" % name)
    sig2 = M.sigma.compose(M.sigma)
    ident_u = AbMap.identity_map(M.underlying)
    if not sig2.equals(ident_u):
        return Violation(AXIOM_SIGMA_INVOLUTION, _witness(sig2 - ident_u))
    sr = M.sigma.compose(M.res)
    if not sr.equals(M.res):
        return Violation(AXIOM_SIGMA_RES, _witness(sr - M.res))
    ts = M.tr.compose(M.sigma)
    if not ts.equals(M.tr):
        return Violation(AXIOM_TR_SIGMA, _witness(ts - M.tr))
    rt = M.res.compose(M.tr)
    want = ident_u + M.sigma
    if not rt.equals(want):
        return Violation(AXIOM_DOUBLE_COSET, _witness(rt - want))
    return None


def _witness(diffmap):
    for j, e in enumerate(identity(diffmap.source.ngens)):
        if not diffmap.target.contains_zero(mat_vec(diffmap.matrix, e)):
            return "generator %d" % j
    return ""


def is_valid(M):
    return validate(M) is None


# ---------------------------------------------------------------------------
# constructors

def constant_mackey(G):
    """Constant Mackey functor: both levels G, res = id, tr = x2, sigma = id."""
    n = G.ngens
    cells = ("triv",) * n if not G.relations else None
    return MackeyFunctor(G, G,
                         AbMap.identity_map(G),
                         AbMap(G, G, [[2 * x for x in row] for row in identity(n)]),
                         AbMap.identity_map(G),
                         cells=cells)


def zbar():
    return constant_mackey(FgAbGroup.free(1))


def zsign():
    """Fixed level 0, underlying Z with sigma = -1 (a regular (-1)-slice)."""
    zero = FgAbGroup(0)
    z = FgAbGroup.free(1)
    return MackeyFunctor(zero, z,
                         AbMap.zero_map(zero, z),
                         AbMap.zero_map(z, zero),
                         AbMap(z, z, [[-1]]))


def induced(G):
    """Free on the C2-orbit: fixed = G, underlying = G + G, res diagonal."""
    n = G.ngens
    GG = direct_sum_groups([G, G])
    res = AbMap(G, GG, [r for r in identity(n)] + [r for r in identity(n)])
    tr = AbMap(GG, G, [row + row for row in identity(n)])
    swap = zeros(2 * n, 2 * n)
    for i in range(n):
        swap[i][n + i] = 1
        swap[n + i][i] = 1
    cells = ("free",) * n if not G.relations else None
    return MackeyFunctor(G, GG, res, tr, AbMap(GG, GG, swap), cells=cells)


def zbar_c2():
    return induced(FgAbGroup.free(1))


def burnside():
    """The C2-Burnside Mackey functor: fixed = Z{[C2/C2], [C2]}."""
    fixed = FgAbGroup.free(2, labels=["[C2/C2]", "[C2]"])
    und = FgAbGroup.free(1)
    res = AbMap(fixed, und, [[1, 2]])
    tr = AbMap(und, fixed, [[0], [1]])
    return MackeyFunctor(fixed, und, res, tr, AbMap.identity_map(und))


def fixed_point_mackey(G, sigma):
    """Strict fixed points: fixed level G^sigma, res = inclusion, tr = 1 + sigma."""
    if not sigma.compose(sigma).equals(AbMap.identity_map(G)):
        raise NotInvolution("sigma squared is not the identity")
    diff = sigma - AbMap.identity_map(G)
    K, incl = kernel(diff)
    one_plus = AbMap.identity_map(G) + sigma
    gens = transpose(incl.matrix) if K.ngens else []
    cols = []
    for e in identity(G.ngens):
        y = subgroup_coords(gens, G.relations, one_plus(e), G.ngens)
        if y is None:
            raise MackeyError("1 + sigma does not land in the fixed subgroup")
        cols.append(y)
    tr = AbMap(G, K, transpose(cols) if cols else zeros(K.ngens, G.ngens))
    return MackeyFunctor(K, G, AbMap(K, G, incl.matrix), tr, sigma)


def direct_sum(functors):
    fixed = direct_sum_groups([M.fixed for M in functors])
    und = direct_sum_groups([M.underlying for M in functors])
    res = direct_sum_maps([M.res for M in functors], fixed, und)
    tr = direct_sum_maps([M.tr for M in functors], und, fixed)
    sig = direct_sum_maps([M.sigma for M in functors], und, und)
    cells = None
    if all(M.cells is not None for M in functors):
        cells = sum((M.cells for M in functors), ())
    return MackeyFunctor(fixed, und, res, tr, sig, cells=cells)


def direct_sum_mackey_maps(maps, source=None, target=None):
    src = source or direct_sum([f.source for f in maps])
    tgt = target or direct_sum([f.target for f in maps])
    return MackeyMap(src, tgt,
                     direct_sum_maps([f.f_fixed for f in maps], src.fixed, tgt.fixed),
                     direct_sum_maps([f.f_underlying for f in maps], src.underlying, tgt.underlying))


def zero_mackey():
    zero = FgAbGroup(0)
    return MackeyFunctor(zero, zero, AbMap.zero_map(zero, zero),
                         AbMap.zero_map(zero, zero), AbMap.zero_map(zero, zero),
                         cells=())


# ---------------------------------------------------------------------------
# box product

def box(M, N):
    """Lewis box product.

    Underlying level M^e (x) N^e with diagonal sigma; fixed level
    (M^{C2} (x) N^{C2}  +  M^e (x) N^e) modulo Frobenius and Weyl relations

        tr(x) (x) b  =  i(x (x) res b)
        a (x) tr(y)  =  i(res a (x) y)
        i(x (x) y)   =  i(sigma x (x) sigma y),

    with tr = i and res = (res (x) res, 1 + sigma).
    """
    und = tensor_groups(M.underlying, N.underlying)
    nf_m, nf_n = M.fixed.ngens, N.fixed.ngens
    ne_m, ne_n = M.underlying.ngens, N.underlying.ngens
    top = nf_m * nf_n        # generators u_i (x) v_j
    bot = ne_m * ne_n        # generators i(x_a (x) y_b)
    n = top + bot

    def top_idx(i, j):
        return i * nf_n + j

    def bot_idx(a, b):
        return top + a * ne_n + b

    rels = []
    # ambient relations of the two tensor blocks
    ff = tensor_groups(M.fixed, N.fixed)
    for r in ff.relations:
        rels.append(list(r) + [0] * bot)
    for r in und.relations:
        rels.append([0] * top + list(r))
    # tr(x) (x) v_j - i(x (x) res v_j)
    for a in range(ne_m):
        trx = M.tr.matrix  # nf_m x ne_m
        for j in range(nf_n):
            row = [0] * n
            for i in range(nf_m):
                row[top_idx(i, j)] += trx[i][a]
            resv = [N.res.matrix[b][j] for b in range(ne_n)]
            for b in range(ne_n):
                row[bot_idx(a, b)] -= resv[b]
            rels.append(row)
    # u_i (x) tr(y) - i(res u_i (x) y)
    for b in range(ne_n):
        for i in range(nf_m):
            row = [0] * n
            for j in range(nf_n):
                row[top_idx(i, j)] += N.tr.matrix[j][b]
            resu = [M.res.matrix[a][i] for a in range(ne_m)]
            for a in range(ne_m):
                row[bot_idx(a, b)] -= resu[a]
            rels.append(row)
    # i(x (x) y) - i(sigma x (x) sigma y)
    sm, sn = M.sigma.matrix, N.sigma.matrix
    for a in range(ne_m):
        for b in range(ne_n):
            row = [0] * n
            row[bot_idx(a, b)] += 1
            for a2 in range(ne_m):
                for b2 in range(ne_n):
                    row[bot_idx(a2, b2)] -= sm[a2][a] * sn[b2][b]
            rels.append(row)
    fixed = FgAbGroup(n, rels)

    # res: top part res (x) res, bottom part 1 + sigma
    res_rows = zeros(und.ngens, n)
    for i in range(nf_m):
        for j in range(nf_n):
            col = top_idx(i, j)
            for a in range(ne_m):
                for b in range(ne_n):
                    res_rows[a * ne_n + b][col] = M.res.matrix[a][i] * N.res.matrix[b][j]
    for a in range(ne_m):
        for b in range(ne_n):
            col = bot_idx(a, b)
            res_rows[a * ne_n + b][col] += 1
            for a2 in range(ne_m):
                for b2 in range(ne_n):
                    res_rows[a2 * ne_n + b2][col] += sm[a2][a] * sn[b2][b]
    res = AbMap(fixed, und, res_rows)

    tr_rows = zeros(n, und.ngens)
    for a in range(ne_m):
        for b in range(ne_n):
            tr_rows[bot_idx(a, b)][a * ne_n + b] = 1
    tr = AbMap(und, fixed, tr_rows)

    sig = tensor_maps(M.sigma, N.sigma, und, und)

    cells = None
    if M.cells is not None and N.cells is not None:
        cells = []
        for cm in M.cells:
            for cn in N.cells:
                cells.append("free" if "free" in (cm, cn) else "triv")
    return MackeyFunctor(fixed, und, res, tr, sig,
                         cells=tuple(cells) if cells is not None else None)


def box_map(f, g, source=None, target=None):
    """Box product of Mackey maps (matching box()'s generator layout)."""
    src = source or box(f.source, g.source)
    tgt = target or box(f.target, g.target)
    ff = f.f_fixed.matrix
    gf = g.f_fixed.matrix
    fu = f.f_underlying.matrix
    gu = g.f_underlying.matrix
    nf_m, nf_n = f.source.fixed.ngens, g.source.fixed.ngens
    ne_m, ne_n = f.source.underlying.ngens, g.source.underlying.ngens
    tf_m, tf_n = f.target.fixed.ngens, g.target.fixed.ngens
    te_m, te_n = f.target.underlying.ngens, g.target.underlying.ngens
    rows = tf_m * tf_n + te_m * te_n
    cols = nf_m * nf_n + ne_m * ne_n
    Mx = zeros(rows, cols)
    for i in range(nf_m):
        for j in range(nf_n):
            c = i * nf_n + j
            for i2 in range(tf_m):
                for j2 in range(tf_n):
                    Mx[i2 * tf_n + j2][c] = ff[i2][i] * gf[j2][j]
    for a in range(ne_m):
        for b in range(ne_n):
            c = nf_m * nf_n + a * ne_n + b
            for a2 in range(te_m):
                for b2 in range(te_n):
                    Mx[tf_m * tf_n + a2 * te_n + b2][c] = fu[a2][a] * gu[b2][b]
    f_fixed = AbMap(src.fixed, tgt.fixed, Mx)
    f_und = AbMap(src.underlying, tgt.underlying,
                  _kron(fu, gu, te_m, ne_m, te_n, ne_n))
    return MackeyMap(src, tgt, f_fixed, f_und)


def _kron(A, B, arows, acols, brows, bcols):
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
# duals, geometric fixed points, zeroth slice

def dual(M):
    """Hom(M, zbar): the monoidal dual for levelwise torsion-free functors.

    Concretely: dual(M)^e = Hom(M^e, Z) with sigma-transpose action, fixed
    level the sigma-invariant functionals, res the inclusion, tr = 1 + sigma.
    Under this dual zbar, zbar_c2 and zsign are self-dual.
    """
    if M.fixed.torsion() or M.underlying.torsion():
        raise TorsionNotSupported("dual requires torsion-free levels")
    basis = _free_basis(M.underlying)
    k = len(basis)
    sig = _map_on_basis(M.sigma, basis, M.underlying)
    sig_t = transpose(sig) if k else []
    free = FgAbGroup.free(k)
    sigma_dual = AbMap(free, free, sig_t if k else [])
    return fixed_point_mackey(free, sigma_dual)


def dual_map(f, dual_source=None, dual_target=None):
    """dual(f): dual(target) -> dual(source), transpose on basis coordinates."""
    Mt = dual_target if dual_target is not None else dual(f.target)
    Ms = dual_source if dual_source is not None else dual(f.source)
    bs = _free_basis(f.source.underlying)
    bt = _free_basis(f.target.underlying)
    fu = _map_on_bases(f.f_underlying, bs, f.target.underlying, bt)
    fu_t = transpose(fu) if fu else []
    und = AbMap(Mt.underlying, Ms.underlying,
                fu_t if fu_t else zeros(Ms.underlying.ngens, Mt.underlying.ngens))
    # fixed level: restrict the transpose to invariant functionals
    gens_s = transpose(Ms.res.matrix) if Ms.fixed.ngens else []
    cols = []
    for e in identity(Mt.fixed.ngens):
        v = und(Mt.res(e))
        y = subgroup_coords(gens_s, Ms.underlying.relations, v, Ms.underlying.ngens)
        if y is None:
            raise MackeyError("dual map does not preserve invariant functionals")
        cols.append(y)
    fx = AbMap(Mt.fixed, Ms.fixed,
               transpose(cols) if cols else zeros(Ms.fixed.ngens, Mt.fixed.ngens))
    return MackeyMap(Mt, Ms, fx, und)


def _free_basis(G):
    """Columns of ambient vectors whose classes form a basis (G torsion-free)."""
    if G.torsion():
        raise TorsionNotSupported("group has torsion")
    _, D, V, Vinv = G._smith()
    diag = [D[i][i] for i in range(min(len(D), G.ngens))] if G.relations else []
    rank_rel = sum(1 for d in diag if d)
    cols = transpose(V) if G.ngens else []
    return [cols[j] for j in range(rank_rel, G.ngens)]


def _map_on_basis(f, basis, G):
    """Matrix of f: G -> G on the chosen basis of a torsion-free G."""
    return _map_on_bases(f, basis, G, basis)


def _map_on_bases(f, basis_src, G_tgt, basis_tgt):
    cols = []
    for b in basis_src:
        v = f(b)
        y = subgroup_coords([list(x) for x in basis_tgt], G_tgt.relations, v, G_tgt.ngens)
        if y is None:
            raise MackeyError("image leaves the free basis span")
        cols.append(y)
    return transpose(cols) if cols else []


def geometric_fixed_points(M):
    """coker(tr : M^e -> M^{C2}); pi_0-level geometric fixed points."""
    return cokernel(M.tr)[0]


def zeroth_slice(M):
    """Largest quotient with injective restriction, plus the quotient map."""
    K, incl = kernel(M.res)
    # sub-Mackey functor generated by ker(res): underlying part = span res(K),
    # fixed part = K + tr(res K); here res K = 0 in the quotient's bookkeeping
    kgens = transpose(incl.matrix) if K.ngens else []
    und_extra = [M.res(list(g)) for g in kgens]
    und_rels = list(M.underlying.relations) + und_extra
    new_und = FgAbGroup(M.underlying.ngens, und_rels)
    fixed_extra = [list(g) for g in kgens]
    fixed_extra += [M.tr(v) for v in und_extra]
    new_fixed = FgAbGroup(M.fixed.ngens, list(M.fixed.relations) + fixed_extra)
    res = AbMap(new_fixed, new_und, M.res.matrix)
    tr = AbMap(new_und, new_fixed, M.tr.matrix)
    sig = AbMap(new_und, new_und, M.sigma.matrix)
    P = MackeyFunctor(new_fixed, new_und, res, tr, sig)
    q = MackeyMap(M, P,
                  AbMap(M.fixed, new_fixed, identity(M.fixed.ngens)),
                  AbMap(M.underlying, new_und, identity(M.underlying.ngens)))
    return P, q


# ---------------------------------------------------------------------------
# isomorphism fingerprint

def fingerprint(M):
    """Tuple of isomorphism invariants.

    Levelwise invariant factors plus invariant factors of kernels and
    cokernels of res, tr, sigma -+ 1, and of the zeroth slice.  Complete on
    the library's standard family (asserted in the test suite), used for
    "exact match" assertions in place of a module-isomorphism search.
    """
    one = AbMap.identity_map(M.underlying)
    parts = [
        M.fixed.invariant_factors(),
        M.underlying.invariant_factors(),
        kernel(M.res)[0].invariant_factors(),
        cokernel(M.res)[0].invariant_factors(),
        kernel(M.tr)[0].invariant_factors(),
        cokernel(M.tr)[0].invariant_factors(),
        kernel(M.sigma - one)[0].invariant_factors(),
        cokernel(M.sigma - one)[0].invariant_factors(),
        kernel(M.sigma + one)[0].invariant_factors(),
        cokernel(M.sigma + one)[0].invariant_factors(),
    ]
    P, _ = zeroth_slice(M)
    parts.append(P.fixed.invariant_factors())
    parts.append(P.underlying.invariant_factors())
    return tuple(parts)


def isomorphic(M, N):
    return fingerprint(M) == fingerprint(N)
