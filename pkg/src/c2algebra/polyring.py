"""Exact polynomial arithmetic for presented commutative rings with involution.

Rings are presented as k[v_1, ..., v_n] / (rewrite rules), where each rule
replaces a pure power v_i^p by a polynomial of strictly smaller v_i-degree.
This covers every quotient the engine needs (truncated polynomial rings,
y^2 = f(x), i^2 = -1, group rings of cyclic groups) without Groebner bases.

Base rings: Z, Z[1/2], Q and Z/m, all with exact arithmetic (Fraction
coefficients in characteristic 0, reduced ints mod m).  Polynomials are
dicts monomial-exponent-tuple -> coefficient, kept in normal form.
"""

from fractions import Fraction


class RingError(Exception):
    pass


class UnsupportedPresentation(RingError):
    pass


class TwoNotInvertible(RingError):
    pass


class BaseRing:
    """Z, Z[1/2], Q or Z/m."""

    def __init__(self, kind, modulus=None):
        if kind not in ("Z", "Z[1/2]", "Q", "Z/m"):
            raise UnsupportedPresentation("unknown base ring %r" % kind)
        self.kind = kind
        self.modulus = modulus
        if kind == "Z/m":
            if not modulus or modulus < 2:
                raise UnsupportedPresentation("Z/m needs a modulus >= 2")

    def coerce(self, x):
        if self.kind == "Z/m":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise RingError("fraction in Z/m")
                x = x.numerator
            return x % self.modulus
        x = Fraction(x)
        if self.kind == "Z" and x.denominator != 1:
            raise RingError("%s is not an integer" % x)
        if self.kind == "Z[1/2]":
            d = x.denominator
            while d % 2 == 0:
                d //= 2
            if d != 1:
                raise RingError("%s is not in Z[1/2]" % x)
        return x

    def zero(self):
        return 0 if self.kind == "Z/m" else Fraction(0)

    def one(self):
        return 1 if self.kind == "Z/m" else Fraction(1)

    def is_zero(self, x):
        return self.coerce(x) == self.zero()

    def add(self, a, b):
        return self.coerce(a + b)

    def mul(self, a, b):
        return self.coerce(a * b)

    def neg(self, a):
        return self.coerce(-a)

    @property
    def two_invertible(self):
        if self.kind in ("Q", "Z[1/2]"):
            return True
        if self.kind == "Z/m":
            return self.modulus % 2 == 1
        return False

    def __repr__(self):
        return "BaseRing(%s)" % (self.kind if self.kind != "Z/m" else "Z/%d" % self.modulus)

    def __eq__(self, other):
        return (isinstance(other, BaseRing) and self.kind == other.kind
                and self.modulus == other.modulus)

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text in ("Z", "ZZ"):
            return cls("Z")
        if text in ("Q", "QQ"):
            return cls("Q")
        if text in ("Z[1/2]", "Z1/2"):
            return cls("Z[1/2]")
        if text.startswith("Z/"):
            return cls("Z/m", modulus=int(text[2:]))
        raise UnsupportedPresentation("unsupported base ring %r" % text)


class PolyRing:
    """k[vars] with monic power rewrite rules and optional weights/truncation.

    rules: {var_index: (power, replacement poly dict)}; the replacement must
    have v_i-degree < power, and rule dependencies must be acyclic.
    weights: per-variable positive weights for graded enumeration (None for
    ungraded variables).
    """

    def __init__(self, base, names, rules=None, weights=None, trunc=None):
        self.base = base
        self.names = list(names)
        self.n = len(self.names)
        self.rules = dict(rules or {})
        self.weights = list(weights) if weights is not None else [1] * self.n
        self.trunc = trunc
        for i, (p, repl) in self.rules.items():
            if p < 1:
                raise UnsupportedPresentation("rule power must be >= 1")
            for mono in repl:
                if mono[i] >= p:
                    raise UnsupportedPresentation(
                        "rule for %s does not lower its degree" % self.names[i])
        self._check_acyclic()

    def _check_acyclic(self):
        deps = {}
        for i, (_p, repl) in self.rules.items():
            deps[i] = set()
            for mono in repl:
                for j, e in enumerate(mono):
                    if e and j in self.rules and j != i:
                        deps[i].add(j)
        seen, stack = set(), set()

        def visit(i):
            if i in stack:
                raise UnsupportedPresentation("cyclic rewrite rules")
            if i in seen:
                return
            stack.add(i)
            for j in deps.get(i, ()):
                visit(j)
            stack.discard(i)
            seen.add(i)

        for i in deps:
            visit(i)

    # -- polynomial plumbing -------------------------------------------------

    def zero_poly(self):
        return {}

    def one_poly(self):
        return {(0,) * self.n: self.base.one()}

    def var(self, i):
        mono = [0] * self.n
        mono[i] = 1
        return {tuple(mono): self.base.one()}

    def var_named(self, name):
        return self.var(self.names.index(name))

    def const(self, c):
        c = self.base.coerce(c)
        return {} if self.base.is_zero(c) else {(0,) * self.n: c}

    def monomial_weight(self, mono):
        return sum(e * w for e, w in zip(mono, self.weights))

    def normal_form(self, poly):
        out = {}
        work = list(poly.items())
        while work:
            mono, coeff = work.pop()
            coeff = self.base.coerce(coeff)
            if self.base.is_zero(coeff):
                continue
            if self.trunc is not None and self.monomial_weight(mono) > self.trunc:
                continue
            hit = None
            for i, (p, repl) in self.rules.items():
                if mono[i] >= p:
                    hit = (i, p, repl)
                    break
            if hit is None:
                c = self.base.add(out.get(mono, self.base.zero()), coeff)
                if self.base.is_zero(c):
                    out.pop(mono, None)
                else:
                    out[mono] = c
                continue
            i, p, repl = hit
            rest = list(mono)
            rest[i] -= p
            for rm, rc in repl.items():
                newmono = tuple(a + b for a, b in zip(rest, rm))
                work.append((newmono, self.base.mul(coeff, rc)))
        return out

    def add(self, a, b):
        out = dict(a)
        for m, c in b.items():
            s = self.base.add(out.get(m, self.base.zero()), c)
            if self.base.is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        return out

    def scale(self, c, a):
        c = self.base.coerce(c)
        if self.base.is_zero(c):
            return {}
        return self.normal_form({m: self.base.mul(c, x) for m, x in a.items()})

    def neg(self, a):
        return {m: self.base.neg(c) for m, c in a.items()}

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                c = self.base.mul(c1, c2)
                out[m] = self.base.add(out.get(m, self.base.zero()), c)
        return self.normal_form(out)

    def is_zero(self, a):
        return not self.normal_form(a)

    def equal(self, a, b):
        return self.is_zero(self.sub(a, b))

    def apply_map(self, poly, images):
        """Ring map fixing the base, v_i -> images[i] (polys in this ring)."""
        out = {}
        for mono, coeff in poly.items():
            term = self.const(coeff)
            for i, e in enumerate(mono):
                for _ in range(e):
                    term = self.mul(term, images[i])
            out = self.add(out, term)
        return self.normal_form(out)

    # -- bases ---------------------------------------------------------------

    def is_finite_dimensional(self):
        return all(i in self.rules for i in range(self.n)) or self.n == 0

    def monomial_basis_all(self):
        """All normal-form monomials; requires every variable to be ruled."""
        if not self.is_finite_dimensional():
            raise UnsupportedPresentation("ring is not finite dimensional")
        out = [(0,) * self.n]
        for i in range(self.n):
            p = self.rules[i][0]
            out = [m[:i] + (e,) + m[i + 1:] for m in out for e in range(p)]
        return sorted(out)

    def monomial_basis_weight(self, w):
        """Normal-form monomials of weight w (positive weights required)."""
        if any(wt <= 0 for wt in self.weights):
            raise UnsupportedPresentation("weight enumeration needs positive weights")
        out = []

        def rec(i, rem, acc):
            if i == self.n:
                if rem == 0:
                    out.append(tuple(acc))
                return
            cap = rem // self.weights[i]
            if i in self.rules:
                cap = min(cap, self.rules[i][0] - 1)
            for e in range(cap + 1):
                rec(i + 1, rem - e * self.weights[i], acc + [e])

        rec(0, w, [])
        return sorted(out)

    def monomial_string(self, mono):
        parts = []
        for name, e in zip(self.names, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append("%s^%d" % (name, e))
        return "*".join(parts) if parts else "1"

    def poly_string(self, poly):
        if not poly:
            return "0"
        terms = []
        for mono in sorted(poly):
            c = poly[mono]
            ms = self.monomial_string(mono)
            if ms == "1":
                terms.append(_coeff_str(c))
            elif c == 1:
                terms.append(ms)
            elif c == -1:
                terms.append("-" + ms)
            else:
                terms.append("%s*%s" % (_coeff_str(c), ms))
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out


def _coeff_str(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    return str(c)


class RingInvolution:
    """Order <= 2 ring automorphism given by images of the variables."""

    def __init__(self, ring, images):
        self.ring = ring
        self.images = [ring.normal_form(img) for img in images]
        if len(self.images) != ring.n:
            raise UnsupportedPresentation("involution needs one image per variable")

    def __call__(self, poly):
        return self.ring.apply_map(poly, self.images)

    def is_involution(self):
        for i in range(self.ring.n):
            twice = self(self.images[i])
            if not self.ring.equal(twice, self.ring.var(i)):
                return False
        return True

    def preserves_rules(self):
        """sigma carries each rewrite relation into the ideal (reduces to 0)."""
        for i, (p, repl) in self.ring.rules.items():
            lhs = self.ring.one_poly()
            for _ in range(p):
                lhs = self.ring.mul(lhs, self.images[i])
            rhs = self(dict(repl))
            if not self.ring.equal(lhs, rhs):
                return False
        return True

    @classmethod
    def identity(cls, ring):
        return cls(ring, [ring.var(i) for i in range(ring.n)])


# ---------------------------------------------------------------------------
# tiny polynomial expression parser (for CLI / JSON input)

def parse_poly(ring, text):
    """Parse '+', '-', '*', '^', integer constants, parens and variable names."""
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def eat(tok=None):
        t = peek()
        if tok is not None and t != tok:
            raise RingError("expected %r at %r" % (tok, t))
        pos[0] += 1
        return t

    def parse_expr():
        t = parse_term()
        while peek() in ("+", "-"):
            op = eat()
            u = parse_term()
            t = ring.add(t, u) if op == "+" else ring.sub(t, u)
        return t

    def parse_term():
        t = parse_factor()
        while True:
            nxt = peek()
            if nxt == "*":
                eat()
                t = ring.mul(t, parse_factor())
            elif isinstance(nxt, str) and (nxt.isidentifier() or nxt == "("):
                # implicit multiplication: 2x, x y, 3(x+1)
                t = ring.mul(t, parse_factor())
            else:
                return t

    def parse_factor():
        t = parse_atom()
        while peek() == "^":
            eat()
            e = eat()
            if not (isinstance(e, int) and e >= 0):
                raise RingError("exponent must be a nonnegative integer")
            out = ring.one_poly()
            for _ in range(e):
                out = ring.mul(out, t)
            t = out
        return t

    def parse_atom():
        t = peek()
        if t == "(":
            eat()
            inner = parse_expr()
            eat(")")
            return inner
        if t == "-":
            eat()
            return ring.neg(parse_atom())
        if t == "+":
            eat()
            return parse_atom()
        if isinstance(t, int):
            eat()
            return ring.const(t)
        if isinstance(t, str) and t.isidentifier():
            eat()
            if t not in ring.names:
                raise RingError("unknown variable %r" % t)
            return ring.var_named(t)
        raise RingError("unexpected token %r" % t)

    out = parse_expr()
    if pos[0] != len(tokens):
        raise RingError("trailing input at %r" % tokens[pos[0]])
    return ring.normal_form(out)


def _tokenize(text):
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(int(text[i:j]))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(text[i:j])
            i = j
        elif c in "+-*^()":
            out.append(c)
            i += 1
        else:
            raise RingError("bad character %r in polynomial" % c)
    return out
