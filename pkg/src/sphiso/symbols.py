"""Laurent-polynomial symbols and their elementary function theory.

A symbol is a Laurent polynomial in variables z1..zn restricted to the unit
torus (or, for the sphere models, kept with separate analytic and conjugate
exponents; see `parse_terms`). Exponent vectors live in Z^nvars and index a
coefficient dict; zbar_j on the torus is z_j^(-1).

Text format: terms like ``2.5*z1^3*zbar2^1`` joined by ``+``/``-``, with
``z``/``zbar`` accepted in one variable and complex coefficients written in
parentheses, e.g. ``(1.5-2j)*z^2``. `LaurentPoly.to_text` emits a canonical
form that `from_text` parses back to the identical object, bit for bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import OnCurveError, PreconditionError

__all__ = [
    "LaurentPoly",
    "parse_terms",
    "EssRange",
    "eval_grid",
    "winding",
    "curve_tolerance",
    "sup_norm",
    "conv_hull",
    "Hull",
    "SphericalMultifunction",
    "circle_coordinates",
    "sphere_coordinates",
    "torus_coordinates",
]


def _clean_complex(c):
    c = complex(c)
    # normalize -0.0 components so canonical forms are bit-stable
    return complex(c.real + 0.0, c.imag + 0.0)


class LaurentPoly:
    """Finitely supported coefficient map exponent-vector -> complex."""

    __slots__ = ("nvars", "_coeffs")

    def __init__(self, nvars, coeffs=None):
        if nvars < 1:
            raise PreconditionError("nvars must be >= 1")
        self.nvars = int(nvars)
        store = {}
        for e, c in (coeffs or {}).items():
            if isinstance(e, int):
                e = (e,)
            e = tuple(int(k) for k in e)
            if len(e) != self.nvars:
                raise PreconditionError(f"exponent {e} has wrong arity for nvars={nvars}")
            c = _clean_complex(c)
            if c != 0:
                acc = store.get(e)
                if acc is None:
                    store[e] = c
                else:
                    acc = _clean_complex(acc + c)
                    if acc == 0:
                        del store[e]
                    else:
                        store[e] = acc
        self._coeffs = store

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars=1):
        return cls(nvars, {})

    @classmethod
    def constant(cls, c, nvars=1):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, j=0, nvars=1):
        e = [0] * nvars
        e[j] = 1
        return cls(nvars, {tuple(e): 1.0})

    @classmethod
    def monomial(cls, exponent, coeff=1.0, nvars=None):
        if isinstance(exponent, int):
            exponent = (exponent,)
        if nvars is None:
            nvars = len(exponent)
        return cls(nvars, {tuple(exponent): coeff})

    # ---- basic queries -------------------------------------------------

    @property
    def coeffs(self):
        return dict(self._coeffs)

    def coeff(self, exponent):
        if isinstance(exponent, int):
            exponent = (exponent,)
        return self._coeffs.get(tuple(exponent), 0j)

    def terms(self):
        return self._coeffs.items()

    def is_zero(self):
        return not self._coeffs

    def band(self):
        """Largest |exponent| component over the support."""
        if not self._coeffs:
            return 0
        return max(max(abs(k) for k in e) for e in self._coeffs)

    def deg_pos(self):
        """Largest exponent (one variable), 0 for empty support."""
        self._require_univariate()
        return max((e[0] for e in self._coeffs if e[0] > 0), default=0)

    def deg_neg(self):
        """Magnitude of the most negative exponent (one variable)."""
        self._require_univariate()
        return max((-e[0] for e in self._coeffs if e[0] < 0), default=0)

    def is_analytic(self):
        return all(all(k >= 0 for k in e) for e in self._coeffs)

    def l1_norm(self):
        return float(sum(abs(c) for c in self._coeffs.values()))

    def derivative_l1_bound(self):
        """sup |d/dtheta phi(e^{i theta})| <= sum |k| |c_k| (one variable)."""
        self._require_univariate()
        return float(sum(abs(e[0]) * abs(c) for e, c in self._coeffs.items()))

    def second_derivative_l1_bound(self):
        self._require_univariate()
        return float(sum(e[0] * e[0] * abs(c) for e, c in self._coeffs.items()))

    def _require_univariate(self):
        if self.nvars != 1:
            raise PreconditionError("operation defined for one-variable symbols only")

    # ---- algebra -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0j) + c
        return LaurentPoly(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return LaurentPoly(self.nvars, {e: c * other for e, c in self._coeffs.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if other.nvars != self.nvars:
            raise PreconditionError("variable count mismatch")
        out = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0j) + c1 * c2
        return LaurentPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise PreconditionError("only nonnegative integer powers")
        out = LaurentPoly.constant(1.0, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self):
        return LaurentPoly(
            self.nvars,
            {tuple(-k for k in e): c.conjugate() for e, c in self._coeffs.items()},
        )

    def _coerce(self, other):
        if isinstance(other, (int, float, complex)):
            return LaurentPoly.constant(other, self.nvars)
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise PreconditionError("variable count mismatch")
            return other
        return NotImplemented

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly)
            and self.nvars == other.nvars
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self._coeffs.items())))

    # ---- evaluation ----------------------------------------------------

    def eval_at(self, points):
        """Evaluate at complex points, shape (..., nvars) or (...,) when nvars=1."""
        pts = np.asarray(points, dtype=complex)
        if self.nvars == 1 and (pts.ndim == 0 or pts.shape[-1] != 1):
            pts = pts[..., np.newaxis]
        if pts.shape[-1] != self.nvars:
            raise PreconditionError(f"points need last axis {self.nvars}")
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for e, c in self._coeffs.items():
            term = np.full(pts.shape[:-1], c, dtype=complex)
            for j, k in enumerate(e):
                if k:
                    term = term * pts[..., j] ** k
            out += term
        return out

    # ---- text form -------------------------------------------------------

    def to_text(self):
        if not self._coeffs:
            return "0"
        parts = []
        for e in sorted(self._coeffs):
            c = self._coeffs[e]
            factors = []
            for j, k in enumerate(e):
                if k == 0:
                    continue
                name = ("z" if k > 0 else "zbar") if self.nvars == 1 else (
                    f"z{j + 1}" if k > 0 else f"zbar{j + 1}"
                )
                p = abs(k)
                factors.append(name if p == 1 else f"{name}^{p}")
            body = "*".join([_fmt_coeff(c)] + factors)
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-") and not p.startswith("(-"):
                out += " - " + p[1:]
            else:
                out += " + " + p
        return out

    @classmethod
    def from_text(cls, text, nvars=None):
        terms = parse_terms(text)
        seen = max((t.nvars for t in terms), default=1)
        if nvars is None:
            nvars = seen
        elif seen > nvars:
            raise PreconditionError(f"text uses {seen} variables, nvars={nvars} given")
        coeffs = {}
        for t in terms:
            # terms widen only to the arity the text mentions; pad the rest
            e = tuple(
                (t.zpow[j] if j < len(t.zpow) else 0)
                - (t.zbarpow[j] if j < len(t.zbarpow) else 0)
                for j in range(nvars)
            )
            coeffs[e] = coeffs.get(e, 0j) + t.coeff
        return cls(nvars, coeffs)

    def __repr__(self):
        return f"LaurentPoly({self.to_text()!r})"


def _fmt_coeff(c):
    if c.imag == 0.0:
        return repr(c.real)
    sign = "+" if c.imag > 0 else "-"
    return f"({c.real!r}{sign}{abs(c.imag)!r}j)"


# ---------------------------------------------------------------------------
# parsing


@dataclass(frozen=True)
class RawTerm:
    """One parsed product: coefficient and separate z / zbar powers."""

    coeff: complex
    zpow: tuple
    zbarpow: tuple

    @property
    def nvars(self):
        return len(self.zpow)


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<cplx>\([^()]*\))"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?[jJ]?)"
    r"|(?P<var>zbar\d*|z\d*)"
    r"|(?P<op>[*^+\-])"
    r")"
)


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PreconditionError(f"cannot tokenize symbol text at position {pos}: {text[pos:pos+12]!r}")
        pos = m.end()
        for kind in ("cplx", "num", "var", "op"):
            v = m.group(kind)
            if v is not None:
                out.append((kind, v))
                break
    return out


def parse_terms(text):
    """Parse symbol text into RawTerm list, keeping z and zbar powers apart.

    The torus interpretation (`LaurentPoly.from_text`) nets them out; the
    sphere models keep both sides.
    """
    toks = _tokenize(text)
    if not toks:
        raise PreconditionError("empty symbol text")
    terms, i, n = [], 0, len(toks)

    def parse_int(i):
        sign = 1
        if i < n and toks[i] == ("op", "-"):
            sign, i = -1, i + 1
        if i >= n or toks[i][0] != "num" or not re.fullmatch(r"\d+", toks[i][1]):
            raise PreconditionError("expected integer exponent after '^'")
        return sign * int(toks[i][1]), i + 1

    while i < n:
        sign = 1.0
        while i < n and toks[i][0] == "op" and toks[i][1] in "+-":
            if toks[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise PreconditionError("dangling sign in symbol text")
        coeff = complex(sign)
        zpow, zbarpow = {}, {}
        expect_factor = True
        while True:
            if expect_factor:
                kind, val = toks[i] if i < n else (None, None)
                if kind == "num":
                    coeff *= complex(val) if val[-1] in "jJ" else float(val)
                    i += 1
                elif kind == "cplx":
                    try:
                        coeff *= complex(val)
                    except ValueError:
                        raise PreconditionError(f"bad complex literal {val!r}") from None
                    i += 1
                elif kind == "var":
                    bar = val.startswith("zbar")
                    idx_s = val[4:] if bar else val[1:]
                    idx = int(idx_s) - 1 if idx_s else 0
                    if idx < 0:
                        raise PreconditionError(f"variable index in {val!r} must be >= 1")
                    p = 1
                    if i + 1 < n and toks[i + 1] == ("op", "^"):
                        p, i = parse_int(i + 2)
                        i -= 1
                    tgt = zbarpow if bar else zpow
                    tgt[idx] = tgt.get(idx, 0) + p
                    i += 1
                else:
                    raise PreconditionError("expected a coefficient or variable")
                expect_factor = False
            elif i < n and toks[i] == ("op", "*"):
                i += 1
                expect_factor = True
            else:
                break
        arity = max([k + 1 for k in zpow] + [k + 1 for k in zbarpow] + [1])
        terms.append(
            RawTerm(
                _clean_complex(coeff),
                tuple(zpow.get(j, 0) for j in range(arity)),
                tuple(zbarpow.get(j, 0) for j in range(arity)),
            )
        )
    # widen all terms to common arity
    arity = max(t.nvars for t in terms)
    widened = [
        RawTerm(
            t.coeff,
            t.zpow + (0,) * (arity - t.nvars),
            t.zbarpow + (0,) * (arity - t.nvars),
        )
        for t in terms
    ]
    return widened


# ---------------------------------------------------------------------------
# grids, winding, sup norms


@dataclass(frozen=True)
class EssRange:
    """Sampled essential range of a symbol over a torus grid."""

    samples: np.ndarray
    grid_size: int
    nvars: int


def eval_grid(phi, grid_size):
    """Sample phi over the uniform torus grid with grid_size points per axis."""
    need = 4 * (1 + phi.band())
    if grid_size < need:
        raise PreconditionError(f"grid_size {grid_size} < 4*(1+band) = {need}")
    theta = 2.0 * np.pi * np.arange(grid_size) / grid_size
    ring = np.exp(1j * theta)
    if phi.nvars == 1:
        samples = phi.eval_at(ring)
    else:
        mesh = np.meshgrid(*([ring] * phi.nvars), indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        samples = phi.eval_at(pts)
    return EssRange(np.ascontiguousarray(samples.ravel()), grid_size, phi.nvars)


def curve_tolerance(phi, grid_size):
    """Distance below which a winding query is flagged ON_CURVE.

    10 * (grid spacing) * (l1 derivative bound): conservative but certifiable,
    since consecutive curve samples are at most spacing * bound apart.
    """
    return 10.0 * (2.0 * np.pi / grid_size) * phi.derivative_l1_bound()


def winding(phi, lam, grid_size=512):
    """Winding number of phi(e^{i theta}) - lam by accumulated argument.

    Raises OnCurveError when lam is within `curve_tolerance` of the sampled
    curve; the accumulated total is asserted to sit within 1e-6 of an
    integer multiple of 2 pi.
    """
    phi._require_univariate()
    samples = eval_grid(phi, grid_size).samples
    return _winding_of_samples(samples, complex(lam), curve_tolerance(phi, grid_size))


def _winding_of_samples(samples, lam, tol):
    rel = samples - lam
    dist = float(np.min(np.abs(rel)))
    if dist <= tol:
        raise OnCurveError(dist, tol)
    steps = np.angle(np.roll(rel, -1) / rel)
    total = float(np.sum(steps))
    w = round(total / (2.0 * np.pi))
    if abs(total - 2.0 * np.pi * w) > 1e-6:
        raise PreconditionError(
            f"winding accumulation drifted: total {total:.3e} not near a multiple of 2pi"
        )
    return int(w)


def sup_norm(phi, grid_size=512):
    """(lower, upper) bracket for sup |phi| on the torus: grid max and l1 sum."""
    lower = float(np.max(np.abs(eval_grid(phi, grid_size).samples)))
    upper = phi.l1_norm()
    if lower > upper + 1e-12:
        raise PreconditionError("sup bracket inverted; coefficients are inconsistent")
    # grid rounding can push the estimate an ulp past the l1 bound
    return min(lower, upper), upper


# ---------------------------------------------------------------------------
# convex hulls


class Hull:
    """Convex hull of a finite point set in C, with tolerant membership.

    membership(lam, tol) is one-sided safe: it never rejects a point whose
    distance to the hull is <= tol (near corners it may accept points up to
    sqrt(2) * tol away, which only loosens an inclusion check).
    """

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=complex)
        if v.size == 0:
            raise PreconditionError("hull of an empty point set")
        self.vertices = v
        if v.size == 1:
            self.kind = "point"
        elif v.size == 2:
            self.kind = "segment"
        else:
            self.kind = "polygon"
            c = v.mean()
            ang = np.angle(v - c)
            order = np.argsort(ang, kind="stable")
            self._c = c
            self._va = v[order]
            self._aa = ang[order]

    def outside_distance(self, lams):
        """Distance-like defect: 0 inside, else a lower bound on the distance
        to the hull (exact for point/segment hulls and polygon edge regions)."""
        q = np.atleast_1d(np.asarray(lams, dtype=complex))
        if self.kind == "point":
            return np.abs(q - self.vertices[0])
        if self.kind == "segment":
            a, b = self.vertices
            e = b - a
            t = np.clip(((q - a) * np.conj(e)).real / abs(e) ** 2, 0.0, 1.0)
            return np.abs(q - (a + t * e))
        va, aa, m = self._va, self._aa, self._va.size
        idx = np.searchsorted(aa, np.angle(q - self._c), side="right") - 1
        idx %= m
        a = va[idx]
        e = va[(idx + 1) % m] - a
        signed = (np.conj(e) * (q - a)).imag / np.abs(e)
        return np.maximum(0.0, -signed)

    def membership(self, lam, tol):
        return bool(self.outside_distance(lam)[0] <= tol)

    def membership_batch(self, lams, tol):
        return self.outside_distance(lams) <= tol


def _monotone_chain(pts):
    idx = np.lexsort((pts.imag, pts.real))
    p = pts[idx]

    def cross(o, a, b):
        return ((a - o).conjugate() * (b - o)).imag

    def half(seq):
        out = []
        for q in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], q) <= 0:
                out.pop()
            out.append(q)
        return out

    lower = half(p)
    upper = half(p[::-1])
    return np.array(lower[:-1] + upper[:-1], dtype=complex)


def conv_hull(points, dedupe_tol=0.0):
    """Convex hull (CCW vertices) of complex points.

    Small sets go through a monotone chain; large ones (> 50000) are handed
    to qhull for speed, falling back to the chain on degeneracies.
    """
    pts = np.unique(np.asarray(list(points) if not isinstance(points, np.ndarray) else points, dtype=complex))
    if pts.size == 0:
        raise PreconditionError("conv_hull of an empty point set")
    if pts.size <= 2:
        return Hull(pts)
    if pts.size > 50000:
        try:
            from scipy.spatial import ConvexHull as _QHull
            from scipy.spatial import QhullError

            xy = np.column_stack([pts.real, pts.imag])
            try:
                q = _QHull(xy)
                verts = pts[q.vertices]  # CCW per qhull 2-d convention
                return Hull(verts)
            except QhullError:
                pass
        except ImportError:
            pass
    verts = _monotone_chain(pts)
    if verts.size < 3:
        # collinear input: keep extreme endpoints
        idx = np.lexsort((pts.imag, pts.real))
        return Hull(np.array([pts[idx[0]], pts[idx[-1]]]))
    return Hull(verts)


# ---------------------------------------------------------------------------
# coordinate multifunctions


class SphericalMultifunction:
    """Tuple of symbols with sum_j |phi_j|^2 = 1 on its domain.

    domain is "circle", "sphere", or "torus"; validation samples the domain
    and enforces the identity within 1e-12.
    """

    def __init__(self, components, domain, gamma=1.0, rng_seed=7, validate=True):
        self.components = tuple(components)
        if not self.components:
            raise PreconditionError("need at least one component")
        self.domain = domain
        self.n = self.components[0].nvars
        self.gamma = float(gamma)
        if any(c.nvars != self.n for c in self.components):
            raise PreconditionError("components disagree on variable count")
        if domain not in ("circle", "sphere", "torus"):
            raise PreconditionError(f"unknown domain {domain!r}")
        if validate:
            dev = self.partition_defect(rng_seed=rng_seed)
            if dev > 1e-12:
                raise PreconditionError(f"sum |phi_j|^2 deviates from 1 by {dev:.3e}")

    def partition_defect(self, rng_seed=7):
        if self.domain in ("circle", "torus"):
            g = 32 if self.n > 1 else 256
            g = max(g, 4 * (1 + max(c.band() for c in self.components)))
            acc = None
            for c in self.components:
                s = np.abs(eval_grid(c, g).samples) ** 2
                acc = s if acc is None else acc + s
        else:
            rng = np.random.default_rng(rng_seed)
            v = rng.standard_normal((512, self.n)) + 1j * rng.standard_normal((512, self.n))
            v /= np.linalg.norm(v, axis=1, keepdims=True)
            acc = None
            for c in self.components:
                s = np.abs(c.eval_at(v)) ** 2
                acc = s if acc is None else acc + s
        return float(np.max(np.abs(acc - 1.0)))


def circle_coordinates():
    return SphericalMultifunction([LaurentPoly.variable(0, 1)], "circle")


def sphere_coordinates(n):
    comps = [LaurentPoly.variable(j, n) for j in range(n)]
    return SphericalMultifunction(comps, "sphere")


def torus_coordinates(n):
    g = float(np.sqrt(n))
    comps = [LaurentPoly.variable(j, n) * (1.0 / g) for j in range(n)]
    return SphericalMultifunction(comps, "torus", gamma=g)
