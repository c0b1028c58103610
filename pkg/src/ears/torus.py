"""Desk-scale multiloop realization: traceless matrices over Laurent polynomials.

Elements are finite sums of (matrix unit or Cartan difference) tensor a
Laurent monomial in nu variables, with coefficients in the rational group
ring of Z/m (cyclic convolution, so zeta ** m = 1 holds by construction and
all equality checks are exact).  This realizes the simply-laced type A
system over the full lattice: root spaces are matrix positions graded by
Laurent degree, the degree-zero Cartan part plays the role of H.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .finite import FiniteType
from .lattice import IntVector
from .system import Ears, EarsSpec, Root, Window, build_ears

TermKey = tuple  # ("e", i, j) or ("h", r)


@dataclass(frozen=True)
class CycScalar:
    """Element of Q[Z/m]: coefficient vector for (1, zeta, ..., zeta**(m-1))."""

    modulus: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if len(self.coeffs) != self.modulus:
            raise ValueError("need exactly one coefficient per group element")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def zero(cls, m: int) -> "CycScalar":
        return cls(m, (Fraction(0),) * m)

    @classmethod
    def one(cls, m: int) -> "CycScalar":
        return cls.zeta(m, 0)

    @classmethod
    def zeta(cls, m: int, power: int = 1) -> "CycScalar":
        coeffs = [Fraction(0)] * m
        coeffs[power % m] = Fraction(1)
        return cls(m, tuple(coeffs))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "CycScalar") -> "CycScalar":
        self._check(other)
        return CycScalar(
            self.modulus, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "CycScalar") -> "CycScalar":
        self._check(other)
        return CycScalar(
            self.modulus, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "CycScalar":
        return CycScalar(self.modulus, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "CycScalar") -> "CycScalar":
        self._check(other)
        m = self.modulus
        out = [Fraction(0)] * m
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[(i + j) % m] += a * b
        return CycScalar(m, tuple(out))

    def scale(self, q) -> "CycScalar":
        q = Fraction(q)
        return CycScalar(self.modulus, tuple(q * a for a in self.coeffs))

    def unity_exponent(self) -> int | None:
        """The k with self = zeta**k, or None when self is not a group element."""
        hits = [i for i, a in enumerate(self.coeffs) if a]
        if len(hits) == 1 and self.coeffs[hits[0]] == 1:
            return hits[0]
        return None

    def _check(self, other: "CycScalar") -> None:
        if self.modulus != other.modulus:
            raise ValueError("scalar modulus mismatch")


def _diag_to_h(i: int, j: int) -> list[tuple[int, int]]:
    """e_ii - e_jj expanded over the Cartan differences h_r = e_rr - e_(r+1)(r+1)."""
    if i < j:
        return [(r, 1) for r in range(i, j)]
    if i > j:
        return [(r, -1) for r in range(j, i)]
    return []


@dataclass(frozen=True)
class TorusElement:
    """Canonical finite sum of graded basis terms with group-ring coefficients."""

    ell: int
    nu: int
    modulus: int
    terms: tuple[tuple[TermKey, IntVector, CycScalar], ...]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "TorusElement") -> None:
        if (self.ell, self.nu, self.modulus) != (other.ell, other.nu, other.modulus):
            raise ValueError("torus parameter mismatch")

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._check(other)
        acc: dict[tuple[TermKey, IntVector], CycScalar] = {}
        for key, lam, c in self.terms + other.terms:
            prev = acc.get((key, lam))
            acc[(key, lam)] = c if prev is None else prev + c
        return _canonical(self.ell, self.nu, self.modulus, acc)

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + (-other)

    def __neg__(self) -> "TorusElement":
        return TorusElement(
            self.ell, self.nu, self.modulus,
            tuple((key, lam, -c) for key, lam, c in self.terms),
        )

    def scale(self, c: CycScalar | int) -> "TorusElement":
        if isinstance(c, int):
            c = CycScalar.one(self.modulus).scale(c)
        return _canonical(
            self.ell, self.nu, self.modulus,
            {(key, lam): coeff * c for key, lam, coeff in self.terms},
        )


def _canonical(
    ell: int, nu: int, modulus: int, acc: dict[tuple[TermKey, IntVector], CycScalar]
) -> TorusElement:
    terms = tuple(
        (key, lam, c)
        for (key, lam), c in sorted(acc.items())
        if not c.is_zero
    )
    return TorusElement(ell, nu, modulus, terms)


@dataclass(frozen=True)
class LieTorus:
    """Traceless (ell+1) x (ell+1) matrices over nu-variable Laurent polynomials."""

    ell: int
    nu: int
    modulus: int

    def __post_init__(self) -> None:
        if self.ell < 2:
            raise ValueError("matrix realization needs rank >= 2")
        if self.nu < 0:
            raise ValueError("nullity must be >= 0")
        if self.modulus < 1:
            raise ValueError("scalar modulus must be >= 1")

    @property
    def size(self) -> int:
        return self.ell + 1

    def zero(self) -> TorusElement:
        return TorusElement(self.ell, self.nu, self.modulus, ())

    def _lam(self, lam: Sequence[int] | None) -> IntVector:
        if lam is None:
            return (0,) * self.nu
        lam = tuple(int(x) for x in lam)
        if len(lam) != self.nu:
            raise ValueError("Laurent degree has wrong length")
        return lam

    def e(self, i: int, j: int, lam: Sequence[int] | None = None) -> TorusElement:
        """Matrix unit e_ij tensor a Laurent monomial."""
        if not (0 <= i <= self.ell and 0 <= j <= self.ell) or i == j:
            raise ValueError("matrix unit indices must be distinct and in range")
        return TorusElement(
            self.ell, self.nu, self.modulus,
            ((("e", i, j), self._lam(lam), CycScalar.one(self.modulus)),),
        )

    def h(self, r: int, lam: Sequence[int] | None = None) -> TorusElement:
        """Cartan difference e_rr - e_(r+1)(r+1) tensor a Laurent monomial."""
        if not 0 <= r < self.ell:
            raise ValueError("Cartan index out of range")
        return TorusElement(
            self.ell, self.nu, self.modulus,
            ((("h", r), self._lam(lam), CycScalar.one(self.modulus)),),
        )

    def graded_basis(self, w: Window) -> list[TorusElement]:
        """All graded basis elements with Laurent degree sup-norm <= bound."""
        out = []
        for lam in itertools.product(range(-w.bound, w.bound + 1), repeat=self.nu):
            for r in range(self.ell):
                out.append(self.h(r, lam))
            for i in range(self.size):
                for j in range(self.size):
                    if i != j:
                        out.append(self.e(i, j, lam))
        return out

    @cached_property
    def ears(self) -> Ears:
        """The simply-laced system realized by this torus (full isotropic lattice)."""
        return build_ears(EarsSpec.simply_laced(FiniteType("A", self.ell), self.nu))

    def finite_root(self, i: int, j: int):
        fin = tuple(
            Fraction(int(t == i)) - Fraction(int(t == j)) for t in range(self.size)
        )
        assert fin in self.ears.finite.root_index
        return fin

    def root_of_key(self, key: TermKey, lam: IntVector) -> Root:
        if key[0] == "e":
            return Root(self.finite_root(key[1], key[2]), lam)
        return Root(None, lam)


def build_torus(ell: int, nu: int, modulus: int) -> LieTorus:
    return LieTorus(ell, nu, modulus)


def bracket(x: TorusElement, y: TorusElement) -> TorusElement:
    """Lie bracket: matrix commutator with Laurent degrees adding."""
    x._check(y)
    m = x.modulus
    acc: dict[tuple[TermKey, IntVector], CycScalar] = {}

    def put(key: TermKey, lam: IntVector, c: CycScalar) -> None:
        prev = acc.get((key, lam))
        acc[(key, lam)] = c if prev is None else prev + c

    for key1, lam1, c1 in x.terms:
        for key2, lam2, c2 in y.terms:
            lam = tuple(a + b for a, b in zip(lam1, lam2))
            c = c1 * c2
            for key, sign in _basis_bracket(key1, key2):
                put(key, lam, c if sign == 1 else c.scale(sign))
    return _canonical(x.ell, x.nu, x.modulus, acc)


def _basis_bracket(k1: TermKey, k2: TermKey) -> list[tuple[TermKey, int]]:
    if k1[0] == "h" and k2[0] == "h":
        return []
    if k1[0] == "h":
        _, i, j = k2
        r = k1[1]
        c = (r == i) - (r == j) - (r + 1 == i) + (r + 1 == j)
        return [(k2, c)] if c else []
    if k2[0] == "h":
        return [(key, -sign) for key, sign in _basis_bracket(k2, k1)]
    _, i, j = k1
    _, k, l = k2
    out: list[tuple[TermKey, int]] = []
    if j == k and i == l:
        out.extend((("h", r), sign) for r, sign in _diag_to_h(i, j))
    elif j == k:
        out.append((("e", i, l), 1))
    elif l == i:
        out.append((("e", k, j), -1))
    return out


def trace_form(x: TorusElement, y: TorusElement) -> CycScalar:
    """Invariant form: trace of the matrix product, kept at Laurent degree zero."""
    x._check(y)
    total = CycScalar.zero(x.modulus)
    for key1, lam1, c1 in x.terms:
        for key2, lam2, c2 in y.terms:
            if any(a + b for a, b in zip(lam1, lam2)):
                continue
            t = _basis_trace(key1, key2)
            if t:
                total = total + (c1 * c2).scale(t)
    return total


def _basis_trace(k1: TermKey, k2: TermKey) -> int:
    if k1[0] == "e" and k2[0] == "e":
        return int(k1[1] == k2[2] and k1[2] == k2[1])
    if k1[0] == "h" and k2[0] == "h":
        r, s = k1[1], k2[1]
        return 2 * (r == s) - (r == s + 1) - (s == r + 1)
    return 0


@dataclass(frozen=True)
class TorusAutomorphism:
    """Chevalley flip, diagonal scaling from a lattice homomorphism, or a composite."""

    kind: str
    ell: int
    nu: int
    modulus: int
    hom: tuple[int, ...] | None = None
    factors: tuple["TorusAutomorphism", "TorusAutomorphism"] | None = None

    def apply(self, x: TorusElement) -> TorusElement:
        if (x.ell, x.nu, x.modulus) != (self.ell, self.nu, self.modulus):
            raise ValueError("automorphism / element parameter mismatch")
        if self.kind == "composite":
            left, right = self.factors
            return left.apply(right.apply(x))
        acc: dict[tuple[TermKey, IntVector], CycScalar] = {}
        for key, lam, c in x.terms:
            if self.kind == "chevalley":
                new_key = ("e", key[2], key[1]) if key[0] == "e" else key
                new_lam = tuple(-t for t in lam)
                new_c = -c
            else:
                new_key, new_lam = key, lam
                new_c = c * CycScalar.zeta(self.modulus, self._degree_exponent(key, lam))
            prev = acc.get((new_key, new_lam))
            acc[(new_key, new_lam)] = new_c if prev is None else prev + new_c
        return _canonical(x.ell, x.nu, x.modulus, acc)

    def _degree_exponent(self, key: TermKey, lam: IntVector) -> int:
        exp = sum(h * t for h, t in zip(self.hom[self.ell :], lam))
        if key[0] == "e":
            _, i, j = key
            if i < j:
                exp += sum(self.hom[r] for r in range(i, j))
            else:
                exp -= sum(self.hom[r] for r in range(j, i))
        return exp % self.modulus


def chevalley(t: LieTorus) -> TorusAutomorphism:
    """The involution x tensor p(t) -> -transpose(x) tensor p(1/t)."""
    return TorusAutomorphism("chevalley", t.ell, t.nu, t.modulus)


def diagonal_from_hom(t: LieTorus, hom: Sequence[int]) -> TorusAutomorphism:
    """Diagonal automorphism scaling each graded piece by zeta ** hom(degree).

    The exponent vector is indexed by the simple roots (adjacent differences
    e_r - e_(r+1)) followed by the nu lattice generators.
    """
    hom = tuple(int(x) % t.modulus for x in hom)
    if len(hom) != t.ell + t.nu:
        raise ValueError("homomorphism needs rank + nullity exponents")
    return TorusAutomorphism("diagonal", t.ell, t.nu, t.modulus, hom=hom)


def compose(left: TorusAutomorphism, right: TorusAutomorphism) -> TorusAutomorphism:
    if (left.ell, left.nu, left.modulus) != (right.ell, right.nu, right.modulus):
        raise ValueError("cannot compose automorphisms of different tori")
    return TorusAutomorphism(
        "composite", left.ell, left.nu, left.modulus, factors=(left, right)
    )


@dataclass(frozen=True)
class AutomorphismReport:
    window: int
    checks: dict

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def to_json(self) -> dict:
        return {"window": self.window, "ok": self.ok, "checks": self.checks}


def _term_label(x: TorusElement) -> tuple[TermKey, IntVector] | None:
    if len(x.terms) != 1:
        return None
    key, lam, _ = x.terms[0]
    return key, lam


def verify_automorphism(t: LieTorus, a: TorusAutomorphism, w: Window) -> AutomorphismReport:
    """Exhaustive window checks: bracket compatibility, grading behavior, order, form."""
    basis = t.graded_basis(w)
    checks: dict = {}

    failures = []
    images = {id(x): a.apply(x) for x in basis}
    for x in basis:
        ax = images[id(x)]
        for y in basis:
            lhs = a.apply(bracket(x, y))
            rhs = bracket(ax, images[id(y)])
            if lhs != rhs:
                failures.append({"x": repr(x.terms[0][:2]), "y": repr(y.terms[0][:2])})
    checks["bracket_compatibility"] = {
        "passed": not failures,
        "pairs": len(basis) ** 2,
        "failures": failures[:5],
    }

    map_failures = []
    for x in basis:
        key, lam = _term_label(x)
        label = _term_label(images[id(x)])
        if label is None:
            map_failures.append({"x": repr((key, lam)), "reason": "image not graded"})
            continue
        if a.kind == "chevalley":
            want = (("e", key[2], key[1]) if key[0] == "e" else key,
                    tuple(-v for v in lam))
        elif a.kind == "diagonal":
            want = (key, lam)
        else:
            want = label  # composite: any single graded target is acceptable
        if label != want:
            map_failures.append({"x": repr((key, lam)), "image": repr(label)})
    checks["root_space_mapping"] = {"passed": not map_failures, "failures": map_failures[:5]}

    order_failures = []
    if a.kind in ("chevalley", "diagonal"):
        power = 2 if a.kind == "chevalley" else t.modulus
        for x in basis:
            y = x
            for _ in range(power):
                y = a.apply(y)
            if y != x:
                order_failures.append({"x": repr(_term_label(x))})
        checks["finite_order"] = {
            "passed": not order_failures,
            "power": power,
            "failures": order_failures[:5],
        }

    form_failures = []
    by_degree: dict[IntVector, list[TorusElement]] = {}
    for x in basis:
        _, lam = _term_label(x)
        by_degree.setdefault(lam, []).append(x)
    for x in basis:
        _, lam = _term_label(x)
        for y in by_degree.get(tuple(-v for v in lam), []):
            if trace_form(images[id(x)], images[id(y)]) != trace_form(x, y):
                form_failures.append({"x": repr(_term_label(x)), "y": repr(_term_label(y))})
    checks["form_preservation"] = {"passed": not form_failures, "failures": form_failures[:5]}

    return AutomorphismReport(w.bound, checks)


def jacobi_identity_report(t: LieTorus, w: Window) -> dict:
    """Check the Jacobi identity on all graded basis triples inside the window."""
    basis = t.graded_basis(w)
    failures = []
    count = 0
    for x in basis:
        for y in basis:
            xy = bracket(x, y)
            for z in basis:
                count += 1
                total = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(
                    z, xy
                )
                if not total.is_zero:
                    failures.append(
                        (repr(_term_label(x)), repr(_term_label(y)), repr(_term_label(z)))
                    )
    return {"triples": count, "failures": failures[:5], "ok": not failures}


def extract_core_character(t: LieTorus, a: TorusAutomorphism, w: Window):
    """Read the character of a Cartan automorphism off its root-space action.

    Requires the automorphism to fix the degree-zero Cartan part pointwise and
    to act by a root of unity on every window root space.  The isotropic
    values are produced from the shift rule value(sigma) =
    value(alpha+sigma) * value(-alpha) and checked to be independent of alpha
    and to match the actual action on the isotropic spaces; any disagreement
    raises instead of being patched over.

    Returns the table character together with a consistency report.
    """
    from .characters import Character, TableRule, verify_core_character

    m = t.modulus
    e_sys = t.ears
    for r in range(t.ell):
        x = t.h(r)
        if a.apply(x) != x:
            raise ValueError("automorphism does not fix the Cartan part pointwise")

    box = list(itertools.product(range(-w.bound, w.bound + 1), repeat=t.nu))
    eta: dict[Root, int] = {}
    for lam in box:
        for i in range(t.size):
            for j in range(t.size):
                if i == j:
                    continue
                x = t.e(i, j, lam)
                exp = _scalar_action_exponent(x, a.apply(x), m)
                if exp is None:
                    raise ValueError(
                        f"automorphism is not a unity scalar on root space e[{i},{j}] "
                        f"at degree {lam}"
                    )
                eta[Root(t.finite_root(i, j), lam)] = exp

    eta_iso: dict[IntVector, int] = {}
    for sigma in box:
        candidates = set()
        for alpha, exp in eta.items():
            shifted = tuple(x + s for x, s in zip(alpha.iso, sigma))
            partner = Root(alpha.finite, shifted)
            if partner in eta:
                neg = Root(tuple(-c for c in alpha.finite), tuple(-x for x in alpha.iso))
                candidates.add((eta[partner] + eta[neg]) % m)
        if len(candidates) != 1:
            raise ValueError(
                f"isotropic value at {sigma} is not independent of the reference "
                f"root: candidates {sorted(candidates)}"
            )
        value = candidates.pop()
        for r in range(t.ell):
            x = t.h(r, sigma)
            exp = _scalar_action_exponent(x, a.apply(x), m)
            if exp is None or exp != value:
                raise ValueError(
                    f"action on the isotropic space at {sigma} disagrees with the "
                    f"shift rule value {value}"
                )
        eta_iso[sigma] = value

    entries = [(root, exp) for root, exp in eta.items()]
    for sigma in box:
        entries.append((Root(None, sigma), eta_iso[sigma]))
    entries.sort(key=lambda pair: e_sys.sort_key(pair[0]))
    char = Character(e_sys, m, TableRule(w.bound, tuple(entries)))

    inverse_ok = all(
        (eta[Root(tuple(-c for c in r.finite), tuple(-x for x in r.iso))] + exp) % m == 0
        for r, exp in eta.items()
    )
    core_report = verify_core_character(char, w)
    report = {
        "fixes_cartan": True,
        "diagonal_on_root_spaces": True,
        "inverse_rule": inverse_ok,
        "core_multiplicativity": core_report.ok,
        "pairs_checked": core_report.pairs_checked,
    }
    return char, report


def _scalar_action_exponent(x: TorusElement, y: TorusElement, m: int) -> int | None:
    for k in range(m):
        if y == x.scale(CycScalar.zeta(m, k)):
            return k
    return None
