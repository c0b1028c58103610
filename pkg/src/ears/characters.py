"""Characters on extended affine root systems.

A character assigns roots of unity to roots, multiplicatively on sums that
stay inside the system.  Values are held as exponents modulo a fixed order m,
so every comparison is exact integer arithmetic.  Three rule kinds exist:

* a root-lattice homomorphism determined by values on a lattice basis,
* the rank-one coset rule (values +-1 read off the coset of 2L),
* a finite table over a window.

The module also decides extendability of a windowed character to a lattice
homomorphism, producing either the extending homomorphism or an integer
relation among window roots that certifies the obstruction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .lattice import IntVector, Semilattice, det, matvec, snf, solve_mod
from .system import (
    Ears,
    Root,
    RootClass,
    Window,
    enumerate_roots,
    invariants,
    root_from_json,
    root_to_json,
)
from .weyl import check_reflectable, decompose_all


@dataclass(frozen=True)
class UnityValue:
    """The root of unity zeta_m ** exponent, stored by exponent."""

    exponent: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if not 0 <= self.exponent < self.modulus:
            raise ValueError("exponent must be reduced mod the modulus")

    def inverse(self) -> "UnityValue":
        return UnityValue((-self.exponent) % self.modulus, self.modulus)

    def __mul__(self, other: "UnityValue") -> "UnityValue":
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")
        return UnityValue((self.exponent + other.exponent) % self.modulus, self.modulus)


@dataclass(frozen=True)
class LatticeHomRule:
    """Homomorphism on the root lattice: exponents on a chosen basis.

    Basis vectors are written in root-lattice coordinates (simple roots first,
    then the isotropic lattice basis) and must form a unimodular matrix.
    """

    basis: tuple[IntVector, ...]
    values: tuple[int, ...]

    kind = "hom"


@dataclass(frozen=True)
class A1CosetRule:
    """Rank-one rule: +1 on roots over 2L, -1 over the nontrivial cosets of S.

    Isotropic values: +1 on 2L and on (S+S) minus S, -1 on S minus 2L.  Only
    order 2 is meaningful here, and the rule is only a character when sums of
    3 to 6 distinct nonzero representatives avoid 2L.
    """

    kind = "a1coset"


@dataclass(frozen=True)
class TableRule:
    """Explicit exponent table over a window of roots."""

    window: int
    entries: tuple[tuple[Root, int], ...]

    kind = "table"

    @cached_property
    def lookup(self) -> dict[Root, int]:
        return dict(self.entries)


def sum_free_violation(
    s: Semilattice, lo: int = 3, hi: int = 6
) -> tuple[int, ...] | None:
    """First index set (sizes lo..hi, distinct nonzero reps) whose sum falls in 2L."""
    keys = [s.key(r) for r in s.reps]
    for k in range(lo, min(hi, s.index) + 1):
        for combo in itertools.combinations(range(1, s.coset_count), k):
            acc = [0] * s.dim
            for i in combo:
                acc = [(a + b) % 2 for a, b in zip(acc, keys[i])]
            if not any(acc):
                return combo
    return None


def _inverse_unimodular(m: Sequence[Sequence[int]]) -> tuple[IntVector, ...]:
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == k)) for k in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        a[col] = [x / a[col][col] for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    inv = tuple(tuple(a[i][n + j] for j in range(n)) for i in range(n))
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


@dataclass(frozen=True)
class Character:
    """A modulus-m character rule attached to a specific root system."""

    ears: Ears
    modulus: int
    rule: LatticeHomRule | A1CosetRule | TableRule

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        n = self.ears.rank + self.ears.nullity
        if isinstance(self.rule, LatticeHomRule):
            if len(self.rule.basis) != n or any(len(v) != n for v in self.rule.basis):
                raise ValueError("homomorphism basis must be square of rank + nullity")
            if len(self.rule.values) != n:
                raise ValueError("one exponent per basis vector required")
            cols = tuple(
                tuple(self.rule.basis[j][i] for j in range(n)) for i in range(n)
            )
            if abs(det(cols)) != 1:
                raise ValueError("homomorphism basis must be unimodular")
        elif isinstance(self.rule, A1CosetRule):
            if self.ears.spec.kind != "rank_one":
                raise ValueError("coset rule requires a rank-one system")
            if self.modulus != 2:
                raise ValueError("coset rule is an order-2 character")
            violation = sum_free_violation(self.ears.S)
            if violation is not None:
                raise ValueError(
                    f"coset rule is not a character: representatives {violation} "
                    "sum into 2L"
                )

    @cached_property
    def _std_values(self) -> IntVector:
        """Exponents of the homomorphism on the standard root-lattice basis."""
        rule = self.rule
        n = len(rule.values)
        mat = tuple(tuple(rule.basis[j][i] for j in range(n)) for i in range(n))
        inv = _inverse_unimodular(mat)
        return tuple(
            sum(rule.values[i] * inv[i][j] for i in range(n)) % self.modulus
            for j in range(n)
        )

    def eval(self, r: Root) -> UnityValue:
        """Value on a root, as an exponent of the fixed primitive m-th root of unity."""
        e = self.ears
        cls = e.root_class(r)
        if cls is RootClass.NOT_A_ROOT:
            raise ValueError(f"{r} does not classify as a root")
        if isinstance(self.rule, LatticeHomRule):
            coords = e.root_coords(r)
            exp = sum(c * v for c, v in zip(coords, self._std_values)) % self.modulus
            return UnityValue(exp, self.modulus)
        if isinstance(self.rule, A1CosetRule):
            i = e.S.coset_class(r.iso)
            if r.finite is not None:
                return UnityValue(0 if i == 0 else 1, 2)
            return UnityValue(1 if (i is not None and i > 0) else 0, 2)
        if max((abs(x) for x in e.iso_coords(r.iso)), default=0) > self.rule.window:
            raise ValueError("root lies outside the table window")
        try:
            return UnityValue(self.rule.lookup[r] % self.modulus, self.modulus)
        except KeyError:
            raise ValueError(f"table has no entry for root {r}") from None

    def to_json(self) -> dict:
        rule: dict
        if isinstance(self.rule, LatticeHomRule):
            rule = {
                "kind": "hom",
                "basis": [list(v) for v in self.rule.basis],
                "values": list(self.rule.values),
            }
        elif isinstance(self.rule, A1CosetRule):
            rule = {"kind": "a1coset"}
        else:
            rule = {
                "kind": "table",
                "window": self.rule.window,
                "entries": [
                    {"root": root_to_json(self.ears, r), "exponent": x}
                    for r, x in self.rule.entries
                ],
            }
        return {"modulus": self.modulus, "rule": rule}


def character_from_json(e: Ears, obj: dict) -> Character:
    m = obj["modulus"]
    rule_obj = obj["rule"]
    kind = rule_obj["kind"]
    if kind == "hom":
        rule: LatticeHomRule | A1CosetRule | TableRule = LatticeHomRule(
            tuple(tuple(v) for v in rule_obj["basis"]),
            tuple(rule_obj["values"]),
        )
    elif kind == "a1coset":
        rule = A1CosetRule()
    elif kind == "table":
        rule = TableRule(
            rule_obj["window"],
            tuple(
                (root_from_json(e, ent["root"]), ent["exponent"])
                for ent in rule_obj["entries"]
            ),
        )
    else:
        raise ValueError(f"unknown character rule kind {kind!r}")
    return Character(e, m, rule)


def standard_hom_character(e: Ears, values: Sequence[int], modulus: int) -> Character:
    """Homomorphism character from exponents on the standard root-lattice basis."""
    n = e.rank + e.nullity
    if len(values) != n:
        raise ValueError("need one exponent per standard basis vector")
    basis = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return Character(e, modulus, LatticeHomRule(basis, tuple(v % modulus for v in values)))


@dataclass(frozen=True)
class CharacterCheckReport:
    """Multiplicativity check over window pairs, with explicit failure witnesses."""

    kind: str
    window: int
    pairs_checked: int
    pairs_skipped: int
    additivity_failures: tuple[dict, ...]
    inverse_failures: tuple[dict, ...]

    @property
    def ok(self) -> bool:
        return not self.additivity_failures and not self.inverse_failures

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "window": self.window,
            "ok": self.ok,
            "pairs_checked": self.pairs_checked,
            "pairs_skipped": self.pairs_skipped,
            "additivity_failures": list(self.additivity_failures[:5]),
            "inverse_failures": list(self.inverse_failures[:5]),
        }


def _verify(c: Character, w: Window, core_only: bool) -> CharacterCheckReport:
    e = c.ears
    m = c.modulus
    roots = enumerate_roots(e, w)
    exps = {r: c.eval(r).exponent for r in roots}
    firsts = [r for r in roots if r.finite is not None] if core_only else roots
    table_bound = c.rule.window if isinstance(c.rule, TableRule) else None
    checked = skipped = 0
    add_failures: list[dict] = []
    for alpha in firsts:
        ea = exps[alpha]
        for beta in roots:
            total = e.add(alpha, beta)
            if not e.is_root(total):
                continue
            if total in exps:
                et = exps[total]
            elif table_bound is not None:
                skipped += 1
                continue
            else:
                et = c.eval(total).exponent
            checked += 1
            if (ea + exps[beta] - et) % m:
                add_failures.append(
                    {
                        "alpha": root_to_json(e, alpha),
                        "beta": root_to_json(e, beta),
                        "lhs": (ea + exps[beta]) % m,
                        "rhs": et,
                    }
                )
    inv_failures = []
    for r in roots:
        if (exps[r] + exps[e.neg(r)]) % m:
            inv_failures.append({"root": root_to_json(e, r), "exponent": exps[r]})
    return CharacterCheckReport(
        "core" if core_only else "full",
        w.bound,
        checked,
        skipped,
        tuple(add_failures),
        tuple(inv_failures),
    )


def verify_core_character(c: Character, w: Window) -> CharacterCheckReport:
    """Multiplicativity over pairs whose first member is non-isotropic."""
    return _verify(c, w, core_only=True)


def verify_character(c: Character, w: Window) -> CharacterCheckReport:
    """Multiplicativity over all window pairs, isotropic ones included."""
    return _verify(c, w, core_only=False)


def verify_square_shift_identity(c: Character, w: Window) -> dict:
    """Check value(alpha)^2 = value(alpha+sigma) * value(alpha-sigma) on the window."""
    e = c.ears
    m = c.modulus
    roots = enumerate_roots(e, w)
    iso_roots = [r for r in roots if r.finite is None]
    noniso = [r for r in roots if r.finite is not None]
    table_bound = c.rule.window if isinstance(c.rule, TableRule) else None
    checked = 0
    failures = []
    for sigma in iso_roots:
        for alpha in noniso:
            plus = e.add(alpha, sigma)
            minus = e.add(alpha, e.neg(sigma))
            if not (e.is_root(plus) and e.is_root(minus)):
                continue
            if table_bound is not None:
                cap = max(
                    max((abs(x) for x in e.iso_coords(r.iso)), default=0)
                    for r in (plus, minus)
                )
                if cap > table_bound:
                    continue
            lhs = 2 * c.eval(alpha).exponent
            rhs = c.eval(plus).exponent + c.eval(minus).exponent
            checked += 1
            if (lhs - rhs) % m:
                failures.append(
                    {
                        "alpha": root_to_json(e, alpha),
                        "sigma": root_to_json(e, sigma),
                    }
                )
    return {"checked": checked, "failures": failures[:5], "ok": not failures}


def build_a1_counterexample(
    nullity: int = 6, taus: Sequence[Sequence[int]] | None = None
) -> Character:
    """The rank-one character that does not extend to the root lattice.

    Defaults take the standard basis vectors as nonzero representatives plus
    the sum of the first six, which forces any lattice extension to assign the
    last representative the value +1 while the rule assigns -1.
    """
    from .system import EarsSpec, build_ears
    from .lattice import IntLattice

    if taus is None:
        if nullity < 6:
            raise ValueError("default representatives need nullity >= 6")
        taus = [
            tuple(int(i == j) for i in range(nullity)) for j in range(nullity)
        ]
        taus.append(tuple(1 if i < 6 else 0 for i in range(nullity)))
    reps = (tuple(0 for _ in range(nullity)),) + tuple(tuple(t) for t in taus)
    s = Semilattice(IntLattice.standard(nullity), reps)
    violation = sum_free_violation(s)
    if violation is not None:
        raise ValueError(
            f"representatives {violation} sum into 2L; the coset rule would not "
            "be a character"
        )
    e = build_ears(EarsSpec.rank_one(nullity, s))
    return Character(e, 2, A1CosetRule())


@dataclass(frozen=True)
class ExtendabilityResult:
    """SAT with an extending homomorphism, or UNSAT with a checkable relation."""

    sat: bool
    hom: Character | None
    witness: tuple[tuple[Root, int], ...] | None
    modulus: int

    def witness_json(self, e: Ears) -> list[dict]:
        return [
            {"root": root_to_json(e, r), "coeff": c} for r, c in (self.witness or ())
        ]


def recheck_witness(
    c: Character, witness: Sequence[tuple[Root, int]]
) -> tuple[bool, dict]:
    """Independent re-check: coefficients cancel the roots exactly but not the exponents."""
    e = c.ears
    n = e.rank + e.nullity
    coord_sum = [0] * n
    exp_sum = 0
    for r, coeff in witness:
        coords = e.root_coords(r)
        coord_sum = [a + coeff * b for a, b in zip(coord_sum, coords)]
        exp_sum += coeff * c.eval(r).exponent
    ok = not any(coord_sum) and exp_sum % c.modulus != 0
    return ok, {"coord_sum": coord_sum, "exponent_sum": exp_sum % c.modulus}


def extendability(
    c: Character, w: Window, basis: Sequence[IntVector] | None = None
) -> ExtendabilityResult:
    """Decide whether the character extends to a root-lattice homomorphism.

    Every window root contributes the linear constraint coords . h = exponent
    over Z/m; a solution is re-verified against the character on the window,
    and an UNSAT certificate is upgraded to an exact integer relation among
    window roots whose value sum is nonzero mod m.
    """
    e = c.ears
    m = c.modulus
    report = verify_character(c, w)
    if not report.ok:
        raise ValueError("input fails character verification on the window")
    n = e.rank + e.nullity
    roots = enumerate_roots(e, w)
    coord_rows = [e.root_coords(r) for r in roots]
    if basis is not None:
        cols = tuple(tuple(basis[j][i] for j in range(n)) for i in range(n))
        if abs(det(cols)) != 1:
            raise ValueError("supplied lattice basis is not unimodular")
        inv = _inverse_unimodular(cols)
        coord_rows = [matvec(inv, row) for row in coord_rows]
    exps = [c.eval(r).exponent for r in roots]
    res = solve_mod(coord_rows, exps, m)
    if res.sat:
        values = res.solution
        if basis is None:
            basis = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        hom = Character(e, m, LatticeHomRule(tuple(map(tuple, basis)), values))
        for r in roots:
            if hom.eval(r).exponent != c.eval(r).exponent:
                raise AssertionError("solver produced a non-extending homomorphism")
        return ExtendabilityResult(True, hom, None, m)
    cert = res.certificate
    ra = [sum(cert[i] * coord_rows[i][j] for i in range(len(roots))) for j in range(n)]
    assert all(x % m == 0 for x in ra)
    coeffs = list(cert)
    needed = [x // m for x in ra]
    if any(needed):
        solver = _IntegerComboSolver(coord_rows)
        for j, q in enumerate(needed):
            if q == 0:
                continue
            z = solver.express_unit(j)
            if z is None:
                raise ValueError(
                    "window roots do not span the root lattice; enlarge the window"
                )
            coeffs = [a - m * q * b for a, b in zip(coeffs, z)]
    final = [sum(coeffs[i] * coord_rows[i][j] for i in range(len(roots))) for j in range(n)]
    assert not any(final), "witness upgrade failed to cancel coordinates"
    assert sum(co * ex for co, ex in zip(coeffs, exps)) % m != 0
    witness = tuple((r, co) for r, co in zip(roots, coeffs) if co)
    return ExtendabilityResult(False, None, witness, m)


class _IntegerComboSolver:
    """Expresses standard basis vectors as integer combinations of given rows."""

    def __init__(self, rows: Sequence[IntVector]):
        self.rows = rows
        n = len(rows[0]) if rows else 0
        mat = tuple(tuple(rows[i][j] for i in range(len(rows))) for j in range(n))
        self.u, self.d, self.v = snf(mat)
        self.n = n
        self.k = len(rows)

    def express_unit(self, j: int) -> list[int] | None:
        target = [int(i == j) for i in range(self.n)]
        c = matvec(self.u, target)
        y = [0] * self.k
        for i in range(self.n):
            di = self.d[i][i] if i < min(self.n, self.k) else 0
            if di == 0:
                if c[i]:
                    return None
                continue
            if c[i] % di:
                return None
            y[i] = c[i] // di
        return list(matvec(self.v, y))


def extend_ind_zero(c: Character, base: Sequence[Root], w: Window) -> Character:
    """Constructive extension for index-zero systems from values on a reflectable basis.

    The base must be a unimodular basis of the root lattice made of
    non-isotropic roots whose reflections cover the window.  Agreement with
    the input character is certified by telescoping along prefix
    decompositions, which forces the extension value step by step.
    """
    e = c.ears
    m = c.modulus
    inv = invariants(e)
    if inv.ind_R != 0:
        raise ValueError(f"system has index {inv.ind_R}; constructive extension needs 0")
    n = e.rank + e.nullity
    if len(base) != n:
        raise ValueError("base must have rank + nullity elements")
    coords = [e.root_coords(b) for b in base]
    cols = tuple(tuple(coords[j][i] for j in range(n)) for i in range(n))
    if abs(det(cols)) != 1:
        raise ValueError("base is not a basis of the root lattice")
    cover = check_reflectable(e, base, w)
    if not cover.covered:
        raise ValueError("base reflections do not cover the window")
    values = tuple(c.eval(b).exponent for b in base)
    hom = Character(e, m, LatticeHomRule(tuple(map(tuple, coords)), values))
    decs = decompose_all(e, base, w)
    for r in enumerate_roots(e, w):
        if r.finite is not None:
            dec = decs.get(r)
            if dec is None:
                raise ValueError(f"cannot decompose {r} inside the window")
            acc = 0
            prefix = e.zero_root
            for sign, b in dec.terms:
                step = e.scale_root(sign, b)
                prefix = e.add(prefix, step)
                acc = (acc + c.eval(step).exponent) % m
                if c.eval(prefix).exponent != acc:
                    raise ValueError(
                        f"telescoping failed at prefix {prefix}: the character is "
                        "not multiplicative along the decomposition"
                    )
        if hom.eval(r).exponent != c.eval(r).exponent:
            raise ValueError(
                f"extension disagrees with the character at {r}; the data is "
                "not index-zero consistent or the window is too small"
            )
    return hom
