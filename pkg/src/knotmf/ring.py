"""Exact multivariate Laurent polynomial arithmetic over Q.

Everything downstream (Hecke traces, Koszul rows, residue sums) is built on
the two classes here: a variable registry carrying grading data, and a sparse
Laurent polynomial with big-rational coefficients.  No floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

QQ = Fraction

# A character weight is one integer vector per torus slot (e.g. left/right
# Borel factors for n=2).  Stored as nested tuples so registries are hashable.
CharWeight = tuple[tuple[int, ...], ...]


def _add_chars(c1: CharWeight, c2: CharWeight) -> CharWeight:
    return tuple(tuple(a + b for a, b in zip(s1, s2)) for s1, s2 in zip(c1, c2))


def _scale_char(c: CharWeight, k: int) -> CharWeight:
    return tuple(tuple(k * a for a in s) for s in c)


def _zero_char(shape: CharWeight) -> CharWeight:
    return tuple(tuple(0 for _ in s) for s in shape)


@dataclass(frozen=True)
class VarRegistry:
    """Ordered list of variables with (q, t, character) grading weights.

    ``char_lines`` lists character directions that act trivially on the chart
    (e.g. the weight of det(g) on a det=1 chart); weights of polynomials are
    only well-defined modulo these lines and ``weight_of`` canonicalizes
    accordingly.
    """

    names: tuple[str, ...]
    q_weights: tuple[int, ...]
    t_weights: tuple[int, ...]
    char_weights: tuple[CharWeight, ...]
    char_lines: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        if not (len(self.names) == len(self.q_weights) == len(self.t_weights)
                == len(self.char_weights)):
            raise ValueError("weight lists must match variable list")

    @staticmethod
    def make(specs: Sequence[tuple], char_slots: int = 0,
             char_lines: Sequence[Sequence[int]] = ()) -> "VarRegistry":
        """Build a registry from (name, q, t[, char]) tuples.

        ``char`` is a tuple of per-slot integer vectors; omitted entries get
        zero character weight.
        """
        names, qs, ts, chars = [], [], [], []
        for spec in specs:
            name, qw, tw = spec[0], spec[1], spec[2]
            if len(spec) > 3:
                ch = tuple(tuple(v) for v in spec[3])
            else:
                ch = tuple((0, 0) for _ in range(char_slots))
            names.append(name)
            qs.append(qw)
            ts.append(tw)
            chars.append(ch)
        return VarRegistry(tuple(names), tuple(qs), tuple(ts), tuple(chars),
                           tuple(tuple(l) for l in char_lines))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    @property
    def nvars(self) -> int:
        return len(self.names)

    def char_flat(self, i: int) -> tuple[int, ...]:
        return tuple(v for slot in self.char_weights[i] for v in slot)


class LaurentPoly:
    """Sparse Laurent polynomial: exponent vector -> nonzero Fraction."""

    __slots__ = ("registry", "terms")

    def __init__(self, registry: VarRegistry,
                 terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.registry = registry
        cleaned = {}
        if terms:
            for e, c in terms.items():
                c = QQ(c)
                if c != 0:
                    cleaned[tuple(e)] = c
        self.terms = cleaned

    @staticmethod
    def _raw(registry: VarRegistry, terms: dict) -> "LaurentPoly":
        """Internal constructor: terms are already clean Fraction dicts."""
        p = LaurentPoly.__new__(LaurentPoly)
        p.registry = registry
        p.terms = terms
        return p

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(reg: VarRegistry) -> "LaurentPoly":
        return LaurentPoly(reg)

    @staticmethod
    def const(reg: VarRegistry, c) -> "LaurentPoly":
        c = QQ(c)
        if c == 0:
            return LaurentPoly(reg)
        return LaurentPoly(reg, {(0,) * reg.nvars: c})

    @staticmethod
    def var(reg: VarRegistry, name: str, power: int = 1) -> "LaurentPoly":
        e = [0] * reg.nvars
        e[reg.index(name)] = power
        return LaurentPoly(reg, {tuple(e): QQ(1)})

    @staticmethod
    def monomial(reg: VarRegistry, exps: Mapping[str, int], coeff=1) -> "LaurentPoly":
        e = [0] * reg.nvars
        for name, p in exps.items():
            e[reg.index(name)] = p
        return LaurentPoly(reg, {tuple(e): QQ(coeff)})

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        z = (0,) * self.registry.nvars
        return all(e == z for e in self.terms)

    def constant_value(self) -> Fraction:
        z = (0,) * self.registry.nvars
        for e, c in self.terms.items():
            if e != z:
                raise ValueError("not a constant")
        return self.terms.get(z, QQ(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial_parts(self) -> tuple[tuple[int, ...], Fraction]:
        if len(self.terms) != 1:
            raise ValueError("not a monomial")
        ((e, c),) = self.terms.items()
        return e, c

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, p in enumerate(e):
                if p:
                    used.add(self.registry.names[i])
        return used

    def degree_in(self, name: str) -> tuple[int, int]:
        """(min, max) exponent of the variable; (0, 0) if absent."""
        i = self.registry.index(name)
        exps = [e[i] for e in self.terms]
        if not exps:
            return (0, 0)
        return (min(exps), max(exps))

    def coefficients_in(self, name: str) -> dict[int, "LaurentPoly"]:
        """Split into coefficient polynomials of powers of one variable."""
        i = self.registry.index(name)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            rest = list(e)
            rest[i] = 0
            out.setdefault(k, {})[tuple(rest)] = c
        return {k: LaurentPoly(self.registry, d) for k, d in out.items()}

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.registry != other.registry:
            raise ValueError("registry mismatch")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.registry, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        return LaurentPoly._raw(self.registry, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.registry,
                                {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.registry, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = QQ(other)
            if c == 0:
                return LaurentPoly(self.registry)
            return LaurentPoly._raw(self.registry,
                                    {e: c * v for e, v in self.terms.items()})
        self._check(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e)
                s = c1 * c2 if s is None else s + c1 * c2
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return LaurentPoly._raw(self.registry, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            e, c = self.monomial_parts()
            inv = LaurentPoly(self.registry,
                              {tuple(-x for x in e): QQ(1) / c})
            return inv ** (-n)
        result = LaurentPoly.const(self.registry, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.registry, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.registry == other.registry and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- division and substitution ------------------------------------

    def exact_div(self, divisor: "LaurentPoly",
                  effort: int | None = None) -> "LaurentPoly | None":
        """Exact quotient self/divisor, or None if it does not divide.

        Works for Laurent polynomials by clearing monomial units first; the
        division loop is plain lead-term reduction by the single divisor.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly(self.registry)
        if divisor.is_monomial():
            e0, c0 = divisor.monomial_parts()
            return LaurentPoly._raw(self.registry, {
                tuple(a - b for a, b in zip(e, e0)): c / c0
                for e, c in self.terms.items()})

        # Necessary condition: the exponent span of the dividend dominates
        # the divisor's span in every variable (spans add under products).
        spans = 1
        for i in range(self.registry.nvars):
            exps_n = [e[i] for e in self.terms]
            exps_d = [e[i] for e in divisor.terms]
            span_n = max(exps_n) - min(exps_n)
            span_d = max(exps_d) - min(exps_d)
            if span_n < span_d:
                return None
            if span_d or span_n:
                spans *= span_n - span_d + 1

        le = max(divisor.terms)  # lex leads are multiplicative
        lc = divisor.terms[le]
        rest = [(e, c) for e, c in divisor.terms.items() if e != le]
        remainder = dict(self.terms)
        q_terms: dict[tuple[int, ...], Fraction] = {}
        # In the Laurent setting a failed division descends forever, so the
        # loop is bounded: exact quotients of the sizes seen here fit well
        # within it, anything longer reports "does not divide".
        if effort is None:
            effort = 8 * len(self.terms) + 512
        effort = min(effort, 4 * spans + 64)
        for _ in range(effort):
            if not remainder:
                return LaurentPoly._raw(self.registry, q_terms)
            re = max(remainder)
            qe = tuple(a - b for a, b in zip(re, le))
            qc = remainder.pop(re) / lc
            q_terms[qe] = q_terms.get(qe, QQ(0)) + qc
            for e, c in rest:
                k = tuple(a + b for a, b in zip(qe, e))
                s = remainder.get(k)
                s = -qc * c if s is None else s - qc * c
                if s == 0:
                    remainder.pop(k, None)
                else:
                    remainder[k] = s
        return None

    def divides(self, other: "LaurentPoly") -> bool:
        return other.exact_div(self) is not None

    def substitute(self, images: Mapping[str, "LaurentPoly"],
                   target: VarRegistry | None = None) -> "LaurentPoly":
        """Ring-homomorphism image; unspecified variables map to themselves.

        A variable occurring with negative exponent must have a monomial
        image (so the inverse exists).
        """
        reg = target if target is not None else self.registry
        imgs: dict[int, LaurentPoly] = {}
        for name, p in images.items():
            i = self.registry.index(name)
            if not isinstance(p, LaurentPoly):
                p = LaurentPoly.const(reg, p)
            if p.registry != reg:
                raise ValueError("image registry mismatch")
            imgs[i] = p
        out = LaurentPoly(reg)
        for e, c in self.terms.items():
            term = LaurentPoly.const(reg, c)
            for i, p in enumerate(e):
                if p == 0:
                    continue
                if i in imgs:
                    img = imgs[i]
                    if p < 0 and not img.is_monomial():
                        raise ValueError(
                            f"non-invertible image for Laurent variable "
                            f"{self.registry.names[i]!r}")
                    term = term * (img ** p)
                else:
                    name = self.registry.names[i]
                    term = term * LaurentPoly.var(reg, name, p)
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, Fraction]) -> "LaurentPoly":
        return self.substitute({k: LaurentPoly.const(self.registry, v)
                                for k, v in values.items()})

    # -- grading -------------------------------------------------------

    def weight_of(self) -> tuple[int, int, CharWeight] | None:
        """Common (q, t, char) weight of all monomials, or None.

        Character weights are compared modulo the registry's trivial lines.
        """
        reg = self.registry
        seen = None
        for e in self.terms:
            qw = sum(p * w for p, w in zip(e, reg.q_weights))
            tw = sum(p * w for p, w in zip(e, reg.t_weights))
            ch = None
            if reg.char_weights and reg.char_weights[0]:
                acc = _zero_char(reg.char_weights[0])
                for i, p in enumerate(e):
                    if p:
                        acc = _add_chars(acc, _scale_char(reg.char_weights[i], p))
                ch = _canonical_char(acc, reg.char_lines)
            w = (qw, tw, ch)
            if seen is None:
                seen = w
            elif seen != w:
                return None
        if seen is None:
            # zero polynomial: weight of zero is anything; report trivial
            shape = reg.char_weights[0] if reg.char_weights else ()
            return (0, 0, _canonical_char(_zero_char(shape), reg.char_lines)
                    if shape else None)
        return seen

    # -- output ---------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, p in zip(self.registry.names, e):
                if p == 1:
                    factors.append(name)
                elif p != 0:
                    factors.append(f"{name}^{p}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        out = " + ".join(parts).replace("+ -", "- ")
        return out

    __repr__ = __str__

    def to_json(self) -> list[dict]:
        out = []
        for e, c in self.sorted_terms():
            exps = {n: p for n, p in zip(self.registry.names, e) if p}
            out.append({"exponents": exps,
                        "coeff": f"{c.numerator}/{c.denominator}"})
        return out

    @staticmethod
    def from_json(reg: VarRegistry, data: Iterable[dict]) -> "LaurentPoly":
        p = LaurentPoly(reg)
        for item in data:
            num, den = item["coeff"].split("/")
            p = p + LaurentPoly.monomial(reg, item["exponents"],
                                         QQ(int(num), int(den)))
        return p


def _canonical_char(ch: CharWeight, lines: tuple[tuple[int, ...], ...]) -> CharWeight:
    """Reduce a character weight modulo integer multiples of trivial lines.

    Greedy elimination: for each line pick its first nonzero coordinate and
    cancel that coordinate of ch exactly when divisible.  The lines used in
    this package are det-weight lines with leading entry +-1, so the
    representative is unique.
    """
    if not lines:
        return ch
    flat = [v for slot in ch for v in slot]
    sizes = [len(slot) for slot in ch]
    for line in lines:
        pivot = next((i for i, v in enumerate(line) if v != 0), None)
        if pivot is None:
            continue
        k, rem = divmod(flat[pivot], line[pivot])
        if rem == 0 and k != 0:
            flat = [a - k * b for a, b in zip(flat, line)]
    out, pos = [], 0
    for s in sizes:
        out.append(tuple(flat[pos:pos + s]))
        pos += s
    return tuple(out)


class QuotientReducer:
    """Normal form modulo relations lead -> rest with monomial leads.

    Each relation is (lead_monomial_exponents, rest_poly) meaning
    lead = rest in the quotient ring.  Leads must involve pairwise disjoint
    variable sets so rewriting is confluent (each relation is a single
    binomial-style rule; the det=1 charts used here satisfy this).
    """

    def __init__(self, registry: VarRegistry,
                 relations: Sequence[tuple[Mapping[str, int], LaurentPoly]]):
        self.registry = registry
        self.rules = []
        seen_vars: set[int] = set()
        for lead, rest in relations:
            e = [0] * registry.nvars
            for name, p in lead.items():
                if p <= 0:
                    raise ValueError("lead exponents must be positive")
                e[registry.index(name)] = p
            vs = {i for i, p in enumerate(e) if p}
            if vs & seen_vars:
                raise ValueError("relation leads must use disjoint variables")
            seen_vars |= vs
            if rest.registry != registry:
                raise ValueError("registry mismatch")
            self.rules.append((tuple(e), rest))

    @staticmethod
    def det_one(registry: VarRegistry, prefix: str = "a") -> "QuotientReducer":
        """The SL2 chart rule: a11*a22 -> a12*a21 + 1."""
        rest = (LaurentPoly.var(registry, f"{prefix}12")
                * LaurentPoly.var(registry, f"{prefix}21")
                + LaurentPoly.const(registry, 1))
        return QuotientReducer(registry,
                               [({f"{prefix}11": 1, f"{prefix}22": 1}, rest)])

    @staticmethod
    def merge(*reducers: "QuotientReducer") -> "QuotientReducer":
        reg = reducers[0].registry
        merged = QuotientReducer(reg, [])
        for r in reducers:
            if r.registry != reg:
                raise ValueError("registry mismatch")
            merged.rules.extend(r.rules)
        return merged

    def normal_form(self, p: LaurentPoly) -> LaurentPoly:
        if p.registry != self.registry:
            raise ValueError("registry mismatch")
        current = p
        for _ in range(100_000):
            rewritten = False
            terms = dict(current.terms)
            for e, c in list(terms.items()):
                for lead, rest in self.rules:
                    k = min((e[i] // lead[i] for i in range(len(e)) if lead[i]),
                            default=0)
                    if k >= 1:
                        base = tuple(a - k * b for a, b in zip(e, lead))
                        repl = (LaurentPoly(self.registry, {base: c})
                                * (rest ** k))
                        current = current - LaurentPoly(self.registry, {e: c}) + repl
                        rewritten = True
                        break
                if rewritten:
                    break
            if not rewritten:
                return current
        raise RuntimeError("reduction did not terminate")

    def equal(self, p: LaurentPoly, q: LaurentPoly) -> bool:
        return self.normal_form(p - q).is_zero()


def plain_registry(*names: str) -> VarRegistry:
    """Registry with no grading data, for generic scalar work."""
    return VarRegistry.make([(n, 0, 0) for n in names])
