"""Abstract value lattices: intervals over exact rationals, three-valued
booleans, and allocation-site reference sets.

All values are immutable and the operations are pure, so they are safe to
share across concurrent analysis workers. Numeric bounds are exact
``Fraction``s (``None`` encodes an infinite bound) so that conflict
detection never depends on floating-point rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Number = Union[int, Fraction]


class TypeAnomaly(Exception):
    """Raised when an abstraction is asked to mix incompatible value kinds."""


# ---------------------------------------------------------------------------
# Value kinds
# ---------------------------------------------------------------------------


class _Top:
    """Distinguished no-information element (any value of any kind)."""

    def __repr__(self) -> str:
        return "TOP"


class _Bottom:
    """Distinguished empty element (no value)."""

    def __repr__(self) -> str:
        return "BOTTOM"


TOP = _Top()
BOTTOM = _Bottom()


@dataclass(frozen=True, order=True)
class ObjectId:
    """Abstract heap object named by its allocation site.

    ``path`` distinguishes sub-arrays of a multi-dimensional array by the
    index chain in the parent array. ``skolem`` marks an object standing in
    for a completely unknown allocation (introduced only by havocked
    allocation statements); reads from skolem state yield TOP.
    """

    site: "LabelLike"
    path: tuple[int, ...] = ()
    skolem: bool = False

    def __str__(self) -> str:
        suffix = "".join(f"[{i}]" for i in self.path)
        mark = "?" if self.skolem else ""
        return f"site{self.site}{suffix}{mark}"


# The trace layer supplies real labels; anything hashable and orderable works.
LabelLike = object


@dataclass(frozen=True)
class Interval:
    """Numeric interval [lo, hi]; ``None`` bounds are infinite."""

    lo: Fraction | None
    hi: Fraction | None

    def __post_init__(self) -> None:
        lo, hi = self.lo, self.hi
        if lo is not None and not isinstance(lo, Fraction):
            object.__setattr__(self, "lo", Fraction(lo))
        if hi is not None and not isinstance(hi, Fraction):
            object.__setattr__(self, "hi", Fraction(hi))
        lo, hi = self.lo, self.hi
        if lo is not None and hi is not None and lo > hi:
            raise ValueError(f"empty interval [{lo},{hi}]; use BOTTOM")

    @property
    def is_singleton(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    def contains(self, v: Number) -> bool:
        if self.lo is not None and v < self.lo:
            return False
        if self.hi is not None and v > self.hi:
            return False
        return True


@dataclass(frozen=True)
class BooleanAbs:
    """Three-valued boolean: which concrete truth values are possible."""

    may_true: bool
    may_false: bool

    @property
    def is_singleton(self) -> bool:
        return self.may_true != self.may_false

    def contains(self, v: bool) -> bool:
        return self.may_true if v else self.may_false


BOOL_TOP = BooleanAbs(True, True)
BOOL_TRUE = BooleanAbs(True, False)
BOOL_FALSE = BooleanAbs(False, True)
BOOL_BOTTOM = BooleanAbs(False, False)


@dataclass(frozen=True)
class RefSet:
    """Set of abstract objects a reference may denote, plus null."""

    objects: frozenset[ObjectId]
    has_null: bool

    @property
    def is_definitely_null(self) -> bool:
        return self.has_null and not self.objects

    @property
    def may_be_null(self) -> bool:
        return self.has_null

    def without_null(self) -> "RefSet":
        return RefSet(self.objects, False)

    def contains(self, v: ObjectId | None) -> bool:
        if v is None:
            return self.has_null
        return v in self.objects


NULL = RefSet(frozenset(), True)

AbstractValue = Union[Interval, BooleanAbs, RefSet, _Top, _Bottom]


def interval(lo: Number | None, hi: Number | None) -> Interval | _Bottom:
    """Interval factory that collapses empty ranges to BOTTOM."""
    flo = None if lo is None else Fraction(lo)
    fhi = None if hi is None else Fraction(hi)
    if flo is not None and fhi is not None and flo > fhi:
        return BOTTOM
    return Interval(flo, fhi)


def singleton(v: Number) -> Interval:
    return Interval(Fraction(v), Fraction(v))


def refs(*objects: ObjectId, null: bool = False) -> RefSet:
    return RefSet(frozenset(objects), null)


INT_TOP = Interval(None, None)


def is_bottom(v: AbstractValue) -> bool:
    if v is BOTTOM:
        return True
    if isinstance(v, BooleanAbs):
        return not v.may_true and not v.may_false
    if isinstance(v, RefSet):
        return not v.objects and not v.has_null
    return False


def tags_mismatch(a: AbstractValue, b: AbstractValue) -> bool:
    """Type-anomaly flag: same-kind check for lattice operations."""
    if a is TOP or a is BOTTOM or b is TOP or b is BOTTOM:
        return False
    return type(a) is not type(b)


# ---------------------------------------------------------------------------
# Lattice operations
# ---------------------------------------------------------------------------


def join(a: AbstractValue, b: AbstractValue) -> AbstractValue:
    if is_bottom(a):
        return b
    if is_bottom(b):
        return a
    if a is TOP or b is TOP:
        return TOP
    if tags_mismatch(a, b):
        return TOP
    if isinstance(a, Interval) and isinstance(b, Interval):
        lo = None if a.lo is None or b.lo is None else min(a.lo, b.lo)
        hi = None if a.hi is None or b.hi is None else max(a.hi, b.hi)
        return Interval(lo, hi)
    if isinstance(a, BooleanAbs) and isinstance(b, BooleanAbs):
        return BooleanAbs(a.may_true or b.may_true, a.may_false or b.may_false)
    if isinstance(a, RefSet) and isinstance(b, RefSet):
        return RefSet(a.objects | b.objects, a.has_null or b.has_null)
    raise TypeAnomaly(f"join({a!r}, {b!r})")


def meet(a: AbstractValue, b: AbstractValue) -> AbstractValue:
    if a is TOP:
        return b
    if b is TOP:
        return a
    if is_bottom(a) or is_bottom(b):
        return BOTTOM
    if tags_mismatch(a, b):
        return BOTTOM
    if isinstance(a, Interval) and isinstance(b, Interval):
        lo = a.lo if b.lo is None else (b.lo if a.lo is None else max(a.lo, b.lo))
        hi = a.hi if b.hi is None else (b.hi if a.hi is None else min(a.hi, b.hi))
        return interval(lo, hi)
    if isinstance(a, BooleanAbs) and isinstance(b, BooleanAbs):
        out = BooleanAbs(a.may_true and b.may_true, a.may_false and b.may_false)
        return out if not is_bottom(out) else BOTTOM
    if isinstance(a, RefSet) and isinstance(b, RefSet):
        out = RefSet(a.objects & b.objects, a.has_null and b.has_null)
        return out if not is_bottom(out) else BOTTOM
    raise TypeAnomaly(f"meet({a!r}, {b!r})")


def leq(a: AbstractValue, b: AbstractValue) -> bool:
    if is_bottom(a) or b is TOP:
        return True
    if a is TOP or is_bottom(b):
        return False
    if tags_mismatch(a, b):
        return False
    if isinstance(a, Interval) and isinstance(b, Interval):
        lo_ok = b.lo is None or (a.lo is not None and a.lo >= b.lo)
        hi_ok = b.hi is None or (a.hi is not None and a.hi <= b.hi)
        return lo_ok and hi_ok
    if isinstance(a, BooleanAbs) and isinstance(b, BooleanAbs):
        return (not a.may_true or b.may_true) and (not a.may_false or b.may_false)
    if isinstance(a, RefSet) and isinstance(b, RefSet):
        return a.objects <= b.objects and (not a.has_null or b.has_null)
    raise TypeAnomaly(f"leq({a!r}, {b!r})")


def widen(prev: AbstractValue, nxt: AbstractValue) -> AbstractValue:
    """Classic interval widening; finite lattices widen by join."""
    if is_bottom(prev):
        return nxt
    if is_bottom(nxt):
        return prev
    if prev is TOP or nxt is TOP:
        return TOP
    if isinstance(prev, Interval) and isinstance(nxt, Interval):
        lo = prev.lo
        if prev.lo is not None and (nxt.lo is None or nxt.lo < prev.lo):
            lo = None
        hi = prev.hi
        if prev.hi is not None and (nxt.hi is None or nxt.hi > prev.hi):
            hi = None
        return Interval(lo, hi)
    return join(prev, nxt)


def narrow(a: AbstractValue, b: AbstractValue) -> AbstractValue:
    """Recover precision after widening: meet(a,b) <= narrow(a,b) <= a."""
    if is_bottom(a) or is_bottom(b):
        return b
    if a is TOP:
        return b
    if isinstance(a, Interval) and isinstance(b, Interval):
        lo = b.lo if a.lo is None else a.lo
        hi = b.hi if a.hi is None else a.hi
        return interval(lo, hi)
    return b if leq(b, a) else a


# ---------------------------------------------------------------------------
# Galois connection
# ---------------------------------------------------------------------------


def alpha(values: Iterable[object]) -> AbstractValue:
    """Best abstraction of a finite, non-empty, homogeneous value set."""
    vals = list(values)
    if not vals:
        raise ValueError("alpha of empty set")
    first = vals[0]
    if isinstance(first, bool):
        if not all(isinstance(v, bool) for v in vals):
            raise TypeAnomaly("mixed concrete kinds in alpha")
        return BooleanAbs(any(vals), not all(vals))
    if isinstance(first, (int, Fraction, float)):
        if not all(isinstance(v, (int, Fraction, float)) and not isinstance(v, bool) for v in vals):
            raise TypeAnomaly("mixed concrete kinds in alpha")
        nums = [Fraction(v) for v in vals]
        return Interval(min(nums), max(nums))
    if first is None or isinstance(first, ObjectId):
        if not all(v is None or isinstance(v, ObjectId) for v in vals):
            raise TypeAnomaly("mixed concrete kinds in alpha")
        return RefSet(frozenset(v for v in vals if v is not None), any(v is None for v in vals))
    raise TypeAnomaly(f"alpha of unsupported value {first!r}")


def gamma_contains(a: AbstractValue, v: object) -> bool:
    """Membership of a concrete value in the concretization of ``a``."""
    if a is TOP:
        return True
    if is_bottom(a):
        return False
    if isinstance(a, Interval):
        return isinstance(v, (int, Fraction, float)) and not isinstance(v, bool) and a.contains(Fraction(v))
    if isinstance(a, BooleanAbs):
        return isinstance(v, bool) and a.contains(v)
    if isinstance(a, RefSet):
        return (v is None or isinstance(v, ObjectId)) and a.contains(v)
    return False


# ---------------------------------------------------------------------------
# Abstract transfer functions
# ---------------------------------------------------------------------------

# Exceptional outcome kinds reported by transfer functions.
EXC_DIV_ZERO = "ArithmeticException"
EXC_NULL = "NullPointerException"
EXC_INDEX = "ArrayIndexOutOfBoundsException"
EXC_NEG_SIZE = "NegativeArraySizeException"


@dataclass(frozen=True)
class TransferResult:
    """Abstract result plus possible exceptional outcomes.

    ``value`` is None when no normal outcome remains (the exception is then
    definite). Each exception pair is (kind, definite).
    """

    value: AbstractValue | None
    exceptions: tuple[tuple[str, bool], ...] = ()

    @property
    def definitely_raises(self) -> bool:
        return self.value is None and bool(self.exceptions)


def _as_interval(v: AbstractValue) -> Interval:
    if v is TOP:
        return INT_TOP
    if isinstance(v, Interval):
        return v
    raise TypeAnomaly(f"expected numeric value, got {v!r}")


def _as_bool(v: AbstractValue) -> BooleanAbs:
    if v is TOP:
        return BOOL_TOP
    if isinstance(v, BooleanAbs):
        return v
    raise TypeAnomaly(f"expected boolean value, got {v!r}")


def _corner_join(pairs: list[Fraction | None]) -> Interval:
    if any(p is None for p in pairs):
        return INT_TOP
    return Interval(min(pairs), max(pairs))


def _mul_bound(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    # None stands for an infinite bound; sign handling is done by the caller
    # via the corner enumeration, so None simply poisons the corner.
    if a is None or b is None:
        return None
    return a * b


def _trunc_div(a: Fraction, b: Fraction) -> Fraction:
    q = a / b
    return Fraction(int(q))  # truncation toward zero


def _nonzero_parts(b: Interval, integral: bool) -> list[Interval]:
    """Split an interval into its strictly-negative and strictly-positive parts."""
    parts: list[Interval] = []
    eps = Fraction(1) if integral else Fraction(0)
    neg_hi = Fraction(-1) if integral else Fraction(0)
    if b.lo is None or b.lo < 0:
        hi = min(b.hi, neg_hi) if b.hi is not None else neg_hi
        if b.lo is None or b.lo <= hi:
            parts.append(Interval(b.lo, hi))
    pos_lo = Fraction(1) if integral else Fraction(0)
    if b.hi is None or b.hi > 0:
        lo = max(b.lo, pos_lo) if b.lo is not None else pos_lo
        if b.hi is None or lo <= b.hi:
            parts.append(Interval(lo, b.hi))
    # For rationals the parts above still include 0 at the closed end; that is
    # a sound over-approximation of the nonzero set.
    del eps
    return parts


def _div_interval(a: Interval, b_part: Interval, integral: bool) -> Interval:
    corners: list[Fraction | None] = []
    for x in (a.lo, a.hi):
        for y in (b_part.lo, b_part.hi):
            if x is None or y is None:
                corners.append(None)
            elif y == 0:
                corners.append(None)  # boundary of the rational nonzero part
            elif integral:
                corners.append(_trunc_div(x, y))
            else:
                corners.append(x / y)
    # Integer truncation is not monotone at sign changes; widen by one to stay
    # sound when the dividend straddles zero.
    iv = _corner_join(corners)
    if integral and iv.lo is not None and iv.hi is not None and a.contains(0):
        iv = join(iv, singleton(0))  # type: ignore[assignment]
    return iv  # type: ignore[return-value]


def _cmp(a: Interval, b: Interval) -> BooleanAbs:
    """Comparison outcome lattice for a < b."""
    may_true = (a.lo is None or b.hi is None or a.lo < b.hi)
    may_false = (a.hi is None or b.lo is None or a.hi >= b.lo)
    return BooleanAbs(may_true, may_false)


def abstract_transfer(op: str, args: list[AbstractValue], *, integral: bool = True) -> TransferResult:
    """Sound over-approximation of one IR operation.

    Exceptional outcomes (division by zero, bad array index, negative array
    size) are reported as data, never raised. ``integral`` selects integer
    semantics (truncating division) for numeric operators.
    """
    if any(is_bottom(a) for a in args):
        return TransferResult(BOTTOM)

    if op in ("add", "sub", "mul"):
        a, b = _as_interval(args[0]), _as_interval(args[1])
        if op == "add":
            lo = None if a.lo is None or b.lo is None else a.lo + b.lo
            hi = None if a.hi is None or b.hi is None else a.hi + b.hi
            return TransferResult(Interval(lo, hi))
        if op == "sub":
            lo = None if a.lo is None or b.hi is None else a.lo - b.hi
            hi = None if a.hi is None or b.lo is None else a.hi - b.lo
            return TransferResult(Interval(lo, hi))
        corners = [_mul_bound(x, y) for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
        if (a.lo is None or a.hi is None) and b.contains(0) or \
           (b.lo is None or b.hi is None) and a.contains(0):
            # infinite bound times a range containing zero: corners alone
            # miss the zero product only when both corners are infinite
            corners.append(Fraction(0))
        return TransferResult(_corner_join(corners))

    if op == "neg":
        a = _as_interval(args[0])
        lo = None if a.hi is None else -a.hi
        hi = None if a.lo is None else -a.lo
        return TransferResult(Interval(lo, hi))

    if op in ("div", "mod"):
        a, b = _as_interval(args[0]), _as_interval(args[1])
        may_zero = b.contains(0)
        only_zero = b.is_singleton and b.lo == 0
        if only_zero:
            return TransferResult(None, ((EXC_DIV_ZERO, True),))
        parts = _nonzero_parts(b, integral)
        if op == "div":
            out: AbstractValue = BOTTOM
            for part in parts:
                out = join(out, _div_interval(a, part, integral))
        else:
            # a % b has |result| < |b| and the sign of a (Java semantics).
            bound: Fraction | None = Fraction(0)
            for part in parts:
                if part.lo is None or part.hi is None:
                    bound = None
                    break
                bound = max(bound, abs(part.lo), abs(part.hi))
            if bound is None or bound == 0:
                out = INT_TOP
            else:
                lo = Fraction(0) if (a.lo is not None and a.lo >= 0) else -(bound - 1 if integral else bound)
                hi = Fraction(0) if (a.hi is not None and a.hi <= 0) else (bound - 1 if integral else bound)
                out = interval(lo, hi)
        excs = ((EXC_DIV_ZERO, False),) if may_zero else ()
        return TransferResult(out, excs)

    if op == "pow":
        a, b = _as_interval(args[0]), _as_interval(args[1])
        neg_exp = b.lo is None or b.lo < 0
        if a.is_singleton and b.is_singleton and not neg_exp and b.lo.denominator == 1:
            v = Fraction(a.lo) ** int(b.lo)
            return TransferResult(singleton(v))
        excs = ((EXC_DIV_ZERO, False),) if neg_exp else ()
        return TransferResult(INT_TOP, excs)

    if op in ("lt", "le", "gt", "ge"):
        a, b = _as_interval(args[0]), _as_interval(args[1])
        if op == "lt":
            return TransferResult(_cmp(a, b))
        if op == "gt":
            return TransferResult(_cmp(b, a))
        if op == "le":
            r = _cmp(b, a)
            return TransferResult(BooleanAbs(r.may_false, r.may_true))
        r = _cmp(a, b)
        return TransferResult(BooleanAbs(r.may_false, r.may_true))

    if op in ("eq", "ne"):
        a0, a1 = args
        if isinstance(a0, RefSet) or isinstance(a1, RefSet):
            r0 = a0 if isinstance(a0, RefSet) else NULL
            r1 = a1 if isinstance(a1, RefSet) else NULL
            if r0.is_definitely_null and r1.is_definitely_null:
                res = BOOL_TRUE
            elif is_bottom(meet(r0, r1)):
                res = BOOL_FALSE
            else:
                # Same allocation site does not imply the same object.
                res = BOOL_TOP
        elif isinstance(a0, BooleanAbs) or isinstance(a1, BooleanAbs):
            b0, b1 = _as_bool(a0), _as_bool(a1)
            if b0.is_singleton and b1.is_singleton:
                res = BOOL_TRUE if b0 == b1 else BOOL_FALSE
            else:
                res = BOOL_TOP
        else:
            ia, ib = _as_interval(a0), _as_interval(a1)
            if ia.is_singleton and ib.is_singleton:
                res = BOOL_TRUE if ia.lo == ib.lo else BOOL_FALSE
            elif is_bottom(meet(ia, ib)):
                res = BOOL_FALSE
            else:
                res = BOOL_TOP
        if op == "ne":
            res = BooleanAbs(res.may_false, res.may_true)
        return TransferResult(res)

    if op in ("and", "or"):
        a, b = _as_bool(args[0]), _as_bool(args[1])
        if op == "and":
            return TransferResult(BooleanAbs(a.may_true and b.may_true, a.may_false or b.may_false))
        return TransferResult(BooleanAbs(a.may_true or b.may_true, a.may_false and b.may_false))

    if op == "not":
        a = _as_bool(args[0])
        return TransferResult(BooleanAbs(a.may_false, a.may_true))

    if op == "array-read" or op == "array-write":
        # Bounds discipline only; the heap value itself is resolved by the
        # trace layer. args = [index, length].
        idx, length = _as_interval(args[0]), _as_interval(args[1])
        may_ok = _cmp(idx, length).may_true and (idx.hi is None or idx.hi >= 0)
        in_lo = idx.lo is not None and idx.lo >= 0
        in_hi = (idx.hi is not None and length.lo is not None and idx.hi < length.lo)
        definitely_ok = in_lo and in_hi
        if not may_ok:
            return TransferResult(None, ((EXC_INDEX, True),))
        excs = () if definitely_ok else ((EXC_INDEX, False),)
        return TransferResult(TOP, excs)

    if op == "array-new":
        size = _as_interval(args[0])
        may_neg = size.lo is None or size.lo < 0
        only_neg = size.hi is not None and size.hi < 0
        if only_neg:
            return TransferResult(None, ((EXC_NEG_SIZE, True),))
        excs = ((EXC_NEG_SIZE, False),) if may_neg else ()
        return TransferResult(TOP, excs)

    raise ValueError(f"unknown abstract operation {op!r}")


# ---------------------------------------------------------------------------
# Backward refinement
# ---------------------------------------------------------------------------


def _shift_lt(b: Interval, integral: bool) -> Fraction | None:
    """Largest value allowed for x given x < b (upper bound)."""
    if b.hi is None:
        return None
    return b.hi - 1 if integral else b.hi


def _shift_gt(b: Interval, integral: bool) -> Fraction | None:
    if b.lo is None:
        return None
    return b.lo + 1 if integral else b.lo


def backward_refine(op: str, result: AbstractValue, args: list[AbstractValue], *,
                    integral: bool = True) -> list[AbstractValue]:
    """Refine argument values given a constraint on the operation result.

    Each refined argument is <= the original; a BOTTOM position means no
    concrete argument tuple can produce the requested result. Positions that
    cannot be refined soundly are returned unchanged.
    """
    if any(is_bottom(a) for a in args) or is_bottom(result):
        return [BOTTOM for _ in args]

    def num(i: int) -> Interval:
        return _as_interval(args[i])

    if op == "add" and isinstance(result, Interval):
        a, b = num(0), num(1)
        ra = abstract_transfer("sub", [result, b], integral=integral).value
        rb = abstract_transfer("sub", [result, a], integral=integral).value
        return [meet(a, ra), meet(b, rb)]

    if op == "sub" and isinstance(result, Interval):
        a, b = num(0), num(1)
        ra = abstract_transfer("add", [result, b], integral=integral).value
        rb = abstract_transfer("sub", [a, result], integral=integral).value
        return [meet(a, ra), meet(b, rb)]

    if op == "neg" and isinstance(result, Interval):
        a = num(0)
        ra = abstract_transfer("neg", [result], integral=integral).value
        return [meet(a, ra)]

    if op == "mul" and isinstance(result, Interval):
        a, b = num(0), num(1)
        out = [args[0], args[1]]
        if b.is_singleton and b.lo != 0 and not integral:
            out[0] = meet(a, _div_interval(result, b, False))
        if a.is_singleton and a.lo != 0 and not integral:
            out[1] = meet(b, _div_interval(result, a, False))
        # Integer multiplication by an exact divisor refines soundly too.
        if integral and b.is_singleton and b.lo not in (0, None):
            lo = None if result.lo is None else result.lo / b.lo
            hi = None if result.hi is None else result.hi / b.lo
            if b.lo < 0:
                lo, hi = hi, lo
            lo = None if lo is None else Fraction(-(-lo.numerator // lo.denominator))
            hi = None if hi is None else Fraction(hi.numerator // hi.denominator)
            out[0] = meet(a, interval(lo, hi))
        return out

    if op in ("lt", "le", "gt", "ge") and isinstance(result, BooleanAbs) and result.is_singleton:
        truth = result.may_true
        eff = op if truth else {"lt": "ge", "le": "gt", "gt": "le", "ge": "lt"}[op]
        a, b = num(0), num(1)
        if eff == "lt":
            ra = meet(a, Interval(None, _shift_lt(b, integral)))
            rb = meet(b, Interval(_shift_gt(a, integral), None))
        elif eff == "le":
            ra = meet(a, Interval(None, b.hi))
            rb = meet(b, Interval(a.lo, None))
        elif eff == "gt":
            ra = meet(a, Interval(_shift_gt(b, integral), None))
            rb = meet(b, Interval(None, _shift_lt(a, integral)))
        else:
            ra = meet(a, Interval(b.lo, None))
            rb = meet(b, Interval(None, a.hi))
        return [ra, rb]

    if op in ("eq", "ne") and isinstance(result, BooleanAbs) and result.is_singleton:
        want_equal = result.may_true == (op == "eq")
        a0, a1 = args
        if want_equal:
            m = meet(a0, a1)
            return [m, m]
        out = [a0, a1]
        if isinstance(a0, Interval) and isinstance(a1, Interval) and integral:
            if a1.is_singleton and a0.lo == a1.lo and a0.lo is not None:
                out[0] = interval(a0.lo + 1, a0.hi)
            elif a1.is_singleton and a0.hi == a1.hi and a0.hi is not None:
                out[0] = interval(a0.lo, a0.hi - 1)
            if a0.is_singleton and a1.lo == a0.lo and a1.lo is not None:
                out[1] = interval(a1.lo + 1, a1.hi)
            elif a0.is_singleton and a1.hi == a0.hi and a1.hi is not None:
                out[1] = interval(a1.lo, a1.hi - 1)
        return out

    if op == "and" and isinstance(result, BooleanAbs) and result == BOOL_TRUE:
        return [meet(args[0], BOOL_TRUE), meet(args[1], BOOL_TRUE)]
    if op == "or" and isinstance(result, BooleanAbs) and result == BOOL_FALSE:
        return [meet(args[0], BOOL_FALSE), meet(args[1], BOOL_FALSE)]
    if op == "not" and isinstance(result, BooleanAbs) and result.is_singleton:
        want = BOOL_FALSE if result.may_true else BOOL_TRUE
        return [meet(args[0], want)]

    return list(args)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _num_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def render(v: AbstractValue) -> str:
    """Canonical text form used in reports and golden tests."""
    if v is TOP:
        return "⊤"
    if is_bottom(v):
        return "⊥"
    if isinstance(v, Interval):
        lo = "-inf" if v.lo is None else _num_str(v.lo)
        hi = "+inf" if v.hi is None else _num_str(v.hi)
        return f"[{lo},{hi}]"
    if isinstance(v, BooleanAbs):
        if v == BOOL_TRUE:
            return "true"
        if v == BOOL_FALSE:
            return "false"
        return "⊤"
    if isinstance(v, RefSet):
        names = sorted(str(o) for o in v.objects)
        if v.has_null:
            names.append("null")
        return "{" + ",".join(names) + "}"
    return repr(v)
