"""Precision contexts, constants and principal-branch complex elementary functions.

Real and complex values are plain :mod:`mpmath` numbers (``mpf`` / ``mpc``).
Every public routine takes a :class:`PrecisionContext` and evaluates under
``ctx.work_dps`` decimal digits (the requested digits plus guard digits).
Precision is switched through mpmath's global context, so evaluation is not
thread-safe; run concurrent work in separate processes.
"""

from __future__ import annotations

import re
from contextlib import contextmanager
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from numbers import Complex, Rational

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, PrecisionError

DEFAULT_DIGITS = 80
DEFAULT_GUARD_DIGITS = 20
MIN_DIGITS = 30

# Beyond this binary exponent the exact decimal expansion gets too large.
_EXACT_DECIMAL_MAX_EXP = 200_000


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision, in significant decimal digits."""

    digits: int = DEFAULT_DIGITS
    guard_digits: int = DEFAULT_GUARD_DIGITS

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < MIN_DIGITS:
            raise PrecisionError(
                f"precision of {self.digits} digits is below the supported floor of "
                f"{MIN_DIGITS}; the 50-digit reference tables cannot be checked"
            )
        if int(self.guard_digits) != self.guard_digits or self.guard_digits < 1:
            raise PrecisionError(f"guard_digits must be a positive integer, got {self.guard_digits}")

    @property
    def work_dps(self) -> int:
        return self.digits + self.guard_digits

    @property
    def tol(self) -> mpf:
        """Absolute tolerance 10**(5 - digits), derived on every access."""
        with mp.workdps(self.work_dps):
            return mpf(10) ** (5 - self.digits)


def make_context(digits: int = DEFAULT_DIGITS, guard_digits: int = DEFAULT_GUARD_DIGITS) -> PrecisionContext:
    return PrecisionContext(digits=digits, guard_digits=guard_digits)


@contextmanager
def working(ctx: PrecisionContext, extra_digits: int = 0):
    """Evaluate the enclosed block at the context's working precision."""
    with mp.workdps(ctx.work_dps + extra_digits):
        yield


# ---------------------------------------------------------------------------
# conversion and parsing

_NAMED_CONSTANTS = {
    "e": lambda: mp.e,
    "pi": lambda: mp.pi,
    "log2": lambda: mp.ln2,
    "ln2": lambda: mp.ln2,
    "sqrt2": lambda: mpmath.sqrt(2),
}


def parse_real(text: str) -> mpf:
    """Parse a real literal at the current working precision.

    Accepts decimal strings, ``p/q`` fractions and the names ``e``, ``pi``,
    ``log2`` and ``sqrt2`` (optionally negated).
    """
    s = text.strip().replace("_", "")
    if not s:
        raise DomainError("empty numeric literal")
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        s = s[1:].strip()
    key = s.lower()
    if key in _NAMED_CONSTANTS:
        return sign * _NAMED_CONSTANTS[key]()
    if "/" in s:
        num, _, den = s.partition("/")
        den_value = parse_real(den)
        if den_value == 0:
            raise DomainError(f"zero denominator in {text!r}")
        return sign * parse_real(num) / den_value
    try:
        return sign * mpf(s)
    except (ValueError, TypeError) as exc:
        raise DomainError(f"cannot parse real number from {text!r}") from exc


def _split_complex(s: str):
    # The last sign that is not a leading sign or an exponent sign separates re/im.
    for pos in range(len(s) - 1, 0, -1):
        if s[pos] in "+-" and s[pos - 1] not in "eE":
            return s[:pos], s[pos:]
    return None, s


def parse_complex(text: str) -> mpc:
    """Parse ``"<re> <sign> <im>i"`` (also ``a``, ``bi``, ``a+bi``, ``j`` suffix)."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise DomainError("empty numeric literal")
    if s[-1] not in "ij":
        return mpc(parse_real(s), 0)
    try:
        # names ending in i, such as pi
        return mpc(parse_real(s), 0)
    except DomainError:
        pass
    body = s[:-1].rstrip("*")
    re_part, im_part = _split_complex(body)
    if im_part in ("", "+"):
        im_value = mpf(1)
    elif im_part == "-":
        im_value = mpf(-1)
    else:
        im_value = parse_real(im_part)
    re_value = parse_real(re_part) if re_part else mpf(0)
    return mpc(re_value, im_value)


def to_real(x) -> mpf:
    """Convert ``x`` to ``mpf`` at the current working precision."""
    if isinstance(x, str):
        return parse_real(x)
    if isinstance(x, Fraction) or (isinstance(x, Rational) and not isinstance(x, int)):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, mpc) or isinstance(x, complex):
        if mpmath.im(x) != 0:
            raise DomainError(f"expected a real number, got {x}")
        return mpf(mpmath.re(x))
    return mpf(x)


def to_complex(x) -> mpc:
    """Convert ``x`` to ``mpc`` at the current working precision."""
    if isinstance(x, str):
        return parse_complex(x)
    if isinstance(x, mpc):
        return +x
    if isinstance(x, (mpf, int, Fraction)) or isinstance(x, Rational):
        return mpc(to_real(x), 0)
    if isinstance(x, Complex):
        return mpc(x)
    return mpc(x)


def is_negative_real(z) -> bool:
    return mpmath.im(z) == 0 and mpmath.re(z) < 0


# ---------------------------------------------------------------------------
# constants

def const_log2(ctx: PrecisionContext) -> mpf:
    with working(ctx):
        return +mp.ln2


def const_pi(ctx: PrecisionContext) -> mpf:
    with working(ctx):
        return +mp.pi


def const_e(ctx: PrecisionContext) -> mpf:
    with working(ctx):
        return +mp.e


# ---------------------------------------------------------------------------
# principal-branch elementary functions

def cexp(z, ctx: PrecisionContext) -> mpc:
    with working(ctx):
        return mpmath.exp(to_complex(z))


def clog_principal(z, ctx: PrecisionContext) -> mpc:
    """Principal logarithm, imaginary part in (-pi, pi]."""
    with working(ctx):
        z = to_complex(z)
        if z == 0:
            raise DomainError("log(0) is undefined")
        return mpc(mpmath.log(abs(z)), mpmath.arg(z))


def cpow_principal(base, exponent, ctx: PrecisionContext) -> mpc:
    """``exp(exponent * Log(base))``; ``0**e`` only for real ``e > 0``."""
    with working(ctx):
        b = to_complex(base)
        e = to_complex(exponent)
        if b == 0:
            if mpmath.im(e) == 0 and mpmath.re(e) > 0:
                return mpc(0)
            raise DomainError(f"0**({e}) is undefined")
        return mpmath.exp(e * clog_principal(b, ctx))


# ---------------------------------------------------------------------------
# decimal output

def to_decimal(x) -> Decimal:
    """Exact decimal expansion of a binary ``mpf`` (approximate for huge exponents)."""
    if not isinstance(x, mpf):
        x = mpf(x)
    sign, man, exp, _ = x._mpf_  # man_exp drops the sign
    man, exp = (-1) ** sign * int(man), int(exp)
    if man == 0:
        return Decimal(0)
    if abs(exp) > _EXACT_DECIMAL_MAX_EXP:
        text = mpmath.libmp.to_str(x._mpf_, max(mp.dps, 60) + 10)
        return Decimal(text)
    if exp >= 0:
        return Decimal(man << exp)
    scaled = man * 5 ** (-exp)
    return Decimal((int(scaled < 0), tuple(int(c) for c in str(abs(scaled))), exp))


def round_significant(x, digits: int) -> Decimal:
    """Round half-even to ``digits`` significant figures, padding with zeros."""
    d = to_decimal(x)
    if d == 0:
        return Decimal(0)
    rounded = Context(prec=digits, rounding=ROUND_HALF_EVEN).plus(d)
    quantum = Decimal(1).scaleb(rounded.adjusted() - digits + 1)
    return rounded.quantize(quantum, context=Context(prec=digits + 5, rounding=ROUND_HALF_EVEN))


def format_real(x, digits: int, compact: bool = False) -> str:
    d = round_significant(x, digits)
    if d == 0:
        return "0"
    sign, coeff, _ = d.as_tuple()
    mantissa = "".join(map(str, coeff))
    if compact:
        mantissa = mantissa.rstrip("0") or "0"
    adjusted = d.adjusted()
    neg = "-" if sign else ""
    if -6 <= adjusted < 21:
        if adjusted >= 0:
            head = mantissa[: adjusted + 1].ljust(adjusted + 1, "0")
            tail = mantissa[adjusted + 1:]
        else:
            head = "0"
            tail = "0" * (-adjusted - 1) + mantissa
        return f"{neg}{head}.{tail}" if tail else f"{neg}{head}"
    tail = mantissa[1:]
    body = f"{mantissa[0]}.{tail}" if tail else mantissa[0]
    return f"{neg}{body}e{adjusted:+d}"


def format_complex(z, digits: int, compact: bool = False) -> str:
    """Render as ``"<re> <sign> <im>i"``; compact mode drops a zero imaginary part."""
    with mp.workdps(max(mp.dps, digits + 10)):
        if not isinstance(z, mpc):
            z = mpc(z)
        re_text = format_real(z.real, digits, compact)
        im = z.imag
        if compact and im == 0:
            return re_text
        im_text = format_real(-im if im < 0 else im, digits, compact)
    sign = "-" if im < 0 else "+"
    return f"{re_text} {sign} {im_text}i"
