"""Golden manifests: line-oriented reference values and the digit-matching harness.

Each non-comment line reads

    id | operation | param | ... | expected_re | expected_im | match_digits | source

``match_digits`` is a positive integer or ``*`` (every printed digit of each
part).  An expected part written as ``0`` passes when the computed part is
below ``10**-match`` times ``max(1, |other part|)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from importlib import resources
from pathlib import Path
from typing import Callable

import mpmath

from . import branch_sums as bs
from . import classifier, zeta
from .errors import DomainError, GeowsumError
from .lambertw import lambert_w
from .precision import PrecisionContext, make_context, parse_complex, to_decimal, working

ALL_DIGITS = "*"
# digits of headroom above the compared digits when an entry demands more than --prec
_HEADROOM = 15


class ManifestError(GeowsumError):
    """Malformed manifest line or unknown operation."""


@dataclass(frozen=True)
class GoldenEntry:
    id: str
    operation: str
    params: tuple
    expected_re: str
    expected_im: str
    match_digits: int | None  # None means every printed digit
    source: str
    line: int = 0

    def digits_for(self, part: str) -> int:
        return self.match_digits if self.match_digits is not None else significant_digits(part)

    @property
    def required_digits(self) -> int:
        return max(self.digits_for(self.expected_re), self.digits_for(self.expected_im))


@dataclass
class EntryResult:
    entry: GoldenEntry
    passed: bool
    computed: object = None
    detail: str = ""


@dataclass
class ReproductionReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def lines(self) -> list:
        out = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            text = f"{status} {r.entry.id} [{r.entry.source}]"
            if r.detail:
                text += f": {r.detail}"
            out.append(text)
        out.append(f"{self.passed} passed, {self.failed} failed, {len(self.results)} total")
        return out


# ---------------------------------------------------------------------------
# operations

def _branch(text):
    try:
        value = int(str(text).strip())
    except ValueError as exc:
        raise DomainError(f"branch index must be an integer, got {text!r}") from exc
    return value


def _prime(text):
    return _branch(text)


def _num(text):
    return parse_complex(str(text))


def _harmonic_companion(n, ctx):
    with working(ctx):
        w = bs.w_log2(n, ctx)
        return 2 + 2 * w / mpmath.mp.ln2


# name -> (parameter converters, callable(*params, ctx))
OPERATIONS: dict = {
    "lambert_w": ((_num, _branch), lambda z, n, ctx: lambert_w(z, n, ctx).w),
    "delta": ((_branch,), lambda n, ctx: bs.delta(n, ctx).delta),
    "phi_sum": ((_branch,), bs.phi_sum),
    "geo_sum": ((_num, _num, _branch), lambda a, r, n, ctx: bs.geo_sum_branch(bs.GeoSeries(a, r), n, ctx).value),
    "geo_sum_principal": (
        (_num, _num, _branch),
        lambda a, r, n, ctx: bs.geo_sum_branch(bs.GeoSeries(a, r), n, ctx, negative_ratio="principal").value,
    ),
    "geo_sum_principal_reciprocal": (
        (_num, _num, _branch),
        lambda a, r, n, ctx: bs.geo_sum_branch(bs.GeoSeries(a, r), n, ctx, negative_ratio="principal_reciprocal").value,
    ),
    "reciprocal_geo_sum": ((_num, _branch), bs.reciprocal_geo_sum),
    "derivative_series": ((_num, _branch), bs.derivative_series),
    "weighted_derivative_series": ((_num, _branch), bs.weighted_derivative_series),
    "tail_coefficient_series": ((_num, _branch), bs.tail_coefficient_series),
    "combined_phi": ((_branch,), bs.combined_phi_series),
    "sqrt2_ratio": ((_branch,), bs.sqrt2_ratio),
    "limit_estimate": (
        (_num, _num, _branch),
        lambda a, r, n, ctx: classifier.limit_estimate(bs.GeoSeries(a, r), n, ctx),
    ),
    "zeta_dirichlet": ((_num,), zeta.zeta_dirichlet),
    "zeta_functional": ((_num,), zeta.zeta_functional),
    "gamma": ((_num,), zeta.gamma_hp),
    "zeta_ratio": ((_num,), zeta.zeta_ratio),
    "zeta_ratio_root": ((_num,), zeta.zeta_ratio_root),
    "euler_error_term": ((_prime, _num, _branch), zeta.euler_error_term),
    "harmonic_branch": ((_branch,), zeta.harmonic_branch),
    "harmonic_companion": ((_branch,), _harmonic_companion),
    "prime_product_rhs": ((_branch,), zeta.prime_product_rhs),
}


def evaluate(operation: str, params, ctx: PrecisionContext):
    """Run a registered operation on string parameters."""
    if operation not in OPERATIONS:
        raise ManifestError(f"unknown operation {operation!r}")
    converters, fn = OPERATIONS[operation]
    if len(params) != len(converters):
        raise ManifestError(f"{operation} takes {len(converters)} parameters, got {len(params)}")
    with working(ctx):
        args = [conv(p) for conv, p in zip(converters, params)]
        return mpmath.mpc(fn(*args, ctx))


# ---------------------------------------------------------------------------
# parsing

def _decimal(text: str) -> Decimal:
    try:
        value = Decimal(text.strip())
    except InvalidOperation as exc:
        raise ManifestError(f"not a decimal string: {text!r}") from exc
    if not value.is_finite():
        raise ManifestError(f"not a finite decimal: {text!r}")
    return value


def significant_digits(text: str) -> int:
    value = _decimal(text)
    if value == 0:
        return 1
    return len(value.as_tuple().digits)


def parse_line(line: str, number: int = 0) -> GoldenEntry | None:
    body = line.split("#", 1)[0].strip()
    if not body:
        return None
    fields = [f.strip() for f in body.split("|")]
    if len(fields) < 6:
        raise ManifestError(f"line {number}: expected at least 6 '|'-separated fields, got {len(fields)}")
    ident, operation, *params, expected_re, expected_im, match_text, source = fields
    if not ident or not source:
        raise ManifestError(f"line {number}: id and source must be nonempty")
    if operation not in OPERATIONS:
        raise ManifestError(f"line {number}: unknown operation {operation!r}")
    if len(params) != len(OPERATIONS[operation][0]):
        raise ManifestError(f"line {number}: {operation} takes {len(OPERATIONS[operation][0])} parameters")
    _decimal(expected_re), _decimal(expected_im)
    if match_text == ALL_DIGITS:
        match = None
    else:
        try:
            match = int(match_text)
        except ValueError as exc:
            raise ManifestError(f"line {number}: match_digits must be an integer or '*'") from exc
        if match < 1:
            raise ManifestError(f"line {number}: match_digits must be positive")
        for part in (expected_re, expected_im):
            if _decimal(part) != 0 and significant_digits(part) < match:
                raise ManifestError(f"line {number}: {part!r} prints fewer than {match} digits")
    return GoldenEntry(ident, operation, tuple(params), expected_re, expected_im, match, source, number)


def parse_manifest(text: str) -> list:
    entries, seen = [], set()
    for number, line in enumerate(text.splitlines(), 1):
        entry = parse_line(line, number)
        if entry is None:
            continue
        if entry.id in seen:
            raise ManifestError(f"line {number}: duplicate id {entry.id!r}")
        seen.add(entry.id)
        entries.append(entry)
    return entries


def load_manifest(path) -> list:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    return parse_manifest(text)


def shipped_manifests() -> list:
    """Paths of the manifests bundled with the package."""
    root = resources.files("geowsum") / "manifests"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".txt"))


# ---------------------------------------------------------------------------
# comparison

def _leading_digits(d: Decimal, count: int) -> str:
    digits = "".join(map(str, d.as_tuple().digits)).lstrip("0")
    return digits[:count].ljust(count, "0")


def compare_part(computed, expected: str, digits: int, other=None) -> str:
    """Empty string when ``computed`` matches ``expected``, else a reason."""
    exp = _decimal(expected)
    got = to_decimal(computed)
    if exp == 0:
        scale = max(Decimal(1), abs(to_decimal(other))) if other is not None else Decimal(1)
        bound = scale * Decimal(10) ** (-digits)
        return "" if abs(got) < bound else f"expected ~0, got {mpmath.nstr(computed, 10)}"
    if got == 0:
        return f"expected {expected}, got 0"
    if (got < 0) != (exp < 0):
        return f"sign differs: expected {expected[:20]}..., got {mpmath.nstr(computed, 20)}"
    if got.adjusted() != exp.adjusted():
        return f"magnitude differs: expected 1e{exp.adjusted()}, got {mpmath.nstr(computed, 20)}"
    want = _leading_digits(exp, digits)
    have = _leading_digits(got, digits)
    if want == have:
        return ""
    first = next(i for i, (a, b) in enumerate(zip(want, have)) if a != b)
    return f"digit {first + 1} of {digits} differs: expected ...{want[max(0, first - 5):first + 5]}, got ...{have[max(0, first - 5):first + 5]}"


def check_entry(entry: GoldenEntry, prec: int) -> EntryResult:
    digits = max(prec, entry.required_digits + _HEADROOM)
    ctx = make_context(digits)
    try:
        value = evaluate(entry.operation, entry.params, ctx)
    except GeowsumError as exc:
        return EntryResult(entry, False, None, f"{type(exc).__name__}: {exc}")
    problems = []
    for name, part, expected, other in (
        ("re", value.real, entry.expected_re, value.imag),
        ("im", value.imag, entry.expected_im, value.real),
    ):
        reason = compare_part(part, expected, entry.digits_for(expected), other)
        if reason:
            problems.append(f"{name}: {reason}")
    return EntryResult(entry, not problems, value, "; ".join(problems))


def reproduce(entries, prec: int = 80, progress: Callable | None = None) -> ReproductionReport:
    report = ReproductionReport()
    for entry in entries:
        result = check_entry(entry, prec)
        report.results.append(result)
        if progress:
            progress(result)
    return report
