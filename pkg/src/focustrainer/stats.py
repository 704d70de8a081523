"""Evaluation instruments: SUS scoring, Likert descriptives, Cronbach's
alpha, and the chi-square test of association with Cramér's V.

Everything here is a pure function over explicit inputs (CSV matrices or
small dataclasses). p-values come from an in-house evaluation of the
regularized incomplete gamma function (series plus continued fraction, to
better than 1e-10 relative accuracy) so the package needs no statistics
dependency and the values can be checked against tabulated critical
values.
"""

from __future__ import annotations

import csv
import enum
import json
import math
import statistics
from dataclasses import dataclass
from pathlib import Path

from .errors import UndefinedStatisticError, ValidationError


# -- regularized incomplete gamma --------------------------------------------

_EPS = 1e-15
_MAX_ITER = 500


def _gamma_p_series(a: float, x: float) -> float:
    # Lower tail P(a, x) by power series; converges fast for x < a + 1.
    ap = a
    total = delta = 1.0 / a
    for _ in range(_MAX_ITER):
        ap += 1.0
        delta *= x / ap
        total += delta
        if abs(delta) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_continued_fraction(a: float, x: float) -> float:
    # Upper tail Q(a, x) by modified Lentz continued fraction; for x >= a + 1.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_q(a: float, x: float) -> float:
    """Q(a, x) = Γ(a, x) / Γ(a), the upper regularized incomplete gamma."""
    if a <= 0 or x < 0 or not (math.isfinite(a) and math.isfinite(x)):
        raise ValidationError({"gamma": "requires a > 0 and x >= 0"})
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_p_series(a, x)))
    return min(1.0, max(0.0, _gamma_q_continued_fraction(a, x)))


def chi2_sf(chi2: float, df: int) -> float:
    """Upper-tail probability of the chi-square distribution."""
    if df < 1:
        raise ValidationError({"df": "must be >= 1"})
    if chi2 < 0:
        raise ValidationError({"chi2": "must be >= 0"})
    return regularized_gamma_q(df / 2.0, chi2 / 2.0)


# -- System Usability Scale ----------------------------------------------------

class SusBand(enum.Enum):
    WORST_IMAGINABLE = "WorstImaginable"
    POOR = "Poor"
    OK = "OK"
    GOOD = "Good"
    EXCELLENT = "Excellent"
    BEST_IMAGINABLE = "BestImaginable"


# Adjective band edges: scores below each threshold fall in the band.
SUS_BAND_EDGES: tuple[tuple[float, SusBand], ...] = (
    (25.0, SusBand.WORST_IMAGINABLE),
    (51.0, SusBand.POOR),
    (71.0, SusBand.OK),
    (85.5, SusBand.GOOD),
    (90.9, SusBand.EXCELLENT),
    (100.0 + 1e-9, SusBand.BEST_IMAGINABLE),
)


@dataclass(frozen=True)
class SusResponse:
    """The ten usability items of one respondent, each answered 1..5.
    Odd items are positively worded, even items negatively."""

    items: tuple[int, ...]

    def validate(self) -> None:
        problems = {}
        if len(self.items) != 10:
            problems["items"] = f"expected 10 items, got {len(self.items)}"
        else:
            for i, value in enumerate(self.items, start=1):
                if not isinstance(value, int) or isinstance(value, bool) \
                        or not 1 <= value <= 5:
                    problems[f"item{i}"] = "must be an integer in 1..5"
        if problems:
            raise ValidationError(problems)


def sus_score(response: SusResponse) -> float:
    """Standard scoring: odd items contribute (value - 1), even items
    (5 - value); the contribution sum is scaled by 2.5 onto 0..100."""
    response.validate()
    contributions = 0
    for i, value in enumerate(response.items, start=1):
        contributions += (value - 1) if i % 2 == 1 else (5 - value)
    return 2.5 * contributions


def sus_band(score: float) -> SusBand:
    if not 0.0 <= score <= 100.0:
        raise ValidationError({"score": "must be within [0, 100]"})
    for upper, band in SUS_BAND_EDGES:
        if score < upper:
            return band
    return SusBand.BEST_IMAGINABLE


# -- Likert scales ----------------------------------------------------------------

@dataclass
class LikertScale:
    """A respondents x items matrix with per-item reverse-coding flags.
    ``scale_min``/``scale_max`` bound the response format (1..7 for the
    parent survey, 1..5 for the child interview)."""

    name: str
    items: list[list[float]]
    reverse_coded: list[bool]
    scale_min: int = 1
    scale_max: int = 7

    def validate(self) -> None:
        problems = {}
        k = len(self.reverse_coded)
        if k < 1:
            problems["reverse_coded"] = "scale needs at least one item"
        if not self.items:
            problems["items"] = "scale has no respondents"
        for r, row in enumerate(self.items):
            if len(row) != k:
                problems[f"row{r}"] = f"expected {k} values, got {len(row)}"
                continue
            for value in row:
                if value is None or not math.isfinite(value):
                    problems[f"row{r}"] = "missing value"
                    break
                if not self.scale_min <= value <= self.scale_max:
                    problems[f"row{r}"] = (
                        f"value {value} outside {self.scale_min}..{self.scale_max}")
                    break
        if problems:
            raise ValidationError(problems)

    def recoded(self) -> list[list[float]]:
        pivot = self.scale_min + self.scale_max
        return [
            [pivot - v if flip else v for v, flip in zip(row, self.reverse_coded)]
            for row in self.items
        ]


def cronbach_alpha(scale: LikertScale) -> float:
    """alpha = k/(k-1) * (1 - sum of item variances / variance of row
    totals), sample variances throughout (n-1 denominator)."""
    scale.validate()
    rows = scale.recoded()
    k = len(scale.reverse_coded)
    if k < 2:
        raise ValidationError({"items": "alpha needs at least 2 items"})
    if len(rows) < 2:
        raise ValidationError({"respondents": "alpha needs at least 2 respondents"})
    item_variances = [statistics.variance(column) for column in zip(*rows)]
    totals = [sum(row) for row in rows]
    total_variance = statistics.variance(totals)
    if total_variance == 0.0:
        raise UndefinedStatisticError("alpha undefined: zero variance of scale totals")
    return k / (k - 1) * (1.0 - sum(item_variances) / total_variance)


@dataclass(frozen=True)
class LikertDescriptives:
    name: str
    n: int
    mean: float
    sd: float | None       # None when a single respondent makes SD undefined


def likert_descriptives(scale: LikertScale) -> LikertDescriptives:
    """Respondent-level scale score is the mean of the (recoded) items;
    reported are the mean and sample SD of those scores."""
    scale.validate()
    rows = scale.recoded()
    scores = [sum(row) / len(row) for row in rows]
    mean = sum(scores) / len(scores)
    sd = statistics.stdev(scores) if len(scores) > 1 else None
    return LikertDescriptives(name=scale.name, n=len(scores), mean=mean, sd=sd)


# -- chi-square test ------------------------------------------------------------

@dataclass
class ContingencyTable:
    counts: list[list[int]]
    row_labels: list[str] | None = None
    col_labels: list[str] | None = None

    def validate(self) -> None:
        problems = {}
        r = len(self.counts)
        c = len(self.counts[0]) if self.counts else 0
        if r < 2:
            problems["rows"] = "need at least 2 rows"
        if c < 2:
            problems["cols"] = "need at least 2 columns"
        for i, row in enumerate(self.counts):
            if len(row) != c:
                problems[f"row{i}"] = "ragged table"
            elif any((isinstance(v, bool) or not isinstance(v, int) or v < 0) for v in row):
                problems[f"row{i}"] = "counts must be non-negative integers"
        if not problems:
            if any(sum(row) == 0 for row in self.counts):
                problems["rows"] = "zero row marginal"
            if any(total == 0 for total in map(sum, zip(*self.counts))):
                problems["cols"] = "zero column marginal"
        if problems:
            raise ValidationError(problems)

    @property
    def n(self) -> int:
        return sum(sum(row) for row in self.counts)


@dataclass(frozen=True)
class ChiSquareResult:
    chi2: float
    df: int
    p_value: float
    cramers_v: float
    n: int
    low_expected_count: bool    # some expected cell < 5; interpret with care

    def to_dict(self) -> dict:
        return {
            "chi2": self.chi2, "df": self.df, "p_value": self.p_value,
            "cramers_v": self.cramers_v, "n": self.n,
            "low_expected_count": self.low_expected_count,
        }


def chi_square(table: ContingencyTable) -> ChiSquareResult:
    """Pearson chi-square test of association with Cramér's V effect size.
    Degrees of freedom always derive from the table shape."""
    table.validate()
    counts = table.counts
    r, c = len(counts), len(counts[0])
    row_totals = [sum(row) for row in counts]
    col_totals = [sum(col) for col in zip(*counts)]
    n = table.n

    chi2 = 0.0
    low_expected = False
    for i in range(r):
        for j in range(c):
            expected = row_totals[i] * col_totals[j] / n
            if expected < 5:
                low_expected = True
            chi2 += (counts[i][j] - expected) ** 2 / expected
    df = (r - 1) * (c - 1)
    p_value = chi2_sf(chi2, df)
    cramers_v = math.sqrt(chi2 / (n * (min(r, c) - 1)))
    return ChiSquareResult(chi2=chi2, df=df, p_value=p_value, cramers_v=cramers_v,
                           n=n, low_expected_count=low_expected)


# -- CSV ingestion ----------------------------------------------------------------

def _read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as handle:
        rows = [row for row in csv.reader(handle) if any(cell.strip() for cell in row)]
    if len(rows) < 2:
        raise ValidationError({"csv": "expected a header row plus data rows"})
    return rows[0], rows[1:]


def load_sus_csv(path: str | Path) -> list[SusResponse]:
    """Header row plus one respondent per line, exactly 10 integer columns."""
    header, rows = _read_csv(path)
    if len(header) != 10:
        raise ValidationError({"csv": f"expected 10 columns, got {len(header)}"})
    responses = []
    for r, row in enumerate(rows):
        try:
            items = tuple(int(cell) for cell in row)
        except ValueError as exc:
            raise ValidationError({f"row{r}": f"non-integer value: {exc}"}) from exc
        response = SusResponse(items=items)
        response.validate()
        responses.append(response)
    return responses


def load_scale_csv(path: str | Path, sidecar: str | Path | None = None,
                   name: str | None = None) -> LikertScale:
    """Numeric matrix CSV plus an optional JSON sidecar declaring item
    polarity and the response range:

        {"name": "...", "reverse_coded": [false, true, ...],
         "scale_min": 1, "scale_max": 7}
    """
    header, rows = _read_csv(path)
    try:
        items = [[float(cell) for cell in row] for row in rows]
    except ValueError as exc:
        raise ValidationError({"csv": f"non-numeric value: {exc}"}) from exc
    meta: dict = {}
    if sidecar is not None:
        meta = json.loads(Path(sidecar).read_text(encoding="utf-8"))
    reverse = meta.get("reverse_coded", [False] * len(header))
    if len(reverse) != len(header):
        raise ValidationError({"sidecar": "reverse_coded length != column count"})
    scale = LikertScale(
        name=name or meta.get("name", Path(path).stem),
        items=items,
        reverse_coded=[bool(flag) for flag in reverse],
        scale_min=int(meta.get("scale_min", 1)),
        scale_max=int(meta.get("scale_max", 7)),
    )
    scale.validate()
    return scale


def load_contingency_csv(path: str | Path) -> ContingencyTable:
    """First row: column labels (leading cell names the row variable);
    following rows: row label then the counts."""
    header, rows = _read_csv(path)
    col_labels = [cell.strip() for cell in header[1:]]
    row_labels = []
    counts = []
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise ValidationError({f"row{r}": "column count mismatch"})
        row_labels.append(row[0].strip())
        try:
            counts.append([int(cell) for cell in row[1:]])
        except ValueError as exc:
            raise ValidationError({f"row{r}": f"non-integer count: {exc}"}) from exc
    table = ContingencyTable(counts=counts, row_labels=row_labels, col_labels=col_labels)
    table.validate()
    return table
