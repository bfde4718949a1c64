"""Bot gate: threshold classification of ingested bot scores, the re-run
state machine for erroring accounts, and the score histogram summary."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ParseError

BOT_THRESHOLD = 0.5
MAX_RERUNS = 3
MAX_ATTEMPTS = 1 + MAX_RERUNS
RATE_ACCOUNTS = 180
RATE_WINDOW_MIN = 15

PENDING = "pending"
SCORED = "scored"
NOT_AUTHORIZED = "not-authorized"
NOT_FOUND = "not-found"
EXHAUSTED = "exhausted"
TERMINAL = frozenset({SCORED, NOT_FOUND, EXHAUSTED})


def classify(score: float, threshold: float = BOT_THRESHOLD) -> str:
    """'bot' iff score is strictly above the threshold."""
    if not isinstance(score, (int, float)) or not math.isfinite(score) or not 0.0 <= score <= 1.0:
        raise ValueError(f"bot score must be a finite number in [0, 1], got {score!r}")
    return "bot" if score > threshold else "nonbot"


@dataclass(frozen=True)
class AccountScore:
    account: str
    score: float | None = None
    status: str = PENDING
    attempts: int = 1

    def __post_init__(self):
        if (self.status == SCORED) != (self.score is not None):
            raise ValueError(f"{self.account}: score present iff status is scored")
        if not 1 <= self.attempts <= MAX_ATTEMPTS:
            raise ValueError(f"{self.account}: attempts must be in [1, {MAX_ATTEMPTS}]")

    @property
    def classified(self) -> bool:
        return self.status == SCORED

    def label(self, threshold: float = BOT_THRESHOLD) -> str | None:
        return classify(self.score, threshold) if self.status == SCORED else None


def advance_retry(s: AccountScore, outcome) -> AccountScore:
    """Record the outcome of run number ``s.attempts``.

    ``outcome`` is a float score, ``"not-authorized"`` or ``"not-found"``.
    A not-authorized run schedules another run until the budget of one
    initial run plus three re-runs is spent.
    """
    if s.status in TERMINAL:
        raise ValueError(f"{s.account}: cannot advance terminal record ({s.status})")
    if outcome == NOT_FOUND:
        return replace(s, status=NOT_FOUND)
    if outcome == NOT_AUTHORIZED:
        if s.attempts >= MAX_ATTEMPTS:
            return replace(s, status=EXHAUSTED)
        return replace(s, status=NOT_AUTHORIZED, attempts=s.attempts + 1)
    score = float(outcome)
    classify(score)  # range check
    return replace(s, score=score, status=SCORED)


def run_retry_loop(account: str, oracle) -> tuple[AccountScore, int]:
    """Drive one account through the state machine.

    ``oracle(account, attempt)`` returns the outcome of that run. Returns the
    final record and the number of transitions taken.
    """
    rec = AccountScore(account)
    steps = 0
    while rec.status not in TERMINAL:
        rec = advance_retry(rec, oracle(account, rec.attempts))
        steps += 1
    return rec, steps


@dataclass(frozen=True)
class BotSummary:
    n_bots: int
    n_nonbots: int
    n_unclassified: int
    bin_width: float
    histogram: tuple[tuple[float, int], ...]

    @property
    def n_scored(self) -> int:
        return self.n_bots + self.n_nonbots

    def to_dict(self) -> dict:
        return {
            "n_bots": self.n_bots,
            "n_nonbots": self.n_nonbots,
            "n_unclassified": self.n_unclassified,
            "n_total": self.n_scored + self.n_unclassified,
            "bin_width": self.bin_width,
        }

    def histogram_tsv(self) -> str:
        lines = ["bin_lower\tbin_upper\tcount"]
        for lo, count in self.histogram:
            lines.append(f"{lo!r}\t{round(lo + self.bin_width, 12)!r}\t{count}")
        return "\n".join(lines) + "\n"


def _n_bins(bin_width: float) -> int:
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    n = round(1.0 / bin_width)
    if n < 1 or abs(n * bin_width - 1.0) > 1e-9:
        raise ValueError(f"bin_width {bin_width} does not divide 1 evenly")
    return n


def score_bin(score: float, n_bins: int) -> int:
    # last bin is closed on the right so that 1.0 has a home
    return min(int(math.floor(score * n_bins + 1e-9)), n_bins - 1)


def summarize(
    scores: Iterable[AccountScore], bin_width: float = 0.05, threshold: float = BOT_THRESHOLD
) -> BotSummary:
    n_bins = _n_bins(bin_width)
    counts = [0] * n_bins
    bots = nonbots = unclassified = 0
    for s in scores:
        if s.status != SCORED:
            unclassified += 1
            continue
        if classify(s.score, threshold) == "bot":
            bots += 1
        else:
            nonbots += 1
        counts[score_bin(s.score, n_bins)] += 1
    hist = tuple((round(i / n_bins, 12), c) for i, c in enumerate(counts))
    return BotSummary(bots, nonbots, unclassified, bin_width, hist)


def scoring_eta_minutes(n_accounts: int) -> float:
    """Wall time for the external scorer at its documented rate limit."""
    return math.ceil(n_accounts / RATE_ACCOUNTS) * RATE_WINDOW_MIN


# -- score file -----------------------------------------------------------

_ERROR_TOKENS = {"ERROR": EXHAUSTED, "NOT_FOUND": NOT_FOUND}


def parse_scores(path: str | Path) -> list[AccountScore]:
    """Read ``account<TAB>score|ERROR<TAB>attempts`` rows (header optional)."""
    path = Path(path)
    out: list[AccountScore] = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if lineno == 1 and cols[0] == "account":
                continue
            if len(cols) < 2:
                raise ParseError(path, lineno, "score", "expected account<TAB>score<TAB>attempts")
            account = cols[0].strip()
            if not account:
                raise ParseError(path, lineno, "account", "empty account")
            if account in seen:
                raise ParseError(path, lineno, "account", f"duplicate account {account!r}")
            seen.add(account)
            try:
                attempts = int(cols[2]) if len(cols) > 2 and cols[2].strip() else 1
            except ValueError:
                raise ParseError(path, lineno, "attempts", f"not an integer: {cols[2]!r}") from None
            raw = cols[1].strip()
            try:
                if raw.upper() in _ERROR_TOKENS:
                    rec = AccountScore(account, None, _ERROR_TOKENS[raw.upper()], attempts)
                else:
                    score = float(raw)
                    classify(score)
                    rec = AccountScore(account, score, SCORED, attempts)
            except ValueError as exc:
                raise ParseError(path, lineno, "score", str(exc)) from None
            out.append(rec)
    return out


def format_scores(scores: Sequence[AccountScore]) -> str:
    lines = ["account\tscore\tattempts"]
    rev = {v: k for k, v in _ERROR_TOKENS.items()}
    for s in scores:
        value = repr(s.score) if s.status == SCORED else rev.get(s.status, "ERROR")
        lines.append(f"{s.account}\t{value}\t{s.attempts}")
    return "\n".join(lines) + "\n"
