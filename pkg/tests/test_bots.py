import math

from hypothesis import given
from hypothesis import strategies as st
import pytest

from topiknet.bots import (
    EXHAUSTED, MAX_ATTEMPTS, NOT_AUTHORIZED, NOT_FOUND, PENDING, SCORED, AccountScore,
    advance_retry, classify, format_scores, parse_scores, run_retry_loop, scoring_eta_minutes,
    summarize,
)
from topiknet.errors import ParseError


@pytest.mark.parametrize("score, label", [
    (0.0, "nonbot"), (0.5, "nonbot"), (0.51, "bot"), (0.5000001, "bot"), (1.0, "bot"),
])
def test_classify(score, label):
    assert classify(score) == label


@pytest.mark.parametrize("bad", [-0.01, 1.01, math.nan, math.inf])
def test_classify_rejects(bad):
    with pytest.raises(ValueError):
        classify(bad)


@given(st.floats(0, 1), st.floats(0, 1))
def test_classify_monotone(a, b):
    lo, hi = min(a, b), max(a, b)
    if classify(lo) == "bot":
        assert classify(hi) == "bot"


def test_retry_not_authorized_first_run():
    s = advance_retry(AccountScore("a"), NOT_AUTHORIZED)
    assert (s.status, s.attempts) == (NOT_AUTHORIZED, 2)


def test_retry_exhausts_after_fourth_run():
    s = advance_retry(AccountScore("a", None, NOT_AUTHORIZED, 4), NOT_AUTHORIZED)
    assert s.status == EXHAUSTED and s.attempts == 4


@pytest.mark.parametrize("attempt", [1, 2, 3, 4])
def test_retry_score_any_attempt(attempt):
    s = advance_retry(AccountScore("a", None, PENDING, attempt), 0.2)
    assert (s.status, s.score) == (SCORED, 0.2)


def test_retry_not_found_is_terminal():
    s = advance_retry(AccountScore("a"), NOT_FOUND)
    assert s.status == NOT_FOUND
    with pytest.raises(ValueError):
        advance_retry(s, 0.3)


outcome = st.one_of(st.sampled_from([NOT_AUTHORIZED, NOT_FOUND]), st.floats(0, 1))


@given(st.lists(outcome, min_size=MAX_ATTEMPTS, max_size=MAX_ATTEMPTS))
def test_retry_loop_terminates(script):
    rec, steps = run_retry_loop("acc", lambda account, attempt: script[attempt - 1])
    assert steps <= 4
    assert rec.status in (SCORED, NOT_FOUND, EXHAUSTED)


def test_always_erroring_account():
    rec, steps = run_retry_loop("acc", lambda a, i: NOT_AUTHORIZED)
    assert (rec.status, steps, rec.attempts) == (EXHAUSTED, 4, 4)


def test_summary_small():
    scores = [AccountScore("a", 0.2, SCORED), AccountScore("b", 0.6, SCORED),
              AccountScore("c", 0.9, SCORED), AccountScore("d", None, EXHAUSTED, 4)]
    s = summarize(scores)
    assert (s.n_nonbots, s.n_bots, s.n_unclassified) == (1, 2, 1)


def test_summary_all_zero():
    s = summarize([AccountScore(str(i), 0.0, SCORED) for i in range(10)])
    assert s.n_bots == 0
    counts = [c for _, c in s.histogram]
    assert counts[0] == 10 and sum(counts) == 10


def test_histogram_edges():
    s = summarize([AccountScore("a", 1.0, SCORED), AccountScore("b", 0.05, SCORED),
                   AccountScore("c", 0.5, SCORED)])
    hist = dict(s.histogram)
    assert len(s.histogram) == 20
    assert hist[0.95] == 1 and hist[0.05] == 1 and hist[0.5] == 1


def test_summary_fixture(fixtures):
    path = fixtures / "scores_1000.tsv"
    # independent count over the raw rows
    bots = nonbots = other = 0
    for line in path.read_text().splitlines()[1:]:
        value = line.split("\t")[1]
        try:
            x = float(value)
        except ValueError:
            other += 1
            continue
        if x > 0.5:
            bots += 1
        else:
            nonbots += 1
    s = summarize(parse_scores(path))
    assert (s.n_bots, s.n_nonbots, s.n_unclassified) == (bots, nonbots, other)
    assert s.n_bots + s.n_nonbots + s.n_unclassified == 1000
    assert sum(c for _, c in s.histogram) == bots + nonbots


@given(st.lists(st.one_of(st.none(), st.floats(0, 1)), max_size=60))
def test_summary_partition(values):
    scores = [AccountScore(str(i), v, SCORED if v is not None else EXHAUSTED)
              for i, v in enumerate(values)]
    s = summarize(scores)
    assert s.n_bots + s.n_nonbots + s.n_unclassified == len(values)
    assert sum(c for _, c in s.histogram) == s.n_scored


def test_bad_bin_width():
    with pytest.raises(ValueError):
        summarize([], bin_width=0.3)


def test_score_file_round_trip(fixtures, tmp_path):
    scores = parse_scores(fixtures / "scores_1000.tsv")
    out = tmp_path / "s.tsv"
    out.write_text(format_scores(scores))
    assert parse_scores(out) == scores


@pytest.mark.parametrize("body", [
    "a\t0.3\na\t0.4\n",
    "a\t1.7\n",
    "a\tmaybe\n",
    "a\t0.3\tlots\n",
])
def test_score_file_errors(tmp_path, body):
    f = tmp_path / "s.tsv"
    f.write_text(body)
    with pytest.raises(ParseError):
        parse_scores(f)


def test_eta():
    assert scoring_eta_minutes(180) == 15
    assert scoring_eta_minutes(181) == 30
