"""Input parsing, the opioid query evaluator, corpus assembly and the nine
document-set variants."""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .bots import BOT_THRESHOLD, AccountScore, classify
from .errors import EmptyVariantError, ParseError
from .terms import RuleSet, Term, apply_merge_rules, canonicalize_hashtag, canonicalize_keyword

log = logging.getLogger(__name__)

KW_SEP = "; "
PUB_FIELDS = (
    "uid", "doi", "title", "year", "author_keywords", "news_mentions",
    "language", "doc_type", "topic_terms",
)


@dataclass(frozen=True)
class Publication:
    uid: str
    title: str
    year: int
    doi: str | None = None
    abstract: str | None = None
    topic_terms: frozenset = frozenset()
    author_keywords: tuple = ()
    news_mentions: int = 0
    language: str = "English"
    doc_type: str = "Article"


@dataclass(frozen=True)
class Tweet:
    tweet_id: str
    pub_uid: str
    account: str
    hashtags: tuple = ()
    raw_length: int = 0


# -- parsing --------------------------------------------------------------

def _split_list(value: str) -> tuple:
    if not value or not value.strip():
        return ()
    return tuple(p.strip() for p in value.split(";") if p.strip())


def _pub_from_fields(rec: Mapping, path, lineno) -> Publication:
    for name in ("uid", "title", "year"):
        if rec.get(name) in (None, ""):
            raise ParseError(path, lineno, name, "missing required value")
    try:
        year = int(rec["year"])
    except (TypeError, ValueError):
        raise ParseError(path, lineno, "year", f"not an integer: {rec['year']!r}") from None
    news = rec.get("news_mentions") or 0
    try:
        news = int(news)
    except (TypeError, ValueError):
        raise ParseError(path, lineno, "news_mentions", f"not an integer: {news!r}") from None
    if news < 0:
        raise ParseError(path, lineno, "news_mentions", "negative count")
    kws = rec.get("author_keywords", rec.get("keywords", ()))
    kws = _split_list(kws) if isinstance(kws, str) else tuple(kws or ())
    topic = rec.get("topic_terms", ())
    topic = _split_list(topic) if isinstance(topic, str) else tuple(topic or ())
    return Publication(
        uid=str(rec["uid"]),
        title=str(rec["title"]),
        year=year,
        doi=rec.get("doi") or None,
        abstract=rec.get("abstract") or None,
        topic_terms=frozenset(topic),
        author_keywords=kws,
        news_mentions=news,
        language=rec.get("language") or "English",
        doc_type=rec.get("doc_type") or "Article",
    )


def parse_publications(path: str | Path, format: str | None = None) -> list[Publication]:
    """Read publications from TSV or JSON lines, preserving file order.

    TSV columns follow ``PUB_FIELDS``; trailing columns may be omitted and a
    header row starting with ``uid`` is skipped. Keywords are kept raw.
    """
    path = Path(path)
    if format is None:
        format = "json-lines" if path.suffix in (".jsonl", ".json") else "tsv"
    pubs: list[Publication] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if format == "tsv":
                cols = line.split("\t")
                if lineno == 1 and cols[0] == "uid":
                    continue
                if len(cols) < 4:
                    missing = PUB_FIELDS[len(cols)]
                    raise ParseError(path, lineno, missing, "missing column")
                rec = dict(zip(PUB_FIELDS, cols))
            elif format == "json-lines":
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(path, lineno, "<json>", str(exc)) from None
            else:
                raise ValueError(f"unknown publication format {format!r}")
            pub = _pub_from_fields(rec, path, lineno)
            if pub.uid in seen:
                raise ParseError(path, lineno, "uid", f"duplicate uid {pub.uid!r}")
            seen.add(pub.uid)
            pubs.append(pub)
    return pubs


def format_publications_tsv(pubs: Iterable[Publication]) -> str:
    lines = ["\t".join(PUB_FIELDS)]
    for p in pubs:
        lines.append("\t".join([
            p.uid, p.doi or "", p.title, str(p.year), KW_SEP.join(p.author_keywords),
            str(p.news_mentions), p.language, p.doc_type, KW_SEP.join(sorted(p.topic_terms)),
        ]))
    return "\n".join(lines) + "\n"


def parse_tweets(path: str | Path) -> list[Tweet]:
    path = Path(path)
    out: list[Tweet] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, "<json>", str(exc)) from None
            for name in ("tweet_id", "pub_uid", "account"):
                if rec.get(name) in (None, ""):
                    raise ParseError(path, lineno, name, "missing required value")
            try:
                length = int(rec.get("raw_length", 0))
            except (TypeError, ValueError):
                raise ParseError(path, lineno, "raw_length", "not an integer") from None
            if length < 0:
                raise ParseError(path, lineno, "raw_length", "negative length")
            tid = str(rec["tweet_id"])
            if tid in seen:
                raise ParseError(path, lineno, "tweet_id", f"duplicate tweet_id {tid!r}")
            seen.add(tid)
            tags = rec.get("hashtags") or []
            if not isinstance(tags, list):
                raise ParseError(path, lineno, "hashtags", "expected an array")
            out.append(Tweet(tid, str(rec["pub_uid"]), str(rec["account"]), tuple(tags), length))
    return out


def format_tweets_jsonl(tweets: Iterable[Tweet]) -> str:
    return "".join(
        json.dumps({
            "tweet_id": t.tweet_id, "pub_uid": t.pub_uid, "account": t.account,
            "hashtags": list(t.hashtags), "raw_length": t.raw_length,
        }, ensure_ascii=False) + "\n"
        for t in tweets
    )


# -- query ----------------------------------------------------------------

CORE_TITLE_TERMS = ("Opiate*", "Opioid*")
EXTENDED_TITLE_TERMS = (
    "Narcotic*", "Morphine", "Heroin", "Suboxone", "Subutex", "Kadian", "Avinza",
    "Diamorphine", "Fentanyl", "Remifentanil", "Alfentanil", "Meperidine", "Pethidine",
    "Tramadol", "Ketobemidone", "Hydrocodone", "Vicodin", "Hydromorphone", "Methadone",
    "Oxycodone", "OxyContin", "Percocet", "Oxymorphone", "Opana", "Tapentadol", "Codeine",
    "Buprenorphine", "Butrans", "Belbuca", "Propoxyphene",
)
# dropped during query design: too few hits or irrelevant matches
EXCLUDED_SLANG = frozenset({"percs", "vikes", "oxy"})

_TOKEN = re.compile(r"[^\W_]+")
_PATTERN = re.compile(r"[^\W_]+\*?")


def tokenize(text: str) -> list[str]:
    """Case-folded alphanumeric tokens; hyphens, underscores and punctuation split."""
    return [t.casefold() for t in _TOKEN.findall(text)]


@dataclass(frozen=True)
class OpioidQuery:
    title_terms_core: frozenset = frozenset(CORE_TITLE_TERMS)
    title_terms_extended: frozenset = frozenset(EXTENDED_TITLE_TERMS)
    topic_terms: frozenset = frozenset(CORE_TITLE_TERMS)
    allowed_languages: frozenset = frozenset({"English"})
    allowed_doc_types: frozenset = frozenset({"Article", "Review"})
    year_range: tuple = (2011, 2019)

    def __post_init__(self):
        for pat in self.title_terms_core | self.title_terms_extended | self.topic_terms:
            if not _PATTERN.fullmatch(pat):
                raise ValueError(f"invalid query pattern {pat!r}")
            if pat.rstrip("*").casefold() in EXCLUDED_SLANG:
                raise ValueError(f"excluded slang term in query: {pat!r}")


def _compile(patterns) -> tuple[frozenset, tuple]:
    exact = frozenset(p.casefold() for p in patterns if not p.endswith("*"))
    prefixes = tuple(sorted(p[:-1].casefold() for p in patterns if p.endswith("*")))
    return exact, prefixes


def _matches(tokens: Iterable[str], patterns) -> bool:
    exact, prefixes = _compile(patterns)
    return any(t in exact or t.startswith(prefixes) for t in tokens)


def evaluate_query(pub: Publication, q: OpioidQuery | None = None) -> bool:
    q = q or OpioidQuery()
    langs = {x.casefold() for x in q.allowed_languages}
    types = {x.casefold() for x in q.allowed_doc_types}
    if pub.language.casefold() not in langs or pub.doc_type.casefold() not in types:
        return False
    if not q.year_range[0] <= pub.year <= q.year_range[1]:
        return False
    title = tokenize(pub.title)
    if _matches(title, q.title_terms_core):
        return True
    if not _matches(title, q.title_terms_extended):
        return False
    topic = [tok for text in pub.topic_terms for tok in tokenize(text)]
    return _matches(topic, q.topic_terms)


AVAILABILITY_THRESHOLD = 90


def filter_available(t: Tweet, threshold: int = AVAILABILITY_THRESHOLD) -> bool:
    return t.raw_length > threshold


# -- corpus ---------------------------------------------------------------

MISSING_SCORE_POLICIES = ("unclassified", "nonbot", "bot")


@dataclass(frozen=True)
class CorpusConfig:
    availability_threshold: int = AVAILABILITY_THRESHOLD
    min_accounts: int = 2
    bot_threshold: float = BOT_THRESHOLD
    missing_score_policy: str = "unclassified"


@dataclass
class Corpus:
    """Query-matching publications with their available tweets attached."""

    publications: list[Publication]
    tweets: dict[str, list[Tweet]]  # pub uid -> available tweets, file order
    account_labels: dict[str, str | None]  # 'bot' / 'nonbot' / None (unclassified)
    accounts_all: dict[str, int]
    accounts_nonbot: dict[str, int]
    config: CorpusConfig = field(default_factory=CorpusConfig)
    n_input_publications: int = 0
    n_tweets_total: int = 0
    n_tweets_available: int = 0
    n_tweets_unavailable: int = 0
    n_tweets_unknown_pub: int = 0

    def is_nonbot(self, account: str) -> bool:
        return self.account_labels.get(account) == "nonbot"

    def tweeted(self, nonbot_only: bool = False) -> list[Publication]:
        counts = self.accounts_nonbot if nonbot_only else self.accounts_all
        k = self.config.min_accounts
        return [p for p in self.publications if counts[p.uid] >= k]


def _label_accounts(scores, cfg: CorpusConfig, accounts: Iterable[str]) -> dict[str, str | None]:
    by_account: dict[str, AccountScore] = {}
    if isinstance(scores, Mapping):
        by_account = dict(scores)
    else:
        by_account = {s.account: s for s in scores}
    missing_label = {"unclassified": None, "nonbot": "nonbot", "bot": "bot"}[cfg.missing_score_policy]
    labels: dict[str, str | None] = {}
    for acc in accounts:
        rec = by_account.get(acc)
        if rec is None:
            labels[acc] = missing_label
        elif rec.score is None:
            labels[acc] = None
        else:
            labels[acc] = classify(rec.score, cfg.bot_threshold)
    return labels


def build_corpus(
    pubs: Sequence[Publication],
    tweets: Sequence[Tweet],
    scores,
    q: OpioidQuery | None = None,
    config: CorpusConfig | None = None,
) -> Corpus:
    cfg = config or CorpusConfig()
    if cfg.missing_score_policy not in MISSING_SCORE_POLICIES:
        raise ValueError(f"unknown missing-score policy {cfg.missing_score_policy!r}")
    known = {p.uid for p in pubs}
    matched = [p for p in pubs if evaluate_query(p, q)]
    matched_uids = {p.uid for p in matched}

    attached: dict[str, list[Tweet]] = {p.uid: [] for p in matched}
    available = unavailable = unknown = 0
    for t in tweets:
        if t.pub_uid not in known:
            unknown += 1
            continue
        if not filter_available(t, cfg.availability_threshold):
            unavailable += 1
            continue
        available += 1
        if t.pub_uid in matched_uids:
            attached[t.pub_uid].append(t)
    if unknown:
        log.warning("dropped %d tweets referencing unknown publications", unknown)

    accounts = sorted({t.account for ts in attached.values() for t in ts})
    labels = _label_accounts(scores, cfg, accounts)
    all_counts = {uid: len({t.account for t in ts}) for uid, ts in attached.items()}
    nonbot_counts = {
        uid: len({t.account for t in ts if labels.get(t.account) == "nonbot"})
        for uid, ts in attached.items()
    }
    return Corpus(
        publications=matched,
        tweets=attached,
        account_labels=labels,
        accounts_all=all_counts,
        accounts_nonbot=nonbot_counts,
        config=cfg,
        n_input_publications=len(pubs),
        n_tweets_total=len(tweets),
        n_tweets_available=available,
        n_tweets_unavailable=unavailable,
        n_tweets_unknown_pub=unknown,
    )


# -- variants -------------------------------------------------------------

VARIANTS = ("V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8", "V9")
VARIANT_UNIT = {
    "V1": "publication", "V2": "publication", "V3": "publication", "V4": "publication",
    "V5": "publication", "V6": "tweet", "V7": "tweet", "V8": "linked-pair", "V9": "linked-pair",
}
VARIANT_TITLES = {
    "V1": "author keywords, all query-matching publications",
    "V2": "author keywords, publications tweeted by >=2 accounts",
    "V3": "author keywords, publications tweeted by >=2 non-bot accounts",
    "V4": "author keywords, tweeted by >=2 accounts and mentioned in news",
    "V5": "author keywords, tweeted by >=2 non-bot accounts and mentioned in news",
    "V6": "hashtags of tweets, all accounts",
    "V7": "hashtags of tweets, non-bot accounts",
    "V8": "author keywords + hashtags, all accounts",
    "V9": "author keywords + hashtags, non-bot accounts",
}


@dataclass(frozen=True)
class DocumentSet:
    variant: str
    unit: str
    docs: tuple  # ((doc_id, frozenset[Term]), ...)

    @property
    def n_nonempty(self) -> int:
        return sum(1 for _, terms in self.docs if terms)

    def vocabulary(self) -> set:
        return {t for _, terms in self.docs for t in terms}


def _terms(raw: Iterable[str], canon, rules: RuleSet | None) -> frozenset:
    out = set()
    for r in raw:
        try:
            t = canon(r)
        except ValueError:
            continue
        out.add(apply_merge_rules(t, rules) if rules is not None else t)
    return frozenset(out)


def keyword_terms(p: Publication, rules: RuleSet | None = None) -> frozenset:
    return _terms(p.author_keywords, canonicalize_keyword, rules)


def hashtag_terms(t: Tweet, rules: RuleSet | None = None) -> frozenset:
    return _terms(t.hashtags, canonicalize_hashtag, rules)


def variant_publications(corpus: Corpus, variant: str) -> list[Publication]:
    """Publications whose keywords (or tweets) feed ``variant``."""
    if variant == "V1":
        return list(corpus.publications)
    # V7 keeps V6's publications and drops bot tweets; V9 pairs non-bot
    # tweets with publications that have >=2 non-bot accounts
    nonbot = variant in ("V3", "V5", "V9")
    pubs = corpus.tweeted(nonbot_only=nonbot)
    if variant in ("V4", "V5"):
        pubs = [p for p in pubs if p.news_mentions >= 1]
    return pubs


def variant_tweets(corpus: Corpus, variant: str, pub: Publication) -> list[Tweet]:
    ts = corpus.tweets[pub.uid]
    if variant in ("V7", "V9"):
        ts = [t for t in ts if corpus.is_nonbot(t.account)]
    return ts


def select_variant(corpus: Corpus, variant: str, rules: RuleSet | None = None) -> DocumentSet:
    """Build the document set for one of V1..V9 with canonical, merged terms."""
    if variant not in VARIANT_UNIT:
        raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")
    unit = VARIANT_UNIT[variant]
    pubs = variant_publications(corpus, variant)
    docs = []
    if unit == "publication":
        docs = [(p.uid, keyword_terms(p, rules)) for p in pubs]
    elif unit == "tweet":
        for p in pubs:
            docs.extend((t.tweet_id, hashtag_terms(t, rules)) for t in variant_tweets(corpus, variant, p))
    else:
        for p in pubs:
            kws = keyword_terms(p, rules)
            for t in variant_tweets(corpus, variant, p):
                docs.append((f"{p.uid}|{t.tweet_id}", kws | hashtag_terms(t, rules)))
    ds = DocumentSet(variant, unit, tuple(docs))
    if ds.n_nonempty == 0:
        raise EmptyVariantError(f"empty variant {variant}: no documents with terms")
    return ds


def corpus_summary(corpus: Corpus) -> dict:
    labels = Counter(
        "unclassified" if v is None else v for v in corpus.account_labels.values()
    )
    variants = {}
    for v in VARIANTS:
        if v == "V1":
            n_pubs = len(corpus.publications)
        else:
            n_pubs = len(variant_publications(corpus, v))
        variants[v] = {"publications": n_pubs, "available": n_pubs > 0}
    return {
        "publications_input": corpus.n_input_publications,
        "publications_matched": len(corpus.publications),
        "publications_with_keywords": sum(1 for p in corpus.publications if p.author_keywords),
        "tweets_total": corpus.n_tweets_total,
        "tweets_available": corpus.n_tweets_available,
        "tweets_unavailable": corpus.n_tweets_unavailable,
        "tweets_unknown_publication": corpus.n_tweets_unknown_pub,
        "tweets_attached": sum(len(ts) for ts in corpus.tweets.values()),
        "accounts": len(corpus.account_labels),
        "accounts_bot": labels.get("bot", 0),
        "accounts_nonbot": labels.get("nonbot", 0),
        "accounts_unclassified": labels.get("unclassified", 0),
        "variants": variants,
    }
