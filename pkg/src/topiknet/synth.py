"""Seeded synthetic corpus shaped like the real inputs (publications,
tweets, bot scores), small enough to run the whole pipeline in seconds."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .bots import AccountScore, EXHAUSTED, SCORED, format_scores
from .ingest import Publication, Tweet, format_publications_tsv, format_tweets_jsonl

TOPICS = {
    "pain": (
        ["Pain management", "Chronic pain", "Postoperative pain", "Neuropathic pain",
         "Acute pain", "Analgesia", "Analgesics", "Cancer pain", "Palliative care",
         "Morphine", "Fentanyl", "Ketamine", "Nerve block", "Anesthesia", "Tramadol",
         "Opioid-sparing", "Hyperalgesia", "Constipation", "Pain", "Surgery"],
        ["PAIN", "CHRONICPAIN", "PALLIATIVECARE", "ANESTHESIA", "PAINMANAGEMENT",
         "CANCER", "SURGERY", "PAINEVIDENCE", "COCHRANE", "MEDED"],
    ),
    "misuse": (
        ["Opioid use disorder", "Overdose", "Naloxone", "Buprenorphine", "Methadone",
         "Heroin", "Harm reduction", "Addiction", "Treatment", "Drug abuse",
         "Substance abuse", "Opioid abuse", "Injection drug use", "HIV", "Hepatitis C",
         "Fentanyl analogs", "Dependence", "Withdrawal", "Mortality", "Epidemic"],
        ["OPIOIDCRISIS", "OVERDOSE", "NALOXONE", "HARMREDUCTION", "ADDICTION",
         "RECOVERY", "PWID", "SUD", "IDU", "OPIOIDEPIDEMIC"],
    ),
    "prescribing": (
        ["Opioid prescribing", "Prescription drugs", "Prescription opioid",
         "Prescribing", "Primary care", "Policy", "Prescription drug monitoring",
         "Guidelines", "Emergency department", "Opioid stewardship", "Dentistry",
         "Medicaid", "Cannabis", "Marijuana", "Pharmacy", "Tapering", "Misuse",
         "Epidemiology", "Health policy", "Opioid epidemic"],
        ["OPIOIDS", "PDMP", "POLICY", "PHARMACY", "CANNABIS", "HEALTHPOLICY",
         "PRIMARYCARE", "PUBLICHEALTH", "CDC", "MEDTWITTER"],
    ),
    "neuro": (
        ["Opioid receptor", "Mu opioid receptor", "Dopamine", "Dynorphin",
         "Self-administration", "Reward", "Cocaine", "Alcohol", "Stress", "Anxiety",
         "Depression", "Conditioned place preference", "Nucleus accumbens", "Kappa opioid receptor",
         "Tolerance", "Endorphins", "Rat", "Mice", "Morphine", "Naltrexone"],
        ["NEUROSCIENCE", "ADDICTION", "SCIENCE", "DOPAMINE", "MENTALHEALTH",
         "RESEARCH", "OPENACCESS", "BRAIN", "PHARMACOLOGY", "ALCOHOL"],
    ),
}
# long tails of rare terms so that top-N cuts differ between variants
TAIL_KEYWORDS = {t: [f"{t.capitalize()} topic {i}" for i in range(40)] for t in TOPICS}
TAIL_HASHTAGS = {t: [f"{t.upper()}{i}" for i in range(30)] for t in TOPICS}
GENERAL_KEYWORDS = ["Opioid", "Opioids", "Opiates", "Opiate", "Pain", "Addiction", "Abuse",
                    "Treatment", "Narcotics", "Narcotic", "Analgesic", "Overdose"]
GENERAL_HASHTAGS = ["OPIOIDS", "OPIOID", "PAIN", "SCIENCE", "HEALTH"]

TITLE_TEMPLATES = [
    "{drug} and {kw} in adults: a cohort study",
    "Opioid {kw} trends in the United States",
    "Effects of {drug} on {kw}",
    "Opiate exposure and {kw}",
    "{kw} among patients receiving opioids",
]
DRUGS = ["Morphine", "Fentanyl", "Tramadol", "Methadone", "Buprenorphine", "Oxycodone",
         "Hydrocodone", "Codeine", "Heroin", "Tapentadol"]


@dataclass
class DemoCorpus:
    publications: list
    tweets: list
    scores: list

    def write(self, out_dir) -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "publications": out / "publications.tsv",
            "tweets": out / "tweets.jsonl",
            "scores": out / "scores.tsv",
        }
        paths["publications"].write_text(format_publications_tsv(self.publications), encoding="utf-8")
        paths["tweets"].write_text(format_tweets_jsonl(self.tweets), encoding="utf-8")
        paths["scores"].write_text(format_scores(self.scores), encoding="utf-8")
        return paths


def _zipf_pick(rng: random.Random, items, s=1.1):
    weights = [1.0 / (r + 1) ** s for r in range(len(items))]
    return rng.choices(items, weights)[0]


def generate(seed: int = 20, n_pubs: int = 200, n_accounts: int = 500,
             target_tweets: int = 2200) -> DemoCorpus:
    rng = random.Random(seed)
    topic_names = sorted(TOPICS)
    pubs: list[Publication] = []
    pub_topic: dict[str, str] = {}

    n_distractors = max(1, n_pubs // 10)
    for i in range(n_pubs - n_distractors):
        topic = rng.choice(topic_names)
        kws_pool, _ = TOPICS[topic]
        n_kw = rng.randint(4, 9)
        kws = []
        while len(kws) < n_kw:
            r = rng.random()
            if r < 0.55:
                kw = _zipf_pick(rng, kws_pool)
            elif r < 0.8:
                kw = rng.choice(TAIL_KEYWORDS[topic])
            else:
                kw = _zipf_pick(rng, GENERAL_KEYWORDS)
            if kw not in kws:
                kws.append(kw)
        if rng.random() < 0.05:
            kws = []
        template = rng.choice(TITLE_TEMPLATES)
        title = template.format(drug=rng.choice(DRUGS), kw=kws_pool[rng.randrange(len(kws_pool))].lower())
        topic_terms = ("opioid analgesic",) if rng.random() < 0.8 else ("pain relief",)
        uid = f"WOS:{i:06d}"
        pubs.append(Publication(
            uid=uid, title=title, year=rng.randint(2011, 2019), doi=f"10.9999/demo.{i}",
            topic_terms=frozenset(topic_terms), author_keywords=tuple(kws),
            news_mentions=rng.choice([0, 0, 0, 1, 1, 2, 3, 5]),
            language="English", doc_type=rng.choice(["Article", "Article", "Review"]),
        ))
        pub_topic[uid] = topic

    distractor_kinds = [
        dict(title="Oxy-fuel combustion modeling in coal boilers"),
        dict(title="Opioid receptor signalling in zebrafish", language="German"),
        dict(title="Opioid use in dental practice", year=2009),
        dict(title="Opioid prescribing: a reply", doc_type="Letter"),
        dict(title="Tramadol pharmacokinetics in horses", topic_terms=frozenset({"equine medicine"})),
    ]
    for d in range(n_distractors):
        base = dict(
            uid=f"WOS:X{d:05d}", year=2015, doi=None, topic_terms=frozenset(),
            author_keywords=("Combustion", "Pain"), news_mentions=1,
        )
        base.update(distractor_kinds[d % len(distractor_kinds)])
        pubs.append(Publication(**base))
    rng.shuffle(pubs)

    accounts = [f"user{a:04d}" for a in range(n_accounts)]
    scores: list[AccountScore] = []
    for acc in accounts:
        r = rng.random()
        if r < 0.03:
            scores.append(AccountScore(acc, None, EXHAUSTED, 4))
        else:
            s = rng.betavariate(1.5, 4) if rng.random() < 0.55 else rng.betavariate(4, 1.5)
            scores.append(AccountScore(acc, round(s, 4), SCORED, rng.choice([1, 1, 1, 2])))

    tweets: list[Tweet] = []
    tweetable = [p for p in pubs if p.uid in pub_topic]
    per_pub = target_tweets / len(tweetable)
    tid = 0
    for p in tweetable:
        n_t = int(rng.expovariate(1.0 / per_pub))
        _, tags_pool = TOPICS[pub_topic[p.uid]]
        fans = rng.sample(accounts, 6)
        for _ in range(n_t):
            acc = rng.choice(fans) if rng.random() < 0.6 else rng.choice(accounts)
            tags = []
            for _ in range(rng.randint(0, 4)):
                r = rng.random()
                if r < 0.55:
                    tag = _zipf_pick(rng, tags_pool)
                elif r < 0.8:
                    tag = rng.choice(TAIL_HASHTAGS[pub_topic[p.uid]])
                else:
                    tag = rng.choice(GENERAL_HASHTAGS)
                tags.append("#" + (tag if rng.random() < 0.7 else tag.lower()))
            length = rng.randint(20, 90) if rng.random() < 0.05 else rng.randint(91, 280)
            tweets.append(Tweet(f"T{tid:07d}", p.uid, acc, tuple(tags), length))
            tid += 1
    for k in range(3):
        tweets.append(Tweet(f"T{tid + k:07d}", "WOS:MISSING", accounts[k], ("#PAIN",), 140))
    return DemoCorpus(pubs, tweets, scores)
