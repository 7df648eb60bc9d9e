import datetime as dt
import random

import pytest

from sumlab.corpus import Document
from sumlab.dataset import Article

GREEK_WORDS = (
    "και το με για από που ένα της στις ημέρα χώρα κόσμος νερό πόλη θέμα "
    "κυβέρνηση εκλογές οικονομία πολιτισμός κοινωνία άνθρωποι παιδιά δρόμος "
    "σπίτι εργασία χρόνια μέτρα απόφαση υπουργός δήμος θάλασσα βουνό"
).split()


def make_text(rng: random.Random, n_words: int, vocab=GREEK_WORDS) -> str:
    return " ".join(rng.choice(vocab) for _ in range(n_words))


def make_sentences_text(rng: random.Random, n_sentences: int, words_per=6) -> str:
    return " ".join(
        make_text(rng, words_per).capitalize() + "." for _ in range(n_sentences)
    )


def make_document(text: str, source: str = "oscar") -> Document:
    return Document.from_text(text, source)


def make_article(rng: random.Random, url: str, category: str = "politics") -> Article:
    return Article(
        url=url,
        title=make_text(rng, rng.randint(3, 8)).capitalize(),
        abstract=make_sentences_text(rng, rng.randint(1, 2)),
        body=make_sentences_text(rng, rng.randint(4, 10)),
        category=category,
        date=dt.date(2020, 1, 1) + dt.timedelta(days=rng.randint(0, 1000)),
    )


@pytest.fixture
def rng():
    return random.Random(12345)
