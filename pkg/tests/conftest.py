from __future__ import annotations

import json
import random

import pytest

from scisumm.entities import load_dictionaries, tag_paper
from scisumm.index import InvertedIndex
from scisumm.ingest import SectionDoc, parse_paper
from scisumm.textproc import load_stopwords, make_sentence

# Content vocabulary for synthetic papers. No stopwords, no abbreviation
# guard words, all lowercase so segmentation/tokenization stay trivial.
VOCAB = [
    "model", "training", "corpus", "attention", "encoder", "decoder", "layer",
    "embedding", "gradient", "token", "parser", "syntax", "semantics", "entity",
    "retrieval", "ranking", "index", "vector", "matrix", "kernel", "feature",
    "label", "classifier", "regression", "cluster", "graph", "node", "edge",
    "network", "neural", "transformer", "recurrent", "convolution", "pooling",
    "dropout", "baseline", "benchmark", "evaluation", "precision", "recall",
    "accuracy", "loss", "objective", "optimizer", "epoch", "batch", "sample",
    "dataset", "annotation", "alignment", "translation", "generation", "decoding",
    "inference", "pretraining", "finetuning", "distillation", "augmentation",
    "segmentation", "tagging",
]

ENTITY_PHRASES = [
    "We evaluate on SQuAD2.0 and report F1.",
    "Our approach targets question answering systems.",
    "Results on WMT14 improve BLEU significantly.",
    "The machine translation baseline uses beam search.",
    "We report F1 on the summarization benchmark.",
]

DICT_TSV = """# kind\tcanonical\taliases
Task\tquestion answering\tqa|question answering systems
Task\tmachine translation\tmt
Task\tsummarization\t
Dataset\tSQuAD2.0\tsquad
Dataset\tWMT14\t
Metric\tF1\tf1 score
Metric\tBLEU\t
"""


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture(scope="session")
def dict_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("dicts") / "entities.tsv"
    path.write_text(DICT_TSV)
    return str(path)


@pytest.fixture(scope="session")
def dictionary(dict_path):
    return load_dictionaries([dict_path])


def make_sentence_text(rng: random.Random, n_words: int | None = None) -> str:
    n = n_words or rng.randint(5, 12)
    words = [rng.choice(VOCAB) for _ in range(n)]
    return (" ".join(words)).capitalize() + "."


def make_paper_dict(rng: random.Random, idx: int, n_sections: int | None = None) -> dict:
    """One synthetic input-schema record with a unique topic word in the title."""
    topic = f"topic{idx:03d}"
    n_sections = n_sections or rng.randint(2, 4)
    sections = []
    for s in range(n_sections):
        n_sents = rng.randint(4, 10)
        sents = [make_sentence_text(rng) for _ in range(n_sents)]
        # topical anchor plus occasional entity mention
        sents[0] = f"The {topic} {sents[0][0].lower()}{sents[0][1:]}"
        if rng.random() < 0.5:
            sents.append(rng.choice(ENTITY_PHRASES))
        sections.append({"title": f"Section {s}", "depth": 1, "text": " ".join(sents)})
    title_words = [rng.choice(VOCAB) for _ in range(4)]
    return {
        "id": f"p{idx:03d}",
        "title": f"{topic} " + " ".join(title_words),
        "abstract": make_sentence_text(rng) + " " + make_sentence_text(rng),
        "authors": [f"Author {rng.randint(0, 30)}", f"Author {rng.randint(31, 60)}"],
        "venue": rng.choice(["ACL", "EMNLP", "NAACL", "ICLR"]),
        "year": rng.randint(2015, 2023),
        "source": rng.choice(["arxiv", "acl", "other"]),
        "sections": sections,
        "figures": [{"ref_id": "figure-1", "caption": "An architecture diagram."}],
    }


def make_corpus_dicts(n_papers: int, seed: int = 0) -> list[dict]:
    rng = random.Random(seed)
    return [make_paper_dict(rng, i) for i in range(n_papers)]


def build_index(corpus_dicts, stopwords, dictionary=None, **kwargs) -> InvertedIndex:
    index = InvertedIndex(stopwords=stopwords, **kwargs)
    for rec in corpus_dicts:
        paper = parse_paper(rec, stopwords)
        mentions = tag_paper(paper, dictionary) if dictionary else []
        index.index_paper(paper, mentions)
    index.freeze()
    return index


def write_corpus_file(path, corpus_dicts):
    with open(path, "w", encoding="utf-8") as f:
        for rec in corpus_dicts:
            f.write(json.dumps(rec) + "\n")
    return str(path)


def make_synthetic_section(
    rng: random.Random,
    n_sentences: int,
    vocab_size: int,
    min_len: int = 4,
    max_len: int = 12,
) -> SectionDoc:
    """A SectionDoc over a small random vocabulary, for optimizer tests."""
    vocab = [f"w{j}" for j in range(vocab_size)]
    sentences = []
    for i in range(n_sentences):
        toks = [rng.choice(vocab) for _ in range(rng.randint(min_len, max_len))]
        sentences.append(make_sentence(i, " ".join(toks), frozenset()))
    return SectionDoc(section_id=0, title="synthetic", text="", sentences=sentences)


@pytest.fixture(scope="session")
def corpus24(stopwords, dictionary):
    return build_index(make_corpus_dicts(24, seed=7), stopwords, dictionary)


@pytest.fixture(scope="session")
def corpus10(stopwords, dictionary):
    return build_index(make_corpus_dicts(10, seed=3), stopwords, dictionary)
