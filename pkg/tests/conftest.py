import pytest

from qtcintent.data import LabeledUtterance

FILLERS = ["please", "the", "now", "today", "again"]


def keyword_corpus(per_class_train=20, per_class_test=10, classes=7):
    """Synthetic separable corpus: two distinctive keywords per class."""
    train, test = [], []
    for c in range(classes):
        kwa, kwb = f"alpha{c}", f"beta{c}"
        for i in range(per_class_train + per_class_test):
            tokens = [kwa, kwb, kwa, kwb, FILLERS[i % len(FILLERS)]]
            utt = LabeledUtterance(f"c{c}i{i}", tokens, f"intent{c}")
            (train if i < per_class_train else test).append(utt)
    return train, test


def write_tsv(path, utterances):
    with open(path, "w", encoding="utf-8") as fh:
        for u in utterances:
            fh.write(" ".join(u.tokens) + "\t" + u.label + "\n")


@pytest.fixture
def keyword_tsvs(tmp_path):
    """(train.tsv, test.tsv) paths for the 7-class keyword corpus."""
    train, test = keyword_corpus()
    train_path, test_path = tmp_path / "train.tsv", tmp_path / "test.tsv"
    write_tsv(train_path, train)
    write_tsv(test_path, test)
    return str(train_path), str(test_path)
