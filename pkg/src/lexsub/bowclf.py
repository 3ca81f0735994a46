"""Bag-of-words intent classifier for augmentation trend checks.

Deliberately simple: binary unigram presence into L2-regularized
logistic regression. The experiments here test the augmentation, not
the classifier.
"""

from __future__ import annotations

from typing import Sequence

from sklearn.feature_extraction.text import CountVectorizer
from sklearn.linear_model import LogisticRegression

from .augment import SlotUtterance


class BagOfWordsClassifier:
    def __init__(self, seed: int = 0, c: float = 1.0):
        self.vectorizer = CountVectorizer(
            tokenizer=str.split, preprocessor=None, lowercase=True, token_pattern=None, binary=True
        )
        self.model = LogisticRegression(C=c, max_iter=1000, random_state=seed)
        self._fitted = False

    @staticmethod
    def _texts(utterances: Sequence[SlotUtterance]) -> list[str]:
        return [" ".join(utt.tokens) for utt in utterances]

    def fit(self, utterances: Sequence[SlotUtterance]) -> "BagOfWordsClassifier":
        if not utterances:
            raise ValueError("cannot fit on an empty dataset")
        x = self.vectorizer.fit_transform(self._texts(utterances))
        self.model.fit(x, [utt.intent for utt in utterances])
        self._fitted = True
        return self

    def predict(self, utterances: Sequence[SlotUtterance]) -> list[str]:
        if not self._fitted:
            raise RuntimeError("classifier is not fitted")
        x = self.vectorizer.transform(self._texts(utterances))
        return list(self.model.predict(x))

    def accuracy(self, utterances: Sequence[SlotUtterance]) -> float:
        predictions = self.predict(utterances)
        hits = sum(1 for pred, utt in zip(predictions, utterances) if pred == utt.intent)
        return hits / len(utterances)
