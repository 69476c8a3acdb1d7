"""Entity-level precision, recall, and F1 over exact span-set matches."""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus.documents import Document
from .linking.decode import Prediction


@dataclass(frozen=True)
class LabelCounts:
    gold: int = 0
    predicted: int = 0
    correct: int = 0


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    counts: LabelCounts
    per_label: dict[str, dict] = field(default_factory=dict, hash=False)

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "counts": {
                "gold": self.counts.gold,
                "predicted": self.counts.predicted,
                "correct": self.counts.correct,
            },
            "per_label": self.per_label,
        }


def _prf(gold: int, predicted: int, correct: int) -> tuple[float, float, float]:
    precision = correct / predicted if predicted else 0.0
    recall = correct / gold if gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def evaluate_predictions(docs: list[Document], predictions: dict[str, Prediction]) -> Metrics:
    """Score predictions against gold value entities.

    A prediction is correct iff its label and full ordered span set exactly
    match a gold value entity; duplicates of one (label, spans) count once.
    Key spans are carried in predictions but never scored.
    """
    gold_n: dict[str, int] = {}
    pred_n: dict[str, int] = {}
    correct_n: dict[str, int] = {}
    for doc in docs:
        gold_by_label: dict[str, set] = {}
        for _, entity in doc.value_entities():
            gold_by_label.setdefault(entity.label, set()).add(tuple(entity.spans))
        pred = predictions.get(doc.id)
        pred_by_label: dict[str, set] = {}
        if pred is not None:
            for label, entities in pred.answers.items():
                bucket = pred_by_label.setdefault(label, set())
                for e in entities:
                    bucket.add(tuple(e.spans))
        for label in set(gold_by_label) | set(pred_by_label):
            gold_set = gold_by_label.get(label, set())
            pred_set = pred_by_label.get(label, set())
            gold_n[label] = gold_n.get(label, 0) + len(gold_set)
            pred_n[label] = pred_n.get(label, 0) + len(pred_set)
            correct_n[label] = correct_n.get(label, 0) + len(gold_set & pred_set)

    per_label = {}
    for label in sorted(set(gold_n) | set(pred_n)):
        g, p, c = gold_n.get(label, 0), pred_n.get(label, 0), correct_n.get(label, 0)
        precision, recall, f1 = _prf(g, p, c)
        per_label[label] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "gold": g,
            "predicted": p,
            "correct": c,
        }
    total_gold = sum(gold_n.values())
    total_pred = sum(pred_n.values())
    total_correct = sum(correct_n.values())
    precision, recall, f1 = _prf(total_gold, total_pred, total_correct)
    return Metrics(
        precision=precision,
        recall=recall,
        f1=f1,
        counts=LabelCounts(gold=total_gold, predicted=total_pred, correct=total_correct),
        per_label=per_label,
    )
