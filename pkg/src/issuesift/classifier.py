"""Linear text classification over preprocessed token lines.

Models are plain linear scorers (per-category weight vector plus bias) kept
in a portable JSON document, so externally trained models — e.g. logistic
regression weights — plug in as long as they speak the same file format.
Models never preprocess or tokenize: they score exactly the tokens given.
"""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import (
    EmptyCategory,
    EmptyCorpus,
    IoFailure,
    SchemaViolation,
    UnknownCategory,
    UnsupportedVersion,
)

FORMAT_VERSION = 1

# Category names the default model knows about. The set is intentionally
# partial (see the bundled model's metadata); users supply their own taxonomy
# by shipping their own model file.
DEFAULT_CATEGORIES = (
    "Observed Bug Behavior",
    "Workarounds",
    "Motivation",
    "Potential New Issues & Requests",
    "Solution Discussion",
    "Action on Issue",
    "Contribution & Commitment",
    "Usage",
    "Bug Reproduction",
    "Expected Behavior",
    "Social Discussion",
)


@dataclass(frozen=True)
class Taxonomy:
    """Ordered, unique category names. Order matters: ties break low-index."""

    categories: tuple[str, ...]

    def __post_init__(self):
        if not self.categories:
            raise ValueError("taxonomy must contain at least one category")
        seen = set()
        for name in self.categories:
            if not name:
                raise ValueError("category names must be non-empty")
            key = name.lower()
            if key in seen:
                raise ValueError(f"duplicate category name (case-insensitive): {name!r}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.categories)

    def __iter__(self):
        return iter(self.categories)

    def __contains__(self, name: str) -> bool:
        return name in self.categories

    def index_of(self, name: str) -> int:
        try:
            return self.categories.index(name)
        except ValueError:
            raise UnknownCategory(f"category {name!r} is not in the taxonomy") from None


def default_taxonomy() -> Taxonomy:
    return Taxonomy(DEFAULT_CATEGORIES)


@dataclass
class ModelFile:
    """Serialized linear classifier: taxonomy, vocabulary, weights, bias."""

    format_version: int
    taxonomy: Taxonomy
    vocabulary: dict[str, int]
    weights: list[list[float]]
    bias: list[float]
    metadata: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        """Check every structural invariant; raises SchemaViolation."""
        if self.format_version != FORMAT_VERSION:
            raise UnsupportedVersion(
                f"format_version {self.format_version!r} not supported (expected {FORMAT_VERSION})"
            )
        c = len(self.taxonomy)
        v = len(self.vocabulary)
        indexes = sorted(self.vocabulary.values())
        if indexes != list(range(v)):
            raise SchemaViolation("vocabulary", "indexes must cover 0..V-1 exactly once")
        for token in self.vocabulary:
            if not isinstance(token, str) or not token:
                raise SchemaViolation("vocabulary", f"bad token {token!r}")
        if len(self.weights) != c:
            raise SchemaViolation("weights", f"expected {c} rows, found {len(self.weights)}")
        for row_index, row in enumerate(self.weights):
            if len(row) != v:
                raise SchemaViolation(
                    "weights", f"row {row_index} has {len(row)} columns, expected {v}"
                )
            for value in row:
                if not isinstance(value, (int, float)) or not math.isfinite(value):
                    raise SchemaViolation("weights", f"non-finite value in row {row_index}")
        if len(self.bias) != c:
            raise SchemaViolation("bias", f"expected length {c}, found {len(self.bias)}")
        for value in self.bias:
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise SchemaViolation("bias", "non-finite value")
        for key, value in self.metadata.items():
            if not isinstance(key, str) or not isinstance(value, str):
                raise SchemaViolation("metadata", f"entries must be string/string, got {key!r}")


@dataclass(frozen=True)
class Prediction:
    """Chosen category plus the full log-score vector and a softmax confidence."""

    category: str
    scores: tuple[float, ...]
    confidence: float


@dataclass(frozen=True)
class LabeledCorpus:
    """Training examples: (tokens, category) pairs."""

    examples: tuple[tuple[tuple[str, ...], str], ...]

    def __post_init__(self):
        for tokens, category in self.examples:
            if not tokens:
                raise ValueError(f"example labeled {category!r} has no tokens")

    def __len__(self) -> int:
        return len(self.examples)


_TOP_LEVEL_FIELDS = {"format_version", "taxonomy", "vocabulary", "weights", "bias", "metadata"}


def _model_from_document(doc: object, source: str) -> ModelFile:
    if not isinstance(doc, dict):
        raise SchemaViolation("document", f"{source} is not a JSON object")
    missing = _TOP_LEVEL_FIELDS - doc.keys()
    if missing:
        raise SchemaViolation(sorted(missing)[0], "required field missing")
    extra = doc.keys() - _TOP_LEVEL_FIELDS
    if extra:
        raise SchemaViolation(sorted(extra)[0], "unexpected top-level field")
    version = doc["format_version"]
    if not isinstance(version, int) or version != FORMAT_VERSION:
        raise UnsupportedVersion(f"format_version {version!r} not supported")
    taxonomy_field = doc["taxonomy"]
    if not isinstance(taxonomy_field, list) or not all(isinstance(n, str) for n in taxonomy_field):
        raise SchemaViolation("taxonomy", "must be a list of strings")
    try:
        taxonomy = Taxonomy(tuple(taxonomy_field))
    except ValueError as exc:
        raise SchemaViolation("taxonomy", str(exc)) from None
    vocabulary = doc["vocabulary"]
    if not isinstance(vocabulary, dict) or not all(
        isinstance(i, int) and not isinstance(i, bool) for i in vocabulary.values()
    ):
        raise SchemaViolation("vocabulary", "must map tokens to integer indexes")
    weights_field = doc["weights"]
    if not isinstance(weights_field, list) or not all(isinstance(r, list) for r in weights_field):
        raise SchemaViolation("weights", "must be a list of rows")
    weights = [[float(x) for x in row] for row in weights_field]
    bias_field = doc["bias"]
    if not isinstance(bias_field, list):
        raise SchemaViolation("bias", "must be a list")
    bias = [float(x) for x in bias_field]
    metadata = doc["metadata"]
    if not isinstance(metadata, dict):
        raise SchemaViolation("metadata", "must be an object")
    model = ModelFile(
        format_version=version,
        taxonomy=taxonomy,
        vocabulary=dict(vocabulary),
        weights=weights,
        bias=bias,
        metadata=dict(metadata),
    )
    model.validate()
    return model


def load_model(path: str | Path) -> ModelFile:
    """Load and fully validate a model file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read model file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise SchemaViolation("document", f"not valid JSON: {exc}") from None
    return _model_from_document(doc, str(path))


def load_default_model() -> ModelFile:
    """The baseline model bundled with the package."""
    text = resources.files("issuesift").joinpath("data/baseline_model.json").read_text("utf-8")
    return _model_from_document(json.loads(text), "bundled baseline model")


def save_model(model: ModelFile, path: str | Path) -> None:
    """Write the canonical on-disk form: sorted keys, lossless number text.

    Two saves of the same model produce byte-identical files.
    """
    model.validate()
    doc = {
        "format_version": model.format_version,
        "taxonomy": list(model.taxonomy.categories),
        "vocabulary": model.vocabulary,
        "weights": [[float(x) for x in row] for row in model.weights],
        "bias": [float(x) for x in model.bias],
        "metadata": model.metadata,
    }
    text = json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2, allow_nan=False) + "\n"
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write model file {path}: {exc}") from exc


def train_baseline(
    corpus: LabeledCorpus,
    taxonomy: Taxonomy,
    alpha: float = 1.0,
    metadata: dict[str, str] | None = None,
) -> ModelFile:
    """Multinomial naive Bayes with add-alpha smoothing, in linear form.

    vocabulary: every distinct corpus token, sorted lexicographically.
    bias[c]    = ln(examples in class c / total examples)
    weights[c][t] = ln((count of t in c + alpha) / (tokens in c + alpha * V))
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if len(corpus) == 0:
        raise EmptyCorpus("cannot train on an empty corpus")
    class_examples: Counter[str] = Counter()
    token_counts: dict[str, Counter[str]] = {name: Counter() for name in taxonomy}
    vocabulary_set: set[str] = set()
    for tokens, category in corpus.examples:
        if category not in taxonomy:
            raise UnknownCategory(f"example labeled {category!r}, not in the taxonomy")
        class_examples[category] += 1
        token_counts[category].update(tokens)
        vocabulary_set.update(tokens)
    for name in taxonomy:
        if class_examples[name] == 0:
            raise EmptyCategory(f"category {name!r} has no training examples")
    vocabulary = {token: i for i, token in enumerate(sorted(vocabulary_set))}
    v = len(vocabulary)
    total = len(corpus)
    bias = [math.log(class_examples[name] / total) for name in taxonomy]
    weights = []
    for name in taxonomy:
        counts = token_counts[name]
        denominator = sum(counts.values()) + alpha * v
        weights.append(
            [math.log((counts[token] + alpha) / denominator) for token in vocabulary]
        )
    meta = {"trainer": "multinomial_naive_bayes", "alpha": repr(float(alpha))}
    if metadata:
        meta.update(metadata)
    model = ModelFile(
        format_version=FORMAT_VERSION,
        taxonomy=taxonomy,
        vocabulary=vocabulary,
        weights=weights,
        bias=bias,
        metadata=meta,
    )
    model.validate()
    return model


def predict_line(model: ModelFile, tokens) -> Prediction:
    """Score one token sequence; out-of-vocabulary tokens contribute nothing.

    Ties break toward the lowest taxonomy index. An empty token list is
    scored on the bias alone.
    """
    scores = list(model.bias)
    for token, count in Counter(tokens).items():
        index = model.vocabulary.get(token)
        if index is None:
            continue
        for c, row in enumerate(model.weights):
            scores[c] += row[index] * count
    best = 0
    for c in range(1, len(scores)):
        if scores[c] > scores[best]:
            best = c
    peak = scores[best]
    exps = [math.exp(s - peak) for s in scores]
    confidence = exps[best] / sum(exps)
    return Prediction(
        category=model.taxonomy.categories[best],
        scores=tuple(scores),
        confidence=confidence,
    )


def classify_lines(model: ModelFile, lines) -> list[tuple[object, Prediction]]:
    """Predict every line in order; a pure map over predict_line."""
    return [(line, predict_line(model, line.tokens)) for line in lines]


def load_corpus(path: str | Path) -> LabeledCorpus:
    """Read a training corpus CSV with columns `category` and `text`.

    Text is whitespace-split into tokens verbatim: the model contract says
    all preprocessing happens upstream, never here.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or not {"category", "text"} <= set(reader.fieldnames):
                raise SchemaViolation("corpus", f"{path} must have 'category' and 'text' columns")
            examples = []
            for row in reader:
                tokens = tuple((row["text"] or "").split())
                if not tokens:
                    continue
                examples.append((tokens, row["category"]))
    except OSError as exc:
        raise IoFailure(f"cannot read corpus {path}: {exc}") from exc
    return LabeledCorpus(tuple(examples))
