"""Orchestrates search -> fetch -> filter -> preprocess -> classify.

GitHub's search ignores punctuation, so a query like "tf.function" also hits
issues that merely say "tf function"; the strict-match refilter drops those.
Issues without discussion, failed fetches, and category-filtered issues land
in the omitted stream with a reason, so every searched issue is accounted for
exactly once.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .classifier import ModelFile, Prediction, classify_lines
from .errors import GitHubError, UnknownCategory
from .github_client import IssueRef, RawComment, Session
from .text_prep import PrepConfig, ProcessedLine, preprocess_comment

OMISSION_REASONS = ("no_strict_match", "no_discussion", "fetch_failed", "category_filtered")
SORT_KEYS = ("best-match", "comments", "created", "updated", "reactions")
STRICT_SCOPES = ("issue", "comment")


@dataclass(frozen=True)
class QuerySpec:
    """One full user request: query string, limit, sort, and filters."""

    query: str
    limit: int = 100
    sort: str = "best-match"
    order: str = "desc"
    strict_match: bool = True
    strict_scope: str = "issue"
    omit_categories: frozenset[str] = frozenset()
    require_categories: frozenset[str] = frozenset()
    forbid_categories: frozenset[str] = frozenset()
    min_comments: int = 1

    def __post_init__(self):
        if not self.query.strip():
            raise ValueError("query must be non-empty")
        if not 1 <= self.limit <= 1000:
            raise ValueError(f"limit must be in 1..1000, got {self.limit}")
        if self.sort not in SORT_KEYS:
            raise ValueError(f"sort must be one of {SORT_KEYS}, got {self.sort!r}")
        if self.order not in ("asc", "desc"):
            raise ValueError(f"order must be 'asc' or 'desc', got {self.order!r}")
        if self.strict_scope not in STRICT_SCOPES:
            raise ValueError(f"strict_scope must be 'issue' or 'comment', got {self.strict_scope!r}")
        if self.min_comments < 0:
            raise ValueError(f"min_comments must be >= 0, got {self.min_comments}")
        if self.require_categories & self.forbid_categories:
            overlap = sorted(self.require_categories & self.forbid_categories)
            raise ValueError(f"categories both required and forbidden: {overlap}")

    def category_names(self) -> frozenset[str]:
        return self.omit_categories | self.require_categories | self.forbid_categories


@dataclass(frozen=True)
class OmittedIssue:
    """An issue excluded from classification and why."""

    issue: IssueRef
    reason: str

    def __post_init__(self):
        if self.reason not in OMISSION_REASONS:
            raise ValueError(f"unknown omission reason {self.reason!r}")


@dataclass(frozen=True)
class ClassifiedRecord:
    """One classified comment line of a kept issue."""

    issue: IssueRef
    line: ProcessedLine
    prediction: Prediction

    def __post_init__(self):
        if self.issue.id != self.line.issue_id:
            raise ValueError("record issue id does not match its line")


@dataclass
class RunSummary:
    """Counts for one pipeline run; categories follow taxonomy order."""

    issues_searched: int
    issues_classified: int
    issues_omitted: int
    per_category: dict[str, int]
    per_reason: dict[str, int]

    def __post_init__(self):
        if self.issues_classified + self.issues_omitted != self.issues_searched:
            raise ValueError("classified + omitted must equal searched")


def strict_match(
    issue: IssueRef,
    comments: list[RawComment],
    query: str,
    scope: str = "issue",
) -> tuple[list[RawComment], bool]:
    """Case-insensitive verbatim-substring refilter, punctuation intact.

    issue scope: if any comment body or the issue title/body contains the
    query, the whole comment list is kept. comment scope: only matching
    comments are kept, and the issue matches iff any survive.
    """
    if not query:
        raise ValueError("query must be non-empty")
    needle = query.lower()
    if scope == "issue":
        matched = any(needle in c.body.lower() for c in comments)
        matched = matched or needle in issue.title.lower() or needle in issue.body.lower()
        return (list(comments) if matched else [], matched)
    if scope == "comment":
        kept = [c for c in comments if needle in c.body.lower()]
        return kept, bool(kept)
    raise ValueError(f"scope must be 'issue' or 'comment', got {scope!r}")


def has_discussion(issue: IssueRef, comments: list[RawComment], min_comments: int = 1) -> bool:
    """True iff the issue carries at least min_comments comments."""
    return len(comments) >= min_comments


def apply_category_filters(
    grouped: list[tuple[IssueRef, list[ClassifiedRecord]]],
    spec: QuerySpec,
) -> tuple[list[ClassifiedRecord], list[OmittedIssue]]:
    """Issue-level require/forbid pass, then comment-level omission pass.

    An issue survives iff every required category appears on some line and no
    line carries a forbidden category. On surviving issues, rows whose
    category is in omit_categories are dropped; an issue left with zero rows
    still counts as classified.
    """
    surviving: list[ClassifiedRecord] = []
    omitted: list[OmittedIssue] = []
    for issue, records in grouped:
        categories = {r.prediction.category for r in records}
        if spec.require_categories - categories or categories & spec.forbid_categories:
            omitted.append(OmittedIssue(issue=issue, reason="category_filtered"))
            continue
        surviving.extend(r for r in records if r.prediction.category not in spec.omit_categories)
    return surviving, omitted


def run(
    spec: QuerySpec,
    session: Session,
    model: ModelFile,
    prep: PrepConfig,
) -> tuple[list[ClassifiedRecord], list[OmittedIssue], RunSummary]:
    """Execute the full pipeline for one query.

    Per-issue fetch failures degrade to omissions instead of aborting; search
    or authentication failures propagate. Output ordering is imposed after
    the concurrent fetch stage, so results are deterministic regardless of
    completion order.
    """
    for name in sorted(spec.category_names()):
        if name not in model.taxonomy:
            raise UnknownCategory(f"filter category {name!r} is not in the model taxonomy")

    issues = session.search_issues(spec.query, spec.limit, spec.sort, spec.order)

    def fetch_one(issue: IssueRef):
        try:
            return issue, session.fetch_comments(issue), None
        except GitHubError as exc:
            return issue, None, exc

    with ThreadPoolExecutor(max_workers=session.parallelism) as pool:
        fetched = list(pool.map(fetch_one, issues))

    grouped: list[tuple[IssueRef, list[ClassifiedRecord]]] = []
    omitted: list[OmittedIssue] = []
    for issue, comments, error in fetched:
        if error is not None:
            omitted.append(OmittedIssue(issue=issue, reason="fetch_failed"))
            continue
        if not has_discussion(issue, comments, spec.min_comments):
            omitted.append(OmittedIssue(issue=issue, reason="no_discussion"))
            continue
        if spec.strict_match:
            kept, matched = strict_match(issue, comments, spec.query, spec.strict_scope)
            if not matched:
                omitted.append(OmittedIssue(issue=issue, reason="no_strict_match"))
                continue
        else:
            kept = comments
        lines = [line for comment in kept for line in preprocess_comment(comment, prep)]
        records = [
            ClassifiedRecord(issue=issue, line=line, prediction=prediction)
            for line, prediction in classify_lines(model, lines)
        ]
        grouped.append((issue, records))

    records, category_omitted = apply_category_filters(grouped, spec)
    omitted.extend(category_omitted)

    records.sort(key=lambda r: (r.issue.id, r.line.comment_id, r.line.line_index))
    omitted.sort(key=lambda o: o.issue.id)

    per_category = {name: 0 for name in model.taxonomy}
    for record in records:
        per_category[record.prediction.category] += 1
    per_reason = {reason: 0 for reason in OMISSION_REASONS}
    for omission in omitted:
        per_reason[omission.reason] += 1
    summary = RunSummary(
        issues_searched=len(issues),
        issues_classified=len(issues) - len(omitted),
        issues_omitted=len(omitted),
        per_category=per_category,
        per_reason=per_reason,
    )
    return records, omitted, summary
