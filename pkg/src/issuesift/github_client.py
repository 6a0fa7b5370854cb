"""Rate-limit-aware GitHub REST client with recorded-fixture replay.

Live sessions speak HTTPS to the REST v3 search and comments endpoints.
Replay sessions answer every request from a fixture directory and never touch
the network, which keeps tests hermetic and byte-deterministic.

Fixture directory layout::

    manifest.json          {"fixture_format": 1, "entries": [...]}
    NNNN.body.json         verbatim wire payload for one (endpoint, page)
    NNNN.meta.json         {"status": 200, "headers": {...}}

Each manifest entry holds ``method``, ``url`` (full URL including the query
string), and the two file names. Repeated entries for one URL are consumed in
order, so a recorded 403-then-200 sequence exercises the retry path.
"""

from __future__ import annotations

import json
import random
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import parse_qsl, urlencode, urlsplit, urlunsplit

import requests

from .errors import (
    FixtureNotFound,
    InvalidToken,
    IssueGone,
    NetworkFailure,
    QueryRejected,
    RateLimited,
)

GITHUB_API = "https://api.github.com"
USER_AGENT = "issuesift/0.1"
PAGE_SIZE = 100
SEARCH_LIMIT_CAP = 1000  # the search API serves at most 1000 results
AUTH_SEARCH_PER_MINUTE = 30
ANON_SEARCH_PER_MINUTE = 10
AUTH_CORE_PER_HOUR = 5000
ANON_CORE_PER_HOUR = 60
MAX_RETRIES = 4
BACKOFF_BASE = 1.0
BACKOFF_FACTOR = 2.0
BACKOFF_JITTER = 0.2
REPLAY_UNLIMITED = 10**9

SORT_KEYS = ("best-match", "comments", "created", "updated", "reactions")


@dataclass(frozen=True)
class IssueRef:
    """One GitHub issue hit from search."""

    id: int
    number: int
    repo_full_name: str
    title: str
    body: str
    html_url: str
    api_url: str
    comments_url: str
    comment_count: int
    created_at: str
    updated_at: str

    def __post_init__(self):
        if self.id <= 0:
            raise ValueError(f"issue id must be positive, got {self.id}")
        if self.comment_count < 0:
            raise ValueError(f"comment_count must be >= 0, got {self.comment_count}")
        if not self.html_url or not self.api_url:
            raise ValueError("html_url and api_url must be non-empty")


@dataclass(frozen=True)
class RawComment:
    """One unprocessed comment body, byte-exact as received."""

    issue_id: int
    comment_id: int
    author_login: str
    body: str
    created_at: str


@dataclass(frozen=True)
class RateStatus:
    """Remaining budgets for the search and core windows."""

    search_remaining: int
    search_reset_at: float
    core_remaining: int
    core_reset_at: float

    def __post_init__(self):
        if self.search_remaining < 0 or self.core_remaining < 0:
            raise ValueError("remaining counts must be >= 0")


@dataclass
class TransportReply:
    status: int
    headers: dict[str, str]
    body: bytes


@dataclass(frozen=True)
class RequestRecord:
    """One dispatched request, for throttle inspection and debugging."""

    at: float
    method: str
    url: str
    status: int | None


class _TransientFailure(Exception):
    """Internal marker for retryable transport-level errors."""


def canonical_url(url: str, params: dict | None = None) -> str:
    """URL with merged, key-sorted query params; the replay lookup key."""
    scheme, netloc, path, query, _ = urlsplit(url)
    items = parse_qsl(query, keep_blank_values=True)
    if params:
        items.extend((k, str(v)) for k, v in params.items())
    items.sort()
    return urlunsplit((scheme, netloc, path, urlencode(items), ""))


class LiveTransport:
    """Thin wrapper over a requests.Session with the standard GitHub headers."""

    def __init__(self, token: str | None, user_agent: str = USER_AGENT, timeout: float = 30.0):
        self._timeout = timeout
        self._session = requests.Session()
        self._session.headers.update(
            {
                "Accept": "application/vnd.github+json",
                "User-Agent": user_agent,
            }
        )
        if token:
            self._session.headers["Authorization"] = f"Bearer {token}"

    @property
    def headers(self) -> dict[str, str]:
        return dict(self._session.headers)

    def request(self, method: str, url: str, params: dict | None = None) -> TransportReply:
        try:
            response = self._session.request(method, url, params=params, timeout=self._timeout)
        except requests.RequestException as exc:
            raise _TransientFailure(str(exc)) from exc
        headers = {k.lower(): v for k, v in response.headers.items()}
        return TransportReply(status=response.status_code, headers=headers, body=response.content)


class ReplayTransport:
    """Answers requests from a recorded fixture directory. No network, ever."""

    def __init__(self, fixture_dir: str | Path):
        self._dir = Path(fixture_dir)
        manifest_path = self._dir / "manifest.json"
        if not self._dir.is_dir() or not manifest_path.is_file():
            raise FixtureNotFound(f"fixture directory {self._dir} has no manifest.json")
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise FixtureNotFound(f"unreadable fixture manifest {manifest_path}: {exc}") from exc
        self._lock = threading.Lock()
        self._entries: dict[str, deque] = {}
        for entry in manifest.get("entries", []):
            key = f"{entry['method'].upper()} {canonical_url(entry['url'])}"
            self._entries.setdefault(key, deque()).append((entry["meta"], entry["body"]))

    def request(self, method: str, url: str, params: dict | None = None) -> TransportReply:
        key = f"{method.upper()} {canonical_url(url, params)}"
        with self._lock:
            queue = self._entries.get(key)
            if not queue:
                raise FixtureNotFound(f"no recorded response for: {key}")
            # The last recording for a URL stays available so idempotent GETs
            # replay indefinitely; earlier ones are consumed in order.
            meta_name, body_name = queue.popleft() if len(queue) > 1 else queue[0]
        try:
            meta = json.loads((self._dir / meta_name).read_text(encoding="utf-8"))
            body = (self._dir / body_name).read_bytes()
        except (OSError, ValueError) as exc:
            raise FixtureNotFound(f"unreadable fixture file for {key}: {exc}") from exc
        headers = {str(k).lower(): str(v) for k, v in meta.get("headers", {}).items()}
        return TransportReply(status=int(meta["status"]), headers=headers, body=body)


class RateGate:
    """Shared sliding-window budget gate.

    ``acquire`` blocks through the injected sleep until a slot frees up in the
    window and any header-imposed block has expired. Kinds without a
    configured budget pass through untouched.
    """

    def __init__(self, *, clock, sleep, wait: bool, budgets: dict[str, tuple[int, float]]):
        self._clock = clock
        self._sleep = sleep
        self._wait = wait
        self._budgets = budgets
        self._lock = threading.Lock()
        self._times = {kind: deque() for kind in budgets}
        self._blocked_until = {kind: 0.0 for kind in budgets}

    def acquire(self, kind: str) -> None:
        if kind not in self._budgets:
            return
        while True:
            with self._lock:
                now = self._clock()
                ready = self._next_free(kind, now)
                if ready <= now:
                    self._times[kind].append(now)
                    return
            if not self._wait:
                raise RateLimited(f"{kind} budget exhausted and waiting is disabled")
            self._sleep(max(0.0, ready - now))

    def _next_free(self, kind: str, now: float) -> float:
        count, window = self._budgets[kind]
        times = self._times[kind]
        while times and times[0] <= now - window:
            times.popleft()
        ready = self._blocked_until[kind]
        if len(times) >= count:
            ready = max(ready, times[0] + window)
        return ready

    def block_until(self, kind: str, when: float) -> None:
        with self._lock:
            if kind in self._blocked_until:
                self._blocked_until[kind] = max(self._blocked_until[kind], when)


def parse_rate_payload(doc: dict, fallback_now: float = 0.0) -> RateStatus:
    """RateStatus from a /rate_limit response body."""
    resources_field = doc.get("resources", {})
    search = resources_field.get("search", {})
    core = resources_field.get("core", {})
    return RateStatus(
        search_remaining=int(search.get("remaining", 0)),
        search_reset_at=float(search.get("reset", fallback_now)),
        core_remaining=int(core.get("remaining", 0)),
        core_reset_at=float(core.get("reset", fallback_now)),
    )


def _issue_from_item(item: dict) -> IssueRef:
    repository_url = item.get("repository_url") or ""
    repo_full_name = repository_url.split("/repos/", 1)[1] if "/repos/" in repository_url else ""
    return IssueRef(
        id=int(item["id"]),
        number=int(item["number"]),
        repo_full_name=repo_full_name,
        title=item.get("title") or "",
        body=item.get("body") or "",
        html_url=item.get("html_url") or "",
        api_url=item.get("url") or "",
        comments_url=item.get("comments_url") or "",
        comment_count=int(item.get("comments") or 0),
        created_at=item.get("created_at") or "",
        updated_at=item.get("updated_at") or "",
    )


class Session:
    """Shared client for the issue-search and issue-comments endpoints.

    Thread-safe: all rate accounting funnels through one gate, so comment
    fetches for distinct issues may run in parallel (``parallelism`` bounds
    how many the pipeline starts at once).
    """

    def __init__(
        self,
        *,
        token: str | None,
        mode: str,
        transport,
        gate: RateGate,
        clock,
        sleep,
        base_url: str,
        wait_on_rate_limit: bool,
        parallelism: int,
        rng: random.Random | None = None,
    ):
        self.token = token
        self.mode = mode
        self.base_url = base_url.rstrip("/")
        self.parallelism = max(1, parallelism)
        self._transport = transport
        self._gate = gate
        self._clock = clock
        self._sleep = sleep
        self._wait_on_rate_limit = wait_on_rate_limit
        self._rng = rng or random.Random()
        self._log_lock = threading.Lock()
        self.request_log: list[RequestRecord] = []
        self.rate_status: RateStatus | None = None

    # -- public operations -------------------------------------------------

    def check_rate_limit(self) -> RateStatus:
        """Current budgets; replay sessions report an unlimited sentinel."""
        now = self._clock()
        if self.mode == "replay":
            status = RateStatus(REPLAY_UNLIMITED, now, REPLAY_UNLIMITED, now)
        else:
            doc = self._request_json("meta", f"{self.base_url}/rate_limit")
            status = parse_rate_payload(doc, fallback_now=now)
        self.rate_status = status
        return status

    def search_issues(
        self,
        query: str,
        limit: int,
        sort: str = "best-match",
        order: str = "desc",
    ) -> list[IssueRef]:
        """Issues matching the query, paginated transparently, capped at limit.

        Duplicate ids are dropped keeping the first occurrence; the endpoint's
        ordering under the requested sort is otherwise preserved.
        """
        if not 1 <= limit <= SEARCH_LIMIT_CAP:
            raise ValueError(f"limit must be in 1..{SEARCH_LIMIT_CAP}, got {limit}")
        if not query.strip():
            raise ValueError("query must be non-empty")
        if sort not in SORT_KEYS:
            raise ValueError(f"sort must be one of {SORT_KEYS}, got {sort!r}")
        if order not in ("asc", "desc"):
            raise ValueError(f"order must be 'asc' or 'desc', got {order!r}")
        url = f"{self.base_url}/search/issues"
        results: list[IssueRef] = []
        seen_ids: set[int] = set()
        page = 1
        while len(results) < limit:
            params: dict[str, str | int] = {"q": query, "per_page": PAGE_SIZE, "page": page}
            if sort != "best-match":
                params["sort"] = sort
                params["order"] = order
            doc = self._request_json("search", url, params)
            items = doc.get("items", []) if isinstance(doc, dict) else []
            for item in items:
                issue = _issue_from_item(item)
                if issue.id in seen_ids:
                    continue
                seen_ids.add(issue.id)
                results.append(issue)
                if len(results) >= limit:
                    break
            if len(items) < PAGE_SIZE or page * PAGE_SIZE >= SEARCH_LIMIT_CAP:
                break
            page += 1
        return results

    def fetch_comments(self, issue: IssueRef) -> list[RawComment]:
        """All comments of one issue, fully paginated, ascending created_at."""
        if not issue.comments_url:
            raise ValueError(f"issue {issue.id} has no comments_url")
        if issue.comment_count == 0:
            return []
        comments: list[RawComment] = []
        page = 1
        while True:
            items = self._request_json(
                "core", issue.comments_url, {"per_page": PAGE_SIZE, "page": page}
            )
            if not isinstance(items, list):
                raise NetworkFailure(f"comments endpoint returned a non-list for issue {issue.id}")
            for item in items:
                comments.append(
                    RawComment(
                        issue_id=issue.id,
                        comment_id=int(item["id"]),
                        author_login=(item.get("user") or {}).get("login") or "",
                        body=item.get("body") or "",
                        created_at=item.get("created_at") or "",
                    )
                )
            if len(items) < PAGE_SIZE:
                break
            page += 1
        comments.sort(key=lambda c: c.created_at)  # stable: ties keep wire order
        return comments

    # -- request machinery --------------------------------------------------

    def _request_json(self, kind: str, url: str, params: dict | None = None):
        reply = self._request(kind, url, params)
        try:
            return json.loads(reply.body.decode("utf-8"))
        except (UnicodeDecodeError, ValueError) as exc:
            raise NetworkFailure(f"invalid JSON from {url}: {exc}") from exc

    def _request(self, kind: str, url: str, params: dict | None = None) -> TransportReply:
        retries = 0
        delay = BACKOFF_BASE
        while True:
            self._gate.acquire(kind)
            started = self._clock()
            try:
                reply = self._transport.request("GET", url, params)
            except _TransientFailure as exc:
                self._log(started, url, params, None)
                if retries >= MAX_RETRIES:
                    raise NetworkFailure(f"{url}: {exc} (after {retries} retries)") from exc
                retries += 1
                self._sleep(self._jittered(delay))
                delay *= BACKOFF_FACTOR
                continue
            self._log(started, url, params, reply.status)
            self._observe_headers(kind, reply.headers)
            status = reply.status
            if 200 <= status < 300:
                return reply
            if status == 401:
                raise InvalidToken(f"credential rejected by {url}")
            if status in (403, 429):
                if not self._wait_on_rate_limit:
                    raise RateLimited(f"{url} answered {status} and waiting is disabled")
                if retries >= MAX_RETRIES:
                    raise RateLimited(f"{url} kept answering {status} after {retries} retries")
                retries += 1
                self._sleep(self._rate_delay(reply.headers, delay))
                delay *= BACKOFF_FACTOR
                continue
            if status in (404, 410):
                raise IssueGone(f"{url} answered {status}")
            if status == 422:
                raise QueryRejected(f"{url} rejected the query (422)")
            if 500 <= status < 600:
                if retries >= MAX_RETRIES:
                    raise NetworkFailure(f"{url} answered {status} after {retries} retries")
                retries += 1
                self._sleep(self._jittered(delay))
                delay *= BACKOFF_FACTOR
                continue
            raise NetworkFailure(f"unexpected status {status} from {url}")

    def _rate_delay(self, headers: dict[str, str], fallback: float) -> float:
        retry_after = headers.get("retry-after")
        if retry_after is not None:
            try:
                return max(0.0, float(retry_after))
            except ValueError:
                pass
        if headers.get("x-ratelimit-remaining") == "0":
            try:
                reset = float(headers["x-ratelimit-reset"])
                return max(0.0, reset - self._clock())
            except (KeyError, ValueError):
                pass
        return self._jittered(fallback)

    def _jittered(self, delay: float) -> float:
        return delay * (1.0 + self._rng.uniform(-BACKOFF_JITTER, BACKOFF_JITTER))

    def _observe_headers(self, kind: str, headers: dict[str, str]) -> None:
        # Live response headers are authoritative over the static budgets.
        remaining = headers.get("x-ratelimit-remaining")
        reset = headers.get("x-ratelimit-reset")
        if remaining == "0" and reset is not None and kind in ("search", "core"):
            try:
                self._gate.block_until(kind, float(reset))
            except ValueError:
                pass

    def _log(self, at: float, url: str, params: dict | None, status: int | None) -> None:
        with self._log_lock:
            self.request_log.append(
                RequestRecord(at=at, method="GET", url=canonical_url(url, params), status=status)
            )


def open_session(
    token: str | None = None,
    mode: str = "live",
    fixture_dir: str | Path | None = None,
    *,
    base_url: str = GITHUB_API,
    user_agent: str = USER_AGENT,
    wait_on_rate_limit: bool = True,
    clock=None,
    sleep=None,
    search_per_minute: int | None = None,
    core_per_hour: int | None = None,
    parallelism: int = 4,
    transport=None,
) -> Session:
    """Create a live or replay session.

    Live sessions validate the credential with one rate-limit probe. Replay
    sessions are unthrottled by default (there is no API to protect); passing
    an explicit ``search_per_minute``/``core_per_hour`` turns the gate on,
    which simulated-clock tests use.
    """
    if mode not in ("live", "replay"):
        raise ValueError(f"mode must be 'live' or 'replay', got {mode!r}")
    clock = clock or time.time
    sleep = sleep or time.sleep
    budgets: dict[str, tuple[int, float]] = {}
    if mode == "replay":
        if transport is None:
            if fixture_dir is None:
                raise FixtureNotFound("replay mode requires a fixture directory")
            transport = ReplayTransport(fixture_dir)
        if search_per_minute is not None:
            budgets["search"] = (search_per_minute, 60.0)
        if core_per_hour is not None:
            budgets["core"] = (core_per_hour, 3600.0)
    else:
        if transport is None:
            transport = LiveTransport(token, user_agent=user_agent)
        if search_per_minute is None:
            search_per_minute = AUTH_SEARCH_PER_MINUTE if token else ANON_SEARCH_PER_MINUTE
        if core_per_hour is None:
            core_per_hour = AUTH_CORE_PER_HOUR if token else ANON_CORE_PER_HOUR
        budgets["search"] = (search_per_minute, 60.0)
        budgets["core"] = (core_per_hour, 3600.0)
    gate = RateGate(clock=clock, sleep=sleep, wait=wait_on_rate_limit, budgets=budgets)
    session = Session(
        token=token,
        mode=mode,
        transport=transport,
        gate=gate,
        clock=clock,
        sleep=sleep,
        base_url=base_url,
        wait_on_rate_limit=wait_on_rate_limit,
        parallelism=parallelism,
    )
    if mode == "live":
        session.check_rate_limit()  # probe: raises InvalidToken on a bad credential
    return session
