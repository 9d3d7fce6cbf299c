"""HTTP plumbing shared by the chat and embedding backend clients."""

from __future__ import annotations

from typing import Any

import httpx

from .errors import BackendError, BackendUnreachable, BadResponse


def post_json(
    url: str,
    payload: dict[str, Any],
    *,
    api_key: str | None = None,
    timeout: float = 30.0,
    client: httpx.Client | None = None,
) -> Any:
    """POST a JSON payload and return the decoded JSON response.

    Retries exactly once on a connect failure; timeouts are surfaced
    immediately as :class:`BackendUnreachable` with ``timeout=True``.
    When ``client`` is omitted a one-shot client is created; callers that
    issue many requests should pass a pooled client.
    """
    headers = {}
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    own_client = client is None
    if own_client:
        client = httpx.Client(timeout=timeout)
    try:
        response = None
        for attempt in range(2):
            try:
                response = client.post(url, json=payload, headers=headers)
                break
            except httpx.ConnectError as exc:
                if attempt == 1:
                    raise BackendUnreachable(f"cannot reach {url}: {exc}") from exc
            except httpx.TimeoutException as exc:
                raise BackendUnreachable(f"timed out calling {url}", timeout=True) from exc
            except httpx.HTTPError as exc:
                raise BackendUnreachable(f"transport failure calling {url}: {exc}") from exc
        assert response is not None
        if response.status_code < 200 or response.status_code >= 300:
            raise BackendError(response.status_code, response.text)
        try:
            return response.json()
        except ValueError as exc:
            raise BadResponse("backend response body is not valid JSON") from exc
    finally:
        if own_client:
            client.close()


class GatedClient:
    """httpx.Client facade bounding concurrent in-flight requests.

    Callers beyond the limit queue on the semaphore; a caller that cannot
    obtain a slot within ``queue_timeout`` seconds fails with a timeout
    flavoured :class:`BackendUnreachable` (the API layer maps it to 504).
    """

    def __init__(self, client: httpx.Client, limit: int = 8, queue_timeout: float = 30.0):
        import threading

        self._client = client
        self._sem = threading.BoundedSemaphore(limit)
        self._queue_timeout = queue_timeout

    def post(self, *args, **kwargs) -> httpx.Response:
        if not self._sem.acquire(timeout=self._queue_timeout):
            raise BackendUnreachable(
                "timed out waiting for a free backend slot", timeout=True
            )
        try:
            return self._client.post(*args, **kwargs)
        finally:
            self._sem.release()

    def close(self):
        self._client.close()
