"""
======================
API EXECUTOR INTERFACE
======================

An executor performs one API call and reports what came back: status code (None if nothing came back),
body text and latency. Failures of the API itself are reported in the response;
`ExecutorUnavailable` is reserved for the executor being unable to attempt the call at all.
"""


from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
import time
from typing import Any, Self, TYPE_CHECKING

import httpx
from loguru import logger

from toolforge.core.util.config import ToolForgeConfig

from .doc import HttpMethod
from .errors import ExecutorUnavailable

if TYPE_CHECKING:
    from .doc import ApiDoc


@dataclass(frozen=True)
class ApiResponse:
    """Outcome of one API call."""

    status_code: int | None
    body: str
    latency_ms: float

    @property
    def reachable(self) -> bool:
        return self.status_code is not None


class BaseApiExecutor(ABC):
    """API executor abstract base class.

    Implementations must be safe for concurrent use across episodes.
    """

    @abstractmethod
    def call(self, api: ApiDoc, parameters: dict[str, Any]) -> ApiResponse:
        """Call API with parameters."""

    def close(self):
        """Release connections held by the executor."""

    def __enter__(self) -> Self:
        return self

    def __exit__(self, *exc_info):
        self.close()


@dataclass
class HttpApiExecutor(BaseApiExecutor):
    """Live HTTP executor with a single bearer-token pass-through."""

    bearer_token: str | None = field(default_factory=lambda: ToolForgeConfig.PROVIDER_KEY, repr=False)
    timeout_s: float = ToolForgeConfig.HTTP_TIMEOUT_S

    # custom transport (e.g., `httpx.MockTransport`); default: network
    transport: httpx.BaseTransport | None = field(default=None, repr=False)

    def __post_init__(self):
        headers: dict[str, str] = {'Authorization': f'Bearer {self.bearer_token}'} if self.bearer_token else {}
        self.client: httpx.Client = httpx.Client(headers=headers, timeout=self.timeout_s, follow_redirects=True,
                                                 transport=self.transport)

    def call(self, api: ApiDoc, parameters: dict[str, Any]) -> ApiResponse:
        send_as_query: bool = api.http_method in (HttpMethod.GET, HttpMethod.DELETE)

        start: float = time.perf_counter()
        try:
            response: httpx.Response = self.client.request(method=str(api.http_method), url=api.url,
                                                           params=parameters if send_as_query else None,
                                                           json=None if send_as_query else parameters)
        except httpx.TimeoutException:
            return ApiResponse(status_code=None, body='', latency_ms=(time.perf_counter() - start) * 1000)
        except httpx.TransportError as err:
            logger.debug(f'{api.url} unreachable: {err}')
            return ApiResponse(status_code=None, body=str(err), latency_ms=(time.perf_counter() - start) * 1000)
        except httpx.HTTPError as err:
            raise ExecutorUnavailable(f'HTTP executor failed on {api.url}: {err}') from err

        return ApiResponse(status_code=response.status_code, body=response.text,
                           latency_ms=response.elapsed.total_seconds() * 1000)

    def close(self):
        self.client.close()
