import httpx
import pytest

from toolforge.core.hub.doc import Hub
from toolforge.core.hub.errors import ExecutorUnavailable, MissingReport
from toolforge.core.hub.executor import ApiResponse, HttpApiExecutor
from toolforge.core.hub.health import (HealthReport, Quality, Verdict,
                                       classify_response, filter_hub, validate_api, validate_hub)
from toolforge.core.hub.store import dump_hub, load_hub
from toolforge.core.simenv.hub import (HEALTHY_FIXTURE_KEYS, FailureMode, SimApiSpec, SimExecutor,
                                       build_sim_hub, health_fixture_hub)


THRESHOLD_MS: float = 2000.0


def _report(spec: SimApiSpec) -> HealthReport:
    hub, executor = build_sim_hub([spec])
    return validate_api(hub.api(spec.key), executor, latency_threshold_ms=THRESHOLD_MS)


def test_not_found_api_is_discarded():
    report: HealthReport = _report(SimApiSpec(key=('t', 'a'), failure_mode=FailureMode.HTTP_404))
    assert report.reachable
    assert report.quality == Quality.HTTP_ERROR
    assert report.verdict == Verdict.DISCARD


def test_html_page_is_discarded():
    report: HealthReport = _report(SimApiSpec(key=('t', 'a'), failure_mode=FailureMode.HTML_PAGE))
    assert report.quality == Quality.HTML_PAGE
    assert report.verdict == Verdict.DISCARD


def test_error_body_is_discarded():
    report: HealthReport = _report(SimApiSpec(key=('t', 'a'), failure_mode=FailureMode.ERROR_BODY))
    assert report.quality == Quality.ERROR_MESSAGE
    assert report.verdict == Verdict.DISCARD


def test_slow_api_is_discarded_and_fast_api_retained():
    slow: HealthReport = _report(SimApiSpec(key=('t', 'a'), latency_ms=5000.0))
    assert slow.reachable
    assert slow.quality == Quality.OK
    assert slow.verdict == Verdict.DISCARD
    assert 'slow' in slow.reason

    fast: HealthReport = _report(SimApiSpec(key=('t', 'a'), latency_ms=120.0))
    assert fast.verdict == Verdict.RETAIN
    assert fast.latency_ms == 120.0


def test_timeout_is_unreachable():
    report: HealthReport = _report(SimApiSpec(key=('t', 'a'), failure_mode=FailureMode.TIMEOUT))
    assert not report.reachable
    assert report.verdict == Verdict.DISCARD


def test_classify_response():
    assert classify_response(ApiResponse(status_code=200, body='', latency_ms=1)) == Quality.EMPTY
    assert classify_response(ApiResponse(status_code=200, body='{}', latency_ms=1)) == Quality.EMPTY
    assert classify_response(ApiResponse(status_code=200, body='plain text answer', latency_ms=1)) == Quality.OK
    assert classify_response(ApiResponse(status_code=500, body='{"ok": 1}', latency_ms=1)) == Quality.HTTP_ERROR
    assert classify_response(ApiResponse(status_code=200, body='{"message": "x", "items": [1]}',
                                         latency_ms=1)) == Quality.OK


def test_health_fixture_filters_to_healthy_apis():
    hub, executor = health_fixture_hub()
    reports = validate_hub(hub, executor, latency_threshold_ms=THRESHOLD_MS)

    assert set(reports) == set(hub.api_keys())

    filtered: Hub = filter_hub(hub, reports)
    assert set(filtered.api_keys()) == HEALTHY_FIXTURE_KEYS
    assert {tool.tool_name for tool in filtered.tools} == {'status_board', 'echo'}
    assert filtered.categories == {'Monitoring', 'Data'}


def test_dumped_health_fixture_replays_behavior(tmp_path):
    hub, _ = health_fixture_hub()
    dump_hub(hub, tmp_path)

    reloaded: Hub = load_hub(tmp_path)
    reports = validate_hub(reloaded, SimExecutor.from_hub_examples(reloaded), latency_threshold_ms=THRESHOLD_MS)
    assert set(filter_hub(reloaded, reports).api_keys()) == HEALTHY_FIXTURE_KEYS


def test_ten_tool_hub_with_four_discards():
    failures: list[FailureMode] = [FailureMode.HTTP_404, FailureMode.HTML_PAGE, FailureMode.ERROR_BODY,
                                   FailureMode.TIMEOUT]
    specs: list[SimApiSpec] = [SimApiSpec(key=(f'tool{i}', 'endpoint'),
                                          failure_mode=failures[i] if i < len(failures) else FailureMode.NONE)
                               for i in range(10)]
    hub, executor = build_sim_hub(specs)

    filtered: Hub = filter_hub(hub, validate_hub(hub, executor, latency_threshold_ms=THRESHOLD_MS, jobs=4))
    assert len(filtered.tools) == 6
    assert filtered.n_apis == 6
    assert [tool.tool_name for tool in filtered.tools] == [f'tool{i}' for i in range(4, 10)]


def test_filtering_is_idempotent():
    hub, executor = health_fixture_hub()
    once: Hub = filter_hub(hub, validate_hub(hub, executor))
    twice: Hub = filter_hub(once, validate_hub(once, executor))
    assert twice == once


def test_missing_report_is_an_error():
    hub, executor = health_fixture_hub()
    reports = validate_hub(hub, executor)
    del reports[('echo', 'echo')]

    with pytest.raises(MissingReport):
        filter_hub(hub, reports)


def test_http_executor_reports_status_and_body():
    def handler(request: httpx.Request) -> httpx.Response:
        assert request.headers['Authorization'] == 'Bearer secret'
        assert request.url.params['city'] == 'Lisbon'
        return httpx.Response(200, text='{"temperature_c": 18}')

    hub, _ = build_sim_hub([SimApiSpec(key=('weather', 'now'), parameters={'city': 'Lisbon'})])
    api = hub.api(('weather', 'now'))
    api.url = 'https://weather.example/now'

    executor = HttpApiExecutor(bearer_token='secret', transport=httpx.MockTransport(handler))
    report: HealthReport = validate_api(api, executor, latency_threshold_ms=THRESHOLD_MS)
    assert report.verdict == Verdict.RETAIN
    assert executor.call(api, {'city': 'Lisbon'}).body == '{"temperature_c": 18}'


def test_http_executor_unreachable_host():
    def handler(request: httpx.Request) -> httpx.Response:
        raise httpx.ConnectError('connection refused', request=request)

    hub, _ = build_sim_hub([SimApiSpec(key=('weather', 'now'))])
    api = hub.api(('weather', 'now'))
    api.url = 'https://weather.example/now'

    response: ApiResponse = HttpApiExecutor(transport=httpx.MockTransport(handler)).call(api, {})
    assert not response.reachable
    assert 'connection refused' in response.body


def test_http_executor_failure_is_executor_unavailable():
    def handler(request: httpx.Request) -> httpx.Response:
        raise httpx.TooManyRedirects('redirect loop', request=request)

    hub, _ = build_sim_hub([SimApiSpec(key=('weather', 'now'))])
    api = hub.api(('weather', 'now'))
    api.url = 'https://weather.example/now'

    with pytest.raises(ExecutorUnavailable):
        HttpApiExecutor(transport=httpx.MockTransport(handler)).call(api, {})


def test_http_executor_closes_its_client():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, text='{"temperature_c": 18}')

    hub, _ = build_sim_hub([SimApiSpec(key=('weather', 'now'))])
    api = hub.api(('weather', 'now'))
    api.url = 'https://weather.example/now'

    with HttpApiExecutor(transport=httpx.MockTransport(handler)) as executor:
        assert executor.call(api, {}).status_code == 200
        assert not executor.client.is_closed
    assert executor.client.is_closed
