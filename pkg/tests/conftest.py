import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> [passed, title, bound, elapsed]
_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title, seconds): acceptance criterion with a time bound")


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    k, title, bound = m.args
    entry = _results.setdefault(k, [True, title, bound, None])
    if call.excinfo is not None:
        entry[0] = False
    if call.when == "teardown":
        entry[3] = dict(item.user_properties).get("elapsed")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_results):
        passed, title, bound, elapsed = _results[k]
        t = f"{elapsed:.2f}s" if elapsed is not None else "n/a"
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  ({t}, bound {bound}s)  {title}")
