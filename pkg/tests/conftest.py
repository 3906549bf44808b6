import pytest

# criterion id -> {"ok": bool, "detail": last passing detail, "failures": [details]}
ACCEPTANCE_RESULTS = {}


def _line(key, entry):
    if entry["failures"]:
        return f"FAIL  criterion {key}: " + "; ".join(entry["failures"])
    return f"PASS  criterion {key}: {entry['detail']}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(_line(key, ACCEPTANCE_RESULTS[key]))


@pytest.fixture
def record_criterion():
    def record(key, ok, detail):
        entry = ACCEPTANCE_RESULTS.setdefault(key, {"detail": detail, "failures": []})
        if ok:
            entry["detail"] = detail
        else:
            entry["failures"].append(detail)
        print(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")

    return record
