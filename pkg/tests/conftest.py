from hypothesis import settings

settings.register_profile("ci", deadline=None)
settings.load_profile("ci")


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(test_acceptance.RESULTS, key=lambda k: (int(k.split(".")[0]), k)):
        ok, detail = test_acceptance.RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key:<5} {detail}")
