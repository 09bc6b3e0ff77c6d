"""Every failing verdict built during the session is recorded here so the
acceptance suite can re-check all of them independently."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from fopreserve.modellab import verdict as _verdict  # noqa: E402

EMITTED: list = []

_init = _verdict.Verdict.__post_init__


def _recording_init(self):
    _init(self)
    if self.status == _verdict.FAIL:
        EMITTED.append(self)


_verdict.Verdict.__post_init__ = _recording_init


def pytest_sessionfinish(session, exitstatus):
    import oracle
    bad = [v for v in EMITTED if not oracle.recheck(v)]
    print(f"\nrechecked {len(EMITTED)} counterexamples emitted during the run: "
          f"{len(bad)} false")
    if bad and session.exitstatus == 0:
        session.exitstatus = 1


ACCEPTANCE: dict[int, str] = {}


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so criterion 10 sees every counterexample emitted before it
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
