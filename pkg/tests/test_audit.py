"""Access log: append-only sequencing, queries, export format."""

from consentgate.audit import AccessLog, LogCategory, iso_time
from consentgate.world import DeviceId, OperationKind

PHOTO = OperationKind.TAKE_PHOTO
MIC = DeviceId.MICROPHONE
AUDIO = OperationKind.RECORD_AUDIO


def seeded_log():
    log = AccessLog()
    log.append(100, LogCategory.BLOCKED, "rat", PHOTO, DeviceId.FRONT_CAMERA,
               "unsatisfied P1,P4 r1")
    log.append(200, LogCategory.AUTHORIZED, "cam", PHOTO, DeviceId.FRONT_CAMERA,
               "session s1 r2")
    log.append(300, LogCategory.DENIED, "bad", AUDIO, MIC, "slide-out")
    log.append(400, LogCategory.TERMINATED, "cam", PHOTO, DeviceId.FRONT_CAMERA,
               "session s1 AppReleased")
    return log


def test_append_returns_gapless_seq():
    log = seeded_log()
    assert [e.seq for e in log.entries()] == [1, 2, 3, 4]
    assert log.append(500, LogCategory.RETRO, "bad", None, None, "Uninstall") == 5


def test_query_filters():
    log = seeded_log()
    assert [e.seq for e in log.query(category=LogCategory.BLOCKED)] == [1]
    assert [e.seq for e in log.query(app_id="cam")] == [2, 4]
    assert [e.seq for e in log.query(t_from=200, t_to=300)] == [2, 3]
    assert log.query(app_id="nobody") == []


def test_empty_log_any_filter_empty():
    log = AccessLog()
    assert log.query() == []
    assert log.query(category=LogCategory.DENIED) == []
    assert len(log) == 0


def test_query_by_app_equals_union_of_category_queries():
    log = seeded_log()
    for app in ("cam", "bad", "rat"):
        by_app = {e.seq for e in log.query(app_id=app)}
        unioned = set()
        for cat in LogCategory:
            unioned |= {e.seq for e in log.query(app_id=app, category=cat)}
        assert by_app == unioned


def test_iso_time_fixed_epoch():
    assert iso_time(0) == "1970-01-01T00:00:00.000Z"
    assert iso_time(61_500) == "1970-01-01T00:01:01.500Z"


def test_export_line_format():
    log = seeded_log()
    lines = log.export_lines()
    assert lines[0] == "1|1970-01-01T00:00:00.100Z|Blocked|rat|TakePhoto|FrontCamera|unsatisfied P1,P4 r1"
    assert lines[2] == "3|1970-01-01T00:00:00.300Z|Denied|bad|RecordAudio|Microphone|slide-out"
    log.append(500, LogCategory.RETRO, "bad", None, None, "Uninstall")
    assert log.export_lines()[4] == "5|1970-01-01T00:00:00.500Z|Retro|bad|-|-|Uninstall"
