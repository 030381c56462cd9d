import io

from wtqsim import selfcheck


def test_clean_build_passes():
    stream = io.StringIO()
    passed, failed, lines = selfcheck.run(stream=stream)
    assert failed == 0 and passed == len(lines) - 1
    assert stream.getvalue().splitlines() == lines
    assert all(line.startswith("PASS ") for line in lines[:-1])
    assert lines[-1] == f"selfcheck: {passed} passed, 0 failed"


def test_perturbed_rt_fails_identity_only():
    passed, failed, lines = selfcheck.run(perturb_rt=1e-8)
    assert failed == 1
    bad = [line for line in lines if line.startswith("FAIL")]
    assert bad[0].startswith("FAIL rt_identity: max |Rt^T C0 Rt - 1| = ")
    assert float(bad[0].rsplit("= ", 1)[1]) > 1e-10


def test_cases_cover_distinct_circuits():
    assert len({(c.Ic1, c.Ic2, c.Ic3, c.C1p, c.C2p, c.Cc) for c in selfcheck.CASES}) == len(selfcheck.CASES)
