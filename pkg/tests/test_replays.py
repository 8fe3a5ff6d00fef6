import pytest

from src.services.omega import OMEGA
from src.services.replays import REPLAYS, replay


class TestReplays:
    @pytest.mark.parametrize("name", [name for name in REPLAYS if name != "klmn"])
    def test_documented_verdicts(self, config, name):
        (report,) = replay(name, config)
        assert report.ok, [c.name for c in report.failures()]
        assert report.name == name

    def test_all(self, config):
        reports = replay("all", config)
        assert [r.name for r in reports] == list(REPLAYS)

    def test_unknown(self, config):
        with pytest.raises(KeyError):
            replay("nowhere", config)

    def test_omega_congruence_witness(self, config):
        (report,) = replay("omega-congruences", config)
        assert report.check("join_not_congruence").witness == (2, OMEGA, 0)

    def test_klmn_covers_every_index(self, config):
        (report,) = replay("klmn", config)
        assert report.ok, [c.name for c in report.failures()]
        assert len(report.checks) == 81
        assert all(c.ok for c in report.checks)
        assert report.details["frames"] == 530
        assert "klmn(2,2,2,2)" in [c.name for c in report.checks]
