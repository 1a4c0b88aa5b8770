import pytest

from greedyboost import ConfigError, LossSpec, parse_config


class TestParseConfig:
    def test_defaults(self):
        cfg = parse_config("experiment=train\nd=2\nm=100\nseed=1")
        assert (cfg.d, cfg.m, cfg.seed) == (2, 100, 1)
        assert cfg.loss == LossSpec("least_squares")
        assert cfg.schedule.kind == "power"
        assert cfg.schedule.cap(1) == pytest.approx(2 ** -0.6667)
        assert cfg.inner_tol == 1e-10
        assert cfg.stop.kind == "none"

    def test_comments_and_whitespace(self):
        text = "# header\n  experiment = sweep  \nm_list = 50, 100 # sizes\n\nseed=3\nn_seeds=2\n"
        cfg = parse_config(text)
        assert cfg.m_list == [50, 100]
        assert cfg.n_seeds == 2

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as info:
            parse_config("bogus=1")
        assert info.value.line == 1
        assert "line 1" in str(info.value)

    @pytest.mark.parametrize("text,line", [
        ("experiment=train\nm=abc\nseed=1", 2),
        ("experiment=train\nm=10\nseed=-1", 3),
        ("experiment=train\nm=10\nseed=1\nschedule=power:1", 4),
        ("experiment=train\nm=10\nm=11\nseed=1", 3),
        ("experiment=train\nm=10\nseed=1\nstop=rho:2", 4),
        ("experiment=train\nnonsense\n", 2),
    ])
    def test_malformed(self, text, line):
        with pytest.raises(ConfigError) as info:
            parse_config(text)
        assert info.value.line == line

    def test_missing_required(self):
        with pytest.raises(ConfigError, match="seed"):
            parse_config("experiment=train\nm=10")

    def test_experiment_from_caller(self):
        assert parse_config("m=5\nseed=1", experiment="gen").experiment == "gen"
        with pytest.raises(ConfigError):
            parse_config("experiment=train\nm=5\nseed=1", experiment="gen")

    def test_loss_with_p(self):
        cfg = parse_config("experiment=train\nm=5\nseed=1\nloss=p_norm\np=3")
        assert cfg.loss == LossSpec("p_norm", p=3.0)
        with pytest.raises(ConfigError):
            parse_config("experiment=train\nm=5\nseed=1\nloss=hinge")

    def test_schedules(self):
        assert parse_config("experiment=train\nm=5\nseed=1\nschedule=constant:0.1").schedule.cap(7) == 0.1
        assert not parse_config("experiment=train\nm=5\nseed=1\nschedule=unrestricted").schedule.restricted

    def test_rademacher_needs_sizes(self):
        with pytest.raises(ConfigError):
            parse_config("experiment=rademacher\nseed=1")
        assert parse_config("experiment=rademacher\nseed=1\nm_list=25,100").m_list == [25, 100]

    def test_uint64_seed(self):
        assert parse_config("experiment=gen\nm=1\nseed=18446744073709551615").seed == 2**64 - 1
