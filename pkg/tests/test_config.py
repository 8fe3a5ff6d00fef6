import json

import pytest
from pydantic import ValidationError

from src.config.models import (
    DEFAULT_EXCEPTION_BOUND,
    HARD_MAX_ATOMS,
    NamedStructure,
    RunConfig,
    load_named_structures,
)


class TestRunConfig:
    def test_defaults(self, config):
        assert config.k == DEFAULT_EXCEPTION_BOUND
        assert config.format == "text"

    def test_clamping(self):
        c = RunConfig(_env_file=None, max_atoms=50, max_points=0, k=40, max_closure=-3)
        assert c.max_atoms == HARD_MAX_ATOMS
        assert c.max_points == 1
        assert c.k == 12
        assert c.max_closure == 1

    def test_unknown_format_falls_back(self):
        assert RunConfig(_env_file=None, format="xml").format == "text"

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("SUBALG_K", "3")
        monkeypatch.setenv("SUBALG_FORMAT", "json")
        c = RunConfig(_env_file=None)
        assert c.k == 3
        assert c.format == "json"

    def test_env_file(self, tmp_path):
        env = tmp_path / ".env"
        env.write_text("SUBALG_SEED=9\n", encoding="utf-8")
        assert RunConfig(_env_file=env).seed == 9

    def test_overridden_ignores_unset_flags(self, config):
        c = config.overridden(k=None, seed=5)
        assert c.k == config.k
        assert c.seed == 5

    def test_bad_value(self):
        with pytest.raises(ValidationError):
            RunConfig(_env_file=None, k="many")


class TestNamedStructures:
    def test_bundled(self):
        registry = load_named_structures()
        assert {"arrow", "five-point", "omega-accumulation", "order-1"} <= set(registry)
        assert registry["omega-star"].relation.omega_col is True

    def test_custom_file(self, tmp_path):
        path = tmp_path / "structures.json"
        path.write_text(json.dumps([{"name": "one", "kind": "frame", "frame": {"points": ["0"]}}]), encoding="utf-8")
        assert list(load_named_structures(path)) == ["one"]

    def test_payload_must_match_kind(self):
        with pytest.raises(ValidationError):
            NamedStructure(name="bad", kind="omega", frame={"points": ["0"]})
