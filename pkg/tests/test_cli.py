"""Command line surface, result schemas and settings."""

import json
from pathlib import Path

import pytest

from khmix.core.config import Settings
from khmix.main import main
from khmix.schemas import HomologyReport, SuiteReport
from khmix.services.movie import builtin_movie, load_movie


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_kh_reports_trefoil(capsys):
    assert main(["--log-level", "warning", "kh", "trefoil"]) == 0
    report = HomologyReport.model_validate(_json(capsys))
    assert report.schema_version == "1"
    assert report.theory == "bn"
    assert sum(e.dim for e in report.hat_table) == 4
    assert len(report.minus.free) == 2


def test_kh_frame_of_a_movie(capsys):
    assert main(["kh", "torus", "--frame", "2", "--theory", "lee", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "lee" in out
    assert "hat table" in out


def test_kh_frame_out_of_range(capsys):
    assert main(["kh", "sphere", "--frame", "9"]) == 2
    assert "frame 9" in capsys.readouterr().err


def test_map_of_torus(capsys):
    assert main(["map", "torus", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "grading audit: ok" in out
    assert "scalar" in out


def test_map_json(capsys):
    assert main(["map", "std_rp2"]) == 0
    data = _json(capsys)
    assert data["stats"]["normal_euler"] == -2
    assert data["stats"]["crosscap"] == 1
    assert data["audit"] is True
    assert data["entries"] == []


def test_mixed_needs_a_cut(capsys):
    assert main(["mixed", "sphere"]) == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_input(capsys):
    assert main(["kh", "no_such_knot"]) == 2
    assert "no_such_knot" in capsys.readouterr().err


def test_verify_command(capsys):
    assert main(["verify", "d2", "--cases", "2", "--seed", "4"]) == 0
    report = SuiteReport.model_validate(_json(capsys))
    assert report.passed
    assert report.cases == 2


def test_corpus_listing(capsys):
    assert main(["corpus", "list", "--format", "json"]) == 0
    entries = {e["name"]: e for e in _json(capsys)["entries"]}
    assert entries["trefoil"]["kind"] == "diagram"
    assert entries["torus"]["kind"] == "movie"
    assert entries["klein"]["kind"] == "builtin"
    assert entries["empty"]["boundary"] == "empty"


def test_input_from_a_path(tmp_path, capsys):
    path = tmp_path / "hopf.pd"
    path.write_text("# hopf\ndiagram PD[X(1,3,2,4;+),X(3,1,4,2;+)]\n", encoding="utf-8")
    assert main(["kh", str(path)]) == 0
    assert len(_json(capsys)["infty"]["free"]) == 4


def test_settings_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("KHMIX_SEED", "41")
    monkeypatch.setenv("KHMIX_THEORY", "lee")
    monkeypatch.setenv("KHMIX_CORPUS", str(tmp_path))
    s = Settings()
    assert s.seed == 41
    assert s.theory == "lee"
    assert s.corpus == tmp_path
    assert s.max_pole_depth == 64


def _lee_torus(tmp_path):
    path = tmp_path / "lee_torus.mov"
    path.write_text((Path(__file__).parents[1] / "corpus" / "torus.mov").read_text().replace(
        "diagram", "theory lee\nfield f5\ndiagram", 1
    ), encoding="utf-8")
    return path


def test_movie_header_theory_is_kept(tmp_path, capsys):
    assert main(["map", str(_lee_torus(tmp_path))]) == 0
    data = _json(capsys)
    assert data["theory"] == "lee"
    assert data["field"] == "f5"


def test_theory_flag_overrides_the_header(tmp_path, capsys):
    assert main(["map", str(_lee_torus(tmp_path)), "--theory", "bn"]) == 0
    data = _json(capsys)
    assert data["theory"] == "bn"
    assert data["field"] == "f5"


@pytest.mark.parametrize("command", ["kh", "map"])
def test_jobs_do_not_change_results(command, capsys):
    assert main([command, "torus" if command == "map" else "trefoil"]) == 0
    serial = _json(capsys)
    assert main([command, "torus" if command == "map" else "trefoil", "--jobs", "3"]) == 0
    assert _json(capsys) == serial


def test_mixed_accepts_jobs(capsys):
    assert main(["mixed", "sphere", "--jobs", "2"]) == 2
    assert "error:" in capsys.readouterr().err


def test_builtins_resolve_by_file_name(capsys):
    assert main(["map", "klein.mov"]) == 0
    assert _json(capsys)["stats"]["crosscap"] == 2


def test_corpus_write_round_trips(tmp_path, capsys):
    assert main(["corpus", "write", "genus2", "rp2_triple", "--to", str(tmp_path)]) == 0
    written = capsys.readouterr().out.split()
    assert [Path(p).name for p in written] == ["genus2.mov", "rp2_triple.mov"]
    for name in ("genus2", "rp2_triple"):
        loaded = load_movie(tmp_path / f"{name}.mov")
        built = builtin_movie(name)
        assert loaded.name == name
        assert loaded.cut == built.cut
        assert loaded.counts() == built.counts()
        assert loaded.description == built.description
    assert main(["map", str(tmp_path / "genus2.mov"), "--format", "json"]) == 0
    assert _json(capsys)["stats"]["euler_char"] == -2


def test_corpus_write_rejects_unknown_names(tmp_path, capsys):
    assert main(["corpus", "write", "no_such_movie", "--to", str(tmp_path)]) == 2
    assert "no_such_movie" in capsys.readouterr().err
    assert not list(tmp_path.iterdir())
