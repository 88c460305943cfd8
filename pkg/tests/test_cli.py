import csv
import io
import json
from math import comb

import pytest

from rankforge.cli import (
    EXIT_MISMATCH,
    EXIT_NOT_FOUND,
    EXIT_OK,
    EXIT_UNCERTIFIED,
    EXIT_USAGE,
    format_ranking_text,
    main,
    parse_ranking_text,
)
from rankforge.hands import HandClass as H, Ranking
from rankforge.ranking import frequency_ranking

SHOWDOWN_R13 = {
    "SF": "41584", "4X": "224848", "FH": "3473184", "FL": "4047644", "ST": "6180020",
    "3X": "6461620", "HC": "23294460", "2P": "31433400", "1P": "58627800",
}


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


class TestFreq:
    def test_both_agree(self):
        code, text = run("freq", "--ranks", "11", "--method", "both", "--format", "json")
        assert code == EXIT_OK
        data = json.loads(text)
        assert data["agreement"] is True
        assert data["counts"]["HC"] == str(comb(44, 7))
        assert len(data["counts"]) == 9

    def test_enum_csv(self):
        code, text = run("freq", "--ranks", "9", "--method", "enum", "--format", "csv")
        assert code == EXIT_OK
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["class", "count"]
        assert [r[0] for r in rows[1:]] == ["HC", "1P", "2P", "3X", "ST", "FL", "FH", "4X", "SF"]
        assert dict(rows[1:])["SF"] == "10560"

    def test_small_deck_is_usage_error(self, capsys):
        code, _ = run("freq", "--ranks", "4")
        assert code == EXIT_USAGE
        assert "at least 5" in capsys.readouterr().err

    def test_closed_below_validity(self):
        assert run("freq", "--ranks", "6")[0] == EXIT_USAGE
        code, text = run("freq", "--ranks", "6", "--classes", "4X,FL")
        assert code == EXIT_OK and "4X" in text and "ST" not in text

    def test_both_below_validity_compares_valid_classes(self):
        code, text = run("freq", "--ranks", "6", "--method", "both", "--format", "json")
        data = json.loads(text)
        assert code == EXIT_OK and "ST" not in data["compared"] and "SF" in data["compared"]

    def test_mismatch_exit_code(self, monkeypatch):
        import rankforge.cli as cli

        monkeypatch.setattr(cli, "freq_closed", lambda h, r: 0)
        assert run("freq", "--ranks", "8", "--method", "both")[0] == EXIT_MISMATCH

    def test_ceiling_needs_long_run(self):
        assert run("freq", "--ranks", "17", "--method", "enum")[0] == EXIT_USAGE


class TestShowdown:
    def test_short_deck_table(self):
        code, text = run("showdown", "--ranks", "9", "--format", "csv")
        rows = list(csv.reader(io.StringIO(text)))[1:]
        assert rows == [
            ["SF", "10560"], ["4X", "44640"], ["FL", "175560"], ["HC", "233100"], ["3X", "607200"],
            ["FH", "633024"], ["ST", "1169940"], ["1P", "2316600"], ["2P", "3157056"],
        ]

    @pytest.mark.slow
    def test_standard_deck_json(self):
        code, text = run("showdown", "--ranks", "13", "--format", "json")
        data = json.loads(text)
        assert code == EXIT_OK
        assert data["counts"] == SHOWDOWN_R13
        assert str(sum(int(v) for v in data["counts"].values())) == data["total"] == "133784560"
        assert json.dumps(data, indent=2) + "\n" == text

    def test_ranking_file(self, tmp_path):
        path = tmp_path / "canonical.txt"
        path.write_text("# lowest first\nHC\n1P\n2P\n3X\nST\nFL\nFH\n4X\nSF\n")
        code, text = run("showdown", "--ranks", "9", "--ranking", str(path), "--format", "json")
        assert code == EXIT_OK
        assert json.loads(text)["counts"]["HC"] == "233100"

    def test_bad_ranking_file(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("HC\n1P\n")
        assert run("showdown", "--ranks", "9", "--ranking", str(path))[0] == EXIT_USAGE


class TestRank:
    def test_standard(self):
        code, text = run("rank", "--ranks", "13", "--format", "json")
        assert json.loads(text)["ranking"] == ["HC", "1P", "2P", "3X", "ST", "FL", "FH", "4X", "SF"]

    def test_scan(self):
        code, text = run("rank", "--scan", "5..1000", "--format", "json")
        segs = json.loads(text)["segments"]
        assert [s["r_low"] for s in segs] == [5, 6, 7, 8, 13, 15, 19, 36, 307, 761]

    def test_r5_tie_annotated(self):
        code, text = run("rank", "--ranks", "5")
        assert "FL=SF   (tie)" in text
        assert json.loads(run("rank", "--ranks", "5", "--format", "json")[1])["ties"][-1] == ["FL", "SF"]

    def test_bad_scan(self):
        with pytest.raises(SystemExit):
            run("rank", "--scan", "9..5")


class TestCertify:
    def test_761(self):
        code, text = run("certify", "--from", "761")
        assert code == EXIT_OK and "certified" in text and "4X more frequent than ST: ok" in text

    def test_760(self):
        code, text = run("certify", "--from", "760", "--format", "json")
        data = json.loads(text)
        assert code == EXIT_UNCERTIFIED
        assert {data["failure"]["lower"], data["failure"]["upper"]} == {"ST", "4X"}
        assert data["failure"]["witness"] == 761

    def test_pair(self):
        assert run("certify", "--from", "307", "--pair", "FL,1P")[0] == EXIT_OK
        assert run("certify", "--from", "306", "--pair", "FL,1P")[0] == EXIT_UNCERTIFIED

    def test_pair_arity(self):
        assert run("certify", "--from", "307", "--pair", "FL")[0] == EXIT_USAGE


class TestIterate:
    @pytest.mark.slow
    def test_standard_first_step(self):
        code, text = run("iterate", "--ranks", "13", "--format", "json")
        data = json.loads(text)
        assert code == EXIT_OK
        assert data["first_step_non_hc_unchanged"] is True
        assert all("HC" in pair for pair in data["first_step_changes"])

    def test_scan(self):
        code, text = run("iterate", "--scan", "5..9", "--format", "json")
        data = json.loads(text)
        assert [d["r"] for d in data] == [5, 6, 7, 8, 9]
        assert all(d["kind"] in ("fixpoint", "cycle") for d in data)


class TestAgree:
    def test_not_found(self):
        assert run("agree", "--max", "9", "--include-hc")[0] == EXIT_NOT_FOUND


class TestFormats:
    @pytest.mark.parametrize(
        "argv",
        [
            ("showdown", "--ranks", "9", "--format", "json"),
            ("freq", "--ranks", "10", "--format", "json"),
            ("rank", "--scan", "5..40", "--format", "json"),
            ("certify", "--from", "761", "--format", "json"),
        ],
    )
    def test_json_round_trip(self, argv):
        _, text = run(*argv)
        assert json.dumps(json.loads(text), indent=2) + "\n" == text

    def test_ranking_text_round_trip(self):
        rk = frequency_ranking(5)
        text = format_ranking_text(rk)
        assert "FL=SF" in text
        assert parse_ranking_text(text) == rk

    def test_threads_flag_and_env(self, monkeypatch):
        monkeypatch.setenv("RANKFORGE_THREADS", "2")
        a = run("showdown", "--ranks", "8", "--format", "json")[1]
        b = run("showdown", "--ranks", "8", "--format", "json", "--threads", "1")[1]
        assert a == b
