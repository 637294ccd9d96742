import pytest

from weakattract.repfile import DATA_DIR, RepFileError, check, dumps, load, loads, read_corpus
from conftest import EXAMPLES, rep_file

EX1_TEXT = (DATA_DIR / "ex1.toml").read_text()


@pytest.mark.parametrize("name", EXAMPLES)
def test_round_trip(name):
    rf = rep_file(name)
    again = loads(dumps(rf))
    assert again == rf
    assert dumps(again) == dumps(rf)


@pytest.mark.parametrize("name", EXAMPLES)
def test_bundled_files_check_clean(name):
    assert check(rep_file(name)) == []


def test_bad_inverse_mark_has_line_number():
    text = EX1_TEXT.replace('c = "c b c"', "c = \"a''\"")
    with pytest.raises(RepFileError) as exc:
        loads(text)
    assert exc.value.line == text.splitlines().index("c = \"a''\"") + 1
    assert "a''" in str(exc.value)


def test_filtration_violation_reported_by_check():
    rf = loads(EX1_TEXT.replace('b = "b a"', 'b = "b c"'))
    assert any("G_2" in v for v in check(rf))


@pytest.mark.parametrize("edit,fragment", [
    (("[lamination]", "[laminationx]"), "[lamination]"),
    (('class = "EG"', 'class = "XG"'), "unknown class"),
    (('a = "a"', 'z = "a"'), "unknown edge"),
    (("r = 3", "r = 7"), None),
])
def test_structural_errors(edit, fragment):
    text = EX1_TEXT.replace(*edit)
    if fragment is None:
        assert any("not a stratum index" in v for v in check(loads(text)))
        return
    with pytest.raises(RepFileError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        loads(text)


def test_toml_syntax_error_has_line(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text(EX1_TEXT + "\n[map\n")
    with pytest.raises(RepFileError) as exc:
        load(p)
    assert exc.value.line is not None


def test_missing_file():
    with pytest.raises(RepFileError, match="cannot read"):
        load("/nonexistent/file.toml")


def test_partner_path_is_relative_to_file():
    rf = rep_file("dual_phi")
    assert rf.partner_path() == DATA_DIR / "dual_psi.toml"


def test_read_corpus_skips_comments(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("# header\nab\n\n c b  # trailing\n")
    assert read_corpus(p) == ["ab", "c b"]
