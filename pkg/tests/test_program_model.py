import pytest

from components.tokenizer import tokenize
from conftest import JAVA_CORPUS, PYTHON_CORPUS, make_program, make_samples
from models.errors import TooFewSamples, UnsupportedLanguage
from models.program import Language, SampleSet


class TestLanguage:
    def test_parse_is_case_insensitive(self):
        assert Language.parse("Python") is Language.PYTHON
        assert Language.parse(" JAVA ") is Language.JAVA

    def test_unknown_language(self):
        with pytest.raises(UnsupportedLanguage):
            Language.parse("cobol")


class TestTokenize:
    def test_simple_assignment(self):
        assert tokenize(make_program("x = 1")).tokens == ("x", "=", "1")

    def test_empty_source(self):
        assert tokenize(make_program("")).tokens == ()
        assert tokenize(make_program("   \n\t")).tokens == ()

    def test_comment_is_stripped(self):
        assert tokenize(make_program("x = 1  # note")).tokens == ("x", "=", "1")

    def test_string_literal_is_one_token(self):
        assert tokenize(make_program('s = "a b c"')).tokens == ("s", "=", '"a b c"')

    def test_java_comments_are_stripped(self):
        source = "class A {\n    // line\n    /* block */\n    int x = 1;\n}\n"
        tokens = tokenize(make_program(source, Language.JAVA)).tokens
        assert tokens == ("class", "A", "{", "int", "x", "=", "1", ";", "}")

    def test_java_string_literal_is_one_token(self):
        tokens = tokenize(make_program('class A { String s = "x y"; }', Language.JAVA)).tokens
        assert '"x y"' in tokens

    def test_deterministic(self):
        for source in PYTHON_CORPUS:
            assert tokenize(make_program(source)) == tokenize(make_program(source))
        for source in JAVA_CORPUS:
            program = make_program(source, Language.JAVA)
            assert len(tokenize(program)) > 0

    def test_syntax_error_still_tokenizes(self):
        tokens = tokenize(make_program("def f(:\n    return 1\n")).tokens
        assert "def" in tokens and "return" in tokens


class TestSampleSet:
    def test_needs_two_programs(self):
        with pytest.raises(TooFewSamples):
            make_samples(["x = 1"]).validate_for_estimation()

    def test_mixed_languages_rejected(self):
        samples = SampleSet("r", "req", (make_program("x = 1"), make_program("class A {}", Language.JAVA)))
        with pytest.raises(UnsupportedLanguage):
            samples.validate_for_estimation()

    def test_truncated_keeps_first_programs(self):
        samples = make_samples(["a = 1", "b = 2", "c = 3"])
        assert [p.source for p in samples.truncated(2).programs] == ["a = 1", "b = 2"]

    def test_correct_count(self):
        assert make_samples(["a", "b", "c"], passed=[True, False, True]).correct_count == 2
        assert make_samples(["a", "b"]).correct_count is None
