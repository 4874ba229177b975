from collections import Counter

import pytest

from components.static_analysis import extract_dataflow, extract_subtrees, parse_cst
from conftest import PYTHON_CORPUS, make_program
from models.errors import InvalidConfig
from models.program import Language


def edges(source, language=Language.PYTHON):
    return extract_dataflow(make_program(source, language)).edges


class TestParseCst:
    def test_python_root_is_module(self):
        tree = parse_cst(make_program("x = 1"))
        assert tree.root.type == "module"
        assert not tree.has_errors

    def test_empty_source_has_no_named_children(self):
        assert parse_cst(make_program("")).root.named_child_count == 0
        assert parse_cst(make_program("", Language.JAVA)).root.named_child_count == 0

    def test_java_class_declaration(self):
        tree = parse_cst(make_program("class A {}", Language.JAVA))
        assert tree.root.type == "program"
        assert [child.type for child in tree.root.named_children] == ["class_declaration"]

    def test_syntax_errors_are_kept_in_tree(self):
        tree = parse_cst(make_program("def f(:\n    return 1\n"))
        assert tree.has_errors


class TestExtractSubtrees:
    def test_identical_programs_give_identical_bags(self):
        for source in PYTHON_CORPUS:
            first = extract_subtrees(parse_cst(make_program(source)))
            second = extract_subtrees(parse_cst(make_program(source)))
            assert first.entries == second.entries

    def test_literal_values_do_not_change_kinds(self):
        one = extract_subtrees(parse_cst(make_program("x = 1")), height=1)
        two = extract_subtrees(parse_cst(make_program("x = 2")), height=1)
        assert one.entries == two.entries

    def test_literal_kind_changes_bag(self):
        number = extract_subtrees(parse_cst(make_program("x = 1")), height=1)
        text = extract_subtrees(parse_cst(make_program('x = "1"')), height=1)
        assert number.entries != text.entries

    def test_empty_program_gives_empty_bag(self):
        assert len(extract_subtrees(parse_cst(make_program("")))) == 0

    def test_comments_do_not_change_bag(self):
        plain = extract_subtrees(parse_cst(make_program("x = 1\ny = x\n")))
        commented = extract_subtrees(parse_cst(make_program("# head\nx = 1  # one\ny = x\n")))
        assert plain.entries == commented.entries

    def test_height_must_be_positive(self):
        with pytest.raises(InvalidConfig):
            extract_subtrees(parse_cst(make_program("x = 1")), height=0)

    def test_taller_fingerprints_are_more_specific(self):
        source = "def f(a):\n    return a + 1\n"
        low = extract_subtrees(parse_cst(make_program(source)), height=1)
        high = extract_subtrees(parse_cst(make_program(source)), height=3)
        assert len(low) == len(high)
        assert set(low.entries) != set(high.entries)


class TestExtractDataflow:
    def test_copy(self):
        assert edges("a = 1\nb = a\n") == Counter({("a", "b"): 1})

    def test_pass_has_no_edges(self):
        assert edges("pass\n") == Counter()

    def test_two_uses(self):
        assert edges("a = 1; b = a; c = a") == Counter({("a", "b"): 1, ("a", "c"): 1})

    def test_binary_expression_reads_every_operand(self):
        assert edges("c = a + b") == Counter({("a", "c"): 1, ("b", "c"): 1})

    def test_call_arguments_are_read_function_name_is_not(self):
        assert edges("y = f(x)") == Counter({("x", "y"): 1})

    def test_for_loop_defines_target(self):
        assert edges("for x in xs:\n    y = x\n") == Counter({("xs", "x"): 1, ("x", "y"): 1})

    def test_augmented_assignment(self):
        assert edges("t = 0\nt += v\n") == Counter({("v", "t"): 1})

    def test_comments_are_ignored(self):
        assert edges("a = 1\n# b = z\nb = a  # c = q\n") == Counter({("a", "b"): 1})

    def test_java_declarations(self):
        source = "class A {\n    void f() {\n        int a = 1;\n        int b = a;\n        b = a + b;\n    }\n}\n"
        assert edges(source, Language.JAVA) == Counter({("a", "b"): 2, ("b", "b"): 1})

    def test_java_enhanced_for(self):
        source = "class A {\n    int f(int[] xs) {\n        int t = 0;\n        for (int x : xs) { t += x; }\n        return t;\n    }\n}\n"
        assert edges(source, Language.JAVA) == Counter({("xs", "x"): 1, ("x", "t"): 1})

    @pytest.mark.parametrize("source,language", [
        ("a = b = c\n", Language.PYTHON),
        ("class A {\n    void f(int a, int b, int c) {\n        a = b = c;\n    }\n}\n", Language.JAVA),
        ("class A {\n    void f(int b, int c) {\n        int a = b = c;\n    }\n}\n", Language.JAVA),
    ])
    def test_chained_assignment_flows_from_innermost_value(self, source, language):
        assert edges(source, language) == Counter({("c", "a"): 1, ("c", "b"): 1})

    def test_chained_assignment_with_index(self):
        python = edges("xs[i] = y = z\n")
        java = edges("class A {\n    void f() {\n        xs[i] = y = z;\n    }\n}\n", Language.JAVA)
        assert python == java == Counter({("z", "xs"): 1, ("i", "xs"): 1, ("z", "y"): 1, ("i", "y"): 1})
