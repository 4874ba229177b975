"""
Parsers tree-sitter por lenguaje y tokenización léxica de programas.

Los tokens son las hojas del CST en orden de fuente; comentarios fuera,
literales de cadena como un único token.
"""

import threading
from typing import Dict, FrozenSet, Iterator

import tree_sitter_java
import tree_sitter_python
from tree_sitter import Language as TSLanguage
from tree_sitter import Node, Parser, Tree

from models.errors import CatastrophicParseFailure, UnsupportedLanguage
from models.program import Language, Program, TokenSequence

_GRAMMARS: Dict[Language, TSLanguage] = {
    Language.PYTHON: TSLanguage(tree_sitter_python.language()),
    Language.JAVA: TSLanguage(tree_sitter_java.language()),
}

COMMENT_KINDS: Dict[Language, FrozenSet[str]] = {
    Language.PYTHON: frozenset({"comment"}),
    Language.JAVA: frozenset({"line_comment", "block_comment"}),
}

# Nodos con hijos que se emiten como un solo token
ATOMIC_KINDS: Dict[Language, FrozenSet[str]] = {
    Language.PYTHON: frozenset({"string"}),
    Language.JAVA: frozenset({"string_literal", "character_literal", "text_block"}),
}

# Un parser por hilo: las instancias de Parser no se comparten
_local = threading.local()


def _language_of(program: Program) -> Language:
    if not isinstance(program.language, Language) or program.language not in _GRAMMARS:
        raise UnsupportedLanguage(f"unsupported language: {program.language!r}")
    return program.language


def get_parser(language: Language) -> Parser:
    """Parser tree-sitter del hilo actual para el lenguaje"""
    parsers = getattr(_local, "parsers", None)
    if parsers is None:
        parsers = _local.parsers = {}
    if language not in parsers:
        parsers[language] = Parser(_GRAMMARS[language])
    return parsers[language]


def parse_source(program: Program) -> Tree:
    language = _language_of(program)
    try:
        tree = get_parser(language).parse(program.source.encode("utf-8"))
    except Exception as e:  # tree-sitter no produjo ningún árbol
        raise CatastrophicParseFailure(f"{language.value} grammar produced no tree: {e}") from e
    if tree is None or tree.root_node is None:
        raise CatastrophicParseFailure(f"{language.value} grammar produced no tree")
    return tree


def iter_lexical_leaves(node: Node, language: Language) -> Iterator[Node]:
    """Hojas léxicas en orden de fuente (DFS iterativo)"""
    comments = COMMENT_KINDS[language]
    atomic = ATOMIC_KINDS[language]
    stack = [node]
    while stack:
        current = stack.pop()
        if current.type in comments:
            continue
        if current.child_count == 0 or current.type in atomic:
            if current.end_byte > current.start_byte and not current.is_missing:
                yield current
            continue
        stack.extend(reversed(current.children))


def tokens_from_tree(tree: Tree, language: Language) -> TokenSequence:
    tokens = []
    for leaf in iter_lexical_leaves(tree.root_node, language):
        text = leaf.text.decode("utf-8", errors="replace").strip()
        if text:
            tokens.append(text)
    return TokenSequence(tuple(tokens))


def tokenize(program: Program) -> TokenSequence:
    """
    Tokenizar un programa según la gramática léxica de su lenguaje

    Args:
        program: Programa a tokenizar

    Returns:
        TokenSequence sin comentarios ni espacios; cadenas como un solo token
    """
    language = _language_of(program)
    if not program.source.strip():
        return TokenSequence(())
    return tokens_from_tree(parse_source(program), language)
