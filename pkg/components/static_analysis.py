"""
Análisis estático sobre el CST: bolsas de sub-árboles y aristas de flujo de datos.

El flujo de datos es intraprocedural e insensible al flujo: las sentencias se
recorren en orden de fuente y cada asignación emite una arista desde cada
variable leída a la derecha hacia cada variable definida a la izquierda.
Las aristas se identifican por nombre, no por ocurrencia.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from tree_sitter import Node, Tree

from components.tokenizer import COMMENT_KINDS, parse_source
from models.analysis import DataflowGraph, SubtreeBag
from models.errors import InvalidConfig
from models.program import Language, Program

DEFAULT_SUBTREE_HEIGHT = 2


@dataclass(frozen=True)
class SyntaxTree:
    """Árbol de sintaxis concreta de un programa"""

    tree: Tree
    language: Language

    @property
    def root(self) -> Node:
        return self.tree.root_node

    @property
    def has_errors(self) -> bool:
        return self.root.has_error


def parse_cst(program: Program) -> SyntaxTree:
    """
    Parsear un programa a su CST completo

    Los errores de sintaxis quedan como nodos ERROR dentro del árbol.
    """
    return SyntaxTree(parse_source(program), program.language)


def _significant_children(node: Node, comments) -> List[Node]:
    return [c for c in node.children if c.type not in comments and not c.is_missing]


def _fingerprint(node: Node, height: int, comments) -> str:
    children = _significant_children(node, comments)
    if height == 0 or not children:
        return node.type
    inner = " ".join(_fingerprint(child, height - 1, comments) for child in children)
    return f"({node.type} {inner})"


def extract_subtrees(tree: SyntaxTree, height: int = DEFAULT_SUBTREE_HEIGHT) -> SubtreeBag:
    """
    Extraer una huella por nodo interno: tipo del nodo y tipos de sus descendientes
    hasta la altura dada

    Args:
        tree: CST del programa
        height: Altura máxima de cada huella (>= 1)

    Returns:
        Bolsa (multiconjunto) de huellas
    """
    if height < 1:
        raise InvalidConfig(f"subtree height must be >= 1, got {height}")
    comments = COMMENT_KINDS[tree.language]
    bag: Counter = Counter()
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if node.type in comments:
            continue
        children = _significant_children(node, comments)
        if children:
            bag[_fingerprint(node, height, comments)] += 1
            stack.extend(children)
    return SubtreeBag(bag)


# ---------------------------------------------------------------------------
# Flujo de datos
# ---------------------------------------------------------------------------

Edge = Tuple[str, str]


def _ids(*nodes: Optional[Node]) -> set:
    return {n.id for n in nodes if n is not None}


def _text(node: Node) -> str:
    return " ".join(node.text.decode("utf-8", errors="replace").split())


class _DataflowWalker:
    """Recorrido genérico; cada lenguaje define sus construcciones de asignación"""

    identifier_kinds = frozenset({"identifier"})
    # Sub-árboles que nunca aportan lecturas (parámetros de lambdas, etc.)
    opaque_kinds: frozenset = frozenset()

    def __init__(self):
        self.edges: List[Edge] = []
        self.handlers: Dict[str, Callable[[Node], List[Node]]] = {}

    def run(self, root: Node) -> List[Edge]:
        stack = [root]
        while stack:
            node = stack.pop()
            handler = self.handlers.get(node.type)
            follow = handler(node) if handler else list(node.children)
            stack.extend(reversed([n for n in follow if n is not None]))
        return self.edges

    def emit(self, reads: List[str], targets: List[str]) -> None:
        for target in targets:
            for read in reads:
                self.edges.append((read, target))

    # Lecturas -----------------------------------------------------------

    def reads(self, node: Optional[Node]) -> List[str]:
        names: List[str] = []
        if node is None:
            return names
        stack = [node]
        while stack:
            current = stack.pop()
            if current.type in self.opaque_kinds:
                continue
            if current.type in self.identifier_kinds:
                names.append(_text(current))
                continue
            expanded = self.expand_read(current)
            if expanded is None:
                stack.extend(reversed(current.children))
            elif isinstance(expanded, str):
                names.append(expanded)
            else:
                stack.extend(reversed(expanded))
        return names

    def expand_read(self, node: Node):
        """None = descender normalmente; str = nombre leído; lista = nodos a visitar"""
        return None

    # Destinos -----------------------------------------------------------

    def targets(self, node: Optional[Node]) -> Tuple[List[str], List[str]]:
        """(variables definidas, variables leídas dentro del destino, p. ej. índices)"""
        return [], []


class _PythonDataflow(_DataflowWalker):
    opaque_kinds = frozenset({"lambda_parameters", "comment"})

    def __init__(self):
        super().__init__()
        self.handlers = {
            "assignment": self._assignment,
            "augmented_assignment": self._augmented,
            "for_statement": self._for,
            "for_in_clause": self._for,
            "named_expression": self._named,
        }

    def _dotted(self, node: Node) -> bool:
        while node.type == "attribute":
            node = node.child_by_field_name("object")
            if node is None:
                return False
        return node.type == "identifier"

    def expand_read(self, node: Node):
        if node.type == "call":
            function = node.child_by_field_name("function")
            rest = [c for c in node.children if function is None or c.id != function.id]
            if function is not None and function.type == "attribute":
                rest.insert(0, function.child_by_field_name("object"))
            elif function is not None and function.type != "identifier":
                rest.insert(0, function)
            return [n for n in rest if n is not None]
        if node.type == "attribute":
            if self._dotted(node):
                return _text(node)
            obj = node.child_by_field_name("object")
            return [obj] if obj is not None else []
        if node.type == "keyword_argument":
            value = node.child_by_field_name("value")
            return [value] if value is not None else []
        return None

    def targets(self, node):
        defined: List[str] = []
        used: List[str] = []
        if node is None:
            return defined, used
        stack = [node]
        while stack:
            current = stack.pop()
            kind = current.type
            if kind == "identifier":
                defined.append(_text(current))
            elif kind == "attribute":
                if self._dotted(current):
                    defined.append(_text(current))
                else:
                    used.extend(self.reads(current.child_by_field_name("object")))
            elif kind == "subscript":
                base = current.child_by_field_name("value")
                if base is not None:
                    stack.append(base)
                for index in current.children_by_field_name("subscript"):
                    used.extend(self.reads(index))
            else:
                stack.extend(reversed(current.named_children))
        return defined, used

    def _assignment(self, node: Node) -> List[Node]:
        defined: List[str] = []
        used: List[str] = []
        current = node
        # a = b = valor: cadena de asignaciones anidadas por el campo right
        while current is not None and current.type == "assignment":
            names, index_reads = self.targets(current.child_by_field_name("left"))
            defined.extend(names)
            used.extend(index_reads)
            current = current.child_by_field_name("right")
        if current is not None:
            used = self.reads(current) + used
        self.emit(used, defined)
        return [current] if current is not None else []

    def _augmented(self, node: Node) -> List[Node]:
        defined, index_reads = self.targets(node.child_by_field_name("left"))
        right = node.child_by_field_name("right")
        self.emit(self.reads(right) + index_reads, defined)
        return [right]

    def _for(self, node: Node) -> List[Node]:
        defined, index_reads = self.targets(node.child_by_field_name("left"))
        right = node.child_by_field_name("right")
        self.emit(self.reads(right) + index_reads, defined)
        skip = _ids(node.child_by_field_name("left"), right)
        return [right] + [c for c in node.children if c.id not in skip]

    def _named(self, node: Node) -> List[Node]:
        name = node.child_by_field_name("name")
        value = node.child_by_field_name("value")
        self.emit(self.reads(value), [_text(name)] if name is not None else [])
        return [value]


class _JavaDataflow(_DataflowWalker):
    opaque_kinds = frozenset({"line_comment", "block_comment", "inferred_parameters", "formal_parameters"})

    def __init__(self):
        super().__init__()
        self.handlers = {
            "variable_declarator": self._declarator,
            "assignment_expression": self._assignment,
            "enhanced_for_statement": self._enhanced_for,
        }

    def _dotted(self, node: Node) -> bool:
        while node.type == "field_access":
            node = node.child_by_field_name("object")
            if node is None:
                return False
        return node.type in ("identifier", "this")

    def expand_read(self, node: Node):
        if node.type == "method_invocation":
            name = node.child_by_field_name("name")
            return [c for c in node.children if name is None or c.id != name.id]
        if node.type == "field_access":
            if self._dotted(node):
                return _text(node)
            obj = node.child_by_field_name("object")
            return [obj] if obj is not None else []
        if node.type == "lambda_expression":
            body = node.child_by_field_name("body")
            return [body] if body is not None else []
        return None

    def targets(self, node):
        defined: List[str] = []
        used: List[str] = []
        if node is None:
            return defined, used
        if node.type == "identifier":
            defined.append(_text(node))
        elif node.type == "field_access":
            if self._dotted(node):
                defined.append(_text(node))
            else:
                used.extend(self.reads(node.child_by_field_name("object")))
        elif node.type == "array_access":
            names, inner = self.targets(node.child_by_field_name("array"))
            defined.extend(names)
            used.extend(inner)
            used.extend(self.reads(node.child_by_field_name("index")))
        return defined, used

    def _chain(self, node: Optional[Node]) -> Tuple[List[str], List[str], Optional[Node]]:
        """a = b = valor: destinos de la cadena, lecturas de índices y el valor más interno"""
        defined: List[str] = []
        used: List[str] = []
        while node is not None and node.type == "assignment_expression":
            names, index_reads = self.targets(node.child_by_field_name("left"))
            defined.extend(names)
            used.extend(index_reads)
            node = node.child_by_field_name("right")
        return defined, used, node

    def _declarator(self, node: Node) -> List[Node]:
        name = node.child_by_field_name("name")
        defined, index_reads, value = self._chain(node.child_by_field_name("value"))
        if value is not None and name is not None:
            self.emit(self.reads(value) + index_reads, [_text(name)] + defined)
        return [value] if value is not None else []

    def _assignment(self, node: Node) -> List[Node]:
        defined, index_reads, right = self._chain(node)
        self.emit(self.reads(right) + index_reads, defined)
        return [right] if right is not None else []

    def _enhanced_for(self, node: Node) -> List[Node]:
        name = node.child_by_field_name("name")
        value = node.child_by_field_name("value")
        if name is not None:
            self.emit(self.reads(value), [_text(name)])
        skip = _ids(name, value, node.child_by_field_name("type"))
        return [value] + [c for c in node.children if c.id not in skip]


_WALKERS = {
    Language.PYTHON: _PythonDataflow,
    Language.JAVA: _JavaDataflow,
}


def dataflow_from_tree(tree: SyntaxTree) -> DataflowGraph:
    walker = _WALKERS[tree.language]()
    return DataflowGraph.from_pairs(walker.run(tree.root))


def extract_dataflow(program: Program) -> DataflowGraph:
    """
    Extraer las aristas def-use de un programa

    Args:
        program: Programa (se analiza el árbol recuperado aunque tenga errores)

    Returns:
        DataflowGraph con aristas (variable leída, variable definida)
    """
    return dataflow_from_tree(parse_cst(program))
