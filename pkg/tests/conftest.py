"""Fixtures compartidos: corpus de programas, datos sintéticos y un endpoint simulado."""

import json
import logging
import math
import os
import socket
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable, Dict, List, Optional, Sequence

import pytest

from models.benchmark import BenchmarkSample, Label, Split
from models.generation import SamplingConfig
from models.program import Language, Program, ProgramOrigin, SampleSet
from models.sample_archive import ArchivedProgram, SampleArchiveEntry

# ---------------------------------------------------------------------------
# Corpus de programas
# ---------------------------------------------------------------------------

PYTHON_CORPUS = [
    "def solve(xs):\n    total = 0\n    for x in xs:\n        total += x\n    return total\n",
    "def solve(s):\n    return s[::-1]\n",
    "import math\n\n\ndef solve(n):\n    return math.factorial(n) % 7\n",
    "class Solver:\n    def run(self, a, b):\n        while b:\n            a, b = b, a % b\n        return a\n",
    "def solve(d):\n    keys = sorted(d)\n    return {k: d[k] * 2 for k in keys}\n",
    "def solve(xs):\n    return sum(xs)\n",
]

JAVA_CORPUS = [
    "class A {\n    int add(int a, int b) {\n        int c = a + b;\n        return c;\n    }\n}\n",
    "class B {\n    String rev(String s) {\n        return new StringBuilder(s).reverse().toString();\n    }\n}\n",
    "class C {\n    int sum(int[] xs) {\n        int t = 0;\n        for (int x : xs) {\n            t += x;\n        }\n        return t;\n    }\n}\n",
]

CORPUS = {Language.PYTHON: PYTHON_CORPUS, Language.JAVA: JAVA_CORPUS}


def make_program(source: str, language: Language = Language.PYTHON, index: int = 0,
                 passed: Optional[bool] = None) -> Program:
    return Program(source, language, ProgramOrigin(sample_index=index), passed)


def make_samples(sources: Sequence[str], language: Language = Language.PYTHON,
                 requirement_id: str = "req-1", passed: Optional[Sequence[bool]] = None) -> SampleSet:
    verdicts = list(passed) if passed is not None else [None] * len(sources)
    programs = tuple(make_program(s, language, k, v) for k, (s, v) in enumerate(zip(sources, verdicts)))
    return SampleSet(requirement_id, "requirement text", programs)


@pytest.fixture
def corpus():
    return CORPUS


# ---------------------------------------------------------------------------
# Conjunto sintético separable
# ---------------------------------------------------------------------------

REQUIREMENT_WORDS = {
    True: ["sum", "list", "numbers", "total", "add", "integers"],
    False: ["parse", "graph", "regex", "network", "socket", "stream"],
}


def synthetic_dataset(n_passed: int = 6, n_failed: int = 6, n_programs: int = 4, model: str = "m1",
                      train_fraction: float = 0.5, flat_probs: bool = False):
    """
    Benchmark y archivo donde los requerimientos passed tienen programas idénticos
    y los failed programas distintos entre sí; con flat_probs todas las
    probabilidades de token son iguales

    Returns:
        (lista de BenchmarkSample, lista de SampleArchiveEntry)
    """
    benchmark: List[BenchmarkSample] = []
    archive: List[SampleArchiveEntry] = []
    for k in range(n_passed + n_failed):
        passed = k < n_passed
        sample_id = f"{'p' if passed else 'f'}-{k:03d}"
        words = REQUIREMENT_WORDS[passed]
        requirement = f"{words[k % len(words)]} {words[(k + 1) % len(words)]} {words[(k + 2) % len(words)]} item {k}"
        if passed:
            sources = [PYTHON_CORPUS[k % len(PYTHON_CORPUS)]] * n_programs
        else:
            sources = [PYTHON_CORPUS[(k + m) % len(PYTHON_CORPUS)] for m in range(n_programs)]
        group_index = k if passed else k - n_passed
        group_size = n_passed if passed else n_failed
        split = Split.TRAIN if group_index < group_size * train_fraction else Split.TEST
        label = Label.PASSED if passed else Label.FAILED
        token_probs = (0.7, 0.7) if flat_probs else (0.9 if passed else 0.4, 0.8)
        benchmark.append(BenchmarkSample(sample_id, Language.PYTHON, requirement, {model: label}, split))
        programs = tuple(
            ArchivedProgram(source, 1.0, token_probs, passed) for source in sources
        )
        archive.append(SampleArchiveEntry(sample_id, model, programs, Language.PYTHON, requirement))
    return benchmark, archive


@pytest.fixture
def separable():
    return synthetic_dataset()


# ---------------------------------------------------------------------------
# Endpoint simulado compatible con OpenAI
# ---------------------------------------------------------------------------

def default_reply(index: int, payload: Dict) -> str:
    return f"Here you go:\n```python\ndef f{index}(x):\n    return x + {index}\n```\n"


class MockEndpoint:
    """
    Servidor de chat completions y embeddings guionizable

    Registra cada petición y el máximo de peticiones simultáneas. Las primeras
    `stall_first` peticiones se demoran `stall_seconds` para forzar timeouts.
    """

    def __init__(self):
        self.lock = threading.Lock()
        self.requests: List[Dict] = []
        self.paths: List[str] = []
        self.in_flight = 0
        self.max_in_flight = 0
        self.delay = 0.0
        self.stall_first = 0
        self.stall_seconds = 1.0
        self.reply: Callable[[int, Dict], str] = default_reply
        self.token_logprob = math.log(0.9)
        self.logprobs = True
        self.yes_no: List[Dict[str, float]] = [{"Yes": 0.7, "No": 0.2}]
        self.embedding = [0.6, 0.8]
        self.url = ""
        self._chat_calls = 0
        self._yes_no_calls = 0

    @property
    def chat_payloads(self) -> List[Dict]:
        return [p for p, path in zip(self.requests, self.paths) if path.endswith("/chat/completions")]

    def handle(self, path: str, payload: Dict) -> Dict:
        with self.lock:
            index = len(self.requests)
            self.requests.append(payload)
            self.paths.append(path)
            self.in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self.in_flight)
        try:
            time.sleep(self.stall_seconds if index < self.stall_first else self.delay)
            if path.endswith("/embeddings"):
                return {"data": [{"index": 0, "embedding": list(self.embedding)}]}
            return self._chat(payload)
        finally:
            with self.lock:
                self.in_flight -= 1

    def _chat(self, payload: Dict) -> Dict:
        if payload.get("max_tokens") == 1:
            with self.lock:
                scripted = self.yes_no[self._yes_no_calls % len(self.yes_no)]
                self._yes_no_calls += 1
            top = [{"token": token, "logprob": math.log(p)} for token, p in scripted.items()]
            choice = {"message": {"role": "assistant", "content": top[0]["token"] if top else "Yes"},
                      "finish_reason": "length"}
            if self.logprobs:
                first = dict(top[0]) if top else {"token": "Yes", "logprob": 0.0}
                first["top_logprobs"] = top
                choice["logprobs"] = {"content": [first]}
            return {"choices": [choice]}

        with self.lock:
            index = self._chat_calls
            self._chat_calls += 1
        content = self.reply(index, payload)
        choice = {"message": {"role": "assistant", "content": content}, "finish_reason": "stop"}
        if self.logprobs:
            choice["logprobs"] = {
                "content": [
                    {"token": word, "logprob": self.token_logprob, "top_logprobs": []}
                    for word in content.split()
                ]
            }
        return {"choices": [choice]}


class _Handler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        payload = json.loads(self.rfile.read(length) or b"{}")
        body = json.dumps(self.server.mock.handle(self.path, payload)).encode("utf-8")
        try:
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        except OSError:
            # el cliente ya abandonó la petición por timeout
            pass

    def log_message(self, format, *args):
        pass


@pytest.fixture
def mock_endpoint():
    mock = MockEndpoint()
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    server.daemon_threads = True
    server.mock = mock
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    mock.url = f"http://127.0.0.1:{server.server_address[1]}/v1"
    yield mock
    server.shutdown()
    server.server_close()


@pytest.fixture
def sampling_for():
    """Construir un SamplingConfig contra el endpoint simulado"""

    def build(mock: MockEndpoint, **overrides) -> SamplingConfig:
        values = dict(endpoint=mock.url, model="mock-model", n=3, parallelism=2, backoff=0.01, timeout=5.0)
        values.update(overrides)
        return SamplingConfig(**values)

    return build


@pytest.fixture
def closed_port_url():
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
        sock.bind(("127.0.0.1", 0))
        port = sock.getsockname()[1]
    return f"http://127.0.0.1:{port}/v1"


# ---------------------------------------------------------------------------
# Aislamiento de entorno y logging
# ---------------------------------------------------------------------------

@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in list(os.environ):
        if name.startswith("HONEST_"):
            monkeypatch.delenv(name, raising=False)


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers = root.handlers[:]
    level = root.level
    yield
    for handler in root.handlers[:]:
        if handler not in handlers:
            root.removeHandler(handler)
    for handler in handlers:
        if handler not in root.handlers:
            root.addHandler(handler)
    root.setLevel(level)
