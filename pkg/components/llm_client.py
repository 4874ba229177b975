"""
Cliente de chat completions compatible con OpenAI: muestreo de programas por
temperatura, probabilidades de tokens y preguntas Sí/No.
"""

import logging
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

from config.http import EndpointConnection
from config.prompts import CODE_GENERATION_PROMPT, render
from models.errors import EmptyCompletion, EndpointError, LogprobsUnavailable, TooFewUsable
from models.generation import GenerationRecord, SamplingConfig
from models.program import Language, Program, ProgramOrigin, SampleSet

logger = logging.getLogger(__name__)

TOP_LOGPROBS = 5
_FENCE = re.compile(r"```[^\n`]*\n(.*?)(?:```|\Z)", re.DOTALL)


def _extract(response: str) -> Tuple[str, bool]:
    match = _FENCE.search(response)
    if match is None:
        return response.strip(), False
    return match.group(1).strip(), True


def extract_code_block(response: str) -> str:
    """
    Contenido del primer bloque ``` (sin la etiqueta de lenguaje); si no hay
    bloques, la respuesta completa sin espacios en los extremos
    """
    return _extract(response)[0]


def _token_probs(choice: Dict[str, Any]) -> Tuple[float, ...]:
    content = (choice.get("logprobs") or {}).get("content") or []
    probs = []
    for entry in content:
        logprob = entry.get("logprob")
        if logprob is None:
            continue
        # exp de un logprob muy negativo no debe quedar en 0
        probs.append(min(1.0, max(sys.float_info.min, math.exp(float(logprob)))))
    return tuple(probs)


def _first_choice(data: Dict[str, Any]) -> Dict[str, Any]:
    try:
        return data["choices"][0]
    except (KeyError, IndexError, TypeError):
        raise EndpointError("chat completion response has no choices") from None


class LLMClient:
    """Cliente compartible entre hilos; la ventana de peticiones la limita la conexión"""

    def __init__(
        self,
        config: SamplingConfig,
        api_key: Optional[str] = None,
        audit_path: Optional[str] = None,
        connection: Optional[EndpointConnection] = None,
    ):
        self.config = config
        self.connection = connection or EndpointConnection(
            config.endpoint,
            api_key=api_key,
            max_in_flight=config.parallelism,
            retries=config.retries,
            backoff=config.backoff,
            timeout=config.timeout,
            audit_path=audit_path,
        )

    def _complete(self, prompt: str, temperature: float, max_tokens: int) -> Dict[str, Any]:
        payload = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": temperature,
            "max_tokens": max_tokens,
            "logprobs": True,
            "top_logprobs": TOP_LOGPROBS,
            "n": 1,
        }
        return self.connection.post_json("chat/completions", payload)

    def _record(self, index: int, temperature: float, language: Language, data: Dict[str, Any]) -> GenerationRecord:
        choice = _first_choice(data)
        raw = (choice.get("message") or {}).get("content") or ""
        if not raw.strip():
            raise EmptyCompletion(f"sample {index} returned an empty completion")
        source, fenced = _extract(raw)
        probs = _token_probs(choice)
        origin = ProgramOrigin(sample_index=index, temperature=temperature, token_probs=probs or None)
        return GenerationRecord(
            program=Program(source, language, origin),
            raw_response=raw,
            token_probs=probs,
            finish_reason=choice.get("finish_reason"),
            fenced=fenced,
        )

    def generate(self, prompt: str, language: Language) -> List[Optional[GenerationRecord]]:
        """
        Enviar n peticiones independientes, como máximo `parallelism` en vuelo

        Returns:
            Un registro por petición en orden de índice; None para completions vacías
        """
        temperatures = self.config.temperatures()

        def run(index: int) -> Optional[GenerationRecord]:
            data = self._complete(prompt, temperatures[index], self.config.max_tokens)
            try:
                return self._record(index, temperatures[index], language, data)
            except EmptyCompletion as e:
                logger.warning("dropping %s", e)
                return None

        with ThreadPoolExecutor(max_workers=self.config.parallelism) as executor:
            return list(executor.map(run, range(len(temperatures))))

    def sample(
        self,
        requirement: str,
        language: Language,
        requirement_id: str = "requirement",
    ) -> Tuple[SampleSet, List[GenerationRecord]]:
        """
        Muestrear programas para un requerimiento

        Args:
            requirement: Texto del requerimiento
            language: Lenguaje objetivo
            requirement_id: Identificador del SampleSet resultante

        Returns:
            (SampleSet en orden de petición, registros de generación usados)
        """
        language = Language.parse(language)
        prompt = render(CODE_GENERATION_PROMPT, language.value, requirement=requirement)
        results = self.generate(prompt, language)
        records = [r for r in results if r is not None]
        if not records:
            raise EmptyCompletion(f"all {len(results)} completion(s) for {requirement_id!r} were empty")
        if len(records) < 2:
            raise TooFewUsable(
                f"only {len(records)} of {len(results)} completion(s) for {requirement_id!r} were usable"
            )
        samples = SampleSet(requirement_id, requirement, tuple(r.program for r in records))
        return samples, records

    def ask_yes_no(self, prompt: str) -> float:
        """
        Probabilidad de "Yes" en el primer token generado

        Se suman las alternativas top-k que coinciden con yes/no (sin distinguir
        mayúsculas ni espacios); si aparecen ambas clases se renormaliza sobre
        su masa conjunta.
        """
        data = self._complete(prompt, 0.0, 1)
        choice = _first_choice(data)
        content = (choice.get("logprobs") or {}).get("content")
        if not content:
            raise LogprobsUnavailable("endpoint returned no logprobs for the first token")
        first = content[0]
        alternatives = first.get("top_logprobs") or [first]
        yes_mass = no_mass = 0.0
        for alternative in alternatives:
            token = str(alternative.get("token", "")).strip().lower()
            logprob = alternative.get("logprob")
            if logprob is None:
                continue
            if token == "yes":
                yes_mass += math.exp(float(logprob))
            elif token == "no":
                no_mass += math.exp(float(logprob))
        if yes_mass > 0.0 and no_mass > 0.0:
            return yes_mass / (yes_mass + no_mass)
        return min(1.0, yes_mass)

    def close(self) -> None:
        self.connection.close()


def sample_programs(
    requirement: str,
    language: Language,
    config: SamplingConfig,
    requirement_id: str = "requirement",
    client: Optional[LLMClient] = None,
) -> SampleSet:
    client = client or LLMClient(config)
    return client.sample(requirement, language, requirement_id)[0]


def ask_yes_no(prompt: str, config: SamplingConfig, client: Optional[LLMClient] = None) -> float:
    return (client or LLMClient(config)).ask_yes_no(prompt)
