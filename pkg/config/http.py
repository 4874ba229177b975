import json
import logging
import os
import threading
import time
from typing import Any, Dict, Optional

import requests
from requests.adapters import HTTPAdapter

from models.errors import EndpointError

logger = logging.getLogger(__name__)

API_KEY_ENV = "HONEST_API_KEY"
RETRYABLE_STATUS = frozenset({408, 429, 500, 502, 503, 504})


class EndpointConnection:
    """Clase para manejar las conexiones HTTP a un endpoint compatible con OpenAI"""

    def __init__(
        self,
        endpoint: str,
        api_key: Optional[str] = None,
        max_in_flight: int = 4,
        retries: int = 2,
        backoff: float = 0.5,
        timeout: float = 60.0,
        audit_path: Optional[str] = None,
        session: Optional[requests.Session] = None,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.api_key = api_key if api_key is not None else os.getenv(API_KEY_ENV, "")
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.audit_path = audit_path
        self._in_flight = threading.BoundedSemaphore(max_in_flight)
        self._audit_lock = threading.Lock()
        self.session = session or self._create_session(max_in_flight)

    @staticmethod
    def _create_session(pool_size: int) -> requests.Session:
        """Crear sesión con pool de conexiones del tamaño de la ventana de peticiones"""
        session = requests.Session()
        adapter = HTTPAdapter(pool_connections=pool_size, pool_maxsize=pool_size)
        session.mount("http://", adapter)
        session.mount("https://", adapter)
        return session

    def _headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def post_json(self, path: str, payload: Dict[str, Any]) -> Dict[str, Any]:
        """
        Enviar un POST JSON con reintentos y backoff exponencial

        Args:
            path: Ruta relativa al endpoint (p. ej. "chat/completions")
            payload: Cuerpo JSON

        Returns:
            Respuesta JSON decodificada
        """
        url = f"{self.endpoint}/{path.lstrip('/')}"
        last_error: Optional[str] = None
        for attempt in range(self.retries + 1):
            if attempt > 0:
                delay = self.backoff * (2 ** (attempt - 1))
                logger.warning("retry %d/%d for %s after %s", attempt, self.retries, url, last_error)
                time.sleep(delay)
            try:
                with self._in_flight:
                    response = self.session.post(url, json=payload, headers=self._headers(), timeout=self.timeout)
            except (requests.Timeout, requests.ConnectionError) as e:
                last_error = f"{type(e).__name__}: {e}"
                continue
            except requests.RequestException as e:
                raise EndpointError(f"request to {url} failed: {e}") from e

            if response.status_code in RETRYABLE_STATUS:
                last_error = f"HTTP {response.status_code}"
                continue
            if response.status_code >= 400:
                raise EndpointError(f"{url} returned HTTP {response.status_code}: {response.text[:200]}")
            try:
                data = response.json()
            except ValueError as e:
                raise EndpointError(f"{url} returned a non-JSON body") from e
            self._audit(url, payload, data)
            return data

        raise EndpointError(f"{url} unreachable after {self.retries + 1} attempt(s): {last_error}")

    def _audit(self, url: str, request: Dict[str, Any], response: Dict[str, Any]) -> None:
        # Registro JSON Lines de pares petición/respuesta
        if not self.audit_path:
            return
        line = json.dumps({"url": url, "request": request, "response": response}, ensure_ascii=False)
        with self._audit_lock:
            with open(self.audit_path, "a", encoding="utf-8") as handle:
                handle.write(line + "\n")

    def close(self) -> None:
        """Cerrar el pool de conexiones"""
        self.session.close()
