"""
Chat-completion client used by the QuizBank construction and exam steps.

Prompt templates live in resources/prompts/<id>.txt. The first line is a
version header (``# version: N``); placeholders are ``{lower_snake}`` names
and every one of them must be substituted before a request is sent.
"""

import json
import logging
import os
import re
import threading
import time

import requests

from config import PROMPTS_FOLDER
from models.Settings import LlmSettings
from utils.Exceptions import DomainError, InputError, LlmResponseError, LlmTransportError

logger = logging.getLogger(__name__)

PLACEHOLDER = re.compile(r"\{([a-z_]+)\}")
VERSION_HEADER = re.compile(r"^#\s*version:\s*(\S+)\s*$")
_FENCE = re.compile(r"^```(?:json)?\s*(.*?)\s*```$", re.DOTALL)


class PromptTemplate:

    def __init__(self, template_id, text, version="1"):
        self.id = template_id
        self.text = text
        self.version = version

    @property
    def placeholders(self):
        return sorted(set(PLACEHOLDER.findall(self.text)))

    def render(self, substitutions):
        missing = [p for p in self.placeholders if p not in substitutions]
        if missing:
            raise DomainError(f"prompt '{self.id}' is missing substitutions: {', '.join(missing)}")
        return PLACEHOLDER.sub(lambda m: str(substitutions[m.group(1)]), self.text)


def load_template(template_id, folder=None):
    folder = folder or PROMPTS_FOLDER
    path = os.path.join(folder, f"{template_id}.txt")
    if not re.fullmatch(r"[a-z0-9_]+", template_id or "") or not os.path.isfile(path):
        raise InputError(f"unknown prompt template '{template_id}'")
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    version = "1"
    if lines and VERSION_HEADER.match(lines[0]):
        version = VERSION_HEADER.match(lines[0]).group(1)
        lines = lines[1:]
    return PromptTemplate(template_id, "\n".join(lines).strip() + "\n", version)


def parse_json_reply(text):
    """Decode a JSON reply, tolerating a surrounding markdown code fence."""
    if text is None:
        raise LlmResponseError("empty reply")
    body = text.strip()
    fenced = _FENCE.match(body)
    if fenced:
        body = fenced.group(1)
    try:
        return json.loads(body)
    except json.JSONDecodeError as e:
        raise LlmResponseError(f"reply is not valid JSON: {e.msg} at char {e.pos}") from e


def _retryable(error):
    """Connection problems, timeouts, 429 and 5xx are retried; other HTTP errors are final."""
    if not isinstance(error, requests.HTTPError):
        return True
    status = error.response.status_code if error.response is not None else None
    return status is None or status == 429 or status >= 500


class LlmClient:

    def __init__(self, settings=None):
        self.settings = settings or LlmSettings()
        self._slots = threading.BoundedSemaphore(self.settings.max_parallel)

    def _post(self, messages):
        s = self.settings
        headers = {"Content-Type": "application/json"}
        if s.api_key:
            headers["Authorization"] = f"Bearer {s.api_key}"
        resp = requests.post(
            s.api_url,
            headers=headers,
            json={"model": s.model, "messages": messages, "temperature": s.temperature},
            timeout=s.timeout,
        )
        resp.raise_for_status()
        return resp

    def complete(self, prompt):
        """Send one user message; return the raw reply text."""
        messages = [{"role": "user", "content": prompt}]
        attempts = self.settings.max_retries + 1
        last_error = None
        with self._slots:
            for attempt in range(1, attempts + 1):
                try:
                    resp = self._post(messages)
                    break
                except (requests.ConnectionError, requests.Timeout, requests.HTTPError) as e:
                    if not _retryable(e):
                        raise LlmTransportError(f"LLM endpoint rejected the request: {e}") from e
                    last_error = e
                    logger.warning("LLM request failed (attempt %d/%d): %s", attempt, attempts, e)
                    if attempt < attempts:
                        time.sleep(self.settings.backoff * attempt)
            else:
                raise LlmTransportError(
                    f"LLM endpoint failed after {attempts} attempts: {last_error}"
                ) from last_error

        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise LlmResponseError(f"unexpected completion payload: {e}") from e


def llm_exchange(template_id, substitutions, client=None):
    """Fill a prompt template, send it, and return the raw reply."""
    template = load_template(template_id)
    prompt = template.render(substitutions)
    client = client or LlmClient()
    logger.info("LLM exchange: %s v%s (%d chars)", template_id, template.version, len(prompt))
    return client.complete(prompt)
