from unittest.mock import MagicMock, patch

import pytest
import requests

from models.Settings import LlmSettings
from utils.AI import LlmClient, PromptTemplate, llm_exchange, load_template, parse_json_reply
from utils.Exceptions import DomainError, InputError, LlmResponseError, LlmTransportError


def completion(content):
    resp = MagicMock()
    resp.json.return_value = {"choices": [{"message": {"content": content}}]}
    resp.raise_for_status.return_value = None
    return resp


def http_error(status):
    resp = MagicMock()
    resp.status_code = status
    resp.raise_for_status.side_effect = requests.HTTPError(f"{status} error", response=resp)
    return resp


class TestTemplates:

    def test_shipped_templates_load(self):
        """Every shipped prompt has a version header"""
        for template_id in ("step1_forensic_analyst", "step2_strict_editor", "step3_exam_setter",
                            "quiz_evaluation", "slide_extraction"):
            template = load_template(template_id)
            assert template.version == "1"
            assert not template.text.startswith("# version")

    def test_missing_placeholder(self):
        """Rendering with a missing substitution names it"""
        template = PromptTemplate("t", "Topic {topic} for {audience}")
        with pytest.raises(DomainError) as exc:
            template.render({"topic": "x"})
        assert "audience" in str(exc.value)

    def test_unknown_template(self):
        """Ids outside the prompt folder are rejected"""
        with pytest.raises(InputError):
            load_template("../config")


class TestReplies:

    def test_fenced_json(self):
        """Markdown fences around the JSON are tolerated"""
        assert parse_json_reply('```json\n{"a": 1}\n```') == {"a": 1}

    def test_not_json(self):
        """Prose replies are a response error"""
        with pytest.raises(LlmResponseError):
            parse_json_reply("Sure! Here are the answers.")


class TestLlmClient:

    def settings(self, **kwargs):
        return LlmSettings(api_url="http://llm.test/v1/chat", api_key="k", **kwargs)

    @patch("utils.AI.time.sleep")
    @patch("utils.AI.requests.post")
    def test_reply_text(self, mock_post, mock_sleep):
        """The first choice's content is returned"""
        mock_post.return_value = completion("hello")
        assert LlmClient(self.settings()).complete("hi") == "hello"
        headers = mock_post.call_args.kwargs["headers"]
        assert headers["Authorization"] == "Bearer k"
        mock_sleep.assert_not_called()

    @patch("utils.AI.time.sleep")
    @patch("utils.AI.requests.post")
    def test_retries_then_succeeds(self, mock_post, mock_sleep):
        """A transient failure is retried"""
        mock_post.side_effect = [requests.ConnectionError("down"), completion("ok")]
        assert LlmClient(self.settings(max_retries=2)).complete("hi") == "ok"
        assert mock_post.call_count == 2
        assert mock_sleep.call_count == 1

    @patch("utils.AI.time.sleep")
    @patch("utils.AI.requests.post")
    def test_timeout_after_retries(self, mock_post, mock_sleep):
        """Every attempt timing out is a transport error"""
        mock_post.side_effect = requests.Timeout("slow")
        with pytest.raises(LlmTransportError):
            LlmClient(self.settings(max_retries=2)).complete("hi")
        assert mock_post.call_count == 3

    @patch("utils.AI.time.sleep")
    @patch("utils.AI.requests.post")
    def test_client_errors_are_not_retried(self, mock_post, mock_sleep):
        """401 and 400 replies fail on the first attempt"""
        for status in (400, 401, 404):
            mock_post.reset_mock()
            mock_post.return_value = http_error(status)
            with pytest.raises(LlmTransportError):
                LlmClient(self.settings(max_retries=3)).complete("hi")
            assert mock_post.call_count == 1
        mock_sleep.assert_not_called()

    @patch("utils.AI.time.sleep")
    @patch("utils.AI.requests.post")
    def test_rate_limit_and_server_errors_are_retried(self, mock_post, mock_sleep):
        """429 and 5xx replies are sent again"""
        mock_post.side_effect = [http_error(429), http_error(503), completion("ok")]
        assert LlmClient(self.settings(max_retries=3)).complete("hi") == "ok"
        assert mock_post.call_count == 3
        assert mock_sleep.call_count == 2

    @patch("utils.AI.requests.post")
    def test_malformed_payload(self, mock_post):
        """A payload without choices is a response error"""
        resp = MagicMock()
        resp.json.return_value = {"error": "quota"}
        mock_post.return_value = resp
        with pytest.raises(LlmResponseError):
            LlmClient(self.settings()).complete("hi")

    def test_exchange_uses_given_client(self):
        """llm_exchange renders the template and hands it to the client"""
        client = MagicMock()
        client.complete.return_value = "{}"
        reply = llm_exchange("step2_strict_editor", {"document_text": "DOC", "draft_json": "{}"}, client=client)
        assert reply == "{}"
        assert "DOC" in client.complete.call_args.args[0]


if __name__ == "__main__":
    pytest.main([__file__])
