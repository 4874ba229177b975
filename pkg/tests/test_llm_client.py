import json
import logging
import math

import pytest

from components.llm_client import LLMClient, ask_yes_no, extract_code_block, sample_programs
from models.errors import EmptyCompletion, EndpointError, LogprobsUnavailable, TooFewUsable
from models.generation import FIVE_TEMPERATURE_PRESET, SamplingConfig, SeedMode
from models.program import Language


class TestExtractCodeBlock:
    def test_single_fence(self):
        assert extract_code_block("```python\nx = 1\n```") == "x = 1"

    def test_no_fence(self):
        assert extract_code_block("no code here") == "no code here"

    def test_first_of_two_blocks(self):
        response = "First:\n```python\na = 1\n```\nSecond:\n```python\nb = 2\n```\n"
        assert extract_code_block(response) == "a = 1"

    def test_unterminated_fence(self):
        assert extract_code_block("```java\nclass A {}\n") == "class A {}"

    def test_untagged_fence(self):
        assert extract_code_block("```\nprint(1)\n```") == "print(1)"


class TestSamplePrograms:
    def test_distinct_fenced_programs(self, mock_endpoint, sampling_for):
        samples = sample_programs("add one", Language.PYTHON, sampling_for(mock_endpoint, n=4), "req-7")
        assert samples.requirement_id == "req-7"
        assert len(samples.programs) == 4
        assert [p.origin.sample_index for p in samples.programs] == [0, 1, 2, 3]
        assert len({p.source for p in samples.programs}) == 4
        assert all(p.source.startswith("def f") for p in samples.programs)
        for program in samples.programs:
            assert program.origin.token_probs == pytest.approx((0.9,) * len(program.origin.token_probs))

    def test_request_payload(self, mock_endpoint, sampling_for):
        sample_programs("add one", Language.PYTHON, sampling_for(mock_endpoint, n=2, temperature=0.7))
        payload = mock_endpoint.chat_payloads[0]
        assert payload["model"] == "mock-model"
        assert payload["temperature"] == 0.7
        assert payload["logprobs"] is True and payload["top_logprobs"] == 5 and payload["n"] == 1
        assert "add one" in payload["messages"][0]["content"]

    def test_parallelism_bounds_in_flight_requests(self, mock_endpoint, sampling_for):
        mock_endpoint.delay = 0.1
        sample_programs("r", Language.PYTHON, sampling_for(mock_endpoint, n=8, parallelism=3))
        assert len(mock_endpoint.requests) == 8
        assert 1 < mock_endpoint.max_in_flight <= 3

    def test_fixed_schedule_temperatures(self, mock_endpoint, sampling_for):
        config = sampling_for(mock_endpoint, seed_mode=SeedMode.FIXED_SCHEDULE, n=20)
        assert config.n == 5
        samples = sample_programs("r", Language.PYTHON, config)
        assert [p.origin.temperature for p in samples.programs] == list(FIVE_TEMPERATURE_PRESET)
        assert sorted(p["temperature"] for p in mock_endpoint.chat_payloads) == sorted(FIVE_TEMPERATURE_PRESET)

    def test_retries_after_timeouts(self, mock_endpoint, sampling_for, caplog):
        mock_endpoint.stall_first = 2
        mock_endpoint.stall_seconds = 1.0
        config = sampling_for(mock_endpoint, n=2, parallelism=1, timeout=0.3, retries=2)
        samples = sample_programs("r", Language.PYTHON, config)
        assert len(samples.programs) == 2
        retries = [r for r in caplog.records if r.levelno == logging.WARNING and "retry" in r.getMessage()]
        assert len(retries) == 2
        assert "retry 1/2" in retries[0].getMessage() and "retry 2/2" in retries[1].getMessage()

    def test_unfenced_prose(self, mock_endpoint, sampling_for):
        mock_endpoint.reply = lambda index, payload: f"  just prose number {index}  "
        client = LLMClient(sampling_for(mock_endpoint, n=2))
        samples, records = client.sample("r", Language.PYTHON)
        assert sorted(p.source for p in samples.programs) == ["just prose number 0", "just prose number 1"]
        assert all(not record.fenced for record in records)

    def test_empty_completions_are_dropped(self, mock_endpoint, sampling_for, caplog):
        mock_endpoint.reply = lambda index, payload: "" if index == 0 else f"```python\nx = {index}\n```"
        samples = sample_programs("r", Language.PYTHON, sampling_for(mock_endpoint, n=3, parallelism=1))
        assert [p.origin.sample_index for p in samples.programs] == [1, 2]
        assert "empty completion" in caplog.text

    def test_all_empty(self, mock_endpoint, sampling_for):
        mock_endpoint.reply = lambda index, payload: "   "
        with pytest.raises(EmptyCompletion):
            sample_programs("r", Language.PYTHON, sampling_for(mock_endpoint, n=2))

    def test_too_few_usable(self, mock_endpoint, sampling_for):
        mock_endpoint.reply = lambda index, payload: "" if index else "```python\nx = 1\n```"
        with pytest.raises(TooFewUsable):
            sample_programs("r", Language.PYTHON, sampling_for(mock_endpoint, n=3, parallelism=1))

    def test_unreachable_endpoint(self, closed_port_url):
        config = SamplingConfig(endpoint=closed_port_url, model="m", n=1, retries=0, timeout=1.0)
        with pytest.raises(EndpointError) as excinfo:
            sample_programs("r", Language.PYTHON, config)
        assert excinfo.value.exit_code == 3

    def test_audit_log(self, mock_endpoint, sampling_for, tmp_path):
        audit = tmp_path / "audit.jsonl"
        client = LLMClient(sampling_for(mock_endpoint, n=2), audit_path=str(audit))
        client.sample("r", Language.PYTHON)
        lines = [json.loads(line) for line in audit.read_text().splitlines()]
        assert len(lines) == 2
        assert lines[0]["request"]["model"] == "mock-model"


class TestAskYesNo:
    def test_renormalized_over_yes_and_no(self, mock_endpoint, sampling_for):
        mock_endpoint.yes_no = [{"Yes": 0.7, "No": 0.2}]
        value = ask_yes_no("Is it?", sampling_for(mock_endpoint))
        assert value == pytest.approx(0.7 / 0.9, abs=1e-4)
        assert mock_endpoint.requests[0]["max_tokens"] == 1
        assert mock_endpoint.requests[0]["temperature"] == 0.0

    def test_only_yes(self, mock_endpoint, sampling_for):
        mock_endpoint.yes_no = [{"Yes": 0.4, "Maybe": 0.3}]
        assert ask_yes_no("Is it?", sampling_for(mock_endpoint)) == pytest.approx(0.4)

    def test_case_and_space_variants(self, mock_endpoint, sampling_for):
        mock_endpoint.yes_no = [{" yes": 0.3, "YES": 0.3, "no": 0.2}]
        assert ask_yes_no("Is it?", sampling_for(mock_endpoint)) == pytest.approx(0.75)

    def test_yes_absent(self, mock_endpoint, sampling_for):
        mock_endpoint.yes_no = [{"No": 0.9}]
        assert ask_yes_no("Is it?", sampling_for(mock_endpoint)) == 0.0

    def test_logprobs_unavailable(self, mock_endpoint, sampling_for):
        mock_endpoint.logprobs = False
        with pytest.raises(LogprobsUnavailable) as excinfo:
            ask_yes_no("Is it?", sampling_for(mock_endpoint))
        assert excinfo.value.exit_code == 3
