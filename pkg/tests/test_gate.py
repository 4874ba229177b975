import pytest

from components.gate import decide
from conftest import make_samples
from models.decision import DEFAULT_REFUSAL_MESSAGE, Verdict
from models.errors import IdMismatch, InvalidConfig
from models.similarity import ConfidenceReport


def report(confidence, requirement_id="req-1", n=3):
    return ConfidenceReport(requirement_id, n, [[None] * n for _ in range(n)], confidence)


@pytest.fixture
def samples():
    return make_samples(["a = 1", "b = 2", "c = 3"])


class TestDecide:
    def test_show_above_threshold(self, samples):
        decision = decide(report(0.7), samples, 0.5)
        assert decision.verdict is Verdict.SHOW
        assert decision.programs == samples.programs
        assert decision.message is None

    def test_refuse_below_threshold(self, samples):
        decision = decide(report(0.3), samples, 0.5)
        assert decision.verdict is Verdict.REFUSE
        assert decision.programs == ()
        assert decision.message == "Sorry, I cannot solve this requirement."
        assert DEFAULT_REFUSAL_MESSAGE == decision.message

    def test_equal_confidence_is_refused(self, samples):
        assert decide(report(0.5), samples, 0.5).verdict is Verdict.REFUSE

    def test_monotone_in_threshold(self, samples):
        verdicts = [decide(report(0.62), samples, t / 100).verdict for t in range(101)]
        first_refuse = verdicts.index(Verdict.REFUSE)
        assert all(v is Verdict.REFUSE for v in verdicts[first_refuse:])
        assert all(v is Verdict.SHOW for v in verdicts[:first_refuse])

    def test_top_keeps_first_programs(self, samples):
        decision = decide(report(0.9), samples, 0.5, top=2)
        assert [p.source for p in decision.programs] == ["a = 1", "b = 2"]

    def test_custom_message(self, samples):
        assert decide(report(0.1), samples, 0.5, message="no").message == "no"

    def test_id_mismatch(self, samples):
        with pytest.raises(IdMismatch):
            decide(report(0.9, requirement_id="other"), samples, 0.5)

    @pytest.mark.parametrize("threshold", [-0.1, 1.1])
    def test_threshold_out_of_range(self, samples, threshold):
        with pytest.raises(InvalidConfig):
            decide(report(0.9), samples, threshold)

    def test_serialized_decision(self, samples):
        shown = decide(report(0.9), samples, 0.5).to_dict()
        assert shown["verdict"] == "show" and shown["programs"] == ["a = 1", "b = 2", "c = 3"]
        refused = decide(report(0.1), samples, 0.5).to_dict()
        assert refused["programs"] is None and refused["message"] == DEFAULT_REFUSAL_MESSAGE
