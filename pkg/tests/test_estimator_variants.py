import pytest

from components.confidence import ConfidenceEstimator
from components.embeddings import LocalHashedProvider
from components.estimator_variants import (
    KEYWORDS,
    available_variants,
    bleu_similarity,
    edit_similarity,
    single_weights,
    variant_confidence,
    variant_confidences,
    variant_weights,
    weighted_unigram_match,
    without_weights,
)
from conftest import JAVA_CORPUS, PYTHON_CORPUS, make_samples
from models.errors import InvalidConfig, TooFewSamples
from models.program import Language
from models.similarity import SimilarityWeights


@pytest.fixture
def provider():
    return LocalHashedProvider(64)


class TestPairwiseSimilarities:
    def test_bleu_identical(self):
        tokens = "def solve ( xs ) : return sum ( xs )".split()
        assert bleu_similarity(tokens, tokens) == pytest.approx(1.0)

    def test_bleu_empty(self):
        assert bleu_similarity([], []) == 1.0
        assert bleu_similarity([], ["x"]) == 0.0

    def test_bleu_range(self):
        a = "for x in xs : total += x".split()
        b = "while b : a , b = b , a % b".split()
        assert 0.0 <= bleu_similarity(a, b) < 0.5

    def test_keyword_weighting(self):
        value = weighted_unigram_match(["return", "x"], ["return", "y"], KEYWORDS[Language.PYTHON])
        assert value == pytest.approx(5 / 6)

    def test_keyword_match_java(self):
        assert "synchronized" in KEYWORDS[Language.JAVA]
        assert weighted_unigram_match([], [], KEYWORDS[Language.JAVA]) == 1.0

    def test_edit_similarity(self):
        assert edit_similarity(["a", "b", "c"], ["a", "x", "c"]) == pytest.approx(2 / 3)
        assert edit_similarity([], []) == 1.0
        assert edit_similarity(["a"], []) == 0.0


class TestVariantWeights:
    def test_without_renormalizes(self):
        assert without_weights("text").as_tuple() == pytest.approx((0.0, 1 / 3, 1 / 3, 1 / 3))

    def test_without_only_modality(self):
        weights = SimilarityWeights(1.0, 0.0, 0.0, 0.0)
        assert without_weights("text", weights).as_tuple() == pytest.approx((0.0, 1 / 3, 1 / 3, 1 / 3))

    def test_single(self):
        assert single_weights("syntax").as_tuple() == (0.0, 1.0, 0.0, 0.0)

    def test_hybrid_keeps_weights(self):
        weights = SimilarityWeights(0.1, 0.2, 0.3, 0.4)
        assert variant_weights("hybrid", weights) is weights
        assert variant_weights("edit", weights) is None

    @pytest.mark.parametrize("variant", ["unknown", "without-tokens", "single-ast"])
    def test_unknown(self, variant):
        with pytest.raises(InvalidConfig):
            variant_weights(variant)

    def test_listing(self):
        names = available_variants()
        assert names[0] == "hybrid"
        assert "codebleu" in names and "single-embedding" in names
        assert len(names) == len(set(names)) == 13


class TestVariantConfidence:
    def test_identical_programs(self, provider):
        samples = make_samples([PYTHON_CORPUS[0]] * 3)
        results = variant_confidences(samples, available_variants(), provider=provider, workers=1)
        for variant, value in results.items():
            assert value == pytest.approx(1.0, abs=1e-9), variant

    def test_hybrid_matches_estimator(self, provider):
        samples = make_samples(PYTHON_CORPUS[:4])
        weights = SimilarityWeights(0.1, 0.2, 0.3, 0.4)
        expected = ConfidenceEstimator(weights, provider, workers=1).estimate(samples).confidence
        results = variant_confidences(samples, ["hybrid"], weights, provider, workers=1)
        assert results["hybrid"] == pytest.approx(expected, abs=1e-12)

    def test_batch_matches_single(self, provider):
        samples = make_samples(JAVA_CORPUS, Language.JAVA)
        variants = ["edit", "codebleu", "without-dataflow", "single-text"]
        batch = variant_confidences(samples, variants, provider=provider, workers=2)
        for variant in variants:
            single = variant_confidence(samples, variant, provider=provider, workers=1)
            assert batch[variant] == pytest.approx(single, abs=1e-12), variant
            assert 0.0 <= single <= 1.0

    def test_distinct_programs_below_identical(self, provider):
        distinct = variant_confidence(make_samples(PYTHON_CORPUS[:4]), "bleu", provider=provider)
        identical = variant_confidence(make_samples([PYTHON_CORPUS[1]] * 4), "bleu", provider=provider)
        assert distinct < identical

    def test_unknown_variant_checked_first(self, provider):
        with pytest.raises(InvalidConfig):
            variant_confidences(make_samples(PYTHON_CORPUS[:2]), ["hybrid", "nope"], provider=provider)

    def test_too_few_programs(self, provider):
        with pytest.raises(TooFewSamples):
            variant_confidence(make_samples(PYTHON_CORPUS[:1]), "edit", provider=provider)
