"""Hand-crafted textual features of review comments."""

from .catalog import ASPECTS, COMPUTED, FEATURE_NAMES, INGESTED, FeatureVector
from .external import ExternalScores, ingest_external_scores
from .extract import (
    FeatureExtractor,
    FeatureMatrix,
    build_feature_matrix,
    code_features,
    featurize,
    syntactic_features,
    voice_lexical_features,
)
from .lexicons import KeywordLexicon, default_lexicons, lexicon_density, load_lexicon
from .pos import pos_tag
from .readability import count_syllables, readability_fk

__all__ = [
    "ASPECTS",
    "COMPUTED",
    "FEATURE_NAMES",
    "INGESTED",
    "ExternalScores",
    "FeatureExtractor",
    "FeatureMatrix",
    "FeatureVector",
    "KeywordLexicon",
    "build_feature_matrix",
    "code_features",
    "count_syllables",
    "default_lexicons",
    "featurize",
    "ingest_external_scores",
    "lexicon_density",
    "load_lexicon",
    "pos_tag",
    "readability_fk",
    "syntactic_features",
    "voice_lexical_features",
]
