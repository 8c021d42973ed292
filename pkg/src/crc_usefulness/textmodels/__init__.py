"""Text representations (BoW-TFIDF, averaged embeddings) and classifiers."""

from .classifiers import (
    GaussianNaiveBayes,
    LogisticRegression,
    MajorityClassifier,
    RandomForest,
    make_classifier,
    predict_proba,
    train_gnb,
    train_logreg,
    train_rf,
)
from .embeddings import EmbeddingTable, EmbeddingVectorizer, embed_comment, load_embeddings
from .normalize import STOPWORD_SETS, lemmatize, stem, stopwords
from .tfidf import BowTfidf, TfidfVocab, VectorizeConfig, fit_tfidf, transform_tfidf

__all__ = [
    "STOPWORD_SETS",
    "BowTfidf",
    "EmbeddingTable",
    "EmbeddingVectorizer",
    "GaussianNaiveBayes",
    "LogisticRegression",
    "MajorityClassifier",
    "RandomForest",
    "TfidfVocab",
    "VectorizeConfig",
    "embed_comment",
    "fit_tfidf",
    "lemmatize",
    "load_embeddings",
    "make_classifier",
    "predict_proba",
    "stem",
    "stopwords",
    "train_gnb",
    "train_logreg",
    "train_rf",
    "transform_tfidf",
]
