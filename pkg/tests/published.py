"""Published reference values for the dataset-dependent acceptance checks.

Datasets are RH (RevHelper), CC (ChromiumConversations) and OD (OpenDev).
"""

DATASETS = ("RH", "CC", "OD")

# loaded class counts: (useful, not-useful)
CLASS_COUNTS = {"RH": (879, 602), "CC": (2994, 800), "OD": (2052, 602)}
DUPLICATES = {"RH": 24, "CC": 104, "OD": 191}

BASELINE_MCC = {"RH": 0.071, "CC": 0.11, "OD": 0.0}
OD_MAJORITY = {"acc": 0.82, "f1": 0.90, "mcc": 0.0}

# best BoW + logistic-regression row per dataset: (variant, stopwords, stem, lemmatize, MCC delta)
BEST_BOW_LR = {
    "RH": ("text_tokens", "programming-py", True, False, 0.10),
    "CC": ("text_clean", "programming-nonpy", False, True, 0.12),
    "OD": ("text_tokens", "programming-py", True, False, 0.17),
}

WITHIN_MCC = {"RH": 0.173, "CC": 0.233, "OD": 0.207}
CROSS_MCC = {
    ("RH", "CC"): 0.15, ("RH", "OD"): 0.02,
    ("CC", "RH"): 0.08, ("CC", "OD"): 0.01,
    ("OD", "RH"): 0.04, ("OD", "CC"): -0.04,
}

# Pearson r of each feature with usefulness, per dataset (RH, CC, OD)
FEATURE_R = {
    "avg-words": (-0.038, -0.129, 0.166),
    "num-verb": (0.016, -0.151, 0.157),
    "avg-stopwords": (-0.05, -0.155, 0.151),
    "word-count": (-0.033, -0.202, 0.149),
    "num-chars": (-0.016, -0.184, 0.149),
    "num-determinants": (-0.045, -0.175, 0.142),
    "num-nouns": (-0.035, -0.156, 0.132),
    "num-adj": (-0.077, -0.146, 0.125),
    "num-adverb": (-0.006, -0.156, 0.121),
    "prog-words": (-0.01, -0.047, 0.119),
    "num-tentative": (-0.038, -0.095, 0.102),
    "stop-word-ratio": (-0.012, -0.098, 0.099),
    "num-sent": (0.009, -0.186, 0.097),
    "avg-punct": (0.058, 0.016, 0.096),
    "has-out-snippet": (-0.009, -0.035, 0.078),
    "subjectivity": (-0.072, -0.151, 0.07),
    "avg-chars": (0.053, 0.067, 0.061),
    "rd-text": (-0.038, -0.078, 0.055),
    "num-Qmark": (-0.09, -0.206, 0.037),
    "code-word-ratio": (0.072, 0.095, 0.024),
    "question-ratio": (-0.096, -0.205, 0.012),
    "is-confirmatory": (0.019, -0.029, 0.007),
    "num-exclamation": (-0.007, -0.01, 0.005),
    "polarity": (-0.019, -0.101, -0.012),
    "num-interjections": (0.022, -0.028, -0.015),
    "num-propernouns": (-0.044, 0.009, -0.02),
    "cr-senti": (0.058, 0.078, -0.035),
    "is-toxic": (-0.029, 0.009, -0.071),
    "tone": (-0.026, 0.068, -0.173),
    "yngve": (-0.045, -0.193, 0.131),
    "cdensity": (0.003, 0.019, 0.08),
    "pdensity": (-0.018, -0.033, 0.065),
    "frazier": (0.026, 0.014, 0.042),
    "informativeness": (0.01, 0.027, 0.107),
    "formality": (-0.005, 0.062, 0.07),
    "politeness": (-0.056, -0.077, 0.024),
    "implicature": (0.004, -0.023, 0.023),
    "gratitude": (-0.007, -0.097, -0.058),
    "distress": (-0.003, 0.045, -0.088),
    "empathy": (-0.003, 0.045, -0.088),
    "density-refact-solution": (-0.004, -0.166, 0.157),
    "density-secdev": (-0.007, -0.126, 0.093),
    "density-refact-problem": (0.046, 0.035, 0.06),
    "density-msoft-nu": (-0.051, -0.103, 0.024),
    "density-satd": (-0.028, 0.039, 0.016),
    "density-msoft-u": (0.034, 0.155, -0.002),
    "density-refact-xerox": (0.019, 0.071, -0.035),
    "has-snippet": (-0.01, 0.0, 0.0),
}
