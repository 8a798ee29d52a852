"""
Sample data - Dữ liệu mẫu cho test và demo

Small hand-checked taxonomies under testdata/ with the corpus counts their
expected values were derived from.
"""

import os

from django.conf import settings

from corpus.services.counting import LemmaCounts
from corpus.services.infocontent import ICTable

from .graph import Taxonomy
from .loaders import load_taxonomy

FIVE_NOUN_COUNTS = {"doctor": 1, "nurse": 1, "teacher": 1, "dog": 2}
THREE_NOUN_COUNTS = {"doctor": 2, "lawyer": 1, "dog": 1}
PROFESSIONAL_COUNTS = {"doctor": 1, "nurse": 1, "lawyer": 1, "dog": 2}


def fixture_path(*parts: str) -> str:
    return os.path.join(settings.TEST_DATA_DIR, *parts)


def five_nouns() -> Taxonomy:
    """person -> {health_prof -> {doctor_s1, nurse_s1}, scholar -> doctor_s2,
    caregiver -> nurse_s2, teacher_s1}; animal -> dog"""
    return load_taxonomy(fixture_path("five_nouns.syn"))


def three_nouns() -> Taxonomy:
    """person -> professional -> {doctor, lawyer}; animal -> dog"""
    return load_taxonomy(fixture_path("three_nouns.syn"))


def professionals() -> Taxonomy:
    """person -> professional -> {health_prof -> {doctor, nurse}, lawyer}; animal -> dog"""
    return load_taxonomy(fixture_path("professionals.syn"))


def wordnet_excerpt() -> Taxonomy:
    return load_taxonomy(fixture_path("wordnet"))


def five_noun_ic(log_base: str = "e") -> ICTable:
    return ICTable.from_counts(five_nouns(), LemmaCounts(FIVE_NOUN_COUNTS), log_base)


def three_noun_ic(log_base: str = "e") -> ICTable:
    return ICTable.from_counts(three_nouns(), LemmaCounts(THREE_NOUN_COUNTS), log_base)


def professional_ic(log_base: str = "e") -> ICTable:
    return ICTable.from_counts(professionals(), LemmaCounts(PROFESSIONAL_COUNTS), log_base)
