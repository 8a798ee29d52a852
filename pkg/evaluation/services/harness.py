"""
Evaluation Harness - Chấm điểm bộ phân nghĩa trên dữ liệu gán nhãn của người

Judges pick exactly one sense of a target noun in its group and rate their
confidence from 0 to 4. Cases rated 0 or 1 are excluded, the rest are scored
against the argmax-phi prediction, and a random-choice baseline is reported
alongside.
"""

import logging
from collections import OrderedDict
from typing import Dict, Iterable, List, Optional, TextIO, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from corpus.services.infocontent import ICTable
from disambiguation.services.disambig import (
    DisambiguationOptions,
    WordGroup,
    best_sense,
    disambiguate,
)
from taxonomy.exceptions import (
    AllCasesExcluded,
    InvalidTestCase,
    ParseError,
    TargetNotInGroup,
)
from taxonomy.graph import SynsetId, Taxonomy
from taxonomy.lemmas import normalize

logger = logging.getLogger(__name__)

MIN_CONFIDENCE = 2


class TestCase(BaseModel):
    """One judge's forced single choice for a target noun in its group"""

    model_config = ConfigDict(frozen=True)

    judge: str
    confidence: int = Field(ge=0, le=4)
    target: str
    gold: SynsetId
    group: WordGroup

    @property
    def case_key(self) -> Tuple[str, Tuple[str, ...]]:
        """Identifies the same case across judges"""
        return self.target, self.group.words


class EvalReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    judge: Optional[str] = None
    n_considered: int
    n_correct: int
    accuracy: float
    baseline_mean: float
    baseline_stddev: float
    baseline_runs: int
    excluded_low_confidence: int
    min_confidence: int = MIN_CONFIDENCE
    upper_bound: Optional[float] = None


# ============== FILTERING / VALIDATION ==============


def retained_cases(
    cases: Iterable[TestCase], min_confidence: int = MIN_CONFIDENCE
) -> Tuple[List[TestCase], int]:
    """Split off low-confidence cases; returns (retained, excluded count)"""
    retained: List[TestCase] = []
    excluded = 0
    for case in cases:
        if case.confidence < min_confidence:
            excluded += 1
        else:
            retained.append(case)
    if not retained:
        raise AllCasesExcluded(excluded)
    return retained, excluded


def _check_case(t: Taxonomy, case: TestCase) -> None:
    if case.target not in case.group.words:
        raise TargetNotInGroup(case.target)
    if case.gold not in t.senses(case.target):
        raise InvalidTestCase(f"gold {case.gold!r} is not a sense of {case.target!r}")


# ============== SCORING ==============


def predict(
    t: Taxonomy,
    ic: ICTable,
    case: TestCase,
    options: Optional[DisambiguationOptions] = None,
) -> SynsetId:
    """Argmax-phi sense of the target among its direct senses"""
    _check_case(t, case)
    assignment = disambiguate(t, ic, case.group, options)
    return best_sense(assignment, case.target)


def random_baseline(
    t: Taxonomy,
    cases: List[TestCase],
    runs: int,
    seed: int,
    sample_stddev: bool = False,
    min_confidence: int = MIN_CONFIDENCE,
) -> Tuple[float, float]:
    """
    Accuracy of picking a uniformly random sense per retained case.

    Every run draws from its own generator spawned from the seed, so runs are
    independent and the result is deterministic.

    Returns:
        (mean, stddev) of per-run accuracy; population stddev unless
        sample_stddev is set
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    retained, _ = retained_cases(cases, min_confidence)
    sense_lists = [t.senses(case.target) for case in retained]
    gold_positions = []
    for case, senses in zip(retained, sense_lists):
        _check_case(t, case)
        gold_positions.append(senses.index(case.gold))

    sizes = np.array([len(senses) for senses in sense_lists])
    gold = np.array(gold_positions)
    accuracies = np.empty(runs)
    for run, child in enumerate(np.random.SeedSequence(seed).spawn(runs)):
        rng = np.random.default_rng(child)
        picks = rng.integers(0, sizes)
        accuracies[run] = np.mean(picks == gold)

    ddof = 1 if sample_stddev and runs > 1 else 0
    return float(np.mean(accuracies)), float(np.std(accuracies, ddof=ddof))


def score(
    t: Taxonomy,
    ic: ICTable,
    cases: List[TestCase],
    options: Optional[DisambiguationOptions] = None,
    runs: int = 10,
    seed: int = 0,
    sample_stddev: bool = False,
    min_confidence: int = MIN_CONFIDENCE,
) -> EvalReport:
    """
    Forced-choice accuracy of the disambiguator against gold labels.

    Raises:
        AllCasesExcluded: nothing left after the confidence filter
        TargetNotInGroup: a target is missing from its group
        InvalidTestCase: a gold label is not a sense of its target
    """
    retained, excluded = retained_cases(cases, min_confidence)
    n_correct = sum(1 for case in retained if predict(t, ic, case, options) == case.gold)
    mean, stddev = random_baseline(
        t, retained, runs, seed, sample_stddev=sample_stddev, min_confidence=min_confidence
    )
    judges = {case.judge for case in retained}
    if excluded:
        logger.info("Excluded %d low-confidence cases", excluded)
    return EvalReport(
        judge=judges.pop() if len(judges) == 1 else None,
        n_considered=len(retained),
        n_correct=n_correct,
        accuracy=n_correct / len(retained),
        baseline_mean=mean,
        baseline_stddev=stddev,
        baseline_runs=runs,
        excluded_low_confidence=excluded,
        min_confidence=min_confidence,
    )


def agreement(
    cases: List[TestCase],
    reference_judge: str,
    other_judge: str,
    min_confidence: int = MIN_CONFIDENCE,
) -> Optional[float]:
    """
    Fraction of the reference judge's retained cases on which the other judge
    chose the same sense. None when the judges share no case.
    """
    reference = [
        case
        for case in cases
        if case.judge == reference_judge and case.confidence >= min_confidence
    ]
    other: Dict[Tuple[str, Tuple[str, ...]], SynsetId] = {
        case.case_key: case.gold for case in cases if case.judge == other_judge
    }
    shared = [case for case in reference if case.case_key in other]
    if not shared:
        return None
    return sum(1 for case in shared if other[case.case_key] == case.gold) / len(shared)


def evaluate_judges(
    t: Taxonomy,
    ic: ICTable,
    cases: List[TestCase],
    options: Optional[DisambiguationOptions] = None,
    runs: int = 10,
    seed: int = 0,
    sample_stddev: bool = False,
    min_confidence: int = MIN_CONFIDENCE,
) -> List[EvalReport]:
    """
    One report per judge, in first-appearance order; upper_bound is the
    agreement of the next judge with this one.

    A judge whose cases are all below min_confidence gets no report.

    Raises:
        AllCasesExcluded: no judge has a retained case
    """
    by_judge: "OrderedDict[str, List[TestCase]]" = OrderedDict()
    for case in cases:
        by_judge.setdefault(case.judge, []).append(case)

    judges = list(by_judge)
    reports: List[EvalReport] = []
    excluded = 0
    for position, judge in enumerate(judges):
        try:
            report = score(
                t,
                ic,
                by_judge[judge],
                options,
                runs=runs,
                seed=seed,
                sample_stddev=sample_stddev,
                min_confidence=min_confidence,
            )
        except AllCasesExcluded as e:
            logger.warning("Judge %s has no case at confidence >= %d, skipped", judge, min_confidence)
            excluded += e.excluded
            continue
        upper_bound = None
        if len(judges) > 1:
            other = judges[(position + 1) % len(judges)]
            upper_bound = agreement(cases, judge, other, min_confidence)
        reports.append(report.model_copy(update={"judge": judge, "upper_bound": upper_bound}))
    if not reports:
        raise AllCasesExcluded(excluded)
    return reports


# ============== I/O ==============


def read_cases(t: Taxonomy, handle: TextIO) -> List[TestCase]:
    """
    Parse `<judge>\\t<confidence>\\t<target>\\t<gold>\\t<w1,w2,...>` records.

    Group words go through the same normalization as disambiguation input;
    words missing from the taxonomy are dropped from the group.
    """
    cases: List[TestCase] = []
    for line_number, line in enumerate(handle, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise ParseError(line_number, "expected 5 tab-separated fields")
        judge, confidence, target, gold, words = fields
        try:
            case = TestCase(
                judge=judge,
                confidence=int(confidence),
                target=normalize(target, t),
                gold=gold.strip(),
                group=WordGroup.from_tokens(t, words.split(",")),
            )
        except (ValueError, ValidationError) as e:
            raise ParseError(line_number, f"invalid test case: {e}") from None
        cases.append(case)
    logger.info("Read %d test cases", len(cases))
    return cases


def render_report(report: EvalReport) -> str:
    """Aligned human-readable block followed by key=value lines"""
    title = f"Judge {report.judge}" if report.judge else "All judges"
    rows = [
        ("cases considered", str(report.n_considered)),
        ("correct", str(report.n_correct)),
        ("accuracy", f"{report.accuracy * 100:.1f}%"),
        (
            f"random baseline ({report.baseline_runs} runs)",
            f"{report.baseline_mean * 100:.1f}% (sd {report.baseline_stddev * 100:.2f})",
        ),
        (f"excluded (confidence < {report.min_confidence})", str(report.excluded_low_confidence)),
    ]
    if report.upper_bound is not None:
        rows.append(("inter-judge upper bound", f"{report.upper_bound * 100:.1f}%"))
    width = max(len(label) for label, _ in rows)
    lines = [title]
    lines.extend(f"  {label.ljust(width)}  {value}" for label, value in rows)

    values = {
        "judge": report.judge or "",
        "n_considered": report.n_considered,
        "n_correct": report.n_correct,
        "accuracy": f"{report.accuracy:.6f}",
        "baseline_mean": f"{report.baseline_mean:.6f}",
        "baseline_stddev": f"{report.baseline_stddev:.6f}",
        "baseline_runs": report.baseline_runs,
        "excluded_low_confidence": report.excluded_low_confidence,
        "min_confidence": report.min_confidence,
    }
    if report.upper_bound is not None:
        values["upper_bound"] = f"{report.upper_bound:.6f}"
    lines.extend(f"{key}={value}" for key, value in values.items())
    return "\n".join(lines) + "\n"
