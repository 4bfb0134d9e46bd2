"""Simulated cohorts, transcript re-scoring, and study-shaped metrics.

A cohort run drives n sessions through the full session pipeline with a
simulated teacher and aggregates the artifacts a study analysis needs:
final-score summary per group, the per-iteration mean learned-concepts
curve, teach rates in the iterations following positive feedback, and
pairwise one-sided t-tests between groups.

Simulated numbers mirror the *shape* of human-study tables and figures,
never their values; every output file carries a provenance header naming
the policy and seed that produced it.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from statistics import fmean, stdev
from typing import Iterable, Sequence

from .concepts import DICTIONARY, ConceptDictionary
from .errors import CorruptTranscript
from .matching import Intention, MatcherBackend, match_intention
from .robot import RobotState, learn
from .scoring import (
    Condition,
    CumulativeScore,
    ScoreStrategy,
    cumulative_score,
    feedback_valence,
    iteration_score,
    render_score,
    score_pair,
)
from .session import (
    FeedbackView,
    Session,
    SessionConfig,
    SessionStatus,
    create_session,
    feedback_view,
    submit_iteration,
)
from .stats import TTestResult, t_test_one_sided
from .teachers import TeacherPolicy, make_teacher
from .rng import derive_seed
from .tokens import TokenCombination

logger = logging.getLogger(__name__)

SESSIONS_SUFFIX = ".sessions.jsonl"

# Pairwise comparisons run in this fixed order, one-sided A > B.
_PAIR_ORDER = (Condition.MMM.value, Condition.PERFORMANCE.value, Condition.BASELINE.value)


@dataclass(frozen=True)
class IterationSummary:
    d: int
    newly: int
    learned: int
    s_d: Fraction
    s_cum: Fraction
    valence: str


@dataclass(frozen=True)
class SessionSummary:
    session_id: str
    condition: str
    policy: str
    seed: int
    status: str
    final_score: int
    iterations: tuple[IterationSummary, ...]

    def to_json(self) -> dict:
        return {
            "kind": "session",
            "session_id": self.session_id,
            "condition": self.condition,
            "policy": self.policy,
            "seed": self.seed,
            "status": self.status,
            "final_score": self.final_score,
            "iterations": [
                {
                    "d": it.d,
                    "newly": it.newly,
                    "learned": it.learned,
                    "s_d": render_score(it.s_d),
                    "s_d_pair": score_pair(it.s_d),
                    "s_cum": render_score(it.s_cum),
                    "s_cum_pair": score_pair(it.s_cum),
                    "valence": it.valence,
                }
                for it in self.iterations
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> SessionSummary:
        return cls(
            session_id=data["session_id"],
            condition=data["condition"],
            policy=data["policy"],
            seed=data["seed"],
            status=data["status"],
            final_score=data["final_score"],
            iterations=tuple(
                IterationSummary(
                    d=it["d"],
                    newly=it["newly"],
                    learned=it["learned"],
                    s_d=Fraction(*it["s_d_pair"]),
                    s_cum=Fraction(*it["s_cum_pair"]),
                    valence=it["valence"],
                )
                for it in data["iterations"]
            ),
        )


def summarize_session(session: Session, policy: str, seed: int) -> SessionSummary:
    learned = 0
    iterations = []
    for record in session.records:
        learned += len(record.newly_learned)
        iterations.append(
            IterationSummary(
                d=record.d,
                newly=len(record.newly_learned),
                learned=learned,
                s_d=record.s_d,
                s_cum=record.s_cum,
                valence=record.feedback.valence.value,
            )
        )
    return SessionSummary(
        session_id=session.id,
        condition=session.config.condition.value,
        policy=policy,
        seed=seed,
        status=session.status.value,
        final_score=session.score,
        iterations=tuple(iterations),
    )


@dataclass
class GroupMetrics:
    """Aggregates for one condition group."""

    condition: str
    max_iterations: int
    sessions: list[SessionSummary] = field(default_factory=list)
    max_score: int = len(DICTIONARY)

    @property
    def n_sessions(self) -> int:
        return len(self.sessions)

    @property
    def final_scores(self) -> list[float]:
        return [float(s.final_score) for s in self.sessions]

    @property
    def mean_final_score(self) -> float:
        return fmean(self.final_scores)

    @property
    def sd_final_score(self) -> float:
        return stdev(self.final_scores) if len(self.sessions) > 1 else 0.0

    @property
    def pct_of_max(self) -> float:
        return self.mean_final_score / self.max_score

    def learned_curve(self) -> list[float]:
        """Mean learned-concept count at each iteration 1..max_iterations.

        Sessions that finished early hold their final count for the rest
        of the curve, so the series always has max_iterations points.
        """
        curve = []
        for d in range(1, self.max_iterations + 1):
            values = []
            for s in self.sessions:
                idx = min(d, len(s.iterations)) - 1
                values.append(float(s.iterations[idx].learned) if idx >= 0 else 0.0)
            curve.append(fmean(values))
        return curve

    def post_positive_rates(self, max_offset: int = 5) -> dict[int, tuple[float | None, int]]:
        """Teach rate k iterations after a positive-feedback iteration.

        For each offset k, the share of (session, iteration) pairs with
        positive feedback at d whose iteration d+k taught at least one new
        concept. Returns (rate, number of qualifying pairs); the rate is
        None when no pair qualifies (e.g. baseline never shows valence).
        """
        rates: dict[int, tuple[float | None, int]] = {}
        for k in range(1, max_offset + 1):
            hits = total = 0
            for s in self.sessions:
                for it in s.iterations:
                    if it.valence != "positive":
                        continue
                    follow = it.d + k
                    if follow > len(s.iterations):
                        continue
                    total += 1
                    hits += 1 if s.iterations[follow - 1].newly > 0 else 0
            rates[k] = ((hits / total) if total else None, total)
        return rates


@dataclass(frozen=True)
class PairwiseResult:
    greater: str
    lesser: str
    result: TTestResult


@dataclass
class CohortMetrics:
    """Metrics for one or more condition groups, plus pairwise tests."""

    max_iterations: int
    groups: dict[str, GroupMetrics] = field(default_factory=dict)
    pairwise: list[PairwiseResult] = field(default_factory=list)

    def compute_pairwise(self) -> None:
        """Fill pairwise one-sided tests in the fixed condition order."""
        self.pairwise = []
        present = [c for c in _PAIR_ORDER if c in self.groups]
        present += sorted(set(self.groups) - set(present))
        for i, a in enumerate(present):
            for b in present[i + 1 :]:
                ga, gb = self.groups[a], self.groups[b]
                if ga.n_sessions < 2 or gb.n_sessions < 2:
                    continue
                self.pairwise.append(
                    PairwiseResult(a, b, t_test_one_sided(ga.final_scores, gb.final_scores))
                )


def run_session(
    policy: TeacherPolicy,
    condition: Condition,
    session_seed: int,
    teacher_seed: int,
    *,
    strategy: ScoreStrategy = ScoreStrategy.EXAMPLE_CONSISTENT,
    max_iterations: int = 25,
    demo_interval: int = 5,
    dictionary: ConceptDictionary = DICTIONARY,
) -> Session:
    """Drive one full session with a simulated teacher through the
    standard pipeline; the teacher only ever sees condition-filtered
    feedback."""
    config = SessionConfig(
        condition=condition,
        score_strategy=strategy,
        seed=session_seed,
        max_iterations=max_iterations,
        demo_interval=demo_interval,
    )
    # deterministic id so cohort outputs are byte-stable per seed
    session = create_session(config, session_id=f"sim-{session_seed:016x}")
    teacher = make_teacher(policy, teacher_seed)
    history: list[FeedbackView] = []
    while session.status is SessionStatus.ACTIVE:
        combo, intention = teacher.step(history)
        record = submit_iteration(session, combo, intention, dictionary=dictionary)
        history.append(feedback_view(record, condition))
    return session


def run_cohort(
    policy: TeacherPolicy,
    condition: Condition,
    n_sessions: int,
    seed: int,
    *,
    strategy: ScoreStrategy = ScoreStrategy.EXAMPLE_CONSISTENT,
    max_iterations: int = 25,
    demo_interval: int = 5,
    workers: int | None = None,
    partial_file: str | Path | None = None,
) -> CohortMetrics:
    """Run n sessions for one condition, in parallel, deterministically.

    Session i gets independent derived seeds for its config and teacher,
    so results do not depend on scheduling. If a session raises, whatever
    finished is flushed to `partial_file` (when given) before the error
    propagates.
    """
    if n_sessions < 1:
        raise ValueError("n_sessions must be >= 1")

    def one(i: int) -> SessionSummary:
        session = run_session(
            policy,
            condition,
            session_seed=derive_seed(seed, condition.value, i, "session"),
            teacher_seed=derive_seed(policy.seed, condition.value, i, "teacher"),
            strategy=strategy,
            max_iterations=max_iterations,
            demo_interval=demo_interval,
        )
        return summarize_session(session, policy.kind.value, seed)

    summaries: list[SessionSummary | None] = [None] * n_sessions
    try:
        with ThreadPoolExecutor(max_workers=workers or min(8, n_sessions)) as pool:
            for i, summary in enumerate(pool.map(one, range(n_sessions))):
                summaries[i] = summary
    except Exception:
        done = [s for s in summaries if s is not None]
        if partial_file is not None and done:
            write_sessions_file(
                partial_file, policy, condition, seed, done, partial=True
            )
            logger.error("cohort aborted; %d finished sessions written to %s", len(done), partial_file)
        raise

    group = GroupMetrics(condition=condition.value, max_iterations=max_iterations)
    group.sessions = [s for s in summaries if s is not None]
    metrics = CohortMetrics(max_iterations=max_iterations, groups={condition.value: group})
    metrics.compute_pairwise()
    return metrics


def combine_metrics(parts: Iterable[CohortMetrics]) -> CohortMetrics:
    """Merge per-condition runs into one multi-group metrics object."""
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to combine")
    max_iterations = max(p.max_iterations for p in parts)
    combined = CohortMetrics(max_iterations=max_iterations)
    for part in parts:
        for condition, group in part.groups.items():
            target = combined.groups.setdefault(
                condition, GroupMetrics(condition=condition, max_iterations=max_iterations)
            )
            target.sessions.extend(group.sessions)
    combined.compute_pairwise()
    return combined


# ---------------------------------------------------------------------------
# Session files (simulate output) and the metrics CSV (export-metrics output)


def write_sessions_file(
    path: str | Path,
    policy: TeacherPolicy,
    condition: Condition,
    seed: int,
    summaries: Sequence[SessionSummary],
    *,
    partial: bool = False,
) -> None:
    header = {
        "kind": "cohort-header",
        "policy": policy.kind.value,
        "condition": condition.value,
        "seed": seed,
        "n_sessions": len(summaries),
        "partial": partial,
    }
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for summary in summaries:
            fh.write(json.dumps(summary.to_json(), sort_keys=True) + "\n")


def read_sessions_file(path: str | Path) -> tuple[dict, list[SessionSummary]]:
    with Path(path).open("r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty sessions file")
    header = json.loads(lines[0])
    if header.get("kind") != "cohort-header":
        raise ValueError(f"{path}: missing cohort header")
    return header, [SessionSummary.from_json(json.loads(line)) for line in lines[1:]]


def load_metrics_dir(directory: str | Path, max_iterations: int = 25) -> tuple[CohortMetrics, list[dict]]:
    """Read every sessions file in a directory into combined metrics."""
    directory = Path(directory)
    paths = sorted(directory.glob(f"*{SESSIONS_SUFFIX}"))
    if not paths:
        raise FileNotFoundError(f"no *{SESSIONS_SUFFIX} files in {directory}")
    headers = []
    combined = CohortMetrics(max_iterations=max_iterations)
    for path in paths:
        header, summaries = read_sessions_file(path)
        headers.append(header)
        condition = str(header["condition"])
        group = combined.groups.setdefault(
            condition, GroupMetrics(condition=condition, max_iterations=max_iterations)
        )
        group.sessions.extend(summaries)
    combined.compute_pairwise()
    return combined, headers


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def metrics_to_csv(metrics: CohortMetrics, provenance: Sequence[dict]) -> str:
    """The frozen metrics table: '#' provenance comments, then a header
    row `section,condition,key,value`, then one row per data point.

    Sections: `summary` (n_sessions, mean_final_score, sd_final_score,
    pct_of_max), `learned_curve` (key = iteration), `post_positive`
    (key = offset, empty value when no qualifying events) and `t_test`
    (condition column holds `A>B`, keys t, p, df).
    """
    lines = []
    for header in provenance:
        lines.append(
            "# policy={policy} condition={condition} seed={seed} n_sessions={n}{partial}".format(
                policy=header.get("policy"),
                condition=header.get("condition"),
                seed=header.get("seed"),
                n=header.get("n_sessions"),
                partial=" partial=true" if header.get("partial") else "",
            )
        )
    lines.append("section,condition,key,value")
    for condition in sorted(metrics.groups):
        group = metrics.groups[condition]
        lines.append(f"summary,{condition},n_sessions,{group.n_sessions}")
        lines.append(f"summary,{condition},mean_final_score,{_fmt(group.mean_final_score)}")
        lines.append(f"summary,{condition},sd_final_score,{_fmt(group.sd_final_score)}")
        lines.append(f"summary,{condition},pct_of_max,{_fmt(group.pct_of_max)}")
    for condition in sorted(metrics.groups):
        for d, value in enumerate(metrics.groups[condition].learned_curve(), start=1):
            lines.append(f"learned_curve,{condition},{d},{_fmt(value)}")
    for condition in sorted(metrics.groups):
        for offset, (rate, _count) in metrics.groups[condition].post_positive_rates().items():
            rendered = _fmt(rate) if rate is not None else ""
            lines.append(f"post_positive,{condition},{offset},{rendered}")
    for pair in metrics.pairwise:
        label = f"{pair.greater}>{pair.lesser}"
        lines.append(f"t_test,{label},t,{_fmt(pair.result.t)}")
        lines.append(f"t_test,{label},p,{_fmt(pair.result.p)}")
        lines.append(f"t_test,{label},df,{pair.result.df}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Transcripts: inputs-only records that can be re-scored offline.


def transcript_lines(session: Session) -> list[str]:
    """The inputs-only transcript of a session, one JSON object per line."""
    return [
        json.dumps(
            {"d": r.d, "tokens": r.combo.to_json(), "intention": r.intention.text},
            sort_keys=True,
        )
        for r in session.records
    ]


def score_transcript(
    source: str | Path | Iterable[str],
    strategy: ScoreStrategy = ScoreStrategy.EXAMPLE_CONSISTENT,
    dictionary: ConceptDictionary = DICTIONARY,
) -> list[dict]:
    """Re-run matching, learning and scoring over a transcript.

    Starts from a fresh robot, replays each line through the same
    functions the live pipeline uses, and returns one score row per
    iteration. Lets the same transcript be audited under either strategy.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
        lines = text.splitlines()
    else:
        lines = [line.rstrip("\n") for line in source]

    robot = RobotState.fresh(0)
    cum: CumulativeScore | None = None
    rows: list[dict] = []
    expected_d = 0
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        expected_d += 1
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorruptTranscript(line_no, f"invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise CorruptTranscript(line_no, "line is not an object")
        try:
            combo = TokenCombination.from_json(data["tokens"])
            intention = Intention(data["intention"])
            d = data["d"]
        except KeyError as exc:
            raise CorruptTranscript(line_no, f"missing field {exc}") from None
        except Exception as exc:
            raise CorruptTranscript(line_no, str(exc)) from None
        if d != expected_d:
            raise CorruptTranscript(line_no, f"expected d={expected_d}, got {d!r}")
        match = match_intention(intention, dictionary, backend=MatcherBackend.LEXICON)
        robot, newly = learn(robot, combo, dictionary)
        score = iteration_score(match.concepts, newly, strategy, dictionary)
        cum = cumulative_score(cum, score.s_d)
        rows.append(
            {
                "d": d,
                "matched": [c.value for c in dictionary.sorted(match.concepts)],
                "newly_learned": [c.value for c in dictionary.sorted(newly)],
                "s_d": render_score(score.s_d),
                "s_d_pair": score_pair(score.s_d),
                "s_cum": render_score(cum.s_cum),
                "s_cum_pair": score_pair(cum.s_cum),
                "valence": feedback_valence(score.s_d).value,
            }
        )
    return rows


def write_score_rows(path: str | Path, rows: Sequence[dict]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
