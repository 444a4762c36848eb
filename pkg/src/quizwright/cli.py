"""Batch entry points: index building, transcript analysis, buzzer stats,
model training, and serving.

Exit codes: 0 success, 1 usage or configuration problem (including unusable
training corpora), 2 data errors while processing readable inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .annotators import train_difficulty, train_pronunciation_model
from .annotators.difficulty import TrainingGrain
from .buzzer import replay_full_question
from .config import AppConfig, load_config
from .corpus import QuestionSet, load_question_set, split_sentences
from .engines import load_engines
from .errors import InsufficientLabels, QuizwrightError
from .index import Grouping, build_index, save_index
from .service.schemas import report_to_wire
from .session import analyze, apply_edit, create_session

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse defaults to exit 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="quizwright")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-index", help="build and cache a tf-idf index")
    p.add_argument("--config", default=None)
    p.add_argument("--corpus", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--grouping", choices=["answer", "question"], default="answer")

    p = sub.add_parser("analyze", help="annotate a question file like the widgets do")
    p.add_argument("--questions", required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    _engine_flags(p)

    p = sub.add_parser("eval-buzzer", help="replay questions and report lock stats")
    p.add_argument("--questions", required=True)
    p.add_argument("--tau", type=float, default=None)
    _engine_flags(p)

    p = sub.add_parser("train", help="train an annotator model")
    p.add_argument("--task", choices=["difficulty", "pronunciation"], required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--out", required=True)
    p.add_argument("--grain", choices=["question", "sentence"], default="question")
    p.add_argument("--epochs", type=int, default=400)
    p.add_argument("--learning-rate", type=float, default=2.0)
    p.add_argument("--holdout", type=float, default=0.2)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", default=None)
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)

    return parser


def _engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None)
    p.add_argument("--corpus", default=None, help="override the engine corpus path")
    p.add_argument("--aliases", default=None)
    p.add_argument("--countries", default=None)


def _config_from_args(args: argparse.Namespace) -> AppConfig:
    config = load_config(args.config) if args.config else AppConfig()
    if args.corpus:
        config.corpus_path = args.corpus
    if args.aliases:
        config.alias_path = args.aliases
    if args.countries:
        config.lexicon_path = args.countries
    if getattr(args, "tau", None) is not None:
        config.confidence_threshold = args.tau
    return config


def cmd_build_index(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config) if args.config else AppConfig()
        corpus_path = args.corpus or config.corpus_path
        out_path = args.out or config.index_cache_path
        qs = load_question_set(corpus_path)
        ix = build_index(qs, Grouping(args.grouping))
    except QuizwrightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    save_index(ix, out_path)
    print(f"indexed {ix.n_docs} documents, vocabulary {ix.vocabulary_size()} terms")
    print(f"corpus hash {ix.corpus_hash}")
    return EXIT_OK


def _buzz_markers(text: str, state) -> str:
    """Insert inline buzz markers into the question text for transcripts."""
    inserts: list[tuple[int, str]] = []
    if state.locked and state.lock_position is not None:
        inserts.append((state.lock_position, " [buzz]"))
    if state.first_wrong_position is not None:
        guess = state.first_wrong_guess or "?"
        inserts.append((state.first_wrong_position, f" [buzz] (*{guess}*)"))
    out = text
    for pos, marker in sorted(inserts, key=lambda x: -x[0]):
        out = out[:pos] + marker + out[pos:]
    return out


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        config = _config_from_args(args)
    except QuizwrightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        questions = load_question_set(args.questions)
        engines = load_engines(config)
    except QuizwrightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    results = []
    for q in questions:
        entry: dict = {"id": q.id, "answer": q.answer, "category": q.category}
        try:
            session = create_session(now=0.0)
            apply_edit(session, q.text, q.answer, 0.0, engines)
            report = analyze(session, engines)
            entry["report"] = report_to_wire(report).model_dump(mode="json")
            entry["annotated_text"] = _buzz_markers(q.text, session.buzz_state)
        except Exception as exc:  # noqa: BLE001 - per-question isolation
            entry["error"] = f"{type(exc).__name__}: {exc}"
        results.append(entry)

    if args.format == "json":
        print(json.dumps(results, ensure_ascii=False, indent=1))
        return EXIT_OK

    for entry in results:
        print(f"== {entry['id']}  [{entry.get('category') or '-'}]  "
              f"answer: {entry['answer']}")
        if "error" in entry:
            print(f"  error: {entry['error']}")
            continue
        print(entry["annotated_text"])
        report = entry["report"]
        buzz = report["buzz"]
        if buzz["locked"]:
            print(f"  locked at {buzz['position']}")
        else:
            print("  never locked")
        guesses = "; ".join(
            f"{g['answer']} ({g['score']:.3f}, conf {g['confidence']:.3f})"
            for g in report["guesses"][:3]
        )
        print(f"  guesses: {guesses or '-'}")
        if report["difficulty"]:
            d = report["difficulty"]
            print(f"  difficulty: {d['label']} (p={d['p']:.3f})")
        for kind in ("evidence", "pronunciation", "country"):
            spans = [s for s in report["spans"] if s["kind"] == kind]
            if spans:
                shown = ", ".join(f"{s['start']}-{s['end']}" for s in spans[:8])
                print(f"  {kind} spans: {shown}")
        print()
    return EXIT_OK


def cmd_eval_buzzer(args: argparse.Namespace) -> int:
    if args.tau is not None and not (0.0 < args.tau <= 1.0):
        print("error: --tau must be in (0, 1]", file=sys.stderr)
        return EXIT_USAGE
    try:
        config = _config_from_args(args)
    except QuizwrightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        questions = load_question_set(args.questions)
        engines = load_engines(config)
    except QuizwrightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    before_final = at_final = never = wrong_first = 0
    regressions = 0
    for q in questions:
        state = replay_full_question(
            engines.answer_index, q, engines.alias_table, engines.buzz_config
        )
        regressions += state.regression_events
        spans = split_sentences(q.text)
        final_start = spans[-1].start if spans else 0
        if state.first_wrong_position is not None and (
            state.lock_position is None
            or state.first_wrong_position < state.lock_position
        ):
            wrong_first += 1
        if not state.locked:
            never += 1
            print(f"{q.id}\tnever-locked")
            continue
        frac = state.lock_position / len(q.text) if q.text else 0.0
        where = "before-final-clue" if state.lock_position < final_start else "at-final-clue"
        if state.lock_position < final_start:
            before_final += 1
        else:
            at_final += 1
        print(f"{q.id}\tlocked\t{state.lock_position}\t{frac:.4f}\t{where}")

    print(f"locked-before-final-clue\t{before_final}")
    print(f"locked-at-final\t{at_final}")
    print(f"never-locked\t{never}")
    print(f"confident-wrong-first\t{wrong_first}")
    print(f"regression-events\t{regressions}")
    return EXIT_OK


def _stratified_split(
    qs: QuestionSet, holdout: float, seed: int
) -> tuple[QuestionSet, QuestionSet]:
    import random

    from .corpus import DifficultyLabel

    rng = random.Random(seed)
    train: list = []
    held: list = []
    for label in (DifficultyLabel.HIGH_SCHOOL, DifficultyLabel.COLLEGE):
        members = [q for q in qs if q.difficulty_label is label]
        rng.shuffle(members)
        cut = int(round(len(members) * holdout))
        held.extend(members[:cut])
        train.extend(members[cut:])
    return QuestionSet(tuple(train)), QuestionSet(tuple(held))


def cmd_train(args: argparse.Namespace) -> int:
    try:
        qs = load_question_set(args.corpus)
    except QuizwrightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    if args.task == "pronunciation":
        try:
            model = train_pronunciation_model(qs)
        except QuizwrightError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        payload = {
            "version": 1,
            "kind": "pronunciation",
            "context_counts": model.context_counts,
            "trigram_counts": model.trigram_counts,
            "alphabet": list(model.alphabet),
            "vocab_freq": model.vocab_freq,
            "flag_threshold": model.flag_threshold,
            "min_freq": model.min_freq,
            "quantile": model.quantile,
        }
        Path(args.out).write_text(
            json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n",
            encoding="utf-8",
        )
        print(f"vocabulary {len(model.vocab_freq)} words, "
              f"surprisal cutoff {model.flag_threshold:.6f}")
        return EXIT_OK

    from .annotators.difficulty import classify_difficulty

    train_qs, held_qs = _stratified_split(qs, args.holdout, args.seed)
    try:
        clf = train_difficulty(
            train_qs,
            grain=TrainingGrain(args.grain),
            seed=args.seed,
            epochs=args.epochs,
            learning_rate=args.learning_rate,
        )
    except InsufficientLabels as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    clf.save(args.out)

    labeled_train = [q for q in train_qs if q.difficulty_label.value != "unlabeled"]
    labeled_held = [q for q in held_qs if q.difficulty_label.value != "unlabeled"]
    if labeled_held:
        correct = sum(
            1
            for q in labeled_held
            if classify_difficulty(clf, q.text)[0] is q.difficulty_label
        )
        accuracy = correct / len(labeled_held)
        from collections import Counter

        majority_label, majority_n = Counter(
            q.difficulty_label for q in labeled_train
        ).most_common(1)[0]
        baseline = sum(
            1 for q in labeled_held if q.difficulty_label is majority_label
        ) / len(labeled_held)
        print(f"held-out accuracy {accuracy:.4f} on {len(labeled_held)} questions")
        print(f"majority baseline {baseline:.4f} ({majority_label.value})")
    else:
        print("no held-out examples; trained on everything")
    print(f"model written to {args.out}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    try:
        config = load_config(args.config) if args.config else AppConfig()
    except QuizwrightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    host = args.host or config.listen_host
    port = args.port or config.listen_port
    app = create_app(config=config)
    uvicorn.run(app, host=host, port=port)
    return EXIT_OK


_COMMANDS = {
    "build-index": cmd_build_index,
    "analyze": cmd_analyze,
    "eval-buzzer": cmd_eval_buzzer,
    "train": cmd_train,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except QuizwrightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
