"""Interactive consultation loop and service launcher.

The REPL drives a consultation the way the dialogue transcript does:
``diagnose`` loads a patient evidence file and prints the ranked table,
``why`` picks a diagnosis by number and walks the explanation chain with
y/n expansion, ``quit`` leaves.  Output is deterministic: when stdin is
not a terminal every read line is echoed after its prompt, so scripted
runs produce byte-identical transcripts.

With --json the loop reads one-line commands (``diagnose <file>``,
``why <hypothesis> [depth]``, ``quit``) and emits one JSON object per
command, no prompts.  With --serve the HTTP service is started instead.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import engine, model
from .errors import CredenceError, KBParseError
from .explain import expand, explain, explain_chain, node_to_dict, render_text

TABLE_RULE = "-----"
TEXT_COLUMN = 53  # interval column start in the diagnosis table


def _ask(prompt: str) -> str:
    """Prompt and read one line, echoing it when input is piped so the
    transcript shows what a live user would have typed."""
    sys.stdout.write(prompt)
    sys.stdout.flush()
    line = sys.stdin.readline()
    if not line:
        sys.stdout.write("\n")
        raise EOFError
    text = line.rstrip("\n")
    if not sys.stdin.isatty():
        sys.stdout.write(text + "\n")
    return text


def resolve_evidence_path(name: str, kb_dir: Path) -> Path | None:
    """Try the name as given, with the evidence extension, then relative
    to the KB's directory."""
    for candidate in (
        Path(name),
        Path(name + ".gev"),
        kb_dir / name,
        kb_dir / (name + ".gev"),
    ):
        if candidate.is_file():
            return candidate
    return None


def _diagnosis_rows(
    wm: engine.WorkingMemory,
) -> list[tuple[model.Hypothesis, engine.BeliefInterval]]:
    return engine.all_diagnoses(wm)


def _print_table(
    rows: list[tuple[model.Hypothesis, engine.BeliefInterval]]
) -> None:
    print(TABLE_RULE)
    print(f"{'Diagnostic Hypotheses':<{TEXT_COLUMN}}Belief Intervals")
    print(TABLE_RULE)
    for hyp, iv in rows:
        print(f"{hyp.text:<{TEXT_COLUMN}}{iv}")
    print()


class Consultation:
    """REPL state: the KB, engine settings, and the last chaining run."""

    def __init__(
        self,
        kb: model.KnowledgeBase,
        kb_path: Path,
        settings: engine.EngineSettings,
    ):
        self.kb = kb
        self.kb_dir = kb_path.parent
        self.settings = settings
        self.wm: engine.WorkingMemory | None = None

    def run_evidence(self, path: Path) -> None:
        assignment = model.load_evidence(path, self.kb)
        self.wm = engine.forward_chain(self.kb, assignment, self.settings)

    def cmd_diagnose(self) -> None:
        name = _ask(
            "Type the file name of patient symptoms "
            "(default file is Evidence) : "
        ).strip()
        if not name:
            name = "Evidence"
        path = resolve_evidence_path(name, self.kb_dir)
        if path is None:
            print(f"evidence file not found: {name}")
            print()
            return
        try:
            self.run_evidence(path)
        except KBParseError as exc:
            for diag in exc.diagnostics:
                print(diag)
            print()
            return
        except CredenceError as exc:
            print(exc)
            print()
            return
        _print_table(_diagnosis_rows(self.wm))

    def cmd_why(self) -> None:
        if self.wm is None:
            print("no consultation yet: run diagnose first.")
            print()
            return
        rows = _diagnosis_rows(self.wm)
        print(f"{'Number':<16}Diagnosis")
        print(TABLE_RULE)
        for i, (hyp, _) in enumerate(rows):
            print(f"{i} => {hyp.text}")
        answer = _ask(
            "Type the number of the diagnosis to be explained : "
        ).strip()
        print()
        try:
            index = int(answer)
            hyp = rows[index][0]
        except (ValueError, IndexError):
            print(f"no diagnosis numbered {answer!r}.")
            print()
            return
        node = explain(self.wm, hyp.name)
        while True:
            rendered = render_text(node)
            if node.parent is None:
                print(rendered)
                print()
                return
            sys.stdout.write(rendered)
            sys.stdout.flush()
            try:
                reply = _ask("").strip().lower()
            except EOFError:
                print()
                return
            if reply not in ("y", "yes"):
                return
            print()
            node = expand(self.wm, node)

    def loop(self) -> int:
        while True:
            try:
                command = _ask("Command ? ").strip().lower()
            except EOFError:
                return 0
            if command == "diagnose":
                self.cmd_diagnose()
            elif command == "why":
                self.cmd_why()
            elif command in ("quit", "exit"):
                return 0
            elif command == "":
                continue
            else:
                print(
                    f"unknown command {command!r}: "
                    "commands are diagnose, why, quit"
                )
                print()


# --------------------------------------------------------------------------
# JSON command mode

def _rows_json(wm: engine.WorkingMemory) -> list[dict]:
    return [
        {
            "hypothesis": hyp.name,
            "text": hyp.text,
            "interval": {"bel": iv.bel, "pl": iv.pl},
        }
        for hyp, iv in _diagnosis_rows(wm)
    ]


def json_loop(consult: Consultation) -> int:
    for raw in sys.stdin:
        parts = raw.strip().split()
        if not parts:
            continue
        command, args = parts[0].lower(), parts[1:]
        try:
            if command == "quit":
                return 0
            if command == "diagnose":
                if len(args) != 1:
                    raise CredenceError("usage: diagnose <evidence-file>")
                path = resolve_evidence_path(args[0], consult.kb_dir)
                if path is None:
                    raise CredenceError(f"evidence file not found: {args[0]}")
                consult.run_evidence(path)
                print(json.dumps({"diagnoses": _rows_json(consult.wm)}))
            elif command == "why":
                if consult.wm is None:
                    raise CredenceError("no consultation yet")
                if not 1 <= len(args) <= 2:
                    raise CredenceError("usage: why <hypothesis> [depth]")
                depth = int(args[1]) if len(args) == 2 else 0
                nodes = explain_chain(consult.wm, args[0], depth)
                print(
                    json.dumps(
                        {"nodes": [node_to_dict(n) for n in nodes]}
                    )
                )
            else:
                raise CredenceError(f"unknown command {command!r}")
        except CredenceError as exc:
            print(json.dumps({"error": str(exc)}))
    return 0


# --------------------------------------------------------------------------
# Entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="credence",
        description="Evidential-reasoning consultations over a rule KB.",
    )
    parser.add_argument("--kb", required=True, help="knowledge base file")
    parser.add_argument(
        "--evidence", help="evidence file to load before the first command"
    )
    parser.add_argument(
        "--threshold",
        type=float,
        default=0.0,
        help="minimum clause mass for a rule to fire (default 0)",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        help="machine mode: JSON per command, no prompts",
    )
    parser.add_argument(
        "--serve",
        metavar="ADDR:PORT",
        help="run the HTTP consultation service instead of the REPL",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        return _run(build_parser().parse_args(argv))
    except BrokenPipeError:
        # the reader went away (e.g. piped into head); die quietly
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 141


def _run(args: argparse.Namespace) -> int:
    kb_path = Path(args.kb)
    try:
        kb = model.load_kb(kb_path)
    except KBParseError as exc:
        for diag in exc.diagnostics:
            print(diag, file=sys.stderr)
        return 2
    except (OSError, CredenceError) as exc:
        print(exc, file=sys.stderr)
        return 2
    settings = engine.EngineSettings(threshold=args.threshold)

    if args.serve:
        host, _, port_text = args.serve.rpartition(":")
        if not host or not port_text.isdigit():
            print(f"bad --serve address {args.serve!r}", file=sys.stderr)
            return 2
        import uvicorn

        from .service import create_app

        uvicorn.run(
            create_app(kb, settings), host=host, port=int(port_text)
        )
        return 0

    consult = Consultation(kb, kb_path, settings)
    if args.evidence:
        path = resolve_evidence_path(args.evidence, consult.kb_dir)
        if path is None:
            print(f"evidence file not found: {args.evidence}", file=sys.stderr)
            return 2
        try:
            consult.run_evidence(path)
        except (KBParseError, CredenceError) as exc:
            print(exc, file=sys.stderr)
            return 2
        if not args.json:
            _print_table(_diagnosis_rows(consult.wm))

    if args.json:
        return json_loop(consult)
    return consult.loop()


if __name__ == "__main__":
    sys.exit(main())
