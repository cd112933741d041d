#!/usr/bin/env python3
"""Machine-readable test runner for Python projects.

Discovers test files under --root (test_*.py or *_test.py), runs module-level
test_* functions and unittest.TestCase test_* methods, and prints one JSON
object per line on stdout:

    {"type": "plan", "tests": ["test_calc.py::test_add", ...]}
    {"type": "result", "test": "...", "status": "pass|fail|error|skipped",
     "message": "...", "trace": "..."}        (payload only on fail/error)
    {"type": "summary", "executed": N, ...}

With --coverage it instead prints the normalized line-coverage format:

    coverage v1
    file calc.py
    executable 1 3-4
    covered 1 3

measured over non-test source files (executable = statement lines from the
AST, excluding def/class header lines so a function only counts as covered
when its body runs, not when it is merely defined).

Exit status: 0 when everything passed (or nothing was collected), 1 when any
test failed or errored. Coverage mode always exits 0 so a failing suite can
still report what it exercised.

Stdlib only, on purpose: this file is copied into translated projects, which
must not inherit dependencies from the harness.
"""

import argparse
import ast
import contextlib
import importlib.util
import io
import json
import os
import sys
import traceback
import unittest


def emit(obj):
    print(json.dumps(obj, sort_keys=True), flush=True)


def is_test_file(name):
    if not name.endswith(".py"):
        return False
    stem = name[:-3]
    return stem.startswith("test_") or stem.endswith("_test")


def walk_python_files(root):
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(
            d for d in dirnames if not d.startswith(".") and d != "__pycache__"
        )
        for name in sorted(filenames):
            if name.endswith(".py"):
                yield os.path.join(dirpath, name)


def load_module(path, root):
    rel = os.path.relpath(path, root)
    modname = "xlatetests_" + rel[:-3].replace(os.sep, "_").replace("-", "_")
    for entry in (root, os.path.dirname(path)):
        if entry not in sys.path:
            sys.path.insert(0, entry)
    spec = importlib.util.spec_from_file_location(modname, path)
    module = importlib.util.module_from_spec(spec)
    sys.modules[modname] = module
    spec.loader.exec_module(module)
    return module


def last_line(text):
    lines = [l for l in text.splitlines() if l.strip()]
    return lines[-1].strip() if lines else ""


def collect(root, filter_text):
    """Returns (tests, collection_errors).

    tests: list of (test_id, runner) where runner() -> (status, message, trace)
    collection_errors: list of result dicts for unimportable test files.
    """
    tests = []
    errors = []
    for path in walk_python_files(root):
        if not is_test_file(os.path.basename(path)):
            continue
        rel = os.path.relpath(path, root)
        try:
            module = load_module(path, root)
        except Exception:
            if filter_text and filter_text not in rel:
                continue
            errors.append(
                {
                    "type": "result",
                    "test": rel,
                    "status": "error",
                    "message": "collection failed: " + last_line(traceback.format_exc()),
                    "trace": traceback.format_exc(),
                }
            )
            continue
        for name, obj in vars(module).items():
            if isinstance(obj, type):
                if (
                    issubclass(obj, unittest.TestCase)
                    and obj.__module__ == module.__name__
                ):
                    for method in sorted(dir(obj)):
                        if method.startswith("test_"):
                            test_id = f"{rel}::{name}.{method}"
                            tests.append((test_id, make_case_runner(obj, method)))
            elif (
                callable(obj)
                and name.startswith("test_")
                and getattr(obj, "__module__", None) == module.__name__
            ):
                tests.append((f"{rel}::{name}", make_function_runner(obj)))
    if filter_text:
        tests = [(tid, fn) for tid, fn in tests if filter_text in tid]
    return tests, errors


def make_function_runner(fn):
    def run():
        try:
            fn()
            return ("pass", "", "")
        except unittest.SkipTest:
            return ("skipped", "", "")
        except AssertionError as exc:
            message = str(exc) or "assertion failed"
            return ("fail", message, traceback.format_exc())
        except Exception as exc:
            return ("error", f"{type(exc).__name__}: {exc}", traceback.format_exc())

    return run


def make_case_runner(cls, method):
    def run():
        result = unittest.TestResult()
        cls(method).run(result)
        if result.skipped:
            return ("skipped", "", "")
        if result.failures:
            trace = result.failures[0][1]
            return ("fail", last_line(trace), trace)
        if result.errors:
            trace = result.errors[0][1]
            return ("error", last_line(trace), trace)
        return ("pass", "", "")

    return run


def run_all(tests):
    """Runs every test with its stdout silenced; yields result dicts."""
    for test_id, runner in tests:
        sink = io.StringIO()
        with contextlib.redirect_stdout(sink):
            status, message, trace = runner()
        record = {"type": "result", "test": test_id, "status": status}
        if status in ("fail", "error"):
            record["message"] = message
            record["trace"] = trace
        yield record


def executable_lines(path):
    """Statement lines per the AST, minus def/class header lines: a body
    line covers a function, its signature line does not."""
    with open(path, "r", encoding="utf-8") as handle:
        tree = ast.parse(handle.read())
    headers = (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)
    lines = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.stmt) and not isinstance(node, headers):
            lines.add(node.lineno)
    return lines


def render_line_set(lines):
    parts = []
    ordered = sorted(lines)
    i = 0
    while i < len(ordered):
        j = i
        while j + 1 < len(ordered) and ordered[j + 1] == ordered[j] + 1:
            j += 1
        parts.append(
            str(ordered[i]) if i == j else f"{ordered[i]}-{ordered[j]}"
        )
        i = j + 1
    return " ".join(parts)


def coverage_mode(root, filter_text):
    adapter = os.path.abspath(__file__)
    sources = {}
    for path in walk_python_files(root):
        if is_test_file(os.path.basename(path)):
            continue
        if os.path.abspath(path) == adapter:
            continue
        try:
            sources[os.path.abspath(path)] = executable_lines(path)
        except SyntaxError:
            continue  # unparseable files cannot be attributed lines

    covered = {path: set() for path in sources}

    def tracer(frame, event, arg):
        if event == "line":
            filename = os.path.abspath(frame.f_code.co_filename)
            hits = covered.get(filename)
            if hits is not None:
                hits.add(frame.f_lineno)
        return tracer

    # Imports execute module-level lines, so collection itself must run
    # under the tracer.
    sys.settrace(tracer)
    try:
        tests, _ = collect(root, filter_text)
        for _ in run_all(tests):
            pass
    finally:
        sys.settrace(None)

    print("coverage v1")
    for path in sorted(sources, key=lambda p: os.path.relpath(p, root)):
        rel = os.path.relpath(path, root)
        executable = sources[path]
        hit = covered[path] & executable
        print(f"file {rel}")
        if executable:
            print(f"executable {render_line_set(executable)}")
        if hit:
            print(f"covered {render_line_set(hit)}")
    return 0


def results_mode(root, filter_text):
    tests, collection_errors = collect(root, filter_text)
    emit({"type": "plan", "tests": [tid for tid, _ in tests]})
    counts = {"executed": 0, "passed": 0, "failed": 0, "errors": 0, "skipped": 0}
    for record in collection_errors:
        emit(record)
        counts["executed"] += 1
        counts["errors"] += 1
    for record in run_all(tests):
        emit(record)
        status = record["status"]
        if status == "pass":
            counts["executed"] += 1
            counts["passed"] += 1
        elif status == "fail":
            counts["executed"] += 1
            counts["failed"] += 1
        elif status == "error":
            counts["executed"] += 1
            counts["errors"] += 1
        else:
            counts["skipped"] += 1
    emit({"type": "summary", **counts})
    return 1 if counts["failed"] or counts["errors"] else 0


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--root", required=True, help="project root to test")
    parser.add_argument("--filter", default="", help="substring filter on test ids")
    parser.add_argument(
        "--coverage",
        action="store_true",
        help="print normalized line coverage instead of test results",
    )
    args = parser.parse_args()
    root = os.path.abspath(args.root)
    if args.coverage:
        return coverage_mode(root, args.filter)
    return results_mode(root, args.filter)


if __name__ == "__main__":
    sys.exit(main())
