#!/usr/bin/env python3
"""Computes the expected structure record for a Python file using the ast
module. The JSON it prints is frozen into fixtures/golden/ and compared
against the C++ scanner's output by the test suite.

Usage: py_structure_oracle.py <file.py> <record-filepath> > golden.json
"""

import ast
import json
import sys


def entry(name, kind, node):
    return {
        "name": name,
        "kind": kind,
        "start_line": node.lineno,
        "end_line": node.end_lineno,
    }


def import_entries(node):
    if isinstance(node, ast.Import):
        for alias in node.names:
            yield entry(alias.name, "import", node)
    elif isinstance(node, ast.ImportFrom):
        module = node.module or ""
        for alias in node.names:
            yield entry(f"{module}.{alias.name}", "import", node)


def assign_names(node):
    targets = node.targets if isinstance(node, ast.Assign) else [node.target]
    for target in targets:
        if isinstance(target, ast.Name):
            yield target.id
        elif isinstance(target, ast.Tuple):
            for elt in target.elts:
                if isinstance(elt, ast.Name):
                    yield elt.id


def walk(body, path, parent_is_class, out):
    for node in body:
        if isinstance(node, (ast.Import, ast.ImportFrom)):
            if not path:
                out["imports"].extend(import_entries(node))
        elif isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            qualified = ".".join(path + [node.name])
            kind = "method" if parent_is_class else "function"
            out["functions"].append(entry(qualified, kind, node))
            walk(node.body, path + [node.name], False, out)
        elif isinstance(node, ast.ClassDef):
            qualified = ".".join(path + [node.name])
            out["classes"].append(entry(qualified, "class", node))
            walk(node.body, path + [node.name], True, out)
        elif isinstance(node, (ast.Assign, ast.AnnAssign)) and not path:
            for name in assign_names(node):
                out["globals"].append(entry(name, "global", node))


def main():
    source_path, record_path = sys.argv[1], sys.argv[2]
    with open(source_path, encoding="utf-8") as fh:
        tree = ast.parse(fh.read())
    skeleton = {"imports": [], "classes": [], "functions": [], "globals": [], "structs": []}
    walk(tree.body, [], False, skeleton)
    record = {"filepath": record_path, "language": "python", "skeleton": skeleton}
    json.dump(record, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
