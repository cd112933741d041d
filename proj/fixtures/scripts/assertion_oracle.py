#!/usr/bin/env python3
"""Independent assertion counter for Python test files.

Walks the real AST (the ast module, not our scanner) and categorizes every
assertion it finds, printing one JSON record per assertion. Used to freeze
expected values for the C++ extractor's tests; run it by hand when a fixture
changes:

    python3 fixtures/scripts/assertion_oracle.py fixtures/metrics/test_mixed.py
"""
import ast
import json
import sys


def literal_of(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (str, int, float, bool)):
        # bool is an int subclass; report it first.
        if isinstance(node.value, bool):
            return {"type": "bool", "value": node.value}
        if isinstance(node.value, str):
            return {"type": "string", "value": node.value}
        if isinstance(node.value, int):
            return {"type": "int", "value": node.value}
        return {"type": "float", "value": node.value}
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        inner = literal_of(node.operand)
        if inner and inner["type"] in ("int", "float"):
            inner["value"] = -inner["value"]
            return inner
    return None


def classify_assert(test):
    if isinstance(test, ast.UnaryOp) and isinstance(test.op, ast.Not):
        return "assert_false", None
    if isinstance(test, ast.Compare) and len(test.ops) == 1:
        if isinstance(test.ops[0], ast.Eq):
            lit = literal_of(test.comparators[0]) or literal_of(test.left)
            return "assert_equal", lit
        return "other", None
    if isinstance(test, ast.Compare):
        return "other", None
    return "assert_true", None


def classify_call(call):
    if not isinstance(call.func, ast.Attribute):
        return None
    name = call.func.attr
    if name == "assertEqual":
        lit = None
        for arg in call.args:
            lit = literal_of(arg)
            if lit:
                break
        return "assert_equal", lit
    if name == "assertTrue":
        return "assert_true", None
    if name == "assertFalse":
        return "assert_false", None
    if name.startswith("assert") or name == "fail" or name == "raises":
        return "other", None
    return None


def enclosing_test(stack):
    for i in range(len(stack) - 1, -1, -1):
        if stack[i].startswith("test"):
            return ".".join(stack[: i + 1])
    return ""


def main():
    tree = ast.parse(open(sys.argv[1]).read())
    records = []

    def walk(node, stack):
        for child in ast.iter_child_nodes(node):
            child_stack = stack
            if isinstance(child, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
                child_stack = stack + [child.name]
            if isinstance(child, ast.Assert):
                kind, lit = classify_assert(child.test)
                records.append(
                    {"test": enclosing_test(child_stack), "kind": kind,
                     "literal": lit, "line": child.lineno})
            if isinstance(child, ast.Call):
                res = classify_call(child)
                if res:
                    records.append(
                        {"test": enclosing_test(child_stack), "kind": res[0],
                         "literal": res[1], "line": child.lineno})
            walk(child, child_stack)

    walk(tree, [])
    counts = {}
    for r in records:
        counts[r["kind"]] = counts.get(r["kind"], 0) + 1
    print(json.dumps({"records": records, "counts": counts}, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
