"""Per-criterion PASS/FAIL records, printed at the end of the run."""
REPORT = {}


def record(key, ok, text):
    """Store and print one criterion line; returns `ok` for asserting."""
    ok = bool(ok)
    REPORT[str(key)] = (ok, text)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")
    return ok
