"""
Runs pylint programmatically over the solver package, the CLI and the tests.
"""
import sys
from io import StringIO

from pylint.lint import Run
from pylint.reporters.text import TextReporter

MIN_SCORE = 9.0
DEFAULT_TARGETS = ["src/ramified_zeros", "src/cli", "tests"]

# python scripts/run_pylint.py [pylint args, defaults to the package targets]
opts = sys.argv[1:] or DEFAULT_TARGETS
output = StringIO()
reporter = TextReporter(output)
result: Run = Run(opts, reporter=reporter, exit=False)

score = result.linter.stats.global_note

if score < MIN_SCORE:
    print(output.getvalue())
    print(f"Pylint score {score:.2f} is below {MIN_SCORE}")
    sys.exit(1)

print(f"Pylint score {score:.2f} is good")
