"""
Machine-readable reports from the command line
==============================================

The ``relcomm`` command prints a JSON report with the keys command, inputs,
results, diagnostics and timing. With ``--no-timing`` the output is
byte-identical between runs.
"""

import json
import subprocess
import sys


def relcomm(*args):
    cmd = [sys.executable, "-m", "relcomm", *args, "--format", "json", "--no-timing"]
    done = subprocess.run(cmd, capture_output=True, text=True)
    return done.returncode, json.loads(done.stdout or done.stderr)


code, report = relcomm("commutator", "--algebra", "s3.tbl", "--M", "A3", "--N", "A3", "--variety", "Ab", "--method", "words")
print(code, report["results"])

code, report = relcomm("reflect", "--algebra", "l5.tbl", "--variety", "Gp")
print(code, "reflection order", report["results"]["order"])

code, report = relcomm("gen-loops", "--order", "5")
print(code, report["results"])

code, report = relcomm("sweep-thm42", "--max-order", "5")
print(code, report["results"]["totals"])

# Hopf formula requests are refused with exit code 2.
done = subprocess.run([sys.executable, "-m", "relcomm", "hopf"], capture_output=True, text=True)
print(done.returncode, done.stderr.strip())
