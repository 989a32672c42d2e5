#!/usr/bin/env python3
# Copyright 2026 The ESG Agent Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Minimal line-protocol code runner used by the test suite."""

import json
import os
import subprocess
import sys
import time


def snapshot(root):
    seen = {}
    for base, _, files in os.walk(root):
        for name in files:
            path = os.path.join(base, name)
            try:
                seen[path] = os.stat(path).st_mtime_ns
            except OSError:
                pass
    return seen


def execute(req):
    workdir = req["workdir"]
    timeout = req.get("timeout_s", 30)
    before = snapshot(workdir)
    start = time.monotonic()
    timed_out = False
    try:
        proc = subprocess.run(
            [sys.executable, "-c", req["code"]],
            cwd=workdir,
            capture_output=True,
            timeout=timeout,
        )
        code, out, err = proc.returncode, proc.stdout, proc.stderr
    except subprocess.TimeoutExpired as exc:
        timed_out = True
        code, out, err = 124, exc.stdout or b"", exc.stderr or b""
    wall_ms = int((time.monotonic() - start) * 1000)
    after = snapshot(workdir)
    artifacts = sorted(p for p, m in after.items() if before.get(p) != m)
    return {
        "exit_code": code,
        "stdout": out.decode("utf-8", "replace"),
        "stderr": err.decode("utf-8", "replace"),
        "wall_ms": wall_ms,
        "artifacts": artifacts,
        "timed_out": timed_out,
    }


def main():
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        req = json.loads(line)
        if req.get("code") == "__crash__":
            sys.exit(3)
        sys.stdout.write(json.dumps(execute(req)) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
