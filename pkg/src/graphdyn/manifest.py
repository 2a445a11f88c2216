"""Run manifests: reproducibility metadata plus timing/iteration reports."""

from __future__ import annotations

import hashlib
import json
import platform
import sys
from pathlib import Path
from typing import Dict, Optional

from . import __version__


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(
    *,
    command: str,
    args: Dict[str, object],
    seed: Optional[int] = None,
    input_files: Optional[Dict[str, str]] = None,
    ctx=None,
    extra: Optional[Dict[str, object]] = None,
) -> Dict[str, object]:
    manifest: Dict[str, object] = {
        "command": command,
        "graphdyn_version": __version__,
        "python_version": sys.version.split()[0],
        "platform": platform.platform(),
        "seed": seed,
        "args": {k: v for k, v in args.items() if not k.startswith("_")},
        "input_digests": {
            name: file_digest(path) for name, path in (input_files or {}).items() if path
        },
    }
    if ctx is not None:
        manifest["run"] = {
            "worker_count": ctx.worker_count,
            "phase_seconds": dict(ctx.phase_totals),
            "fixedpoint_iterations": list(ctx.fixedpoint_iterations),
            "batch_count": len(ctx.batch_stats),
            "batch_stats": ctx.batch_stats[:1000],
            "scalars": {
                k: v for k, v in ctx.scalars.items() if isinstance(v, (int, float, bool))
            },
            "return_value": ctx.return_value
            if isinstance(ctx.return_value, (int, float, bool, type(None)))
            else str(ctx.return_value),
        }
    if extra:
        manifest.update(extra)
    return manifest


def write_manifest(manifest: Dict[str, object], outdir: str, name: str = "manifest.json") -> str:
    path = Path(outdir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    return str(path)
