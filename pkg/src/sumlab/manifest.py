"""Run manifests: every CLI invocation records command, config, seed, and digests.

Manifests are deterministic (no timestamps) so that identical runs produce
byte-identical artifacts, manifest included.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Sequence


def file_digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fp:
        for chunk in iter(lambda: fp.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def manifest_path_for(output: Path) -> Path:
    if output.is_dir():
        return output / "run_manifest.json"
    return output.with_name(output.name + ".manifest.json")


def write_run_manifest(
    command: Sequence[str],
    config: dict,
    seed: int | None,
    inputs: Sequence[Path],
    outputs: Sequence[Path],
) -> Path | None:
    """Write a manifest beside the first output; skipped for stream-only runs."""
    real_outputs = [Path(p) for p in outputs if str(p) != "-"]
    if not real_outputs:
        return None
    output_files: list[Path] = []
    for p in real_outputs:
        if p.is_dir():
            output_files.extend(
                f for f in sorted(p.iterdir()) if f.is_file() and f.name != "run_manifest.json"
            )
        elif p.is_file():
            output_files.append(p)
    manifest = {
        "command": list(command),
        "config": config,
        "config_hash": config_hash(config),
        "seed": seed,
        "inputs": {
            str(p): file_digest(Path(p)) for p in inputs if str(p) != "-"
        },
        "outputs": {str(p): file_digest(p) for p in output_files},
    }
    path = manifest_path_for(real_outputs[0])
    path.write_text(json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path
