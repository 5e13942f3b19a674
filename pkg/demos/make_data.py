"""Writes the JSON inputs used by the command-line examples in the README."""
import json
from pathlib import Path

from malcev import corpus
from malcev.braid_kz import generator_path, kz_system
from malcev.interchange import dump_dga, dump_forms, dump_path, dump_presentation

out = Path(__file__).parent / "data"
out.mkdir(exist_ok=True)
S = kz_system(3, 3)
docs = {
    "circle.json": dump_dga(corpus.circle()),
    "wedge_swap.json": dump_dga(*corpus.wedge_swap()),
    "p3.json": dump_presentation(S.lie.presentation),
    "kz3_forms.json": dump_forms(S.omega),
    "half_twist_12.json": dump_path(generator_path(1, 3)),
}
for name, doc in docs.items():
    (out / name).write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {out / name}")
