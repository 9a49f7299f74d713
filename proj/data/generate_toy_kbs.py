#!/usr/bin/env python3
"""Regenerates the toy embedding snapshots used by the tests.

Each term gets a unit-ish 8-d vector: a primary topic axis, an optional
secondary axis at 0.35, and a small deterministic perturbation derived from
the term's bytes. Terms sharing a topic therefore have high cosine similarity.
"""
import hashlib
import pathlib

TOPICS = ["shape", "motion", "power", "control", "material", "geometry",
          "structure", "generic"]

# term -> (primary topic, secondary topic or None)
TECHNET = {
    # trigrams
    "internal driving unit": ("motion", "structure"),
    "spherical coordinate system": ("geometry", "shape"),
    "solid transparent material": ("material", "shape"),
    "center of mass": ("motion", "geometry"),
    "wireless remote control": ("control", "power"),
    "power supply unit": ("power", "structure"),
    # bigrams
    "spherical robot": ("shape", "motion"),
    "mobile robot": ("motion", "control"),
    "ball-shaped": ("shape", None),
    "outer shell": ("shape", "structure"),
    "spherical shell": ("shape", "material"),
    "flat surface": ("geometry", "motion"),
    "electric power": ("power", None),
    "rechargeable battery": ("power", "structure"),
    "electric motor": ("power", "motion"),
    "autonomous navigation": ("control", "motion"),
    "data collection": ("control", None),
    "robot body": ("structure", "shape"),
    "drive mechanism": ("motion", "structure"),
    "remote control": ("control", None),
    "driving unit": ("motion", None),
    "transparent material": ("material", None),
    "coordinate system": ("geometry", None),
    "torque sensor": ("control", "motion"),
    "camera module": ("control", "structure"),
    # unigrams
    "spherical": ("shape", "geometry"),
    "robot": ("motion", "control"),
    "mobile": ("motion", None),
    "shell": ("shape", "structure"),
    "solid": ("material", None),
    "transparent": ("material", None),
    "material": ("material", "generic"),
    "internal": ("structure", "generic"),
    "visible": ("generic", "material"),
    "center": ("geometry", "generic"),
    "mass": ("motion", "generic"),
    "move": ("motion", "generic"),
    "surface": ("geometry", None),
    "motion": ("motion", "generic"),
    "coordinate": ("geometry", None),
    "system": ("generic", "structure"),
    "electric": ("power", None),
    "power": ("power", "generic"),
    "battery": ("power", None),
    "motor": ("power", "motion"),
    "sensors": ("control", None),
    "remote": ("control", "generic"),
    "control": ("control", "generic"),
    "autonomous": ("control", None),
    "navigation": ("control", "motion"),
    "data": ("control", "generic"),
    "body": ("structure", "generic"),
    "mechanism": ("structure", "motion"),
    "dust": ("material", "generic"),
    "water": ("material", None),
    "gyroscope": ("motion", "control"),
    "pendulum": ("motion", None),
    "counterweight": ("motion", "structure"),
}

UNIGRAM = {
    "spherical": ("shape", "geometry"), "robot": ("motion", "control"),
    "mobile": ("motion", None), "ball": ("shape", None),
    "shaped": ("shape", "generic"), "outer": ("structure", "shape"),
    "shell": ("shape", "structure"), "solid": ("material", None),
    "transparent": ("material", None), "material": ("material", "generic"),
    "internal": ("structure", "generic"), "driving": ("motion", None),
    "unit": ("structure", "generic"), "visible": ("generic", "material"),
    "center": ("geometry", "generic"), "mass": ("motion", "generic"),
    "rolls": ("motion", "shape"), "move": ("motion", "generic"),
    "flat": ("geometry", None), "surface": ("geometry", None),
    "motion": ("motion", "generic"), "coordinate": ("geometry", None),
    "system": ("generic", "structure"), "electric": ("power", None),
    "power": ("power", "generic"), "rechargeable": ("power", None),
    "battery": ("power", None), "motor": ("power", "motion"),
    "onboard": ("structure", "control"), "sensors": ("control", None),
    "wireless": ("control", "power"), "remote": ("control", "generic"),
    "control": ("control", "generic"), "autonomous": ("control", None),
    "navigation": ("control", "motion"), "data": ("control", "generic"),
    "collection": ("generic", "control"), "body": ("structure", "generic"),
    "drive": ("motion", "power"), "mechanism": ("structure", "motion"),
    "dust": ("material", "generic"), "water": ("material", None),
}


def vector(term, primary, secondary):
    digest = hashlib.sha256(term.encode("utf-8")).digest()
    vec = [(digest[k] / 255.0 - 0.5) * 0.2 for k in range(len(TOPICS))]
    vec[TOPICS.index(primary)] += 1.0
    if secondary is not None:
        vec[TOPICS.index(secondary)] += 0.35
    return vec


def write(path, table):
    lines = [f"{len(table)} {len(TOPICS)}"]
    for term, (primary, secondary) in table.items():
        comps = " ".join(f"{c:.6f}" for c in vector(term, primary, secondary))
        lines.append(f"{term}\t{comps}")
    pathlib.Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    here = pathlib.Path(__file__).parent
    write(here / "toy_technet.emb", TECHNET)
    write(here / "toy_unigram.emb", UNIGRAM)
