"""Graev norm of a word over the four-point space, with its optimal match."""

from pathlib import Path

from graev import io
from graev.free import apply_match, graev_norm_free_witness, parse_word, word_names

DATA = Path(__file__).parent / "data"

space = io.read_space(io.load_json(DATA / "four_point_space.json"))
for tokens in (["x", "y^-1", "z", "x^-1"], ["x", "y", "x^-1", "y^-1"], ["y", "z", "z^-1"]):
    w = parse_word(tokens, space)
    value, reduced, theta = graev_norm_free_witness(w, space)
    print(" ".join(tokens), "->", value)
    if reduced:
        print("   reduced:", " ".join(word_names(reduced, space)))
        print("   match:  ", theta)
        print("   w^theta:", " ".join(word_names(apply_match(reduced, theta, space), space)))
