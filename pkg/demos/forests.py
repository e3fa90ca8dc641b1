"""The two maximal evaluation forests of a trivial word in S6 * S6, as text and DOT."""

from graev.dot import forest_to_dot
from graev.forest import build_maximal_forest, enumerate_maximal_forests
from graev.instances import s6_setup, s6_word

setup, zeta = s6_setup(), s6_word()
labels = [setup.letter_label(x) for x in zeta]
print(" ".join(labels))
for f in enumerate_maximal_forests(setup, zeta):
    print(f.describe())
print("greedy builder:", build_maximal_forest(setup, zeta).describe())
print(forest_to_dot(build_maximal_forest(setup, zeta), labels))
