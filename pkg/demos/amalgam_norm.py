"""Norms on S3 *_{A3} S3, computed two ways, for every element of reduced length <= 2."""

from pathlib import Path

from graev import io
from graev.product import product_norm, product_norm_dp

setup = io.read_setup(io.load_json(Path(__file__).parent / "data" / "s3_amalgam.json"))
for f in setup.elements_up_to(2):
    fast, slow = product_norm_dp(setup, f), product_norm(setup, f)
    assert fast.value == slow.value
    zeta = " ".join(setup.letter_label(z) for z in fast.pair.zeta) or "-"
    print(f"{setup.label(f):32s} {str(fast.value):5s} zeta = {zeta}")
