from mten import posdef
from mten.core import ones_tensor, shift_combine

# c I - E, order 4, dim 2: positive definite for c > 8
for c in (9, 7):
    tensor = shift_combine(-1, ones_tensor(4, 2), -c)
    verdict = posdef.test_positive_definite(tensor)
    print(f"c={c}: {verdict.status}, tau {verdict.tau:.3g}, witness {verdict.witness}")
