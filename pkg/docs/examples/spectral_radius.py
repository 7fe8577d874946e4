from mten.core import IterationSettings, cw_bracket, largest_eigenvalue, ones_tensor

# all-ones tensor, order 3, dim 2: rho = 4
tensor = ones_tensor(3, 2)

outcome = largest_eigenvalue(tensor, IterationSettings(tol=1e-12))
print(f"{outcome}")
print(f"certificate at (1, 2): {cw_bracket(tensor, (1, 2))}")
