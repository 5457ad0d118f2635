# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Lower bound on the free energy
#
# Unit constants throughout: the error factor shows the exponents, not certified numbers.

from dilute_bose import bound

rep = bound.lower_bound(1e-3, 10.0, 1.0)
print(rep.branch, rep.lower_bound, rep.error_factor)
print({k: round(v, 6) for k, v in rep.z_budget.items()})

# Along x = a rho^2 beta^(5/2) at fixed beta = 10, rho = 1 the error factor falls slowly;
# the headline exponent 2/403 keeps it of order one even at x = 1e-8.

beta, rho = 10.0, 1.0
for x in (1e-2, 1e-4, 1e-6, 1e-8):
    a = x / (rho**2 * beta**2.5)
    r = bound.lower_bound(a, beta, rho)
    p = bound.choose_parameters(a, beta, rho)
    ratios = bound.error_budget(p, a, beta, rho).ratios(a, rho)
    print(f"x={x:.0e}  branch={r.branch}  error_factor={r.error_factor:.4f}  "
          + "  ".join(f"{k}={v:.2e}" for k, v in ratios.items()))

# The exponent of a rho^(1/3) in the relative error.

print(bound.alpha_exact(), float(bound.alpha_exact()))
