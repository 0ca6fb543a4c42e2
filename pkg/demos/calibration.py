# # Calibrating the scale factors
#
# `evaluate_pair` reports the extrema of the decimal log error
# `Er = log10|w_app - w_exact|`; `optimize_s2` minimizes its maximum over `s2`.

# +
from nlgreens import sources as S
from nlgreens.calibrate import (Table1Config, evaluate_pair, optimize_s2, reproduce_table1,
                                sweep_s1_s2)
from nlgreens.grids import TimeGrid
from nlgreens.kernels import KernelSpec, Nonlinearity

EXP = Nonlinearity.EXPONENTIAL
grid = TimeGrid.from_horizon(1.0, 1e-3)
# -

rep = evaluate_pair(KernelSpec.homogeneous(EXP, 0.01), S.exponential(), -1.0142, grid)
print(f"exp source at s2=-1.0142: Er in [{rep.min_er:.2f}, {rep.max_er:.2f}]")

s2, rep = optimize_s2(KernelSpec.homogeneous(EXP, 0.01), S.exponential(), grid, (-3.0, 1.0))
print(f"optimized s2={s2:.5f}: Er in [{rep.min_er:.2f}, {rep.max_er:.2f}]")

# A coarse scan over both factors for a kick at the origin.

res = sweep_s1_s2(EXP, S.delta(), grid, (0.5, 1.5), (1.0, 3.0), (5, 5))
print(res.log_objective.round(2))
print("best (s1, s2, objective):", res.best)

# The whole table: the published factors where given, then an optimized row.

for r in reproduce_table1(Table1Config()):
    flag = "opt" if r.optimized else "pub"
    print(f"{r.source_tag:9s} {flag} s1={r.s1:<9.5g} s2={r.s2:<10.5g} "
          f"Er [{r.min_er:7.2f}, {r.max_er:6.2f}] {r.note}")
