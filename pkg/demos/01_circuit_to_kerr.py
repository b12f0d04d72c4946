"""From lumped elements to mode frequencies and Kerr nonlinearities.

Designs the two junction resonators used throughout: a weakly nonlinear
KPO (large shunt capacitance) and a strongly nonlinear transmon-like mode,
then retunes a SQUID in series with a fixed junction so the plaquette
carries the (5.1, 20, 20, 5.1) MHz Kerr pattern at a common 10 GHz.
"""

import numpy as np

from kpokit.constants import GHZ, MHZ, PHI0_REDUCED
from kpokit.elements import (
    SeriesStack,
    SingleJunction,
    Squid,
    kpo_mode_params,
    squid_inductance_for_frequency,
)

L_GEOM = 100e-12

print("=== single-junction resonators at 10 GHz ===")
for label, c in (("KPO-like, C = 500 fF", 500e-15), ("transmon-like, C = 100 fF", 100e-15)):
    l_j = squid_inductance_for_frequency(10 * GHZ, c, L_GEOM)
    mode = kpo_mode_params(c, L_GEOM, SingleJunction(i0=PHI0_REDUCED / l_j))
    print(f"{label}:")
    print(f"  L_J = {l_j / 1e-12:7.2f} pH   I0 = {PHI0_REDUCED / l_j / 1e-9:7.1f} nA")
    print(f"  f   = {mode.omega / GHZ:7.4f} GHz  K/2pi = {mode.kerr / MHZ:7.3f} MHz")

print()
print("=== plaquette Kerr pattern (5.1, 20, 20, 5.1) MHz ===")
# inner KPOs: plain SQUID tuned to 10 GHz
l_sq = squid_inductance_for_frequency(10 * GHZ, 500e-15, L_GEOM)
inner = kpo_mode_params(500e-15, L_GEOM, Squid(l_sq))
# outer KPOs: a 1500 nA junction in series dilutes the nonlinearity; the
# SQUID is retuned so the total inductance (and frequency) is unchanged
l_jsr = PHI0_REDUCED / 1500e-9
l_retuned = squid_inductance_for_frequency(10 * GHZ, 500e-15, L_GEOM, l_jsr)
outer = kpo_mode_params(500e-15, L_GEOM, SeriesStack((Squid(l_retuned), SingleJunction(1500e-9))))

print(f"inner SQUID:    L_J = {l_sq / 1e-12:6.1f} pH -> K/2pi = {inner.kerr / MHZ:6.3f} MHz")
print(f"retuned SQUID:  L_J = {l_retuned / 1e-12:6.1f} pH -> K/2pi = {outer.kerr / MHZ:6.3f} MHz")
print(f"frequencies: {inner.omega / GHZ:.4f} / {outer.omega / GHZ:.4f} GHz (matched)")
