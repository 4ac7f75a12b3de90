"""Quick check that the extension imports and agrees with known values."""

import math

import pyfidzero as fz


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(b))


# same Bloch vector -> unit overlap, antiparallel -> zero
assert fz.mode_fidelity((0.3, -0.4, 1.2, 0.0), (0.3, -0.4, 1.2, 5.0)) == 1.0
assert fz.mode_fidelity((1.0, 0.0, 0.0, 0.0), (-2.0, 0.0, 0.0, 0.0)) == 0.0

names = [m["name"] for m in fz.models()]
assert names == ["ssh", "creutz", "haldane", "ssh-interacting"], names

ssh = fz.Model("ssh")
f, alpha, zero = ssh.evaluate(0.5, 1.5, 9, phi=math.pi)
assert zero and f == 0.0 and math.isinf(alpha)
f, alpha, zero = ssh.evaluate(0.5, 1.5, 9)
assert not zero and 0.0 < f < 1.0 and close(alpha, -math.log(f) / 9)
assert ssh.critical_momenta(0.5, 0.8) == []

creutz = fz.Model("creutz", jv_over_2j=0.6)
kc = creutz.critical_momenta(0.3, -0.3)
assert len(kc) == 2
phic = sorted(creutz.critical_fluxes(0.3, -0.3, 10))
assert phic == sorted(fz.critical_flux_1d(k, 10) for k in kc)
assert [round(p / math.pi, 5) for p in phic] == [0.95167, 1.04833]
scan = creutz.scan_flux(0.3, -0.3, 10, [2 * math.pi * i / 50 for i in range(50)])
assert sum(scan["injected"]) == 2 and sum(scan["exact_zero"]) == 2
assert scan["phi"] == sorted(scan["phi"])

fit = ssh.finite_size_fit(0.5, 1.5, [101, 301, 501, 1001])
assert fit["r2"] > 0.99, fit
try:
    ssh.finite_size_fit(0.5, 1.5, [101, 301, 501], phi=math.pi)
except fz.NumericalError:
    pass
else:
    raise AssertionError("divergent fit accepted")

haldane = fz.Model("haldane", m=4.5)
f, _, _ = haldane.evaluate(0.0, 0.2, 4, ly=4, phi=0.3)
assert 0.0 < f <= 1.0

# free fermions: the interacting chain at U = 0 matches the band result
band, _, _ = ssh.evaluate(0.4, 0.9, 4, phi=0.7)
assert close(fz.mb_fidelity(4, 0.0, 0.7, 0.4, 0.9), band, 1e-10)

try:
    ssh.evaluate(0.5, 1.0, 9, phi=math.pi)
except fz.NumericalError as e:
    assert "gapless" in str(e)
else:
    raise AssertionError("gapless mode not reported")

try:
    fz.Model("kitaev")
except ValueError:
    pass
else:
    raise AssertionError("unknown model accepted")

print("pyfidzero smoke test ok")
