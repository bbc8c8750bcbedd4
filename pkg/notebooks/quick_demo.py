import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from service.polynomial_service import polynomial_service
from service.qcheck_service import qcheck_service
from service.selberg_service import selberg_service
from service.verifier_service import verifier_service

# In-memory coefficients only; nothing is written to the cache
polynomial_service.attach(use_cache=False)

# Macdonald P for a few small partitions in three variables
for lam in [(2,), (1, 1), (2, 1)]:
    print(f"P{list(lam)} =", polynomial_service.render(lam, 3))

# One exact identity and one numeric q-integral
report = verifier_service.run("qbt", {"n": 2, "D": 3})
print("q-binomial theorem, n=2, D=3:", report["status"], f"({report['details']['checked']} coefficients)")

report = qcheck_service.run("ahk", {"n": 2, "k": 1, "alpha": "3/2", "beta": "2"})
print("q-Selberg n=2 k=1:", report["status"], "rel diff", report["details"]["rel_diff"])

# Chain weights and a short Monte-Carlo estimate of the (1, 1) integral
report = selberg_service.run("chain_cardinality", {"k1": 1, "k2": 2, "beta1": 0.6, "gamma": 0.2})
for domain, weight in report["details"]["weights"].items():
    print(f"  {domain:<12} {weight}")

report = selberg_service.run("chain_integral", {"k1": 1, "k2": 1, "beta1": 0.7, "gamma": 0.2}, samples=200000, seed=7)
d = report["details"]
print(f"chain integral {d['lhs']:.6f} +/- {d['lhs_error']:.2g} vs closed form {d['rhs']:.6f}: {report['status']}")
