"""Twisted Blanchfield forms of T(2, 2k+1) from the chain complex, compared with the closed form."""

import sys

from linkform.forms import LinkingForm, classify
from linkform.knots import Metabelian, blanchfield, closed_form_pairing, twisted_cohomology
from linkform.laurent import Mode

k = int(sys.argv[1]) if len(sys.argv) > 1 else 3

for theta in range(0, k + 1):
    spec = Metabelian(k, theta)
    pres = twisted_cohomology(spec)
    generic = classify(blanchfield(spec))
    print(f"k={k} theta={theta}: {len(pres.orders)} cyclic summand(s), field Q(zeta_{pres.complex.rep.ctx.N})")
    print("  from chains:", generic)
    if theta >= 1:
        closed = closed_form_pairing(k, theta, pres.complex.rep.ctx)
        agrees = classify(LinkingForm(closed.ctx, Mode.COMPLEX, [closed])) == generic
        print("  closed form agrees:", agrees)
