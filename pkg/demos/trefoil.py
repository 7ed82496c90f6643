"""The Blanchfield form of the trefoil: classification, jumps and the signature function."""

from linkform import field
from linkform.forms import CyclicPairing, LinkingForm, classify
from linkform.laurent import LaurentPoly, Mode
from linkform.signatures import averaged_signature, jumps, sample_grid, signature_function

K = field(12)
alexander = LaurentPoly(K, {-1: K.one, 0: -K.one, 1: K.one})
form = LinkingForm(K, Mode.REAL, [CyclicPairing(alexander, LaurentPoly.one(K), Mode.REAL)])

decomposition = classify(form)
print("decomposition:", decomposition)

table = jumps(decomposition)
for root, value in sorted(table.jumps.items()):
    print(f"  jump {value:+d} at {root}")

print("\n  turns  sigma  averaged")
for root in sample_grid(12):
    sigma = signature_function(decomposition, root, table)
    print(f"  {root.num:>2}/{root.den:<3} {sigma:5d}  {averaged_signature(decomposition, root, table)!s:>8}")
