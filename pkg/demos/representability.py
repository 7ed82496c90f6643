"""A Hermitian matrix presenting a form with two opposite jumps at i, checked against its own signatures."""

from linkform import field
from linkform.forms import classify, from_matrix
from linkform.laurent import LaurentPoly
from linkform.plinalg import LaurentMatrix, smith_normal_form
from linkform.signatures import crosscheck_matrix, is_representable_complex, jumps, sample_grid

K = field(4)
xi = K.i
a, b, c, d = K(2), K(1), K(1), -2 * K.i


def entry(inv_coeff, const):
    return LaurentPoly(K, {-1: inv_coeff, 0: const})


A = [
    [entry(a, -(a * xi).conj()), entry(d, c)],
    [entry(-(c * xi).conj(), -(d * xi).conj()), entry(b, -(b * xi).conj())],
]
factor = LaurentPoly.t(K) - LaurentPoly.constant(K, xi)
B = LaurentMatrix(K, [[factor * e for e in row] for row in A])

print("Smith form diagonal:", [str(p) for p in smith_normal_form(B).diagonal])
decomposition = classify(from_matrix(B))
print("decomposition:", decomposition)
print("total jump:", jumps(decomposition).total())
print("representable:", is_representable_complex(decomposition))
print("48-point crosscheck ok:", crosscheck_matrix(decomposition, B, sample_grid(48)).ok)
