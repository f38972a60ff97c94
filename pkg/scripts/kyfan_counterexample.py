"""The Ky Fan 2 pair fails the block-diagonal max property; print the exact witness."""

import numpy as np

from snideal.matrix import unit
from snideal.mcn import MatrixTuple, direct_sum_tuple, mcn_norm, pairing
from snideal.seqnorm import evaluate, kyfan, tensor_seq

K2 = kyfan(2)
print("K2((1,1) (x) (1,1)) =", evaluate(K2, tensor_seq([1, 1], [1, 1])))
print("K2((1,1))^2         =", evaluate(K2, [1, 1]) ** 2)

T = MatrixTuple([unit(1, 1, 2), unit(1, 2, 2)])
D = direct_sum_tuple(T, T)
print("||T||_{K2,K2}        =", mcn_norm(T, K2, K2).value)
print("||T (+) T||_{K2,K2} >=", mcn_norm(D, K2, K2).value)
a, b = np.diag([1.0, 0, 1.0, 0]), np.eye(4) / 2
print("explicit pairing tr(a rho(b)) at a = e11 + e33, b = I/2:", pairing(D, a, b))
