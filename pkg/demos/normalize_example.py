"""Reduce the worked (4,2,1)/(2,1) labeled diagram and show each move."""

from parorbit.exact import QQ
from parorbit.young import LabeledYoungDiagram, apply_move, check_reduced, reduce

d = LabeledYoungDiagram.from_gamma((4, 2, 1), (2, 1), QQ, {(1, 1): (-3, 6), (1, 2): (2, 0), (2, 1): (5, -7),
                                                          (2, 2): (-4, 0), (3, 1): (1, 1)})
print(d.pretty(), "\n")
_, moves = reduce(d)
cur = d
for bc in moves:
    cur = apply_move(cur, bc)
    print(bc.label())
    print(cur.pretty(), "\n")
print("reduced:", check_reduced(cur))
