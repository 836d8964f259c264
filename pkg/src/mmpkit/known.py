"""Diagrams and vector sets from the literature, as text fixtures."""

# smallest diagram of triples without a 0-1 state, with a real 5-dim realization
KS_7_5 = "abc,cde,efa,egb,dgf."

KS_7_5_VECTORS = """\
a: 608683911 17315878 -22061625 -111556858 20961326
b: 3 68 -123 52 4
c: 1 3 5 7 11
d: 11 -11 11 -11 4
e: 1788 -8663 -1348 8223 -2420
f: 5791304343 -304905182408 -1387655556967 1686769435032 7600253389432
g: 1 1 1 1 0
"""

# Cabello's 18 rays in 9 quadruples of R^4
CABELLO_18_9 = "abcd,defg,ghij,jklm,mnop,pqra,bikr,celn,fhoq."

CABELLO_18_9_VECTORS = """\
a: 1 0 0 -1
b: 0 1 1 0
c: 1 1 -1 1
d: 1 -1 1 1
e: 1 1 1 -1
f: 0 1 0 1
g: 1 0 -1 0
h: 0 1 0 -1
i: 1 -1 1 -1
j: 1 1 1 1
k: 1 1 -1 -1
l: 1 -1 0 0
m: 0 0 1 -1
n: 0 0 1 1
o: 1 0 0 0
p: 0 1 0 0
q: 0 0 1 0
r: 1 0 0 1
"""

# smallest diagram of quadruples without a 0-1 state
KS_10_5 = "abcd,defg,ghia,bfij,cehj."
