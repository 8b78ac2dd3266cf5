// Two procedures calling each other forever.
def X0(1, 2) = 1.succ -> 2.xx; call X1
def X1(1, 2) = 2.succ -> 1.xx; call X0
main = call X0
