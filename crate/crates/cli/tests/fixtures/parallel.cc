// Two independent pairs inside one procedure.
def X4(1, 2, 3, 4) = 1.this -> 2.xx; 3.this -> 4.xx; end
main = call X4
