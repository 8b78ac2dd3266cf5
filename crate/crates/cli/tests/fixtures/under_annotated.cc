def X0(1) = 1.this -> 2.xx; end
main = call X0
