// 1 forwards its value through 2 to 3, then 3 reports back.
main = 1.this -> 2.xx; 2.succ -> 3.xx; 3.this -> 1.yy; end
