; counter modulo 4
(ts (state (x Int))
    (init (= x 0))
    (trans (= x' (ite (< x 3) (+ x 1) 0))))
