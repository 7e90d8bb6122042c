; lockstep pair with a nondeterministic enable input
(ts (state (x Int) (y Int)) (input (en Bool))
    (init (and (= x 0) (= y 0)))
    (trans (and (= x' (ite (and en' (< x 6)) (+ x 1) x))
                (= y' (ite (and en' (< y 6)) (+ y 1) y)))))
