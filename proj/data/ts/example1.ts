; guarded reset: from the guard region the counter jumps to -1
(ts (state (x Int))
    (init (= x 0))
    (trans (and (=> (= x 3) (= x' -1))
                (=> (not (= x 3)) (= x' (+ x 1))))))
