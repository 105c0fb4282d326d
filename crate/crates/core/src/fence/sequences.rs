//! Integer sequences behind the fence formulas, each given by a closed
//! valuation formula and by the constructive definition it must agree with.

/// Binary digit sum.
pub fn s2(k: u64) -> u64 {
    u64::from(k.count_ones())
}

/// 2-adic valuation of `k!` (Legendre).
pub fn nu2_factorial(k: u64) -> u64 {
    k - s2(k)
}

/// `a_n = nu_2(4n)`, `n >= 1`.
pub fn a_seq(n: u64) -> u64 {
    assert!(n >= 1, "a_n is defined for n >= 1");
    2 + u64::from(n.trailing_zeros())
}

/// `a_1 .. a_len` by doubling: `a_1 = 2`; after `a_1..a_k` come
/// `a_1..a_{k-1}` and `a_k + 1`.
pub fn a_seq_constructive(len: usize) -> Vec<u64> {
    let mut a = vec![2u64];
    while a.len() < len {
        let k = a.len();
        let last = a[k - 1];
        a.extend_from_within(..k - 1);
        a.push(last + 1);
    }
    a.truncate(len);
    a
}

/// `ã_n = nu_2(2n)`, `n >= 1`.
pub fn atilde_seq(n: u64) -> u64 {
    assert!(n >= 1, "ã_n is defined for n >= 1");
    1 + u64::from(n.trailing_zeros())
}

/// `ã_1 .. ã_len` as the interleaving `1, a_1, 1, a_2, ...`.
pub fn atilde_interleaved(len: usize) -> Vec<u64> {
    let a = a_seq_constructive(len / 2 + 1);
    (1..=len).map(|n| if n % 2 == 1 { 1 } else { a[n / 2 - 1] }).collect()
}

/// `b̃_k = sum_{l<=k} ã_l = k + nu_2(k!)`.
pub fn btilde(k: u64) -> u64 {
    k + nu2_factorial(k)
}

/// `sum_{m>=0} floor(k / 2^m)`.
pub fn btilde_floor_sum(k: u64) -> u64 {
    (0..64).map(|m| k >> m).take_while(|&t| t > 0).sum()
}

/// `b_k = sum_{l<=k} a_l = 3k - s_2(k)`.
pub fn b_seq(k: u64) -> u64 {
    3 * k - s2(k)
}

/// Prefix sums `[x_0 = 0, x_1, ..]` of a sequence indexed from 1.
pub fn partial_sums(seq: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(seq.len() + 1);
    out.push(0);
    let mut acc = 0;
    for v in seq {
        acc += v;
        out.push(acc);
    }
    out
}

/// Height of the right tower of the `k`-th wide even shape, `k >= 1`.
pub fn r_tower(k: u64) -> u64 {
    assert!(k >= 1, "towers are numbered from 1");
    2 * a_seq(3 * k - 1) + 3
}

/// Left tower: 5 at odd positions, the right-tower sequence at even ones.
pub fn l_tower(k: u64) -> u64 {
    assert!(k >= 1, "towers are numbered from 1");
    if k % 2 == 1 {
        5
    } else {
        r_tower(k / 2)
    }
}

/// Middle tower: `0, ã_1, 0, ã_2, ...`.
pub fn m_tower(k: u64) -> u64 {
    assert!(k >= 1, "towers are numbered from 1");
    if k % 2 == 1 {
        0
    } else {
        atilde_seq(k / 2)
    }
}
