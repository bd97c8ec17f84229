use std::collections::BTreeSet;

/// Position of `m` in the Sharkovskii order; smaller keys come first.
fn key(m: u64) -> (u8, i64, u64) {
    assert!(m > 0, "periods are positive");
    let a = m.trailing_zeros() as i64;
    let b = m >> a;
    if b > 1 {
        (0, a, b)
    } else {
        (1, -a, 0)
    }
}

/// `m` precedes or equals `n` in `3, 5, 7, ..., 2·3, 2·5, ..., 4·3, ..., 8, 4, 2, 1`.
pub fn sharkovskii_forces(m: u64, n: u64) -> bool {
    key(m) <= key(n)
}

/// Every `m <= n_max` forced by a member of `set` is itself in `set`.
pub fn is_sharkovskii_tail(set: &BTreeSet<usize>, n_max: usize) -> bool {
    set.iter().all(|&n| {
        (1..=n_max).all(|m| !sharkovskii_forces(n as u64, m as u64) || set.contains(&m))
    })
}

/// `1..=n_max` sorted by the Sharkovskii order, strongest first.
pub fn sharkovskii_sorted(n_max: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=n_max).collect();
    v.sort_by_key(|&m| key(m));
    v
}
