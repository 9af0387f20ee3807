//! Lexicographic indexing of permutations.

/// Largest tuple length handled by ordering distributions.
pub const MAX_TUPLE: usize = 8;

pub fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Lexicographic rank of a permutation of `0..k`.
pub fn perm_index(p: &[usize]) -> usize {
    let k = p.len();
    let mut idx = 0;
    for i in 0..k {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        idx += smaller * factorial(k - 1 - i);
    }
    idx
}

/// Inverse of [`perm_index`].
pub fn perm_from_index(mut idx: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..k).collect();
    let mut out = Vec::with_capacity(k);
    for i in (0..k).rev() {
        let f = factorial(i);
        out.push(pool.remove(idx / f));
        idx %= f;
    }
    out
}

/// Index of the argsort of `keys[tuple[i]]` (ties by vertex index), i.e. the
/// relative order of the tuple positions. Also reports whether a tie occurred.
pub fn tuple_order_index(keys: &[f64], tuple: &[usize]) -> (usize, bool) {
    let k = tuple.len();
    let mut rho = [0usize; MAX_TUPLE];
    for (i, r) in rho.iter_mut().enumerate().take(k) {
        *r = i;
    }
    let mut tie = false;
    // insertion sort of positions by (key, vertex)
    for i in 1..k {
        let mut j = i;
        while j > 0 {
            let (a, b) = (tuple[rho[j - 1]], tuple[rho[j]]);
            let ord = keys[a].total_cmp(&keys[b]);
            if ord.is_eq() {
                tie = true;
            }
            if ord.then(a.cmp(&b)).is_gt() {
                rho.swap(j - 1, j);
                j -= 1;
            } else {
                break;
            }
        }
    }
    (perm_index(&rho[..k]), tie)
}

/// Cell map for reordering a tuple: the tuple `w` with `w[i] = t[sigma[i]]`
/// has argsort `sigma⁻¹ ∘ rho` where `rho` is the argsort for `t`.
/// Returns `map[cell_t] = cell_w`.
pub fn reorder_map(sigma: &[usize]) -> Vec<usize> {
    let k = sigma.len();
    let mut inv = vec![0; k];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    (0..factorial(k))
        .map(|c| {
            let rho = perm_from_index(c, k);
            let w: Vec<usize> = rho.iter().map(|&r| inv[r]).collect();
            perm_index(&w)
        })
        .collect()
}
