//! Sylvester Hadamard matrices and the fast Walsh-Hadamard transform.

/// Entry `(row, col)` of the Sylvester Hadamard matrix of any power-of-two
/// order: `(-1)^popcount(row & col)`. The recursion
/// `H_{p+1} = [[H_p, H_p], [H_p, -H_p]]` yields exactly this closed form.
#[inline]
pub fn sylvester_entry(row: usize, col: usize) -> f64 {
    if (row & col).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Dense Sylvester matrix of order `n` (row-major). Test and diagnostic use.
pub fn sylvester_matrix(n: usize) -> Vec<f64> {
    assert!(n.is_power_of_two(), "order must be a power of two");
    let mut h = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            h.push(sylvester_entry(r, c));
        }
    }
    h
}

/// In-place unnormalized Walsh-Hadamard transform: `data <- H data`.
///
/// The length must be a power of two. The Sylvester matrix is symmetric so
/// this also computes `H^T data`.
pub fn fwht(data: &mut [f64]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fwht length must be a power of two");
    let mut half = 1;
    while half < n {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
}

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n.is_power_of_two()
}
