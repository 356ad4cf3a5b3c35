use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// `(n! >= 2^(2n+1), n! > 2^(2n+1) + 2)` in exact arithmetic.
pub fn factorial_bounds(n: u32) -> (bool, bool) {
    let fact = (1..=n).fold(BigUint::one(), |acc, k| acc * k);
    let pow = BigUint::one() << (2 * n as usize + 1);
    let weak = fact >= pow;
    (weak, fact > pow + 2u32)
}

/// Upper bound on the least `N` such that every coloring of the pairs of an
/// `N`-set with `r` colors has a monochromatic triangle:
/// `U(1) = 3`, `U(r) = r (U(r-1) - 1) + 2`. `r = 0` is treated as 1.
pub fn ramsey_upper(r: u64) -> BigUint {
    let mut u = BigUint::from(3u32);
    for c in 2..=r {
        u = (u - 1u32) * c + 2u32;
    }
    u
}

/// Outcome of the exhaustive two-color triangle search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleCertificate {
    /// A coloring of the pairs of 5 points without a monochromatic triangle,
    /// as a bitmask over the pairs in lexicographic order.
    pub k5_coloring: Option<u32>,
    /// Whether every coloring of the pairs of 6 points has one.
    pub k6_forced: bool,
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn has_mono_triangle(n: usize, mask: u32) -> bool {
    let mut index = vec![vec![0usize; n]; n];
    for (k, (i, j)) in pairs(n).into_iter().enumerate() {
        index[i][j] = k;
        index[j][i] = k;
    }
    let c = |i: usize, j: usize| mask >> index[i][j] & 1;
    (0..n).any(|a| (a + 1..n).any(|b| (b + 1..n).any(|d| c(a, b) == c(a, d) && c(a, b) == c(b, d))))
}

/// Certifies `R(3,3) = 6` by brute force over all `2^10` and `2^15`
/// colorings.
pub fn certify_two_color_triangles() -> TriangleCertificate {
    let k5_coloring = (0u32..1 << 10).find(|&m| !has_mono_triangle(5, m));
    let k6_forced = (0u32..1 << 15).all(|m| has_mono_triangle(6, m));
    TriangleCertificate { k5_coloring, k6_forced }
}
