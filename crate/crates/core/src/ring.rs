//! The ring `Z[t]/(t^4)` on `Z^4` and lattices given by lower-triangular
//! Hermite-form bases.
//!
//! Coordinates are ordered `(t^3, t^2, t, 1)`, so a basis
//!
//! ```text
//! [ p^k   0    0    0 ]
//! [ a21  p^l   0    0 ]
//! [ a31  a32  p^r   0 ]
//! [  0    0    0    1 ]
//! ```
//!
//! has third row `a31 t^3 + a32 t^2 + p^r t` and last row the identity.

use num_integer::Integer;

use crate::error::{Error, Result};

pub type Vec4 = [i128; 4];

/// Multiplication on `Z^4` given by structure constants:
/// `e_i * e_j = sum_m table[i][j][m] e_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingStructure {
    table: [[Vec4; 4]; 4],
}

impl RingStructure {
    pub fn from_table(table: [[Vec4; 4]; 4]) -> Self {
        Self { table }
    }

    /// `Z[t]/(t^4)` in the basis `(t^3, t^2, t, 1)`.
    pub fn truncated_polynomial() -> Self {
        let mut table = [[[0i128; 4]; 4]; 4];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                // index i holds t^(3 - i)
                let deg = (3 - i) + (3 - j);
                if deg <= 3 {
                    entry[3 - deg] = 1;
                }
            }
        }
        Self { table }
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec4 {
        self.table[i][j]
    }

    pub fn multiply(&self, u: &Vec4, v: &Vec4) -> Vec4 {
        let mut out = [0i128; 4];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj == 0 {
                    continue;
                }
                let c = ui * vj;
                for (m, &t) in self.table[i][j].iter().enumerate() {
                    out[m] += c * t;
                }
            }
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Index of a basis vector acting as a two-sided identity, if any.
    pub fn identity_index(&self) -> Option<usize> {
        (0..4).find(|&e| {
            (0..4).all(|i| {
                let mut unit = [0; 4];
                unit[i] = 1;
                self.table[e][i] == unit && self.table[i][e] == unit
            })
        })
    }
}

/// p-adic valuation; `None` stands for `v(0) = +infinity`.
pub fn valuation(n: i128, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// `v(n) >= bound`, with `v(0) = +infinity`.
pub fn valuation_at_least(n: i128, p: u64, bound: i64) -> bool {
    if bound <= 0 {
        return true;
    }
    valuation(n, p).is_none_or(|v| v as i64 >= bound)
}

pub(crate) fn pow_i128(p: u64, e: u32) -> i128 {
    (p as i128).pow(e)
}

/// Hermite-form basis of a full-rank unital sublattice of `Z[t]/(t^4)` with
/// diagonal `(p^k, p^l, p^r, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HnfSubringMatrix {
    pub p: u64,
    pub k: u32,
    pub l: u32,
    pub r: u32,
    pub a21: u64,
    pub a31: u64,
    pub a32: u64,
}

impl HnfSubringMatrix {
    /// Validates `0 <= a21, a31 < p^k` and `0 <= a32 < p^l`.
    pub fn new(p: u64, (k, l, r): (u32, u32, u32), a21: u64, a31: u64, a32: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::Domain(format!("modulus base {p} < 2")));
        }
        let index_bits = (k + l + r) as f64 * (p as f64).log2();
        if index_bits > 62.0 {
            return Err(Error::Overflow("lattice index exceeds 2^62"));
        }
        let pk = p.pow(k);
        let pl = p.pow(l);
        for (name, value, bound) in [("a21", a21, pk), ("a31", a31, pk), ("a32", a32, pl)] {
            if value >= bound {
                return Err(Error::EntryOutOfRange { name, value, bound });
            }
        }
        Ok(Self::new_unchecked(p, (k, l, r), a21, a31, a32))
    }

    pub(crate) fn new_unchecked(
        p: u64,
        (k, l, r): (u32, u32, u32),
        a21: u64,
        a31: u64,
        a32: u64,
    ) -> Self {
        Self {
            p,
            k,
            l,
            r,
            a21,
            a31,
            a32,
        }
    }

    /// Diagonal `(p^k, p^l, p^r, 1)` with zero off-diagonal entries.
    pub fn diagonal(p: u64, klr: (u32, u32, u32)) -> Result<Self> {
        Self::new(p, klr, 0, 0, 0)
    }

    pub fn rows(&self) -> [Vec4; 4] {
        let (pk, pl, pr) = (
            pow_i128(self.p, self.k),
            pow_i128(self.p, self.l),
            pow_i128(self.p, self.r),
        );
        [
            [pk, 0, 0, 0],
            [self.a21 as i128, pl, 0, 0],
            [self.a31 as i128, self.a32 as i128, pr, 0],
            [0, 0, 0, 1],
        ]
    }

    pub fn index(&self) -> u128 {
        (self.p as u128).pow(self.k + self.l + self.r)
    }

    /// Integer coefficients `c` with `w = sum c_i v_i`, or `None` if `w` is
    /// outside the row span.
    pub fn membership(&self, w: &Vec4) -> Option<Vec4> {
        lower_triangular_solve(&self.rows(), w)
    }

    /// Generic closure oracle: every pairwise product of basis rows lies in
    /// the row span. The identity row makes the lattice unital.
    pub fn is_subring(&self) -> bool {
        self.is_subring_of(&RingStructure::truncated_polynomial())
    }

    pub fn is_subring_of(&self, ring: &RingStructure) -> bool {
        let rows = self.rows();
        (0..4).all(|i| {
            (i..4).all(|j| {
                let prod = ring.multiply(&rows[i], &rows[j]);
                lower_triangular_solve(&rows, &prod).is_some()
            })
        })
    }

    /// Fast path: `l <= 2r`, `k <= l + r` and `v(2 p^l a32 - p^r a21) >= k + l - r`.
    pub fn closure_conditions(&self) -> bool {
        let (k, l, r) = (self.k as i64, self.l as i64, self.r as i64);
        if l > 2 * r || k > l + r {
            return false;
        }
        let lhs = 2 * pow_i128(self.p, self.l) * self.a32 as i128
            - pow_i128(self.p, self.r) * self.a21 as i128;
        valuation_at_least(lhs, self.p, k + l - r)
    }

    /// Invariant factors `(a1, a2, a3, a4)` with `a_{i+1} | a_i` and
    /// `Z^4 / L = sum Z/a_i`, from gcds of minors: `a_{n-j+1} ... a_n = d_j`.
    pub fn cotype(&self) -> [u128; 4] {
        let rows = self.rows();
        let d: Vec<i128> = (1..=4).map(|j| minor_gcd(&rows, j)).collect();
        [
            (d[3] / d[2]) as u128,
            (d[2] / d[1]) as u128,
            (d[1] / d[0]) as u128,
            d[0] as u128,
        ]
    }

    /// gcd of the seven nonzero 3x3 minors written out for this basis shape:
    /// `gcd(p^{k+l+r}, p^{l+r}, p^r a21, a21 a32 - p^l a31, p^{k+r}, p^k a32, p^{k+l})`.
    pub fn explicit_cocyclic_gcd(&self) -> i128 {
        let p = |e: u32| pow_i128(self.p, e);
        let (k, l, r) = (self.k, self.l, self.r);
        let (a21, a31, a32) = (self.a21 as i128, self.a31 as i128, self.a32 as i128);
        [
            p(k + l + r),
            p(l + r),
            p(r) * a21,
            a21 * a32 - p(l) * a31,
            p(k + r),
            p(k) * a32,
            p(k + l),
        ]
        .into_iter()
        .fold(0i128, |g, t| g.gcd(&t))
    }

    /// gcd of all 3x3 minors computed generically.
    pub fn minor_gcd_3(&self) -> i128 {
        minor_gcd(&self.rows(), 3)
    }

    /// `R/S` cyclic. Evaluates both the explicit gcd and the generic minor
    /// gcd and fails if they disagree.
    pub fn is_cocyclic(&self) -> Result<bool> {
        let explicit = self.explicit_cocyclic_gcd() == 1;
        let generic = self.minor_gcd_3() == 1;
        if explicit != generic {
            return Err(Error::Inconsistent(format!(
                "cocyclicity criteria disagree for {self:?}: explicit gcd {} vs minor gcd {}",
                self.explicit_cocyclic_gcd(),
                self.minor_gcd_3()
            )));
        }
        Ok(explicit)
    }
}

/// Solves `w = sum c_i rows[i]` for a lower-triangular basis with nonzero diagonal.
fn lower_triangular_solve(rows: &[Vec4; 4], w: &Vec4) -> Option<Vec4> {
    let mut c = [0i128; 4];
    for j in (0..4).rev() {
        let residual = w[j] - (j + 1..4).map(|i| c[i] * rows[i][j]).sum::<i128>();
        let d = rows[j][j];
        if residual % d != 0 {
            return None;
        }
        c[j] = residual / d;
    }
    Some(c)
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|col| {
                let a = m[0][col];
                if a == 0 {
                    return 0;
                }
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != col)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1 } else { -1 };
                sign * a * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << n))
        .filter(move |mask| mask.count_ones() as usize == size)
        .map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

/// gcd of all `size x size` minors (0 if all vanish).
pub fn minor_gcd(rows: &[Vec4; 4], size: usize) -> i128 {
    let mut g = 0i128;
    for rs in subsets(4, size) {
        for cs in subsets(4, size) {
            let sub: Vec<Vec<i128>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| rows[i][j]).collect())
                .collect();
            g = g.gcd(&det(&sub));
            if g == 1 {
                return 1;
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64, klr: (u32, u32, u32), a21: u64, a31: u64, a32: u64) -> HnfSubringMatrix {
        HnfSubringMatrix::new(p, klr, a21, a31, a32).unwrap()
    }

    #[test]
    fn structure_constants() {
        let ring = RingStructure::truncated_polynomial();
        assert!(ring.is_commutative());
        assert_eq!(ring.identity_index(), Some(3));
        // t * t^2 = t^3; t^2 * t^2 = 0
        assert_eq!(ring.basis_product(2, 1), [1, 0, 0, 0]);
        assert_eq!(ring.basis_product(1, 1), [0, 0, 0, 0]);
        // (1 + t)^2 = 1 + 2t + t^2
        assert_eq!(ring.multiply(&[0, 0, 1, 1], &[0, 0, 1, 1]), [0, 1, 2, 1]);
    }

    #[test]
    fn membership_back_substitution() {
        let id = m(2, (0, 0, 0), 0, 0, 0);
        assert_eq!(id.membership(&[5, -2, 0, 7]), Some([5, -2, 0, 7]));
        let two_t = m(2, (0, 0, 1), 0, 0, 0);
        assert_eq!(two_t.membership(&[0, 0, 2, 0]), Some([0, 0, 1, 0]));
        assert_eq!(two_t.membership(&[0, 0, 1, 0]), None);
    }

    #[test]
    fn closure_examples() {
        assert!(m(2, (0, 0, 1), 0, 0, 0).is_subring());
        assert!(!m(3, (1, 0, 0), 0, 0, 0).is_subring());
        for p in [2, 3, 5] {
            assert!(m(p, (0, 0, 0), 0, 0, 0).is_subring());
        }
    }

    #[test]
    fn closure_conditions_examples() {
        for a31 in 0..3 {
            assert!(m(3, (1, 1, 1), 0, a31, 0).closure_conditions());
        }
        // v_3(-3) = 1 < 2
        assert!(!m(3, (2, 1, 1), 1, 0, 0).closure_conditions());
        // v_2(4 - 2) = 1 >= 1
        assert!(m(2, (1, 1, 1), 1, 0, 1).closure_conditions());
    }

    #[test]
    fn cotype_examples() {
        for p in [2u128, 3, 5] {
            let d = m(p as u64, (1, 1, 1), 0, 0, 0);
            assert_eq!(d.cotype(), [p, p, p, 1]);
        }
        assert_eq!(m(2, (0, 0, 2), 0, 0, 0).cotype(), [4, 1, 1, 1]);
        assert_eq!(m(2, (1, 0, 1), 0, 1, 0).cotype(), [4, 1, 1, 1]);
    }

    #[test]
    fn cocyclic_examples() {
        assert!(m(2, (0, 1, 1), 0, 0, 1).is_cocyclic().unwrap());
        assert!(!m(2, (0, 1, 1), 0, 0, 0).is_cocyclic().unwrap());
        assert!(m(3, (0, 0, 2), 0, 0, 0).is_cocyclic().unwrap());
        assert!(!m(3, (1, 1, 1), 0, 0, 0).is_cocyclic().unwrap());
    }

    #[test]
    fn rejects_out_of_range_entries() {
        assert!(matches!(
            HnfSubringMatrix::new(3, (1, 0, 1), 3, 0, 0),
            Err(Error::EntryOutOfRange { name: "a21", .. })
        ));
        assert!(matches!(
            HnfSubringMatrix::new(3, (1, 0, 1), 0, 0, 1),
            Err(Error::EntryOutOfRange { name: "a32", .. })
        ));
    }

    #[test]
    fn valuation_of_zero_is_infinite() {
        assert_eq!(valuation(0, 3), None);
        assert!(valuation_at_least(0, 3, 100));
        assert_eq!(valuation(-12, 2), Some(2));
    }
}
