//! Exact rank of jet-functional systems on a polynomial test space.
//!
//! The codimension of the algebra defined by a system equals the rank of the
//! matrix pairing its functionals with the monomials `1, t, …, t^N`, once `N`
//! is large enough. Rank is computed by fraction-free (Bareiss) elimination
//! over the integers after clearing denominators row by row.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::conditions::{ConditionSystem, JetFunctional, Rational};

/// Default highest monomial degree of the test space.
pub const DEFAULT_DEGREE: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("functional refers to support point {point} but only {available} are given")]
    PointOutOfRange { point: usize, available: usize },
}

/// Dense matrix over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    cols: usize,
    rows: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn new(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, RankError> {
        for (row, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(RankError::Ragged {
                    row,
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(RationalMatrix { cols, rows })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &RationalMatrix) -> Result<RationalMatrix, RankError> {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        RationalMatrix::new(self.cols, rows)
    }

    /// Exact rank by Bareiss elimination on the denominator-cleared matrix.
    pub fn rank(&self) -> usize {
        bareiss_rank(self.rows.iter().map(|r| clear_denominators(r)).collect())
    }
}

/// Scales a rational row to an integer row with the same span.
fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect()
}

/// Fraction-free Gaussian elimination. Every intermediate division is exact.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// The test space of polynomials of degree at most `degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionBasis {
    pub degree: usize,
}

impl Default for FunctionBasis {
    fn default() -> Self {
        FunctionBasis {
            degree: DEFAULT_DEGREE,
        }
    }
}

impl FunctionBasis {
    pub fn new(degree: usize) -> Self {
        FunctionBasis { degree }
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }
}

/// `x^e` for a rational base.
fn power(x: &Rational, e: usize) -> Rational {
    num_traits::pow(x.clone(), e)
}

/// Values of `f ↦ f⁽ᵏ⁾(x)` on `1, t, …, t^degree`.
fn derivative_row(x: &Rational, k: usize, degree: usize) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); degree + 1];
    let mut falling = BigInt::one();
    // falling = j (j-1) … (j-k+1)
    for (j, slot) in row.iter_mut().enumerate().skip(k) {
        if j == k {
            falling = (1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i));
        } else {
            falling = falling * BigInt::from(j) / BigInt::from(j - k);
        }
        *slot = Rational::from_integer(falling.clone()) * power(x, j - k);
    }
    row
}

/// Values of one functional on `1, t, …, t^degree`.
pub fn functional_row(functional: &JetFunctional, support: &[Rational], degree: usize) -> Result<Vec<Rational>, RankError> {
    let mut row = vec![Rational::zero(); degree + 1];
    for term in &functional.terms {
        let x = support.get(term.point).ok_or(RankError::PointOutOfRange {
            point: term.point,
            available: support.len(),
        })?;
        for (acc, v) in row
            .iter_mut()
            .zip(derivative_row(x, usize::from(term.order), degree))
        {
            *acc += &term.coeff * v;
        }
    }
    Ok(row)
}

/// Matrix whose `(i, j)` entry is functional `i` applied to `t^j`.
pub fn evaluation_matrix(system: &ConditionSystem, basis: FunctionBasis) -> Result<RationalMatrix, RankError> {
    let rows = system
        .functionals
        .iter()
        .map(|f| functional_row(f, &system.support, basis.degree))
        .collect::<Result<Vec<_>, _>>()?;
    RationalMatrix::new(basis.dim(), rows)
}

/// Codimension of the algebra cut out by `system`.
pub fn codimension(system: &ConditionSystem, basis: FunctionBasis) -> Result<usize, RankError> {
    let rows = system
        .functionals
        .iter()
        .map(|f| integer_row(f, &system.support, basis.degree))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(bareiss_rank(rows))
}

/// A positive integer multiple of [`functional_row`], built without any
/// rational normalization.
///
/// For a term `(a/b)·f⁽ᵏ⁾(p/q)` the entry on `t^j` is
/// `(a/b)·j!/(j−k)!·p^(j−k)/q^(j−k)`. Scaling by the common denominator
/// `D = lcm(b·q^(N−k))` leaves `a·(D/(b·q^(N−k)))·j!/(j−k)!·p^(j−k)·q^(N−j)`.
pub fn integer_row(functional: &JetFunctional, support: &[Rational], degree: usize) -> Result<Vec<BigInt>, RankError> {
    let n = degree;
    let mut parts = Vec::new();
    for term in &functional.terms {
        let x = support.get(term.point).ok_or(RankError::PointOutOfRange {
            point: term.point,
            available: support.len(),
        })?;
        let k = usize::from(term.order);
        let (p, q) = (x.numer(), x.denom());
        let (a, b) = (term.coeff.numer(), term.coeff.denom());
        let scale = b * num_traits::pow(q.clone(), n.saturating_sub(k));
        parts.push((k, p, q, a, scale));
    }
    let common = parts.iter().fold(BigInt::one(), |acc, part| acc.lcm(&part.4));
    let mut row = vec![BigInt::zero(); n + 1];
    for (k, p, q, a, scale) in parts {
        if k > n {
            continue;
        }
        let factor = a * (&common / scale);
        let mut p_pow = vec![BigInt::one(); n - k + 1];
        let mut q_pow = vec![BigInt::one(); n - k + 1];
        for e in 1..=n - k {
            p_pow[e] = &p_pow[e - 1] * p;
            q_pow[e] = &q_pow[e - 1] * q;
        }
        let mut falling = (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
        for j in k..=n {
            if j > k {
                falling = falling * BigInt::from(j) / BigInt::from(j - k);
            }
            row[j] += &factor * &falling * &p_pow[j - k] * &q_pow[n - j];
        }
    }
    Ok(row)
}

/// True when two systems define the same subspace of the test space.
pub fn same_subspace(a: &ConditionSystem, b: &ConditionSystem, basis: FunctionBasis) -> Result<bool, RankError> {
    let ma = evaluation_matrix(a, basis)?;
    let mb = evaluation_matrix(b, basis)?;
    let joint = ma.stack(&mb)?.rank();
    Ok(joint == ma.rank() && joint == mb.rank())
}

/// Dense univariate polynomial, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial(pub Vec<Rational>);

impl Polynomial {
    pub fn one() -> Self {
        Polynomial(vec![Rational::one()])
    }

    pub fn monomial(degree: usize) -> Self {
        let mut c = vec![Rational::zero(); degree + 1];
        c[degree] = Rational::one();
        Polynomial(c)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Multiplies in place by `(t - root)`.
    pub fn mul_linear(&mut self, root: &Rational) {
        let mut next = vec![Rational::zero(); self.0.len() + 1];
        for (i, c) in self.0.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * root;
        }
        self.0 = next;
    }

    /// Value of a jet functional on this polynomial.
    pub fn apply(&self, functional: &JetFunctional, support: &[Rational]) -> Result<Rational, RankError> {
        let row = functional_row(functional, support, self.degree())?;
        Ok(row.iter().zip(&self.0).map(|(a, b)| a * b).sum())
    }
}

/// Outcome of the two containment checks for one system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentReport {
    /// Every functional kills the constant function.
    pub contains_constants: bool,
    /// Every functional kills `t^j ∏(t − pᵢ)^{mᵢ}` for the checked `j`.
    pub contains_ideal: bool,
    pub multiplicities: Vec<usize>,
    /// Number of ideal elements tested.
    pub ideal_checked: usize,
}

impl ContainmentReport {
    pub fn holds(&self) -> bool {
        self.contains_constants && self.contains_ideal
    }
}

/// Checks that the algebra contains the constants and the ideal of functions
/// vanishing to order `mᵢ = 1 + (highest order at pᵢ)` at each support point.
pub fn verify_containments(system: &ConditionSystem, shifts: usize) -> Result<ContainmentReport, RankError> {
    let multiplicities = system.multiplicities();
    let contains_constants = system.annihilates_constants();
    let mut base = Polynomial::one();
    for (p, m) in system.support.iter().zip(&multiplicities) {
        for _ in 0..*m {
            base.mul_linear(p);
        }
    }
    // t^j·B has the coefficients of B shifted up by j, so one row per
    // functional on monomials up to deg B + shifts covers every shift.
    let top = base.degree() + shifts;
    let mut contains_ideal = true;
    for f in &system.functionals {
        let row = functional_row(f, &system.support, top)?;
        for j in 0..=shifts {
            let value: Rational = base.0.iter().zip(&row[j..]).map(|(c, r)| c * r).sum();
            if !value.is_zero() {
                contains_ideal = false;
            }
        }
    }
    Ok(ContainmentReport {
        contains_constants,
        contains_ideal,
        multiplicities,
        ideal_checked: shifts + 1,
    })
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)] // the oracles index on purpose
mod tests {
    use super::*;
    use crate::cells::{enumerate_cells, Cell};
    use crate::conditions::{instantiate, random_system, JetTerm, Moduli};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// Plain rational Gauss-Jordan, kept deliberately naive.
    fn naive_rank(m: &RationalMatrix) -> usize {
        let mut a: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let pivot = a[rank][col].clone();
            for r in 0..a.len() {
                if r != rank && !a[r][col].is_zero() {
                    let f = &a[r][col] / &pivot;
                    for c in 0..m.cols() {
                        let sub = &f * &a[rank][c];
                        a[r][c] -= sub;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn jet(point: usize, order: u8, coeff: Rational) -> JetTerm {
        JetTerm { point, order, coeff }
    }

    #[test]
    fn empty_system_has_codimension_zero() {
        let sys = ConditionSystem::custom(vec![q(1, 1)], vec![]);
        assert_eq!(codimension(&sys, FunctionBasis::default()).unwrap(), 0);
    }

    #[test]
    fn theta_bar_at_small_degree() {
        let cell: Cell = "TH".parse().unwrap();
        let sys = instantiate(&cell, &[q(1, 2)], &Moduli::alpha(q(1, 1))).unwrap();
        let m = evaluation_matrix(&sys, FunctionBasis::new(5)).unwrap();
        assert_eq!(m.rows(), 4);
        assert_eq!(m.cols(), 6);
        assert_eq!(m.rank(), 4);
        // On t^5 the last functional is 120 - 120·t evaluated at t = 1/2.
        assert_eq!(*m.get(3, 5), q(120, 1) - q(120, 1) * q(1, 2));
    }

    #[test]
    fn dependent_rows_drop_rank() {
        let f = JetFunctional::new(vec![jet(0, 0, q(1, 1)), jet(1, 0, q(-1, 1))]);
        let sys = ConditionSystem::custom(vec![q(1, 3), q(2, 1)], vec![f.clone(), f.scaled(&q(-7, 3))]);
        assert_eq!(codimension(&sys, FunctionBasis::default()).unwrap(), 1);
    }

    #[test]
    fn bad_point_is_an_error() {
        let f = JetFunctional::new(vec![jet(3, 0, q(1, 1))]);
        let sys = ConditionSystem::custom(vec![q(1, 1)], vec![f]);
        assert!(matches!(
            codimension(&sys, FunctionBasis::default()),
            Err(RankError::PointOutOfRange { point: 3, .. })
        ));
    }

    #[test]
    fn ragged_matrix_rejected() {
        assert!(RationalMatrix::new(2, vec![vec![q(1, 1)]]).is_err());
    }

    #[test]
    fn distinct_cells_give_distinct_subspaces() {
        let x: Cell = "X+".parse().unwrap();
        let y: Cell = "Y1".parse().unwrap();
        let pts = [q(1, 2), q(3, 1)];
        let a = instantiate(&x, &pts, &Moduli::alpha(q(2, 1))).unwrap();
        let b = instantiate(&y, &pts, &Moduli::default()).unwrap();
        assert!(!same_subspace(&a, &b, FunctionBasis::default()).unwrap());
        assert!(same_subspace(&a, &a.clone(), FunctionBasis::default()).unwrap());
        // Different moduli, same points: different algebras.
        let c = instantiate(&x, &pts, &Moduli::alpha(q(3, 1))).unwrap();
        assert!(!same_subspace(&a, &c, FunctionBasis::default()).unwrap());
    }

    #[test]
    fn polynomial_helpers() {
        let mut p = Polynomial::one();
        p.mul_linear(&q(2, 1));
        p.mul_linear(&q(3, 1));
        assert_eq!(p.0, vec![q(6, 1), q(-5, 1), q(1, 1)]);
        let f = JetFunctional::new(vec![jet(0, 1, q(1, 1))]);
        // derivative 2t - 5 at t = 2
        assert_eq!(p.apply(&f, &[q(2, 1)]).unwrap(), q(-1, 1));
    }

    #[test]
    fn every_cell_has_codimension_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for c in enumerate_cells() {
            let sys = random_system(&c, &mut rng);
            assert_eq!(codimension(&sys, FunctionBasis::default()).unwrap(), 4, "{c}");
            assert!(verify_containments(&sys, 10).unwrap().holds(), "{c}");
        }
    }

    #[test]
    fn containment_detects_a_bad_functional() {
        // f(p) alone does not kill constants.
        let sys = ConditionSystem::custom(vec![q(1, 1)], vec![JetFunctional::new(vec![jet(0, 0, q(1, 1))])]);
        let report = verify_containments(&sys, 3).unwrap();
        assert!(!report.contains_constants);
        assert!(report.contains_ideal);
        assert!(!report.holds());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rational() -> impl Strategy<Value = Rational> {
            (-9i64..=9, 1i64..=9).prop_map(|(n, d)| q(n, d))
        }

        fn matrix() -> impl Strategy<Value = RationalMatrix> {
            (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(small_rational(), c), r)
                    .prop_map(move |rows| RationalMatrix::new(c, rows).unwrap())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn bareiss_matches_naive(m in matrix()) {
                prop_assert_eq!(m.rank(), naive_rank(&m));
            }

            #[test]
            fn rank_stable_under_degree_bound(seed in any::<u64>(), pick in 0usize..244) {
                let c = enumerate_cells()[pick];
                let sys = random_system(&c, &mut ChaCha8Rng::seed_from_u64(seed));
                let low = codimension(&sys, FunctionBasis::new(36)).unwrap();
                let high = codimension(&sys, FunctionBasis::new(40)).unwrap();
                prop_assert_eq!(low, high);
            }

            #[test]
            fn rank_stable_under_rescaling(seed in any::<u64>(), pick in 0usize..244, k in 1i64..50) {
                let c = enumerate_cells()[pick];
                let sys = random_system(&c, &mut ChaCha8Rng::seed_from_u64(seed));
                let mut scaled = sys.clone();
                let factor = q(if k % 2 == 0 { -k } else { k }, 7);
                scaled.functionals = sys.functionals.iter().map(|f| f.scaled(&factor)).collect();
                let b = FunctionBasis::default();
                prop_assert_eq!(codimension(&sys, b).unwrap(), codimension(&scaled, b).unwrap());
                prop_assert!(same_subspace(&sys, &scaled, b).unwrap());
            }

            #[test]
            fn integer_rows_are_multiples(seed in any::<u64>(), pick in 0usize..244) {
                let c = enumerate_cells()[pick];
                let sys = random_system(&c, &mut ChaCha8Rng::seed_from_u64(seed));
                for f in &sys.functionals {
                    let exact = functional_row(f, &sys.support, 15).unwrap();
                    let scaled = integer_row(f, &sys.support, 15).unwrap();
                    let j = exact.iter().position(|v| !v.is_zero()).unwrap();
                    let ratio = Rational::from_integer(scaled[j].clone()) / &exact[j];
                    prop_assert!(ratio > Rational::zero());
                    for (e, s) in exact.iter().zip(&scaled) {
                        prop_assert_eq!(e * &ratio, Rational::from_integer(s.clone()));
                    }
                }
            }

            #[test]
            fn evaluation_matches_naive_rank(seed in any::<u64>(), pick in 0usize..244) {
                let c = enumerate_cells()[pick];
                let sys = random_system(&c, &mut ChaCha8Rng::seed_from_u64(seed));
                let m = evaluation_matrix(&sys, FunctionBasis::new(12)).unwrap();
                prop_assert_eq!(m.rank(), naive_rank(&m));
            }
        }
    }
}
