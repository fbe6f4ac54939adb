//! Jet-condition templates for each cell family.
//!
//! An algebra of codimension four is cut out by four linear functionals, each
//! a combination of derivatives `f⁽ᵏ⁾(p)` at support points. A template is
//! the symbolic system (coefficients `±1`, `±α`, `±β`, `±γ`); instantiating it
//! at rational support points and moduli yields a numeric [`ConditionSystem`].
//!
//! Support points are numbered `p1 < p2 < …` in circle order. For second-type
//! cells the largest point sits at the distinguished point, coordinate `0`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::cells::{Cell, Family, SignTag};

pub type Rational = BigRational;

/// Highest derivative order any template uses.
pub const MAX_ORDER: u8 = 5;

/// Exclusive upper end of the coordinate range, a rational stand-in for 2π.
pub fn circle_length() -> Rational {
    Rational::new(63.into(), 10.into())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConditionError {
    #[error("{cell}: expected {expected} support points, got {found}")]
    SupportSize { cell: String, expected: usize, found: usize },
    #[error("{cell}: support points must be strictly increasing inside (0, 63/10)")]
    SupportOrder { cell: String },
    #[error("{cell}: the last support point of a second-type cell must be 0")]
    DistinguishedPoint { cell: String },
    #[error("{cell}: missing modulus {name}")]
    MissingModulus { cell: String, name: &'static str },
    #[error("{cell}: {constraint} violated")]
    Constraint { cell: String, constraint: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modulus {
    Alpha,
    Beta,
    Gamma,
}

impl Modulus {
    pub fn symbol(self) -> &'static str {
        match self {
            Modulus::Alpha => "α",
            Modulus::Beta => "β",
            Modulus::Gamma => "γ",
        }
    }

    pub fn ascii(self) -> &'static str {
        match self {
            Modulus::Alpha => "alpha",
            Modulus::Beta => "beta",
            Modulus::Gamma => "gamma",
        }
    }
}

/// `±1` or `±modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymCoeff {
    pub negative: bool,
    pub modulus: Option<Modulus>,
}

impl SymCoeff {
    const ONE: SymCoeff = SymCoeff {
        negative: false,
        modulus: None,
    };
    const MINUS_ONE: SymCoeff = SymCoeff {
        negative: true,
        modulus: None,
    };

    fn times(m: Modulus) -> SymCoeff {
        SymCoeff {
            negative: false,
            modulus: Some(m),
        }
    }

    fn minus(m: Modulus) -> SymCoeff {
        SymCoeff {
            negative: true,
            modulus: Some(m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymTerm {
    /// Zero-based support slot.
    pub point: usize,
    pub order: u8,
    pub coeff: SymCoeff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymFunctional(pub Vec<SymTerm>);

/// The symbolic four-functional system of one cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub cell: Cell,
    pub support_size: usize,
    pub moduli: Vec<Modulus>,
    pub functionals: Vec<SymFunctional>,
}

fn term(point: usize, order: u8, coeff: SymCoeff) -> SymTerm {
    SymTerm { point, order, coeff }
}

/// `f(p) − f(q)`.
fn value_eq(p: usize, q: usize) -> SymFunctional {
    SymFunctional(vec![term(p, 0, SymCoeff::ONE), term(q, 0, SymCoeff::MINUS_ONE)])
}

/// `f⁽ᵏ⁾(p)`.
fn jet(p: usize, k: u8) -> SymFunctional {
    SymFunctional(vec![term(p, k, SymCoeff::ONE)])
}

/// `f⁽ᵏ⁾(p) − m·f⁽ˡ⁾(q)`.
fn ratio(p: usize, k: u8, m: Modulus, q: usize, l: u8) -> SymFunctional {
    SymFunctional(vec![term(p, k, SymCoeff::ONE), term(q, l, SymCoeff::minus(m))])
}

/// `m·f⁽ᵏ⁾(p) − n·f⁽ˡ⁾(q)`.
fn cross(m: Modulus, p: usize, k: u8, n: Modulus, q: usize, l: u8) -> SymFunctional {
    SymFunctional(vec![term(p, k, SymCoeff::times(m)), term(q, l, SymCoeff::minus(n))])
}

/// `f(p₀) = f(p₁) = …` as consecutive-free equalities against the first point.
fn all_equal(points: &[usize]) -> Vec<SymFunctional> {
    points[1..].iter().map(|q| value_eq(points[0], *q)).collect()
}

fn others(n: usize, exclude: &[usize]) -> Vec<usize> {
    (0..n).filter(|p| !exclude.contains(p)).collect()
}

/// Returns the symbolic system for `cell` (barred or not; the template is the
/// same and only the instantiated coordinates differ).
pub fn template_for(cell: &Cell) -> Template {
    use Family::*;
    use Modulus::{Alpha, Beta, Gamma};
    let family = cell.family();
    let n = family.support_size();
    // Zero-based slots for the cell's one-based indices.
    let ix: Vec<usize> = cell.indices().iter().map(|d| usize::from(*d) - 1).collect();
    let (functionals, moduli): (Vec<SymFunctional>, Vec<Modulus>) = match family {
        A => {
            let first = [0, ix[0], ix[1]];
            let second = others(n, &first);
            let mut fs = all_equal(&first);
            fs.extend(all_equal(&second));
            (fs, vec![])
        }
        B => (all_equal(&[0, 1, 2, 3, 4]), vec![]),
        C => {
            let (i, j) = (ix[0], ix[1]);
            let mut fs = vec![jet(i, 1), value_eq(i, j)];
            fs.extend(all_equal(&others(n, &[i, j])));
            (fs, vec![])
        }
        D => {
            let mut fs = all_equal(&[0, 1, 2, 3]);
            fs.push(ratio(ix[0], 1, Alpha, ix[1], 1));
            (fs, vec![Alpha])
        }
        E => {
            let mut fs = all_equal(&[0, 1, 2]);
            fs.push(cross(Beta, 0, 1, Alpha, 1, 1));
            fs.push(cross(Gamma, 1, 1, Beta, 2, 1));
            (fs, vec![Alpha, Beta, Gamma])
        }
        F => {
            let i = ix[0];
            let mut fs = vec![jet(i, 1), jet(i, 2)];
            fs.extend(all_equal(&others(n, &[i])));
            (fs, vec![])
        }
        G => {
            let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
            (vec![jet(i, 1), value_eq(i, j), jet(k, 1), value_eq(k, l)], vec![])
        }
        H => {
            let mut fs = all_equal(&[0, 1, 2, 3]);
            fs.push(jet(ix[0], 1));
            (fs, vec![])
        }
        I => {
            let i = ix[0];
            let mut fs = all_equal(&[0, 1, 2]);
            fs.push(jet(i, 1));
            fs.push(ratio(i, 3, Alpha, i, 2));
            (fs, vec![Alpha])
        }
        J => {
            let (i, j) = (ix[0], ix[1]);
            let mut fs = all_equal(&[0, 1, 2]);
            fs.push(jet(i, 1));
            fs.push(ratio(i, 2, Alpha, j, 1));
            (fs, vec![Alpha])
        }
        K => {
            let i = ix[0];
            let rest = others(n, &[i]);
            let mut fs = all_equal(&[0, 1, 2]);
            fs.push(jet(i, 1));
            fs.push(ratio(rest[0], 1, Alpha, rest[1], 1));
            (fs, vec![Alpha])
        }
        W => {
            let (a, b) = ordered_pair(ix[0]);
            (
                vec![
                    value_eq(a, b),
                    jet(a, 1),
                    cross(Gamma, a, 3, Alpha, b, 1),
                    cross(Gamma, a, 2, Beta, b, 1),
                ],
                vec![Alpha, Beta, Gamma],
            )
        }
        L => {
            let (i, j, l) = (ix[0], ix[1], ix[2]);
            (vec![jet(i, 1), jet(i, 2), jet(j, 1), value_eq(j, l)], vec![])
        }
        M => {
            let i = ix[0];
            let mut fs = all_equal(&[0, 1, 2]);
            fs.push(jet(i, 1));
            fs.push(jet(i, 2));
            (fs, vec![])
        }
        N => {
            let rest = others(n, &[ix[0]]);
            let mut fs = all_equal(&[0, 1, 2]);
            fs.push(jet(rest[0], 1));
            fs.push(jet(rest[1], 1));
            (fs, vec![])
        }
        P => {
            let (a, b) = ordered_pair(ix[0]);
            (
                vec![value_eq(a, b), jet(a, 1), ratio(a, 3, Alpha, a, 2), jet(b, 1)],
                vec![Alpha],
            )
        }
        S => {
            let (a, b) = ordered_pair(ix[0]);
            (
                vec![value_eq(a, b), jet(a, 1), jet(a, 2), ratio(a, 4, Alpha, a, 3)],
                vec![Alpha],
            )
        }
        X => (
            vec![value_eq(0, 1), jet(0, 1), jet(1, 1), ratio(0, 2, Alpha, 1, 2)],
            vec![Alpha],
        ),
        V => {
            let (a, b) = ordered_pair(ix[0]);
            (
                vec![value_eq(a, b), jet(a, 1), jet(a, 2), ratio(a, 3, Alpha, b, 1)],
                vec![Alpha],
            )
        }
        Omega => (
            vec![jet(0, 1), jet(0, 2), ratio(0, 4, Alpha, 0, 3), ratio(0, 5, Beta, 0, 3)],
            vec![Alpha, Beta],
        ),
        Y => {
            let (a, b) = ordered_pair(ix[0]);
            (vec![value_eq(a, b), jet(a, 1), jet(a, 2), jet(b, 1)], vec![])
        }
        U => {
            let (a, b) = ordered_pair(ix[0]);
            (vec![value_eq(a, b), jet(a, 1), jet(a, 2), jet(a, 3)], vec![])
        }
        Z => (vec![jet(0, 1), jet(0, 2), jet(1, 1), jet(1, 2)], vec![]),
        Theta => (
            vec![jet(0, 1), jet(0, 2), jet(0, 3), ratio(0, 5, Alpha, 0, 4)],
            vec![Alpha],
        ),
        Nabla => (vec![jet(0, 1), jet(0, 2), jet(0, 3), jet(0, 4)], vec![]),
    };
    Template {
        cell: *cell,
        support_size: n,
        moduli,
        functionals,
    }
}

/// Two-point families: index 1 puts the marked point `a` first on the
/// circle, index 2 puts it second.
fn ordered_pair(index: usize) -> (usize, usize) {
    if index == 0 {
        (0, 1)
    } else {
        (1, 0)
    }
}

impl fmt::Display for SymFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let sign = if t.coeff.negative { "-" } else { "+" };
            let c = t.coeff.modulus.map_or("1", Modulus::symbol);
            write!(f, "{sign}{c} · D^{}[p{}]", t.order, t.point + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for func in &self.functionals {
            writeln!(f, "{func}")?;
        }
        Ok(())
    }
}

/// Values for the moduli a template mentions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Moduli {
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub gamma: Option<Rational>,
}

impl Moduli {
    pub fn alpha(alpha: Rational) -> Self {
        Moduli {
            alpha: Some(alpha),
            ..Default::default()
        }
    }

    pub fn get(&self, m: Modulus) -> Option<&Rational> {
        match m {
            Modulus::Alpha => self.alpha.as_ref(),
            Modulus::Beta => self.beta.as_ref(),
            Modulus::Gamma => self.gamma.as_ref(),
        }
    }

    pub fn set(&mut self, m: Modulus, value: Rational) {
        match m {
            Modulus::Alpha => self.alpha = Some(value),
            Modulus::Beta => self.beta = Some(value),
            Modulus::Gamma => self.gamma = Some(value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetTerm {
    pub point: usize,
    pub order: u8,
    pub coeff: Rational,
}

/// A rational combination of derivatives at support points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetFunctional {
    pub terms: Vec<JetTerm>,
}

impl JetFunctional {
    pub fn new(terms: Vec<JetTerm>) -> Self {
        JetFunctional {
            terms: terms.into_iter().filter(|t| !t.coeff.is_zero()).collect(),
        }
    }

    /// Value on the constant function 1.
    pub fn on_constant(&self) -> Rational {
        self.terms
            .iter()
            .filter(|t| t.order == 0)
            .map(|t| t.coeff.clone())
            .sum()
    }

    pub fn scaled(&self, factor: &Rational) -> JetFunctional {
        JetFunctional::new(
            self.terms
                .iter()
                .map(|t| JetTerm {
                    coeff: &t.coeff * factor,
                    ..t.clone()
                })
                .collect(),
        )
    }
}

impl fmt::Display for JetFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let sign = if t.coeff.is_negative() { "-" } else { "+" };
            write!(f, "{sign}{} · D^{}[p{}]", t.coeff.abs(), t.order, t.point + 1)?;
        }
        Ok(())
    }
}

/// A fully numeric system of jet functionals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionSystem {
    pub cell: Option<Cell>,
    pub support: Vec<Rational>,
    pub moduli: Moduli,
    pub functionals: Vec<JetFunctional>,
}

impl ConditionSystem {
    /// A system not attached to any cell, for ad hoc functionals.
    pub fn custom(support: Vec<Rational>, functionals: Vec<JetFunctional>) -> Self {
        ConditionSystem {
            cell: None,
            support,
            moduli: Moduli::default(),
            functionals,
        }
    }

    /// Per support point, one more than the highest derivative order used
    /// there (zero for unused points).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.support.len()];
        for t in self.functionals.iter().flat_map(|f| &f.terms) {
            m[t.point] = m[t.point].max(usize::from(t.order) + 1);
        }
        m
    }

    pub fn multiplicity_budget(&self) -> usize {
        self.multiplicities().iter().sum()
    }

    pub fn annihilates_constants(&self) -> bool {
        self.functionals.iter().all(|f| f.on_constant().is_zero())
    }

    /// Text dump: point coordinates, moduli, then one functional per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        if let Some(cell) = &self.cell {
            out.push_str(&format!("cell {cell}\n"));
        }
        for (i, p) in self.support.iter().enumerate() {
            out.push_str(&format!("p{} = {p}\n", i + 1));
        }
        for m in [Modulus::Alpha, Modulus::Beta, Modulus::Gamma] {
            if let Some(v) = self.moduli.get(m) {
                out.push_str(&format!("{} = {v}\n", m.symbol()));
            }
        }
        for f in &self.functionals {
            out.push_str(&format!("{f}\n"));
        }
        out
    }
}

fn sign_of(value: &Rational) -> i8 {
    if value.is_positive() {
        1
    } else if value.is_negative() {
        -1
    } else {
        0
    }
}

fn check_moduli(cell: &Cell, moduli: &Moduli) -> Result<(), ConditionError> {
    let name = cell.to_string();
    let fail = |constraint| ConditionError::Constraint {
        cell: name.clone(),
        constraint,
    };
    let s = |m: Modulus| moduli.get(m).map(sign_of).unwrap_or(0);
    match cell.family() {
        Family::D | Family::J | Family::K | Family::X | Family::V => {
            let a = s(Modulus::Alpha);
            if a == 0 {
                return Err(fail("α ≠ 0"));
            }
            match (cell.sign(), a) {
                (SignTag::Plus, -1) => return Err(fail("α > 0 (sign +)")),
                (SignTag::Minus, 1) => return Err(fail("α < 0 (sign −)")),
                _ => {}
            }
        }
        Family::W => {
            let (b, g) = (s(Modulus::Beta), s(Modulus::Gamma));
            if b * g == 0 {
                return Err(fail("βγ ≠ 0"));
            }
            match (cell.sign(), b * g) {
                (SignTag::Plus, -1) => return Err(fail("β/γ > 0 (sign +)")),
                (SignTag::Minus, 1) => return Err(fail("β/γ < 0 (sign −)")),
                _ => {}
            }
        }
        Family::E => {
            let signs = [s(Modulus::Alpha), s(Modulus::Beta), s(Modulus::Gamma)];
            if signs.contains(&0) {
                return Err(fail("αβγ ≠ 0"));
            }
            let ok = match cell.indices() {
                [] => signs[0] == signs[1] && signs[1] == signs[2],
                [i] => {
                    let odd = usize::from(*i) - 1;
                    let rest: Vec<i8> = (0..3).filter(|k| *k != odd).map(|k| signs[k]).collect();
                    rest[0] == rest[1] && signs[odd] != rest[0]
                }
                _ => false,
            };
            if !ok {
                return Err(fail(match cell.indices() {
                    [] => "α, β, γ of one sign (variant +)",
                    [1] => "sign of α differs from β, γ (variant 1)",
                    [2] => "sign of β differs from α, γ (variant 2)",
                    _ => "sign of γ differs from α, β (variant 3)",
                }));
            }
        }
        _ => {}
    }
    Ok(())
}

fn check_support(cell: &Cell, support: &[Rational]) -> Result<(), ConditionError> {
    let name = cell.to_string();
    let n = cell.family().support_size();
    if support.len() != n {
        return Err(ConditionError::SupportSize {
            cell: name,
            expected: n,
            found: support.len(),
        });
    }
    let free = if cell.is_barred() {
        if !support[n - 1].is_zero() {
            return Err(ConditionError::DistinguishedPoint { cell: name });
        }
        &support[..n - 1]
    } else {
        support
    };
    let in_range = free
        .iter()
        .all(|p| p.is_positive() && *p < circle_length());
    let increasing = free.windows(2).all(|w| w[0] < w[1]);
    if !(in_range && increasing) {
        return Err(ConditionError::SupportOrder { cell: name });
    }
    Ok(())
}

/// Substitutes support coordinates and moduli into the cell's template.
pub fn instantiate(cell: &Cell, support: &[Rational], moduli: &Moduli) -> Result<ConditionSystem, ConditionError> {
    check_support(cell, support)?;
    let template = template_for(cell);
    for m in &template.moduli {
        if moduli.get(*m).is_none() {
            return Err(ConditionError::MissingModulus {
                cell: cell.to_string(),
                name: m.ascii(),
            });
        }
    }
    check_moduli(cell, moduli)?;
    let functionals = template
        .functionals
        .iter()
        .map(|sf| {
            JetFunctional::new(
                sf.0.iter()
                    .map(|t| {
                        let base = match t.coeff.modulus {
                            None => Rational::one(),
                            Some(m) => moduli.get(m).cloned().unwrap_or_default(),
                        };
                        JetTerm {
                            point: t.point,
                            order: t.order,
                            coeff: if t.coeff.negative { -base } else { base },
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    let kept = Moduli {
        alpha: template.moduli.contains(&Modulus::Alpha).then(|| moduli.alpha.clone()).flatten(),
        beta: template.moduli.contains(&Modulus::Beta).then(|| moduli.beta.clone()).flatten(),
        gamma: template.moduli.contains(&Modulus::Gamma).then(|| moduli.gamma.clone()).flatten(),
    };
    Ok(ConditionSystem {
        cell: Some(*cell),
        support: support.to_vec(),
        moduli: kept,
        functionals,
    })
}

/// Largest numerator and denominator in random draws.
pub const DRAW_BOUND: i64 = 97;

fn minimum_gap() -> Rational {
    Rational::new(1.into(), 50.into())
}

fn random_fraction<R: Rng + ?Sized>(rng: &mut R, max_value: Option<&Rational>) -> Rational {
    loop {
        let den = rng.gen_range(1..=DRAW_BOUND);
        let num = rng.gen_range(1..=DRAW_BOUND);
        let q = Rational::new(num.into(), den.into());
        if max_value.is_none_or(|m| q < *m) {
            return q;
        }
    }
}

/// Draws legal support points for `cell`: fractions with numerator and
/// denominator at most 97, sorted, pairwise at least 1/50 apart and at least
/// 1/50 away from the distinguished point.
pub fn random_support<R: Rng + ?Sized>(cell: &Cell, rng: &mut R) -> Vec<Rational> {
    let n = cell.family().support_size();
    let free = n - usize::from(cell.is_barred());
    let top = circle_length();
    let gap = minimum_gap();
    loop {
        let mut pts: Vec<Rational> = (0..free).map(|_| random_fraction(rng, Some(&top))).collect();
        pts.sort();
        let spaced = pts.windows(2).all(|w| &w[1] - &w[0] >= gap)
            && pts.first().is_none_or(|p| *p >= gap)
            && pts.last().is_none_or(|p| &top - p >= gap);
        if spaced {
            if cell.is_barred() {
                pts.push(Rational::zero());
            }
            return pts;
        }
    }
}

/// Draws moduli satisfying the cell's sign constraints.
pub fn random_moduli<R: Rng + ?Sized>(cell: &Cell, rng: &mut R) -> Moduli {
    let template = template_for(cell);
    let mut moduli = Moduli::default();
    let mut signs: [i8; 3] = [0; 3].map(|_: i8| if rng.gen_bool(0.5) { 1 } else { -1 });
    let tag = match cell.sign() {
        SignTag::Plus => 1,
        SignTag::Minus => -1,
        SignTag::Unsigned => 0,
    };
    match cell.family() {
        Family::D | Family::J | Family::K | Family::X | Family::V => signs[0] = tag,
        Family::W => signs[1] = signs[2] * tag,
        Family::E => {
            let base = signs[0];
            signs = [base; 3];
            if let [i] = cell.indices() {
                signs[usize::from(*i) - 1] = -base;
            }
        }
        _ => {}
    }
    for (k, m) in [Modulus::Alpha, Modulus::Beta, Modulus::Gamma].into_iter().enumerate() {
        if template.moduli.contains(&m) {
            let v = random_fraction(rng, None);
            moduli.set(m, if signs[k] < 0 { -v } else { v });
        }
    }
    moduli
}

/// A legal random instantiation of `cell`.
pub fn random_system<R: Rng + ?Sized>(cell: &Cell, rng: &mut R) -> ConditionSystem {
    let support = random_support(cell, rng);
    let moduli = random_moduli(cell, rng);
    instantiate(cell, &support, &moduli).expect("random draws satisfy every constraint")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::enumerate_cells;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn cell(s: &str) -> Cell {
        s.parse().unwrap()
    }

    #[test]
    fn every_template_has_four_functionals() {
        for c in enumerate_cells() {
            let t = template_for(&c);
            assert_eq!(t.functionals.len(), 4, "{c}");
            assert_eq!(t.moduli.len().min(2), c.family().modulus_count().min(2), "{c}");
            for f in &t.functionals {
                assert!(f.0.iter().all(|t| t.order <= MAX_ORDER && t.point < c.family().support_size()));
            }
        }
    }

    #[test]
    fn v_plus_template() {
        let t = template_for(&cell("V1+"));
        let lines: Vec<String> = t.functionals.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            lines,
            [
                "+1 · D^0[p1] -1 · D^0[p2]",
                "+1 · D^1[p1]",
                "+1 · D^2[p1]",
                "+1 · D^3[p1] -α · D^1[p2]",
            ]
        );
    }

    #[test]
    fn theta_template() {
        let t = template_for(&cell("TH"));
        let lines: Vec<String> = t.functionals.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            lines,
            ["+1 · D^1[p1]", "+1 · D^2[p1]", "+1 · D^3[p1]", "+1 · D^5[p1] -α · D^4[p1]"]
        );
    }

    #[test]
    fn e_plus_template_uses_three_moduli() {
        let t = template_for(&cell("E+"));
        assert_eq!(t.moduli, [Modulus::Alpha, Modulus::Beta, Modulus::Gamma]);
        assert_eq!(t.functionals[2].to_string(), "+β · D^1[p1] -α · D^1[p2]");
        assert_eq!(t.functionals[3].to_string(), "+γ · D^1[p2] -β · D^1[p3]");
    }

    #[test]
    fn instantiate_v_plus() {
        let sys = instantiate(&cell("V1+"), &[q(1, 3), q(7, 5)], &Moduli::alpha(q(2, 3))).unwrap();
        assert_eq!(sys.functionals.len(), 4);
        assert_eq!(sys.functionals[3].terms[1].coeff, q(-2, 3));
        assert!(sys.annihilates_constants());
    }

    #[test]
    fn e_with_zero_alpha() {
        let m = Moduli {
            alpha: Some(q(0, 1)),
            beta: Some(q(1, 1)),
            gamma: Some(q(1, 1)),
        };
        let err = instantiate(&cell("E+"), &[q(1, 1), q(2, 1), q(3, 1)], &m).unwrap_err();
        assert!(err.to_string().contains("αβγ ≠ 0 violated"), "{err}");
    }

    #[test]
    fn x_minus_needs_negative_alpha() {
        let err = instantiate(&cell("X-"), &[q(1, 1), q(2, 1)], &Moduli::alpha(q(1, 1))).unwrap_err();
        assert!(matches!(err, ConditionError::Constraint { .. }));
        assert!(err.to_string().contains("α < 0"));
    }

    #[test]
    fn w_sign_is_beta_over_gamma() {
        let m = |b: i64, g: i64| Moduli {
            alpha: Some(q(0, 1)),
            beta: Some(q(b, 1)),
            gamma: Some(q(g, 1)),
        };
        let pts = [q(1, 1), q(2, 1)];
        assert!(instantiate(&cell("W1+"), &pts, &m(-1, -2)).is_ok());
        assert!(instantiate(&cell("W1-"), &pts, &m(-1, -2)).is_err());
        assert!(instantiate(&cell("W2-"), &pts, &m(1, -2)).is_ok());
        assert!(instantiate(&cell("W2+"), &pts, &m(0, 1)).is_err());
    }

    #[test]
    fn e_variants() {
        let pts = [q(1, 1), q(2, 1), q(3, 1)];
        let m = |a: i64, b: i64, g: i64| Moduli {
            alpha: Some(q(a, 1)),
            beta: Some(q(b, 1)),
            gamma: Some(q(g, 1)),
        };
        assert!(instantiate(&cell("E+"), &pts, &m(-1, -2, -3)).is_ok());
        assert!(instantiate(&cell("E1"), &pts, &m(-1, 2, 3)).is_ok());
        assert!(instantiate(&cell("E1"), &pts, &m(1, -2, 3)).is_err());
        assert!(instantiate(&cell("E2"), &pts, &m(1, -2, 3)).is_ok());
        assert!(instantiate(&cell("E3"), &pts, &m(-1, -2, 3)).is_ok());
    }

    #[test]
    fn support_contracts() {
        let c = cell("bV1+");
        assert!(instantiate(&c, &[q(1, 1), q(0, 1)], &Moduli::alpha(q(1, 1))).is_ok());
        assert!(matches!(
            instantiate(&c, &[q(1, 1), q(2, 1)], &Moduli::alpha(q(1, 1))),
            Err(ConditionError::DistinguishedPoint { .. })
        ));
        assert!(matches!(
            instantiate(&cell("V1+"), &[q(2, 1), q(1, 1)], &Moduli::alpha(q(1, 1))),
            Err(ConditionError::SupportOrder { .. })
        ));
        assert!(matches!(
            instantiate(&cell("V1+"), &[q(1, 1), q(7, 1)], &Moduli::alpha(q(1, 1))),
            Err(ConditionError::SupportOrder { .. })
        ));
        assert!(matches!(
            instantiate(&cell("V1+"), &[q(1, 1)], &Moduli::alpha(q(1, 1))),
            Err(ConditionError::SupportSize { .. })
        ));
        assert!(matches!(
            instantiate(&cell("V1+"), &[q(1, 1), q(2, 1)], &Moduli::default()),
            Err(ConditionError::MissingModulus { .. })
        ));
    }

    /// Per-family sum over support points of (1 + highest order used there),
    /// read off the templates by hand.
    #[test]
    fn multiplicity_budgets() {
        let expected = [
            (Family::A, 6),
            (Family::B, 5),
            (Family::C, 6),
            (Family::D, 6),
            (Family::E, 6),
            (Family::F, 6),
            (Family::G, 6),
            (Family::H, 5),
            (Family::I, 6),
            (Family::J, 6),
            (Family::K, 6),
            (Family::W, 6),
            (Family::L, 6),
            (Family::M, 5),
            (Family::N, 5),
            (Family::P, 6),
            (Family::S, 6),
            (Family::X, 6),
            (Family::V, 6),
            (Family::Omega, 6),
            (Family::Y, 5),
            (Family::U, 5),
            (Family::Z, 6),
            (Family::Theta, 6),
            (Family::Nabla, 5),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for c in enumerate_cells() {
            let sys = random_system(&c, &mut rng);
            let want = expected.iter().find(|(f, _)| *f == c.family()).unwrap().1;
            assert_eq!(sys.multiplicity_budget(), want, "{c}");
            assert!(sys.multiplicity_budget() <= 6);
        }
    }

    #[test]
    fn dump_format() {
        let sys = instantiate(&cell("X+"), &[q(1, 2), q(3, 1)], &Moduli::alpha(q(5, 7))).unwrap();
        let dump = sys.dump();
        assert!(dump.contains("p1 = 1/2"));
        assert!(dump.contains("α = 5/7"));
        assert!(dump.contains("+1 · D^2[p1] -5/7 · D^2[p2]"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn random_systems_are_legal(seed in any::<u64>(), pick in 0usize..244) {
                let c = enumerate_cells()[pick];
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let sys = random_system(&c, &mut rng);
                prop_assert!(sys.annihilates_constants());
                prop_assert_eq!(sys.functionals.len(), 4);
                prop_assert!(sys.multiplicity_budget() <= 6);
                if c.is_barred() {
                    prop_assert!(sys.support.last().unwrap().is_zero());
                }
            }
        }
    }
}
