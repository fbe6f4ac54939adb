//! The 244 cells of the CW structure and their canonical ASCII names.
//!
//! Every cell belongs to one of 25 families. A family fixes the number of
//! support points and real moduli of its algebras, and the sum of the two is
//! the dimension of its first-type cells. Second-type ("barred") cells carry
//! the distinguished point in their support and sit one dimension lower.
//!
//! Name grammar: optional `b` (barred), the family tag (`A`..`Z`, `OM`, `TH`,
//! `NB`), index digits, and an optional trailing `+`/`-`. Examples: `A23`,
//! `bJ321-`, `E+`, `E1`, `bOM`, `NB`. A-cells also accept the three-index
//! alias `A1jk` for `Ajk`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Highest cell dimension.
pub const TOP_DIMENSION: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown cell name `{0}`")]
    UnknownName(String),
    #[error("illegal indices or sign for family {family}: `{name}`")]
    IllegalCell { family: Family, name: String },
    #[error("cell `{0}` is already of the second type")]
    AlreadyBarred(String),
    #[error("degree {0} out of range 0..=6")]
    DegreeOutOfRange(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
    K,
    W,
    L,
    M,
    N,
    P,
    S,
    X,
    V,
    Omega,
    Y,
    U,
    Z,
    Theta,
    Nabla,
}

impl Family {
    /// All families in catalog order.
    pub const ALL: [Family; 25] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
        Family::H,
        Family::I,
        Family::J,
        Family::K,
        Family::W,
        Family::L,
        Family::M,
        Family::N,
        Family::P,
        Family::S,
        Family::X,
        Family::V,
        Family::Omega,
        Family::Y,
        Family::U,
        Family::Z,
        Family::Theta,
        Family::Nabla,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
            Family::H => "H",
            Family::I => "I",
            Family::J => "J",
            Family::K => "K",
            Family::W => "W",
            Family::L => "L",
            Family::M => "M",
            Family::N => "N",
            Family::P => "P",
            Family::S => "S",
            Family::X => "X",
            Family::V => "V",
            Family::Omega => "OM",
            Family::Y => "Y",
            Family::U => "U",
            Family::Z => "Z",
            Family::Theta => "TH",
            Family::Nabla => "NB",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Family::Omega => "Ω",
            Family::Theta => "Θ",
            Family::Nabla => "∇",
            other => other.tag(),
        }
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.tag() == tag)
    }

    /// Number of points in the support of a first-type algebra.
    pub fn support_size(self) -> usize {
        use Family::*;
        match self {
            A => 6,
            B | C => 5,
            D | F | G | H => 4,
            E | I | J | K | L | M | N => 3,
            W | P | S | X | V | Y | U | Z => 2,
            Omega | Theta | Nabla => 1,
        }
    }

    /// Number of real moduli.
    pub fn modulus_count(self) -> usize {
        use Family::*;
        match self {
            E | W | Omega => 2,
            D | I | J | K | P | S | X | V | Theta => 1,
            _ => 0,
        }
    }

    /// Dimension of the first-type cells of this family.
    pub fn dimension(self) -> usize {
        self.support_size() + self.modulus_count()
    }

    /// Legal (indices, sign) pairs in catalog order.
    pub fn members(self) -> Vec<(Indices, SignTag)> {
        use Family::*;
        use SignTag::{Minus, Plus, Unsigned};
        let signed = |idx: Vec<Indices>| -> Vec<(Indices, SignTag)> {
            idx.into_iter()
                .flat_map(|i| [(i, Plus), (i, Minus)])
                .collect()
        };
        let unsigned =
            |idx: Vec<Indices>| -> Vec<(Indices, SignTag)> { idx.into_iter().map(|i| (i, Unsigned)).collect() };
        let singles = |n: u8| (1..=n).map(|i| Indices::new(&[i])).collect::<Vec<_>>();
        let perms3 = || permutations(&[1, 2, 3]).into_iter().map(|p| Indices::new(&p)).collect::<Vec<_>>();
        match self {
            A => unsigned(
                (2..=6u8)
                    .flat_map(|i| (i + 1..=6).map(move |j| Indices::new(&[i, j])))
                    .collect(),
            ),
            C => unsigned(
                (1..=5u8)
                    .flat_map(|i| (1..=5).filter(move |j| *j != i).map(move |j| Indices::new(&[i, j])))
                    .collect(),
            ),
            D => signed(
                (1..=4u8)
                    .flat_map(|i| (i + 1..=4).map(move |j| Indices::new(&[i, j])))
                    .collect(),
            ),
            E => {
                let mut v = vec![(Indices::EMPTY, Plus)];
                v.extend(unsigned(singles(3)));
                v
            }
            F | H => unsigned(singles(4)),
            G => unsigned(
                permutations(&[1, 2, 3, 4])
                    .into_iter()
                    .filter(|p| p[0] < p[2])
                    .map(|p| Indices::new(&p))
                    .collect(),
            ),
            I | M | N => unsigned(singles(3)),
            J => signed(perms3()),
            K => signed(singles(3)),
            W | V => signed(singles(2)),
            L => unsigned(perms3()),
            P | S | Y | U => unsigned(singles(2)),
            X => vec![(Indices::EMPTY, Plus), (Indices::EMPTY, Minus)],
            B | Omega | Z | Theta | Nabla => vec![(Indices::EMPTY, Unsigned)],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (k, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Up to four one-digit indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Indices {
    digits: [u8; 4],
    len: u8,
}

impl Indices {
    pub const EMPTY: Indices = Indices {
        digits: [0; 4],
        len: 0,
    };

    pub fn new(digits: &[u8]) -> Self {
        assert!(digits.len() <= 4 && digits.iter().all(|d| (1..=9).contains(d)));
        let mut out = Self::EMPTY;
        out.digits[..digits.len()].copy_from_slice(digits);
        out.len = digits.len() as u8;
        out
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.digits[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl PartialOrd for Indices {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Indices {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_slice().cmp(other.as_slice())
    }
}

impl fmt::Debug for Indices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignTag {
    Plus,
    Minus,
    Unsigned,
}

impl SignTag {
    pub fn suffix(self) -> &'static str {
        match self {
            SignTag::Plus => "+",
            SignTag::Minus => "-",
            SignTag::Unsigned => "",
        }
    }
}

/// A cell of the CW complex. Construct through [`Cell::new`] or parsing; both
/// reject index/sign combinations outside the catalog.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    family: Family,
    indices: Indices,
    sign: SignTag,
    barred: bool,
}

impl Cell {
    pub fn new(family: Family, indices: &[u8], sign: SignTag, barred: bool) -> Result<Self, CatalogError> {
        let indices = if indices.iter().all(|d| (1..=9).contains(d)) && indices.len() <= 4 {
            Indices::new(indices)
        } else {
            return Err(CatalogError::IllegalCell {
                family,
                name: format!("{}{:?}{}", family.tag(), indices, sign.suffix()),
            });
        };
        let cell = Cell {
            family,
            indices,
            sign,
            barred,
        };
        if family.members().contains(&(indices, sign)) {
            Ok(cell)
        } else {
            Err(CatalogError::IllegalCell {
                family,
                name: cell.to_string(),
            })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn indices(&self) -> &[u8] {
        self.indices.as_slice()
    }

    pub fn sign(&self) -> SignTag {
        self.sign
    }

    pub fn is_barred(&self) -> bool {
        self.barred
    }

    pub fn dimension(&self) -> usize {
        self.family.dimension() - usize::from(self.barred)
    }

    /// The second-type cell obtained by moving the last support point to the
    /// distinguished point.
    pub fn bar(&self) -> Result<Cell, CatalogError> {
        if self.barred {
            return Err(CatalogError::AlreadyBarred(self.to_string()));
        }
        Ok(Cell {
            barred: true,
            ..*self
        })
    }

    /// The first-type cell this one is the bar of (or itself).
    pub fn unbarred(&self) -> Cell {
        Cell {
            barred: false,
            ..*self
        }
    }

    /// Human-readable name, e.g. `J̄₃₂₁⁻`.
    pub fn pretty(&self) -> String {
        let mut s = String::from(self.family.symbol());
        if self.barred {
            s.push('\u{0304}');
        }
        for d in self.indices() {
            s.push(char::from_u32(0x2080 + u32::from(*d)).unwrap_or('?'));
        }
        match self.sign {
            SignTag::Plus if self.family == Family::E => s.push('₊'),
            SignTag::Plus => s.push('⁺'),
            SignTag::Minus => s.push('⁻'),
            SignTag::Unsigned => {}
        }
        s
    }

    fn order_key(&self) -> (bool, Family, Indices, SignTag) {
        (self.barred, self.family, self.indices, self.sign)
    }
}

/// Catalog order: first-type cells before second-type cells, then family
/// order, then lexicographic indices, then `+` before `-`.
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            f.write_str("b")?;
        }
        f.write_str(self.family.tag())?;
        for d in self.indices() {
            write!(f, "{d}")?;
        }
        f.write_str(self.sign.suffix())
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cell({self})")
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Cell {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || CatalogError::UnknownName(s.to_string());
        let mut rest = s.trim();
        if rest.is_empty() || !rest.is_ascii() {
            return Err(unknown());
        }
        let barred = rest.len() > 1 && rest.starts_with('b');
        if barred {
            rest = &rest[1..];
        }
        let family = ["OM", "TH", "NB"]
            .into_iter()
            .find(|t| rest.starts_with(t))
            .and_then(Family::from_tag)
            .or_else(|| rest.get(..1).and_then(Family::from_tag))
            .ok_or_else(unknown)?;
        rest = &rest[family.tag().len()..];
        let digits_end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let mut digits: Vec<u8> = rest[..digits_end].bytes().map(|b| b - b'0').collect();
        let sign = match &rest[digits_end..] {
            "" => SignTag::Unsigned,
            "+" => SignTag::Plus,
            "-" => SignTag::Minus,
            _ => return Err(unknown()),
        };
        if family == Family::A && digits.len() == 3 && digits[0] == 1 {
            digits.remove(0);
        }
        if digits.len() > 4 || digits.contains(&0) {
            return Err(CatalogError::IllegalCell {
                family,
                name: s.to_string(),
            });
        }
        Cell::new(family, &digits, sign, barred).map_err(|_| CatalogError::IllegalCell {
            family,
            name: s.to_string(),
        })
    }
}

/// All 244 cells in catalog order.
pub fn enumerate_cells() -> Vec<Cell> {
    let mut cells: Vec<Cell> = Family::ALL
        .into_iter()
        .flat_map(|family| {
            family.members().into_iter().flat_map(move |(indices, sign)| {
                [false, true].map(|barred| Cell {
                    family,
                    indices,
                    sign,
                    barred,
                })
            })
        })
        .collect();
    cells.sort();
    cells
}

/// The ordered basis of cellular chains in `degree`.
pub fn ordered_basis(degree: usize) -> Result<Vec<Cell>, CatalogError> {
    if degree > TOP_DIMENSION {
        return Err(CatalogError::DegreeOutOfRange(degree));
    }
    Ok(enumerate_cells()
        .into_iter()
        .filter(|c| c.dimension() == degree)
        .collect())
}

/// Number of cells in each degree 0..=6.
pub fn census() -> [usize; TOP_DIMENSION + 1] {
    let mut counts = [0; TOP_DIMENSION + 1];
    for c in enumerate_cells() {
        counts[c.dimension()] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(s: &str) -> Cell {
        s.parse().unwrap()
    }

    #[test]
    fn family_counts() {
        let expected = [
            10, 1, 20, 12, 4, 4, 12, 4, 3, 12, 6, 4, 6, 3, 3, 2, 2, 2, 4, 1, 2, 2, 1, 1, 1,
        ];
        for (family, n) in Family::ALL.into_iter().zip(expected) {
            assert_eq!(family.members().len(), n, "{family:?}");
        }
        assert_eq!(expected.iter().sum::<usize>(), 122);
    }

    #[test]
    fn family_dimensions() {
        assert_eq!(Family::D.dimension(), 5);
        assert_eq!(Family::E.dimension(), 5);
        assert_eq!(Family::Omega.dimension(), 3);
        assert_eq!(Family::Theta.dimension(), 2);
    }

    #[test]
    fn totals() {
        let cells = enumerate_cells();
        assert_eq!(cells.len(), 244);
        let first: Vec<_> = cells.iter().filter(|c| !c.is_barred()).collect();
        assert_eq!(first.len(), 122);
        let mut by_dim = [0; 7];
        for c in &first {
            by_dim[c.dimension()] += 1;
        }
        assert_eq!(by_dim, [0, 1, 6, 23, 45, 37, 10]);
        assert_eq!(census(), [1, 7, 29, 68, 82, 47, 10]);
    }

    #[test]
    fn dimensions() {
        assert_eq!(cell("A23").dimension(), 6);
        assert_eq!(cell("bTH").dimension(), 1);
        assert_eq!(cell("NB").dimension(), 1);
        assert_eq!(cell("bNB").dimension(), 0);
    }

    #[test]
    fn bar_examples() {
        assert_eq!(cell("X+").bar().unwrap(), cell("bX+"));
        assert_eq!(cell("bX+").dimension(), 2);
        assert_eq!(cell("NB").bar().unwrap().dimension(), 0);
        assert!(matches!(cell("Z").bar().unwrap().bar(), Err(CatalogError::AlreadyBarred(_))));
    }

    #[test]
    fn basis_orders() {
        let names = |d| ordered_basis(d).unwrap().iter().map(|c| c.to_string()).collect::<Vec<_>>();
        assert_eq!(names(0), ["bNB"]);
        assert_eq!(names(1), ["NB", "bY1", "bY2", "bU1", "bU2", "bZ", "bTH"]);
        assert_eq!(
            names(6),
            ["A23", "A24", "A25", "A26", "A34", "A35", "A36", "A45", "A46", "A56"]
        );
        assert!(matches!(ordered_basis(7), Err(CatalogError::DegreeOutOfRange(7))));
    }

    #[test]
    fn names_round_trip() {
        for c in enumerate_cells() {
            assert_eq!(c.to_string().parse::<Cell>().unwrap(), c);
        }
    }

    #[test]
    fn a_alias() {
        assert_eq!(cell("A123"), cell("A23"));
        assert_eq!(cell("bA156"), cell("bA56"));
    }

    #[test]
    fn rejects_bad_names() {
        for bad in ["Q7", "", "b", "A12", "C11", "D12", "X", "E-", "G1324+", "bbZ", "TH+", "J12+", "Ω"] {
            assert!(bad.parse::<Cell>().is_err(), "{bad}");
        }
    }

    #[test]
    fn g_family_members() {
        let g: Vec<String> = Family::G
            .members()
            .iter()
            .map(|(i, _)| i.as_slice().iter().map(|d| d.to_string()).collect())
            .collect();
        assert_eq!(
            g,
            [
                "1234", "1243", "1324", "1342", "1423", "1432", "2134", "2143", "2341", "2431", "3142",
                "3241"
            ]
        );
    }

    #[test]
    fn euler_characteristic_of_census() {
        let chi: i64 = census()
            .iter()
            .enumerate()
            .map(|(d, n)| if d % 2 == 0 { *n as i64 } else { -(*n as i64) })
            .sum();
        assert_eq!(chi, 0);
    }

    #[test]
    fn pretty_names() {
        assert_eq!(cell("bJ321-").pretty(), "J̄₃₂₁⁻");
        assert_eq!(cell("E+").pretty(), "E₊");
    }
}
