//! The incidence matrices `M(P,L)`, `M(P1,L1)` and `H(3,q)`, and the
//! spanning machinery built from the line sets `X0`, `Y`, `Z` and `L1`.

use thiserror::Error;

use crate::field::FieldSpec;
use crate::geometry::{Quadrangle, RestrictedSets};
use crate::gf2::{BitMatrix, BitVec, Subspace};
use crate::isomorphism::{find_incidence_isomorphism, IncidenceIsomorphism, SearchOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("line {line} is not in the span of X0, Y and L1")]
    SpanMismatch { line: usize },
    #[error("the all-ones vector is not in the span of X0, Y and L1")]
    AllOnesNotInSpan,
    #[error("span identity failed: {0}")]
    SpanIdentity(&'static str),
    #[error("X0, Y and Z are dependent: rank {rank}, expected {expected}")]
    Dependent { rank: usize, expected: usize },
    #[error("matrices of shapes {0:?} and {1:?} cannot be compared")]
    ShapeMismatch((usize, usize), (usize, usize)),
    #[error("no incidence isomorphism found ({0})")]
    IsomorphismNotFound(&'static str),
    #[error("spanning checks require even q, got q = {0}")]
    OddCharacteristic(usize),
}

/// Which incidence system a matrix represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    /// All points against all lines of W(q).
    Pl,
    /// Points off the perp of `p0` against lines missing `ell0`.
    P1L1,
    /// Triples `(a,b,c)` against `[x,y,z]`, incident iff `y = ax+b`, `z = ay+c`.
    Kim,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Pl => "pl",
            System::P1L1 => "p1l1",
            System::Kim => "kim",
        }
    }
}

impl std::str::FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pl" => Ok(System::Pl),
            "p1l1" => Ok(System::P1L1),
            "kim" => Ok(System::Kim),
            other => Err(format!("unknown system '{other}' (expected pl, p1l1 or kim)")),
        }
    }
}

/// What a row or column of an incidence matrix stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Point(usize),
    Line(usize),
    /// `(a, b, c)` of the point set of `H(3,q)`.
    Triple([u32; 3]),
    /// `[x, y, z]` of the line set of `H(3,q)`.
    Bracket([u32; 3]),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub bits: BitMatrix,
    pub row_labels: Vec<Label>,
    pub col_labels: Vec<Label>,
    pub system: System,
}

fn triples(q: u32) -> impl Iterator<Item = [u32; 3]> {
    (0..q).flat_map(move |a| (0..q).flat_map(move |b| (0..q).map(move |c| [a, b, c])))
}

/// `H(3,q)` with rows and columns in lexicographic order of the triples.
pub fn build_kim_matrix(field: &FieldSpec) -> IncidenceMatrix {
    let q = field.q();
    let n = (q * q * q) as usize;
    let index = |v: [u32; 3]| ((v[0] * q + v[1]) * q + v[2]) as usize;
    let mut bits = BitMatrix::zeros(n, n);
    for t in triples(q) {
        let [a, b, c] = t.map(|x| field.elem(x));
        for x in field.elements() {
            let y = field.add(field.mul(a, x), b);
            let z = field.add(field.mul(a, y), c);
            bits.set(index(t), index([x.value(), y.value(), z.value()]), true);
        }
    }
    IncidenceMatrix {
        bits,
        row_labels: triples(q).map(Label::Triple).collect(),
        col_labels: triples(q).map(Label::Bracket).collect(),
        system: System::Kim,
    }
}

/// `M(P,L)` or `M(P1,L1)`; for [`System::Kim`] the quadrangle's field is used.
pub fn build_incidence(quad: &Quadrangle, system: System) -> IncidenceMatrix {
    let (rows, cols): (Vec<usize>, Vec<usize>) = match system {
        System::Kim => return build_kim_matrix(quad.field()),
        System::Pl => ((0..quad.num_points()).collect(), (0..quad.num_lines()).collect()),
        System::P1L1 => {
            let sets = quad.restricted_sets();
            (sets.p1, sets.l1)
        }
    };
    let mut row_pos = vec![usize::MAX; quad.num_points()];
    for (i, &p) in rows.iter().enumerate() {
        row_pos[p] = i;
    }
    let mut bits = BitMatrix::zeros(rows.len(), cols.len());
    for (j, &l) in cols.iter().enumerate() {
        for &p in quad.line_points(l) {
            if row_pos[p] != usize::MAX {
                bits.set(row_pos[p], j, true);
            }
        }
    }
    IncidenceMatrix {
        bits,
        row_labels: rows.into_iter().map(Label::Point).collect(),
        col_labels: cols.into_iter().map(Label::Line).collect(),
        system,
    }
}

/// `C(P, lines)`: the span of the given line vectors over the full point set.
pub fn line_code(quad: &Quadrangle, lines: &[usize]) -> Subspace {
    let vectors: Vec<BitVec> = lines.iter().map(|&l| quad.line_vector(l)).collect();
    Subspace::span(quad.num_points(), &vectors)
}

/// `C(P,L)`.
pub fn full_code(quad: &Quadrangle) -> Subspace {
    line_code(quad, &(0..quad.num_lines()).collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSetSelection {
    pub x: Vec<usize>,
    pub x0: Vec<usize>,
    pub y: Vec<usize>,
    /// Lines of `L1` whose restrictions form a basis of `C(P1,L1)`.
    pub z: Vec<usize>,
}

/// Picks `Z` as the pivot columns of `M(P1,L1)` and checks that
/// `X0 ∪ Y ∪ Z` is independent.
pub fn select_z(
    m_p1l1: &IncidenceMatrix,
    quad: &Quadrangle,
    sets: &RestrictedSets,
) -> Result<LineSetSelection, IncidenceError> {
    let z: Vec<usize> = m_p1l1
        .bits
        .pivot_columns()
        .into_iter()
        .map(|j| match m_p1l1.col_labels[j] {
            Label::Line(l) => l,
            other => unreachable!("M(P1,L1) column labelled {other:?}"),
        })
        .collect();
    let stacked: Vec<BitVec> = sets.x0.iter().chain(&sets.y).chain(&z).map(|&l| quad.line_vector(l)).collect();
    let rank = BitMatrix::from_rows(quad.num_points(), &stacked).rank();
    let expected = sets.x0.len() + sets.y.len() + z.len();
    if rank != expected {
        return Err(IncidenceError::Dependent { rank, expected });
    }
    Ok(LineSetSelection { x: sets.x.clone(), x0: sets.x0.clone(), y: sets.y.clone(), z })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanReport {
    pub q: usize,
    pub dim_c_pl: usize,
    pub dim_c_p1l1: usize,
    pub dim_x0_y_l1: usize,
    pub size_z: usize,
    /// Sum of a line of `L1` and every line meeting it is the all-ones vector.
    pub ones_identity: bool,
    /// `ell0` equals the all-ones vector plus every other line meeting it.
    pub ell0_identity: bool,
}

/// Runs the spanning checks for even `q`: every line and the all-ones
/// vector lie in `<X0, Y, L1>`; `<Z, X0> = <L1, X0>`; `<Z, X0, Y> = C(P,L)`;
/// and `dim C(P,L) = dim C(P1,L1) + 2q`.
pub fn verify_spanning(
    quad: &Quadrangle,
    sets: &RestrictedSets,
    selection: &LineSetSelection,
) -> Result<SpanReport, IncidenceError> {
    let q = quad.q();
    if quad.field().p() != 2 {
        return Err(IncidenceError::OddCharacteristic(q));
    }
    let n = quad.num_points();
    let ones = BitVec::ones(n);

    let mut x0_y_l1 = line_code(quad, &sets.x0);
    for &l in sets.y.iter().chain(&sets.l1) {
        x0_y_l1.insert(&quad.line_vector(l));
    }
    for l in 0..quad.num_lines() {
        if !x0_y_l1.contains(&quad.line_vector(l)) {
            return Err(IncidenceError::SpanMismatch { line: l });
        }
    }
    if !x0_y_l1.contains(&ones) {
        return Err(IncidenceError::AllOnesNotInSpan);
    }

    let z_x0 = line_code(quad, &[selection.z.as_slice(), &selection.x0].concat());
    let l1_x0 = line_code(quad, &[sets.l1.as_slice(), &sets.x0].concat());
    if z_x0 != l1_x0 {
        return Err(IncidenceError::SpanIdentity("span(Z ∪ X0) != span(L1 ∪ X0)"));
    }

    let c_pl = full_code(quad);
    let z_x0_y = line_code(quad, &[selection.z.as_slice(), &selection.x0, &selection.y].concat());
    if z_x0_y != c_pl {
        return Err(IncidenceError::SpanIdentity("span(Z ∪ X0 ∪ Y) != C(P,L)"));
    }
    let dim_c_p1l1 = selection.z.len();
    if c_pl.dim() != dim_c_p1l1 + 2 * q {
        return Err(IncidenceError::SpanIdentity("dim C(P,L) != dim C(P1,L1) + 2q"));
    }

    let star = sets.l1[0];
    let mut sum = BitVec::zeros(n);
    for l in 0..quad.num_lines() {
        if l == star || quad.meet(l, star).is_some() {
            sum.xor_assign(&quad.line_vector(l));
        }
    }
    let ones_identity = sum == ones;

    let ell0 = quad.ell0();
    let mut sum = ones.clone();
    for l in 0..quad.num_lines() {
        if l != ell0 && quad.meet(l, ell0).is_some() {
            sum.xor_assign(&quad.line_vector(l));
        }
    }
    let ell0_identity = sum == quad.line_vector(ell0);
    if !ones_identity || !ell0_identity {
        return Err(IncidenceError::SpanIdentity("all-ones / ell0 summation identity"));
    }

    Ok(SpanReport {
        q,
        dim_c_pl: c_pl.dim(),
        dim_c_p1l1,
        dim_x0_y_l1: x0_y_l1.dim(),
        size_z: selection.z.len(),
        ones_identity,
        ell0_identity,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub rank_h: usize,
    pub rank_m: usize,
    pub isomorphism: Option<IncidenceIsomorphism>,
    pub search_skipped: bool,
}

impl EquivalenceReport {
    pub fn ranks_equal(&self) -> bool {
        self.rank_h == self.rank_m
    }
}

/// Largest side for which the permutation search runs.
pub const ISO_SEARCH_MAX_SIDE: usize = 64;

/// Compares `H(3,q)` with `M(P1,L1)`: equal 2-ranks always, and for sides
/// up to [`ISO_SEARCH_MAX_SIDE`] an explicit row/column permutation pair.
pub fn check_kim_equivalence(h: &IncidenceMatrix, m: &IncidenceMatrix) -> Result<EquivalenceReport, IncidenceError> {
    let (sh, sm) = ((h.bits.n_rows(), h.bits.n_cols()), (m.bits.n_rows(), m.bits.n_cols()));
    if sh != sm || sh.0 != sh.1 {
        return Err(IncidenceError::ShapeMismatch(sh, sm));
    }
    let rank_h = h.bits.rank();
    let rank_m = m.bits.rank();
    let search_skipped = sh.0 > ISO_SEARCH_MAX_SIDE;
    let isomorphism = if search_skipped {
        None
    } else {
        match find_incidence_isomorphism(&h.bits, &m.bits, 50_000_000) {
            SearchOutcome::Found(iso) => Some(iso),
            SearchOutcome::NotIsomorphic => return Err(IncidenceError::IsomorphismNotFound("search exhausted")),
            SearchOutcome::BudgetExhausted => return Err(IncidenceError::IsomorphismNotFound("budget exhausted")),
        }
    };
    Ok(EquivalenceReport { rank_h, rank_m, isomorphism, search_skipped })
}
